//! Criterion benches for seminorm-core; see `benches/seminorm.rs`.

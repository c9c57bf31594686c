//! Domains, Whitney decompositions, admissible chains, shadows and the
//! cube-sum lemmas.

mod chain;
mod domain;
mod lemmas;
mod shadow;
mod whitney;

pub use chain::{admissible_chain, chain_eps, Chain};
pub use domain::{AaBox, BoxUnion, Domain};
pub use lemmas::{
    chain_ratio, lemma_chain_sum, lemma_shadow_sum, lemma_sum_all_over, LemmaReport, LemmaRow, PairSampling,
};
pub use shadow::{
    calibrate_rho, check_shadow_bullets, minimal_rho, sample_pairs, shadow, RhoCalibration, ShadowBullets,
};
pub use whitney::{
    default_rho, default_whitney_constant, long_distance, verify_whitney, whitney_decompose, whitney_decompose_with,
    DyadicCube, Violation, ViolationReport, WhitneyDecomposition, DEFAULT_EPS_FLOOR,
};

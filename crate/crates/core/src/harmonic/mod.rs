//! Maximal functions, far-field inequalities and Fourier-side sums.

mod far;
mod fourier;
mod grid;
mod series;

pub use far::*;
pub use fourier::*;
pub use grid::*;
pub use series::*;

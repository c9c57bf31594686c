//! Full and boundary-truncated Gagliardo-type seminorms for radial jump
//! kernels, with the supporting geometry (Whitney decompositions, chains,
//! shadows), kernel assumption checks and Fourier-side tools.

pub mod error;
pub mod experiments;
pub mod geometry;
pub mod harmonic;
pub mod kernels;
pub mod quad;
pub mod seminorm;

pub use error::{Error, Result};
pub use experiments::{run_experiment, ExperimentReport, ExperimentSpec};
pub use geometry::{Domain, WhitneyDecomposition};
pub use kernels::{ExponentPair, Kernel, KernelProfile};
pub use seminorm::{QuadratureConfig, SeminormEstimate, SeminormLadder, TestFunction};

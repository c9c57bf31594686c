//! Kernel profiles, the jump kernel, and numerical checks of A1-A3.

mod assumptions;
mod kernel;
mod matuszewska;
mod profile;

pub use assumptions::{
    audit, check_a1, check_a2, check_a3, check_strip_tail, default_r_grid, dyadic_steps, geomspace, sphere_area,
    A1Report, A2Report, A2Row, A3Report, AssumptionReport, AuditConfig, LayerSum,
};
pub use kernel::{ExponentPair, Kernel, KernelForm};
pub use matuszewska::{
    default_fit_range, estimate_both, estimate_matuszewska_lower, End, MatuszewskaEstimate, MatuszewskaPair,
    RESIDUAL_THRESHOLD,
};
pub use profile::KernelProfile;

/// `φ(r)` for a profile; errors on nonpositive radii.
pub fn phi_eval(profile: &KernelProfile, r: f64) -> crate::Result<f64> {
    profile.eval(r)
}

/// `K(x, y)`; errors on the diagonal.
pub fn kernel_eval(kernel: &Kernel, x: &[f64], y: &[f64]) -> crate::Result<f64> {
    kernel.eval(x, y)
}

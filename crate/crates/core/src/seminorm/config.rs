use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Whether extrapolated dyadic tails are added to the reported value or only
/// reported next to it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TailMode {
    Report,
    #[default]
    Add,
}

/// Quadrature controls. The defaults suit intervals; [`planar`](Self::planar)
/// gives a cheaper set for two-dimensional boxes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Successive refinements used for the error estimate (at least one).
    pub max_refine: usize,
    /// Gauss-Legendre order per panel.
    pub order: usize,
    /// Dyadic annuli around the diagonal `y = x`.
    pub sing_split: usize,
    /// Dyadic layers of the outer integral toward each boundary face.
    pub boundary_layers: usize,
    /// Dyadic layers toward the point where a ray leaves the domain.
    pub edge_layers: usize,
    /// Equally spaced directions for the inner ball in two dimensions.
    pub angles: usize,
    /// Gauss order per angular sector outside the ball in two dimensions.
    pub sector_order: usize,
    pub tail_mode: TailMode,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-4,
            abs_tol: 1e-12,
            max_refine: 1,
            order: 8,
            sing_split: 40,
            boundary_layers: 40,
            edge_layers: 30,
            angles: 16,
            sector_order: 6,
            tail_mode: TailMode::Add,
        }
    }
}

impl QuadratureConfig {
    /// Settings for the unit square and other planar boxes.
    pub fn planar() -> Self {
        Self {
            order: 3,
            sing_split: 6,
            boundary_layers: 3,
            edge_layers: 2,
            angles: 6,
            sector_order: 3,
            ..Self::default()
        }
    }

    /// Settings for strip cross-sections.
    pub fn strip() -> Self {
        Self {
            order: 4,
            sing_split: 16,
            boundary_layers: 10,
            edge_layers: 8,
            angles: 12,
            sector_order: 4,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(invalid("tolerances must be positive"));
        }
        if self.max_refine < 1 {
            return Err(invalid("max_refine must be at least 1"));
        }
        if !(2..=40).contains(&self.order) || !(2..=40).contains(&self.sector_order) {
            return Err(invalid("Gauss orders must lie in 2..=40"));
        }
        if self.sing_split < 2 || self.boundary_layers < 2 || self.edge_layers < 2 {
            return Err(invalid("layer counts must be at least 2"));
        }
        if self.angles < 4 {
            return Err(invalid("at least 4 directions are needed"));
        }
        Ok(())
    }

    /// One refinement step: higher orders, half again as many layers and
    /// twice the directions.
    pub fn refined(&self) -> Self {
        let up = |n: usize| n + n.div_ceil(4);
        Self {
            order: (self.order + 1).min(40),
            sing_split: up(self.sing_split),
            boundary_layers: up(self.boundary_layers),
            edge_layers: up(self.edge_layers),
            angles: 2 * self.angles,
            sector_order: (self.sector_order + 1).min(40),
            ..self.clone()
        }
    }

    pub(crate) fn tolerance(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

//! Numerical configuration shared by the quadrature, root finding and report
//! pipeline.
//!
//! Defaults leave headroom below the 1e-6 tolerances used by the inequality
//! checks: quadrature converges to 1e-10, roots to 1e-12.

/// Tolerances and effort bounds for the numerical pipeline.
#[derive(Debug, Clone)]
pub struct NumericConfig {
    /// Convergence tolerance for circle quadrature (|I_2N - I_N| < quad_tol).
    pub quad_tol: f64,
    /// Node budget for circle quadrature; doubling stops at this count.
    pub max_quad_nodes: usize,
    /// Update tolerance for Aberth–Ehrlich root iteration.
    pub root_tol: f64,
    /// Maximum Aberth–Ehrlich iterations.
    pub root_max_iter: usize,
    /// Relative tolerance (times rho, or times root scale) for merging nearby
    /// sites and for the site-on-circle refusal.
    pub cluster_tol: f64,
    /// Relative circle-guard distance: quadrature refuses when a singularity
    /// is within `guard_factor * rho` of the circle.
    pub guard_factor: f64,
    /// Trial-division bound before Pollard rho takes over.
    pub trial_division_bound: u64,
    /// Pollard rho restart budget per cofactor.
    pub rho_max_restarts: u32,
}

impl Default for NumericConfig {
    fn default() -> Self {
        NumericConfig {
            quad_tol: 1e-10,
            max_quad_nodes: 1 << 20,
            root_tol: 1e-12,
            root_max_iter: 200,
            cluster_tol: 1e-9,
            guard_factor: 1e-6,
            trial_division_bound: 1_000_000,
            rho_max_restarts: 64,
        }
    }
}

impl NumericConfig {
    /// Absolute guard distance at radius `rho`.
    pub fn guard_distance(&self, rho: f64) -> f64 {
        self.guard_factor * rho
    }

    /// Absolute cluster tolerance at radius `rho`.
    pub fn cluster_distance(&self, rho: f64) -> f64 {
        self.cluster_tol * rho
    }

    /// All tolerances must be positive finite reals and the node budget must
    /// allow at least one doubling. The cluster tolerance is assumed smaller
    /// than the separation of distinct sites; the guard refusal band should
    /// not be tighter than site classification (guard_factor >= cluster_tol).
    pub fn validate(&self) -> crate::error::Result<()> {
        let positive = |name: &str, v: f64| -> crate::error::Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(crate::error::Error::InvalidGrid(format!(
                    "{name} must be a positive finite real (got {v})"
                )))
            }
        };
        positive("quad_tol", self.quad_tol)?;
        positive("root_tol", self.root_tol)?;
        positive("cluster_tol", self.cluster_tol)?;
        positive("guard_factor", self.guard_factor)?;
        if self.max_quad_nodes < 128 {
            return Err(crate::error::Error::InvalidGrid(format!(
                "max_quad_nodes must be at least 128 (got {})",
                self.max_quad_nodes
            )));
        }
        if self.guard_factor < self.cluster_tol {
            return Err(crate::error::Error::InvalidGrid(format!(
                "guard_factor ({}) must be at least cluster_tol ({})",
                self.guard_factor, self.cluster_tol
            )));
        }
        Ok(())
    }
}

//! Special functions and quadrature primitives shared by all kernels.

mod bessel;
pub(crate) mod lattice;
mod modesum;
mod quad;

pub use bessel::{bessel_j, bessel_j012};
pub use lattice::{apery_zeta3, xi, xi_truncation};
pub use modesum::{direct_mode_sum, hyperbolic_mode_sum, ModeSumArgs};
pub use quad::{
    integrate_interval, integrate_semi_infinite, integrate_semi_infinite_vec,
};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Accuracy request for sums and integrals.
///
/// A result `r` with error `e` satisfies the request when
/// `e <= max(abs_tol, rel_tol * |r|)`; lattice sums use the stricter
/// `min` of the two.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(abs_tol > 0.0 && abs_tol.is_finite()) {
            return Err(Error::domain(format!("abs_tol must be positive, got {abs_tol}")));
        }
        if !(rel_tol > 0.0 && rel_tol.is_finite()) {
            return Err(Error::domain(format!("rel_tol must be positive, got {rel_tol}")));
        }
        if max_subdivisions == 0 {
            return Err(Error::domain("max_subdivisions must be at least 1"));
        }
        Ok(Tolerance {
            abs_tol,
            rel_tol,
            max_subdivisions,
        })
    }

    /// Tolerance whose components are no looser than `limit`.
    pub fn tightened(&self, abs_limit: f64, rel_limit: f64) -> Tolerance {
        Tolerance {
            abs_tol: self.abs_tol.min(abs_limit),
            rel_tol: self.rel_tol.min(rel_limit),
            max_subdivisions: self.max_subdivisions,
        }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs_tol: 1e-13,
            rel_tol: 1e-12,
            max_subdivisions: 20_000,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_validation() {
        assert!(Tolerance::new(1e-10, 1e-10, 10).is_ok());
        assert!(Tolerance::new(0.0, 1e-10, 10).is_err());
        assert!(Tolerance::new(1e-10, -1.0, 10).is_err());
        assert!(Tolerance::new(1e-10, 1e-10, 0).is_err());
        assert!(Tolerance::new(f64::NAN, 1e-10, 1).is_err());
    }

    #[test]
    fn tightening_never_loosens() {
        let t = Tolerance::new(1e-6, 1e-6, 5).unwrap().tightened(1e-9, 1e-3);
        assert_eq!(t.abs_tol, 1e-9);
        assert_eq!(t.rel_tol, 1e-6);
        assert_eq!(t.max_subdivisions, 5);
    }
}

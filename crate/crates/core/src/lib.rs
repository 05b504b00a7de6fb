//! Interaction kernels of a perfect planar (Fabry-Pérot) cavity.
//!
//! The crate evaluates both sides of the cancellation between the
//! instantaneous image-dipole Coulomb interaction and the quadratic terms
//! generated by the transformation to the electric-dipole gauge:
//!
//! * [`specfun`]: Bessel functions, the inverse-cube lattice sum ξ(u, v),
//!   semi-infinite quadrature and the hyperbolic mode sum.
//! * [`geometry`]: cavity frame, TE/TM mode functions, image-dipole lattice.
//! * [`coulomb`]: image-dipole kernels 𝔈^(±), self-energy matrix, pair energies
//!   and a brute-force image-lattice oracle.
//! * [`radiation`]: quadratic kernels 𝔇^(±) in the summed and the spectral
//!   representation, single-dipole term and the anisotropy of 𝔇^(+)(0).
//! * [`verify`]: the identity suite comparing independent code paths.
//! * [`dicke`]: exact diagonalization and mean-field analysis of the Dicke model.
//!
//! Units: ħ = ε₀ = c = 1. Kernels are dimensionless and expressed for a
//! cavity of unit length; physical prefactors enter only in the energy
//! assembly functions.

// Negated comparisons below are deliberate: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coulomb;
pub mod dicke;
mod error;
pub mod geometry;
pub mod radiation;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};

/// Real 3×3 matrix used for all dyadic kernels.
pub type Mat3 = nalgebra::Matrix3<f64>;
/// Real 3-vector.
pub type Vec3 = nalgebra::Vector3<f64>;

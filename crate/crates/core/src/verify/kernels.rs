//! Kernel providers for the identity suite, including deliberately corrupted
//! variants used to show that the suite can fail.

use serde::{Deserialize, Serialize};

use crate::coulomb::{self, rotate, Separation, Sign};
use crate::geometry::reflection_matrix;
use crate::radiation;
use crate::specfun::Tolerance;
use crate::{Mat3, Result};

pub trait KernelSource: Sync {
    /// 𝔈^(+) at the separation.
    fn e_plus(&self, sep: &Separation, tol: &Tolerance) -> Result<Mat3>;
    /// 𝔇^(±) at the separation.
    fn d(&self, sign: Sign, sep: &Separation, tol: &Tolerance) -> Result<Mat3>;
}

/// The production kernels.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactKernels;

impl KernelSource for ExactKernels {
    fn e_plus(&self, sep: &Separation, tol: &Tolerance) -> Result<Mat3> {
        Ok(coulomb::kernel_e(Sign::Plus, sep, tol)?.m)
    }

    fn d(&self, sign: Sign, sep: &Separation, tol: &Tolerance) -> Result<Mat3> {
        Ok(radiation::kernel_d(sign, sep, tol)?.m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mutation {
    /// Overall sign of 𝔇 reversed.
    FlipRadiationSign,
    /// The direct (n = 0) term of the 𝔈 lattice sum left out.
    DropDirectImageTerm,
    /// J₂ terms of the summed 𝔇 integrand left out.
    DropBesselJ2,
}

impl Mutation {
    pub const ALL: [Mutation; 3] = [
        Mutation::FlipRadiationSign,
        Mutation::DropDirectImageTerm,
        Mutation::DropBesselJ2,
    ];
}

/// Production kernels with one corruption applied.
#[derive(Debug, Clone, Copy)]
pub struct MutatedKernels(pub Mutation);

impl KernelSource for MutatedKernels {
    fn e_plus(&self, sep: &Separation, tol: &Tolerance) -> Result<Mat3> {
        match self.0 {
            Mutation::DropDirectImageTerm => {
                sep.validate()?;
                let m = coulomb::e_plus_axis_frame(sep.u, sep.v, tol, false)?;
                Ok(rotate(&m, sep.phi))
            }
            _ => ExactKernels.e_plus(sep, tol),
        }
    }

    fn d(&self, sign: Sign, sep: &Separation, tol: &Tolerance) -> Result<Mat3> {
        let plus = match self.0 {
            Mutation::FlipRadiationSign => -ExactKernels.d(Sign::Plus, sep, tol)?,
            Mutation::DropBesselJ2 => {
                sep.validate()?;
                rotate(&radiation::d_plus_axis_frame(sep.u, sep.v, tol, false)?, sep.phi)
            }
            Mutation::DropDirectImageTerm => ExactKernels.d(Sign::Plus, sep, tol)?,
        };
        Ok(match sign {
            Sign::Plus => plus,
            Sign::Minus => plus * reflection_matrix(),
        })
    }
}

//! The axial mode sum Σ_{n∈ℤ} e^{iαn} nᵐ / (n² + β²) for m ∈ {0, 1}.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeSumArgs {
    /// Phase α in radians.
    pub alpha: f64,
    /// β > 0.
    pub beta: f64,
    /// Power m of n in the numerator; only 0 and 1 converge.
    pub m: u32,
}

impl ModeSumArgs {
    pub fn new(alpha: f64, beta: f64, m: u32) -> Result<Self> {
        let args = ModeSumArgs { alpha, beta, m };
        args.validate()?;
        Ok(args)
    }

    fn validate(&self) -> Result<()> {
        if !self.alpha.is_finite() {
            return Err(Error::domain(format!("alpha must be finite, got {}", self.alpha)));
        }
        if !(self.beta > 0.0) || !self.beta.is_finite() {
            return Err(Error::domain(format!("beta must be positive, got {}", self.beta)));
        }
        if self.m > 1 {
            return Err(Error::domain(format!(
                "mode sum diverges for m = {} (only m = 0, 1 allowed)",
                self.m
            )));
        }
        Ok(())
    }
}

/// Closed form of the mode sum obtained from the residues at z = ±iβ:
///
/// π iᵐ βᵐ⁻¹ / sinh(πβ) · { cosh(β(π − α)) for m = 0, sinh(β(π − α)) for m = 1 },
///
/// with α first reduced into [0, 2π).
pub fn hyperbolic_mode_sum(args: ModeSumArgs) -> Result<Complex64> {
    args.validate()?;
    let alpha = args.alpha.rem_euclid(2.0 * PI);
    let alpha = if alpha >= 2.0 * PI { 0.0 } else { alpha };
    let beta = args.beta;
    if args.m == 1 && alpha == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    // e^{±β(π−α)} / sinh(πβ) expressed with non-positive exponents only.
    let denom = -(-2.0 * PI * beta).exp_m1();
    let near = (-beta * alpha).exp();
    let far = (beta * (alpha - 2.0 * PI)).exp();
    Ok(match args.m {
        0 => Complex64::new(PI / beta * (near + far) / denom, 0.0),
        _ => Complex64::new(0.0, PI * (near - far) / denom),
    })
}

/// Symmetric partial sum over |n| ≤ n_max; the ±n terms are combined before
/// accumulation, which the conditionally convergent m = 1 case requires.
pub fn direct_mode_sum(args: ModeSumArgs, n_max: u64) -> Result<Complex64> {
    args.validate()?;
    let b2 = args.beta * args.beta;
    let mut sum = 0.0;
    for n in (1..=n_max).rev() {
        let nf = n as f64;
        let denom = nf * nf + b2;
        sum += match args.m {
            0 => 2.0 * cos_product(args.alpha, nf) / denom,
            _ => 2.0 * sin_product(args.alpha, nf) * nf / denom,
        };
    }
    Ok(match args.m {
        0 => Complex64::new(sum + 1.0 / b2, 0.0),
        _ => Complex64::new(0.0, sum),
    })
}

/// sin(α·n) with the rounding error of the product folded back in.
fn sin_product(alpha: f64, n: f64) -> f64 {
    let p = alpha * n;
    let e = alpha.mul_add(n, -p);
    let (s, c) = p.sin_cos();
    s + e * c
}

fn cos_product(alpha: f64, n: f64) -> f64 {
    let p = alpha * n;
    let e = alpha.mul_add(n, -p);
    let (s, c) = p.sin_cos();
    c - e * s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(a: f64, b: f64, m: u32) -> ModeSumArgs {
        ModeSumArgs::new(a, b, m).unwrap()
    }

    #[test]
    fn coth_value_at_zero_phase() {
        let c = hyperbolic_mode_sum(args(0.0, 1.0, 0)).unwrap();
        let want = PI / PI.tanh();
        assert!((c.re - want).abs() < 1e-14);
        assert!((c.re - 3.1533481).abs() < 1e-7);
        assert_eq!(c.im, 0.0);
    }

    #[test]
    fn odd_sum_vanishes_at_zero_phase() {
        assert_eq!(
            hyperbolic_mode_sum(args(0.0, 2.5, 1)).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        assert_eq!(
            direct_mode_sum(args(0.0, 2.0, 1), 1000).unwrap(),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn direct_sum_converges_to_closed_form() {
        let d = direct_mode_sum(args(0.0, 1.0, 0), 1_000_000).unwrap();
        assert!((d.re - PI / PI.tanh()).abs() < 1e-6 * PI / PI.tanh());
        let a = args(0.5, 1.0, 1);
        let d = direct_mode_sum(a, 1_000_000).unwrap();
        let c = hyperbolic_mode_sum(a).unwrap();
        assert!((d - c).norm() < 1e-5 * c.norm(), "{d} vs {c}");
        let a = args(PI, 0.5, 0);
        let d = direct_mode_sum(a, 1_000_000).unwrap();
        let c = hyperbolic_mode_sum(a).unwrap();
        assert!((d - c).norm() < 1e-6);
    }

    #[test]
    fn periodic_in_alpha() {
        for m in 0..2 {
            let a = hyperbolic_mode_sum(args(0.7, 0.8, m)).unwrap();
            let b = hyperbolic_mode_sum(args(0.7 + 4.0 * PI, 0.8, m)).unwrap();
            let c = hyperbolic_mode_sum(args(0.7 - 2.0 * PI, 0.8, m)).unwrap();
            assert!((a - b).norm() < 1e-12 && (a - c).norm() < 1e-12);
        }
    }

    #[test]
    fn large_beta_does_not_overflow() {
        let c = hyperbolic_mode_sum(args(1.0, 500.0, 0)).unwrap();
        assert!(c.re.is_finite());
    }

    #[test]
    fn rejects_bad_args() {
        assert!(ModeSumArgs::new(0.0, 1.0, 2).is_err());
        assert!(ModeSumArgs::new(0.0, 0.0, 0).is_err());
        assert!(ModeSumArgs::new(f64::NAN, 1.0, 0).is_err());
        let raw = ModeSumArgs {
            alpha: 0.0,
            beta: 1.0,
            m: 3,
        };
        assert!(hyperbolic_mode_sum(raw).is_err());
    }
}

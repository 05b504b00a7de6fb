//! Cylindrical Bessel functions of the first kind, orders 0, 1 and 2.
//!
//! Three regimes: the ascending series below x = 1, Miller's backward
//! recurrence normalized with J₀ + 2ΣJ₂ₖ = 1 up to x = 25, and the Hankel
//! asymptotic expansion beyond.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::{Error, Result};

const SERIES_LIMIT: f64 = 1.0;
const ASYMPTOTIC_LIMIT: f64 = 25.0;

/// Jₙ(x) for n ∈ {0, 1, 2} and x ≥ 0.
pub fn bessel_j(order: u32, x: f64) -> Result<f64> {
    if order > 2 {
        return Err(Error::domain(format!(
            "Bessel order {order} not supported (0, 1, 2 only)"
        )));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::domain(format!(
            "Bessel argument must be finite and non-negative, got {x}"
        )));
    }
    let (j0, j1, j2) = bessel_j012(x);
    Ok([j0, j1, j2][order as usize])
}

/// (J₀(x), J₁(x), J₂(x)) for finite x ≥ 0, evaluated together.
///
/// Negative arguments are mapped through the parity Jₙ(−x) = (−1)ⁿJₙ(x).
pub fn bessel_j012(x: f64) -> (f64, f64, f64) {
    if x < 0.0 {
        let (j0, j1, j2) = bessel_j012(-x);
        return (j0, -j1, j2);
    }
    if x == 0.0 {
        (1.0, 0.0, 0.0)
    } else if x < SERIES_LIMIT {
        (series(0, x), series(1, x), series(2, x))
    } else if x < ASYMPTOTIC_LIMIT {
        miller(x)
    } else {
        let j0 = hankel(0, x);
        let j1 = hankel(1, x);
        (j0, j1, 2.0 * j1 / x - j0)
    }
}

fn series(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = half * half;
    let mut term = match n {
        0 => 1.0,
        1 => half,
        _ => 0.5 * q,
    };
    let mut sum = term;
    for k in 1..40 {
        term *= -q / (k as f64 * (k + n) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

fn miller(x: f64) -> (f64, f64, f64) {
    let start = ((x + 12.0 + 4.0 * x.sqrt()) / 2.0).ceil() as usize * 2;
    let mut above = 0.0;
    let mut current = 1e-30;
    // start is even, so J_start enters the normalization sum.
    let mut norm = 2.0 * current;
    let (mut j0, mut j1, mut j2) = (0.0, 0.0, 0.0);
    for k in (1..=start).rev() {
        let below = 2.0 * k as f64 / x * current - above;
        let idx = k - 1;
        match idx {
            0 => j0 = below,
            1 => j1 = below,
            2 => j2 = below,
            _ => {}
        }
        if idx == 0 {
            norm += below;
        } else if idx % 2 == 0 {
            norm += 2.0 * below;
        }
        above = current;
        current = below;
        if current.abs() > 1e250 {
            let s = 1e-250;
            above *= s;
            current *= s;
            norm *= s;
            j1 *= s;
            j2 *= s;
        }
    }
    (j0 / norm, j1 / norm, j2 / norm)
}

fn hankel(nu: u32, x: f64) -> f64 {
    let mu = 4.0 * (nu * nu) as f64;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term: f64 = 1.0;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        let next = term * (mu - odd * odd) / (k as f64 * 8.0 * x);
        if next.abs() > term.abs() {
            break;
        }
        term = next;
        // signs follow the pattern +t0 -t2 +t4 … and +t1 -t3 +t5 …
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    let (s, c) = x.sin_cos();
    let (cos_chi, sin_chi) = if nu == 0 {
        ((c + s) * FRAC_1_SQRT_2, (s - c) * FRAC_1_SQRT_2)
    } else {
        ((s - c) * FRAC_1_SQRT_2, -(s + c) * FRAC_1_SQRT_2)
    };
    (2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Jₙ(x) = (1/2π)∫_{−π}^{π} cos(nτ − x sin τ) dτ; the trapezoid rule is
    /// exponentially accurate for this periodic integrand.
    fn trapezoid_oracle(n: u32, x: f64) -> f64 {
        let m = (x as usize + 64) * 2;
        let h = 2.0 * PI / m as f64;
        let sum: f64 = (0..m)
            .map(|i| {
                let t = -PI + i as f64 * h;
                (n as f64 * t - x * t.sin()).cos()
            })
            .sum();
        sum / m as f64
    }

    #[test]
    fn values_at_origin() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j(2, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn first_zero_of_j0() {
        assert!(bessel_j(0, 2.404825557695773).unwrap().abs() < 1e-12);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(bessel_j(3, 1.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_j(0, -1.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_j(1, f64::NAN), Err(Error::Domain(_))));
    }

    #[test]
    fn matches_integral_representation() {
        let mut xs: Vec<f64> = (1..400).map(|i| i as f64 * 0.137).collect();
        xs.extend([0.5, 0.999, 1.0, 1.001, 24.999, 25.0, 25.001, 100.0, 1234.5, 9999.0]);
        for &x in &xs {
            let (j0, j1, j2) = bessel_j012(x);
            let amp = (2.0 / (PI * x.max(1.0))).sqrt();
            for (n, got) in [(0, j0), (1, j1), (2, j2)] {
                let want = trapezoid_oracle(n, x);
                let err = (got - want).abs();
                assert!(
                    // The last term is the conditioning of Jₙ at x: one ulp of x
                    // moves the phase by x·ε.
                    err <= 1e-12 * want.abs() + amp * (2e-15 + 4.0 * x * f64::EPSILON),
                    "J{n}({x}): got {got:e} want {want:e} err {err:e}"
                );
            }
        }
    }

    #[test]
    fn regime_boundaries_are_continuous() {
        for &b in &[SERIES_LIMIT, ASYMPTOTIC_LIMIT] {
            let lo = bessel_j012(b * (1.0 - f64::EPSILON));
            let hi = bessel_j012(b);
            assert!((lo.0 - hi.0).abs() < 1e-13, "{b}: {lo:?} {hi:?}");
            assert!((lo.1 - hi.1).abs() < 1e-13, "{b}: {lo:?} {hi:?}");
            assert!((lo.2 - hi.2).abs() < 1e-13, "{b}: {lo:?} {hi:?}");
        }
    }

    #[test]
    fn negative_argument_parity() {
        let (a0, a1, a2) = bessel_j012(3.7);
        let (b0, b1, b2) = bessel_j012(-3.7);
        assert_eq!((a0, -a1, a2), (b0, b1, b2));
    }
}

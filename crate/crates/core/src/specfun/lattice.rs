//! The inverse-cube axial lattice sum
//!
//! ξ(u, v) = Σ_{n∈ℤ} ((2n + u)² + v²)^{−3/2}
//!
//! evaluated as a direct partial sum over |n| ≤ N plus the midpoint-rule
//! tail integral, which has a closed form. The remainder after the tail
//! correction is O(N⁻⁴) and N is chosen from an explicit bound on it.

use super::Tolerance;
use crate::{Error, Result};

const MAX_TERMS: usize = 100_000_000;

/// Apéry's constant ζ(3).
pub fn apery_zeta3() -> f64 {
    1.202_056_903_159_594_3
}

/// ξ(u, v) with relative error below `tol.rel_tol` and absolute error below
/// `tol.abs_tol`.
///
/// ξ has period 2 in u and is even in v. It diverges at the lattice points
/// v = 0, u ∈ 2ℤ, which are rejected.
pub fn xi(u: f64, v: f64, tol: &Tolerance) -> Result<f64> {
    let n = xi_truncation(u, v, tol)?;
    Ok(xi_partial(reduce_axial(u), v, n))
}

/// Number of terms per side used by [`xi`] for this tolerance.
pub fn xi_truncation(u: f64, v: f64, tol: &Tolerance) -> Result<usize> {
    let r = check_lattice_args(u, v)?;
    let lower = inv_cube(r, v) + inv_cube(2.0 - r, v);
    let target = 0.5 * tol.abs_tol.min(tol.rel_tol * lower);
    truncation_for(r, 0.25, target, "xi lattice sum")
}

/// Partial sum over |n| ≤ n_terms with both midpoint tails added.
pub(crate) fn xi_partial(r: f64, v: f64, n_terms: usize) -> f64 {
    let a_pos = 2.0 * n_terms as f64 + 1.0 + r;
    let a_neg = 2.0 * n_terms as f64 + 1.0 - r;
    let mut sum = 0.5 * (tail_inv_cube(a_pos, v) + tail_inv_cube(a_neg, v));
    for n in (0..=n_terms).rev() {
        let two_n = 2.0 * n as f64;
        sum += inv_cube(two_n + r, v);
        if n > 0 {
            sum += inv_cube(two_n - r, v);
        }
    }
    sum
}

/// Maps u into [0, 2).
pub(crate) fn reduce_axial(u: f64) -> f64 {
    let r = u.rem_euclid(2.0);
    if r >= 2.0 {
        0.0
    } else {
        r
    }
}

/// Validates a lattice-sum argument pair and returns the reduced u.
pub(crate) fn check_lattice_args(u: f64, v: f64) -> Result<f64> {
    if !u.is_finite() || !v.is_finite() {
        return Err(Error::domain(format!(
            "lattice arguments must be finite, got u={u}, v={v}"
        )));
    }
    if v < 0.0 {
        return Err(Error::domain(format!("v must be non-negative, got {v}")));
    }
    let r = reduce_axial(u);
    if v == 0.0 && r == 0.0 {
        return Err(Error::domain(format!(
            "lattice sum diverges at the source point (u={u}, v=0)"
        )));
    }
    Ok(r)
}

/// Smallest N with two-sided remainder bound 2·c/(2N − 1 − r)⁴ ≤ target,
/// for a reduced axial coordinate r ∈ [0, 2).
pub(crate) fn truncation_for(r: f64, c: f64, target: f64, what: &'static str) -> Result<usize> {
    if !(target > 0.0) {
        return Err(Error::Convergence {
            what,
            estimate: f64::NAN,
            achieved: f64::INFINITY,
        });
    }
    let reach = (2.0 * c / target).powf(0.25);
    let n = ((reach + 1.0 + r) / 2.0).ceil().max(4.0);
    if n > MAX_TERMS as f64 {
        return Err(Error::Convergence {
            what,
            estimate: f64::NAN,
            achieved: 2.0 * c / (2.0 * MAX_TERMS as f64 - 3.0).powi(4),
        });
    }
    Ok(n as usize)
}

#[inline]
pub(crate) fn inv_cube(s: f64, v: f64) -> f64 {
    let rho2 = s * s + v * v;
    1.0 / (rho2 * rho2.sqrt())
}

/// ∫_a^∞ (s² + v²)^{−3/2} ds, written without cancellation at small v.
#[inline]
pub(crate) fn tail_inv_cube(a: f64, v: f64) -> f64 {
    let r = (a * a + v * v).sqrt();
    1.0 / (r * (r + a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    /// Σ 1/n³ up to M plus the integral tail bound, as an independent route.
    fn zeta3_oracle() -> f64 {
        let m = 200_000u64;
        let partial: f64 = (1..=m).rev().map(|n| 1.0 / (n as f64).powi(3)).sum();
        partial + 1.0 / (2.0 * (m as f64 + 0.5).powi(2))
    }

    fn brute(u: f64, v: f64, m: i64) -> f64 {
        let mut terms: Vec<f64> = (-m..=m)
            .map(|n| inv_cube(2.0 * n as f64 + u, v))
            .collect();
        terms.sort_by(|a, b| a.partial_cmp(b).unwrap());
        terms.iter().sum()
    }

    #[test]
    fn zeta3_value() {
        let z = apery_zeta3();
        assert!((z - zeta3_oracle()).abs() < 1e-15);
        assert!((z - 1.2020569031595943).abs() < 1e-16);
    }

    #[test]
    fn odd_cubes_relation() {
        let odd: f64 = (0..200_000u64)
            .rev()
            .map(|k| 1.0 / ((2 * k + 1) as f64).powi(3))
            .sum::<f64>()
            + 1.0 / (16.0 * 200_000f64.powi(2));
        assert!((2.0 * (1.0 - 0.125) * apery_zeta3() - 2.0 * odd).abs() < 1e-14);
    }

    #[test]
    fn xi_at_midpoint_is_seven_quarters_zeta3() {
        let got = xi(1.0, 0.0, &tol()).unwrap();
        let want = 1.75 * apery_zeta3();
        assert!((got - want).abs() < 1e-13 * want, "{got} vs {want}");
        assert!((got - 2.1035996).abs() < 1e-7);
    }

    #[test]
    fn xi_matches_brute_force_partial_sum() {
        let got = xi(0.5, 0.0, &tol()).unwrap();
        let want = brute(0.5, 0.0, 1_000_000);
        assert!((got - want).abs() < 1e-10);
        let got = xi(0.3, 1.7, &tol()).unwrap();
        let want = brute(0.3, 1.7, 1_000_000);
        assert!((got - want).abs() < 1e-10);
    }

    #[test]
    fn xi_rejects_source_point() {
        assert!(matches!(xi(0.0, 0.0, &tol()), Err(Error::Domain(_))));
        assert!(matches!(xi(4.0, 0.0, &tol()), Err(Error::Domain(_))));
        assert!(matches!(xi(0.5, -1.0, &tol()), Err(Error::Domain(_))));
        assert!(xi(0.0, 0.1, &tol()).is_ok());
    }

    #[test]
    fn truncation_is_modest() {
        let n = xi_truncation(0.5, 0.0, &tol()).unwrap();
        assert!(n < 10_000, "{n}");
        // tighter tolerance needs more terms
        let tight = Tolerance::new(1e-16, 1e-15, 10).unwrap();
        assert!(xi_truncation(0.5, 0.0, &tight).unwrap() > n);
    }

    #[test]
    fn doubling_truncation_changes_little() {
        let t = tol();
        for &(u, v) in &[(0.5, 0.0), (1.3, 0.2), (0.1, 3.0)] {
            let n = xi_truncation(u, v, &t).unwrap();
            let a = xi_partial(u, v, n);
            let b = xi_partial(u, v, 2 * n);
            assert!((a - b).abs() < t.abs_tol, "{u} {v}: {a} {b}");
        }
    }
}

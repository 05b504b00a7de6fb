//! Adaptive Gauss–Kronrod (7/15) quadrature on finite and semi-infinite
//! intervals. Vector-valued integrands share abscissae, which matters for the
//! 3×3 kernels where all entries use the same Bessel evaluations.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::Tolerance;
use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for the odd Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

struct Panel<const N: usize> {
    a: f64,
    b: f64,
    value: [f64; N],
    error: f64,
    /// Error estimate sits at the rounding floor; bisecting cannot help.
    limited: bool,
}

impl<const N: usize> PartialEq for Panel<N> {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl<const N: usize> Eq for Panel<N> {}
impl<const N: usize> PartialOrd for Panel<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<const N: usize> Ord for Panel<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod<const N: usize, F>(f: &F, a: f64, b: f64) -> Panel<N>
where
    F: Fn(f64) -> [f64; N],
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = [0.0; N];
    let mut gauss = [0.0; N];
    let mut abs_sum = [0.0; N];
    let mut samples = [[[0.0; N]; 2]; 7];
    for k in 0..N {
        kronrod[k] = WGK[7] * fc[k];
        gauss[k] = WG[3] * fc[k];
        abs_sum[k] = WGK[7] * fc[k].abs();
    }
    for (j, s) in samples.iter_mut().enumerate() {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        for k in 0..N {
            kronrod[k] += WGK[j] * (f1[k] + f2[k]);
            abs_sum[k] += WGK[j] * (f1[k].abs() + f2[k].abs());
            if j % 2 == 1 {
                gauss[k] += WG[j / 2] * (f1[k] + f2[k]);
            }
        }
        *s = [f1, f2];
    }
    let mut error: f64 = 0.0;
    let mut limited = true;
    let mut value = [0.0; N];
    for k in 0..N {
        let mean = 0.5 * kronrod[k];
        let mut asc = WGK[7] * (fc[k] - mean).abs();
        for (j, s) in samples.iter().enumerate() {
            asc += WGK[j] * ((s[0][k] - mean).abs() + (s[1][k] - mean).abs());
        }
        let res_abs = abs_sum[k] * half.abs();
        let res_asc = asc * half.abs();
        let raw = ((kronrod[k] - gauss[k]) * half).abs();
        let mut err = raw;
        if res_asc != 0.0 && raw != 0.0 {
            err = res_asc * (200.0 * raw / res_asc).powf(1.5).min(1.0);
        }
        // Below this the estimate is dominated by rounding in the sums.
        if err > 50.0 * f64::EPSILON * res_abs {
            limited = false;
        }
        if !err.is_finite() || !kronrod[k].is_finite() {
            err = f64::INFINITY;
            limited = false;
        }
        error = error.max(err);
        value[k] = kronrod[k] * half;
    }
    Panel {
        a,
        b,
        value,
        error,
        limited,
    }
}

fn max_abs<const N: usize>(v: &[f64; N]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

fn adaptive<const N: usize, F>(
    f: &F,
    a: f64,
    b: f64,
    panels: usize,
    tol: &Tolerance,
    what: &'static str,
) -> Result<[f64; N]>
where
    F: Fn(f64) -> [f64; N],
{
    let panels = panels.max(1);
    let width = (b - a) / panels as f64;
    // Panels whose error sits at the rounding floor are retired: their
    // values still count, their error is carried separately.
    let mut active = BinaryHeap::with_capacity(2 * panels);
    let mut retired: Vec<Panel<N>> = Vec::new();
    fn retire_or_keep<const N: usize>(
        p: Panel<N>,
        active: &mut BinaryHeap<Panel<N>>,
        retired: &mut Vec<Panel<N>>,
    ) {
        if p.limited {
            retired.push(p);
        } else {
            active.push(p);
        }
    }
    for i in 0..panels {
        let lo = a + width * i as f64;
        let hi = if i + 1 == panels { b } else { a + width * (i + 1) as f64 };
        retire_or_keep(gauss_kronrod(f, lo, hi), &mut active, &mut retired);
    }
    let mut count = panels;
    loop {
        let mut total = [0.0; N];
        let mut active_error = 0.0;
        let mut rounding_error = 0.0;
        for p in active.iter() {
            for (t, x) in total.iter_mut().zip(p.value) {
                *t += x;
            }
            active_error += p.error;
        }
        for p in retired.iter() {
            for (t, x) in total.iter_mut().zip(p.value) {
                *t += x;
            }
            rounding_error += p.error;
        }
        let target = tol.abs_tol.max(tol.rel_tol * max_abs(&total));
        if active_error + rounding_error <= target {
            return Ok(total);
        }
        if active_error <= 0.01 * target && rounding_error.is_finite() {
            // Limited by rounding in the integrand, not by resolution.
            return Ok(total);
        }
        // Refine in batches so the bookkeeping above stays cheap.
        let batch = (active.len() / 8).max(1);
        for _ in 0..batch {
            let Some(worst) = active.pop() else { break };
            let mid = 0.5 * (worst.a + worst.b);
            if count >= tol.max_subdivisions || !(mid > worst.a && mid < worst.b) {
                active.push(worst);
                return Err(Error::Convergence {
                    what,
                    estimate: total[0],
                    achieved: active_error + rounding_error,
                });
            }
            retire_or_keep(gauss_kronrod(f, worst.a, mid), &mut active, &mut retired);
            retire_or_keep(gauss_kronrod(f, mid, worst.b), &mut active, &mut retired);
            count += 1;
        }
    }
}

/// ∫_a^b f(x) dx to `max(abs_tol, rel_tol·|result|)`.
pub fn integrate_interval<F>(f: F, a: f64, b: f64, tol: &Tolerance) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::domain("integration limits must be finite"));
    }
    if a == b {
        return Ok(0.0);
    }
    let g = |x: f64| [f(x)];
    let panels = ((b - a).abs() / 2.0).ceil() as usize;
    let panels = panels.clamp(4, (tol.max_subdivisions / 4).max(4));
    Ok(adaptive(&g, a, b, panels, tol, "finite-interval quadrature")?[0])
}

/// ∫_0^∞ f(x) dx for an integrand decaying at least like e^{−rate·x}.
///
/// The range is truncated where the tail bound drops below `abs_tol/2`; if
/// the integrand is visibly larger than its hint near the cut, the cut is
/// moved outward.
pub fn integrate_semi_infinite<F>(f: F, decay_rate_hint: f64, tol: &Tolerance) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    Ok(integrate_semi_infinite_vec(|x| [f(x)], decay_rate_hint, tol)?[0])
}

/// Vector-valued form of [`integrate_semi_infinite`]; the error target
/// applies to the largest component.
pub fn integrate_semi_infinite_vec<const N: usize, F>(
    f: F,
    decay_rate_hint: f64,
    tol: &Tolerance,
) -> Result<[f64; N]>
where
    F: Fn(f64) -> [f64; N],
{
    if !(decay_rate_hint > 0.0) || !decay_rate_hint.is_finite() {
        return Err(Error::domain(format!(
            "decay rate hint must be positive, got {decay_rate_hint}"
        )));
    }
    let x_max = truncation_point(&f, decay_rate_hint, tol.abs_tol);
    let panels = ((x_max / 2.0).ceil() as usize).clamp(8, (tol.max_subdivisions / 4).max(8));
    adaptive(&f, 0.0, x_max, panels, tol, "semi-infinite quadrature")
}

fn truncation_point<const N: usize, F>(f: &F, rate: f64, abs_tol: f64) -> f64
where
    F: Fn(f64) -> [f64; N],
{
    let mut x_max = (1.0 / abs_tol).ln().max(1.0) / rate + 10.0;
    for _ in 0..60 {
        let tail = (0..8)
            .map(|i| max_abs(&f(x_max - i as f64 * 0.125)))
            .fold(0.0_f64, f64::max)
            / rate;
        if tail <= 0.5 * abs_tol {
            break;
        }
        x_max *= 1.25;
    }
    x_max
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bessel_j012;

    fn tol() -> Tolerance {
        Tolerance::new(1e-13, 1e-12, 20_000).unwrap()
    }

    #[test]
    fn exponential() {
        let v = integrate_semi_infinite(|x| (-x).exp(), 1.0, &tol()).unwrap();
        assert!((v - 1.0).abs() < 1e-13);
    }

    #[test]
    fn lipschitz_unit_point() {
        let v = integrate_semi_infinite(|x| (-x).exp() * bessel_j012(x).0, 1.0, &tol()).unwrap();
        assert!((v - 0.5_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn lipschitz_derivative() {
        let v =
            integrate_semi_infinite(|x| x * (-x).exp() * bessel_j012(2.0 * x).1, 1.0, &tol()).unwrap();
        assert!((v - 2.0 * 5.0_f64.powf(-1.5)).abs() < 1e-12);
    }

    #[test]
    fn slow_decay_and_endpoint_singularity() {
        // ∫ x^{-1/2} e^{-x} dx = √π
        let v = integrate_semi_infinite(|x| (-x).exp() / x.sqrt(), 1.0, &tol()).unwrap();
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-10, "{v}");
        let v = integrate_semi_infinite(|x| (-0.05 * x).exp(), 0.05, &tol()).unwrap();
        assert!((v - 20.0).abs() < 1e-11);
    }

    #[test]
    fn hint_too_optimistic_is_extended() {
        let v = integrate_semi_infinite(|x| (-0.5 * x).exp(), 5.0, &tol()).unwrap();
        assert!((v - 2.0).abs() < 1e-11, "{v}");
    }

    #[test]
    fn finite_interval() {
        let v = integrate_interval(|t| 3.0 * t * t - 1.0, -1.0, 1.0, &tol()).unwrap();
        assert!(v.abs() < 1e-14);
        let v = integrate_interval(|x| x.sin(), 0.0, std::f64::consts::PI, &tol()).unwrap();
        assert!((v - 2.0).abs() < 1e-14);
        assert_eq!(integrate_interval(|x| x, 1.0, 1.0, &tol()).unwrap(), 0.0);
    }

    #[test]
    fn vector_components_share_nodes() {
        let v = integrate_semi_infinite_vec(|x| [(-x).exp(), x * (-x).exp(), 0.0], 1.0, &tol()).unwrap();
        assert!((v[0] - 1.0).abs() < 1e-13 && (v[1] - 1.0).abs() < 1e-13 && v[2] == 0.0);
    }

    #[test]
    fn reports_convergence_failure() {
        let t = Tolerance::new(1e-15, 1e-15, 9).unwrap();
        let r = integrate_semi_infinite(|x| (50.0 * x).sin().abs() * (-x).exp(), 1.0, &t);
        match r {
            Err(Error::Convergence { estimate, achieved, .. }) => {
                assert!(estimate.is_finite() && achieved > 0.0)
            }
            other => panic!("expected convergence failure, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_rate() {
        assert!(integrate_semi_infinite(|x| x, 0.0, &tol()).is_err());
    }
}

//! The identity suite: each check evaluates two independent code paths for
//! the same quantity and records how well they agree.

mod diff;
mod kernels;

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coulomb::{self, Separation, Sign};
use crate::geometry::CavityFrame;
use crate::radiation::{self, AnisotropyResult};
use crate::specfun::lattice::{check_lattice_args, xi_partial};
use crate::specfun::{
    bessel_j012, direct_mode_sum, hyperbolic_mode_sum, integrate_interval,
    integrate_semi_infinite, integrate_semi_infinite_vec, xi, xi_truncation, ModeSumArgs,
    Tolerance,
};
use crate::{Error, Mat3, Result};

pub use diff::{ridders, Derivative};
pub use kernels::{ExactKernels, KernelSource, MutatedKernels, Mutation};

#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CheckId {
    EQ21,
    EQ22,
    EQ29_PLUS,
    EQ29_MINUS,
    EQ30,
    EQ27,
    EQ33,
    EQ34,
    EQ36,
    SELF_CANCEL,
    AXIAL20,
    ANISO38,
}

impl CheckId {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckId::EQ21 => "EQ21",
            CheckId::EQ22 => "EQ22",
            CheckId::EQ29_PLUS => "EQ29_PLUS",
            CheckId::EQ29_MINUS => "EQ29_MINUS",
            CheckId::EQ30 => "EQ30",
            CheckId::EQ27 => "EQ27",
            CheckId::EQ33 => "EQ33",
            CheckId::EQ34 => "EQ34",
            CheckId::EQ36 => "EQ36",
            CheckId::SELF_CANCEL => "SELF_CANCEL",
            CheckId::AXIAL20 => "AXIAL20",
            CheckId::ANISO38 => "ANISO38",
        }
    }

    /// Pass thresholds (abs, rel) of the check.
    pub fn threshold(self) -> (f64, f64) {
        match self {
            CheckId::EQ22 => (1e-13, 1e-8),
            CheckId::EQ29_PLUS | CheckId::EQ29_MINUS | CheckId::EQ30 => (1e-12, 1e-6),
            CheckId::EQ21 => (1e-15, 1e-7),
            CheckId::SELF_CANCEL => (1e-15, 1e-8),
            CheckId::EQ27 => (1e-12, 1e-5),
            CheckId::EQ33 | CheckId::EQ34 => (1e-9, 1e-10),
            CheckId::EQ36 => (1e-6, 1e-10),
            CheckId::AXIAL20 => (1e-12, 1e-12),
            CheckId::ANISO38 => (1e-12, 1e-12),
        }
    }

    fn pass_tolerance(self, tol: &Tolerance) -> Tolerance {
        let (abs_tol, rel_tol) = self.threshold();
        Tolerance {
            abs_tol,
            rel_tol,
            max_subdivisions: tol.max_subdivisions,
        }
    }

    /// Numerical accuracy used inside the check: the request, tightened to
    /// a hundredth of the pass threshold.
    fn numeric_tolerance(self, tol: &Tolerance) -> Tolerance {
        let (abs_tol, rel_tol) = self.threshold();
        tol.tightened(abs_tol / 100.0, rel_tol / 100.0)
    }
}

impl std::fmt::Display for CheckId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Quantity {
    Scalar(f64),
    /// Real and imaginary part.
    Complex([f64; 2]),
    Matrix([[f64; 3]; 3]),
}

impl Quantity {
    fn matrix(m: &Mat3) -> Self {
        let mut a = [[0.0; 3]; 3];
        for (i, row) in a.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = m[(i, j)];
            }
        }
        Quantity::Matrix(a)
    }

    fn entries(&self) -> Vec<f64> {
        match self {
            Quantity::Scalar(x) => vec![*x],
            Quantity::Complex(z) => z.to_vec(),
            Quantity::Matrix(a) => a.iter().flatten().copied().collect(),
        }
    }
}

/// Outcome of one identity check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub check_id: CheckId,
    pub params: BTreeMap<String, f64>,
    pub lhs: Quantity,
    pub rhs: Quantity,
    /// Largest entrywise |lhs − rhs|.
    pub abs_err: f64,
    /// abs_err over the largest entry of |rhs|.
    pub rel_err: f64,
    pub pass: bool,
    /// Pass thresholds; `pass ⇔ abs_err ≤ abs_tol ∨ rel_err ≤ rel_tol`.
    pub tol_used: Tolerance,
    /// Set when a side could not be evaluated.
    pub diagnostic: Option<String>,
}

impl IdentityReport {
    pub fn compare(
        check_id: CheckId,
        params: BTreeMap<String, f64>,
        lhs: Quantity,
        rhs: Quantity,
        tol_used: Tolerance,
    ) -> Self {
        let l = lhs.entries();
        let r = rhs.entries();
        let mut abs_err: f64 = 0.0;
        let mut scale: f64 = 0.0;
        let mut finite = true;
        for (a, b) in l.iter().zip(&r) {
            let d = (a - b).abs();
            finite &= d.is_finite();
            abs_err = abs_err.max(d);
            scale = scale.max(b.abs());
        }
        if !finite {
            abs_err = f64::INFINITY;
        }
        let rel_err = relative(abs_err, scale);
        let pass = abs_err <= tol_used.abs_tol || rel_err <= tol_used.rel_tol;
        IdentityReport {
            check_id,
            params,
            lhs,
            rhs,
            abs_err,
            rel_err,
            pass,
            tol_used,
            diagnostic: None,
        }
    }

    /// A failed report for a check whose evaluation raised an error.
    pub fn failed(check_id: CheckId, params: BTreeMap<String, f64>, tol_used: Tolerance, err: &Error) -> Self {
        IdentityReport {
            check_id,
            params,
            lhs: Quantity::Scalar(f64::NAN),
            rhs: Quantity::Scalar(f64::NAN),
            abs_err: f64::INFINITY,
            rel_err: f64::INFINITY,
            pass: false,
            tol_used,
            diagnostic: Some(err.to_string()),
        }
    }
}

fn relative(abs_err: f64, scale: f64) -> f64 {
    if abs_err == 0.0 {
        0.0
    } else if scale == 0.0 {
        f64::INFINITY
    } else {
        abs_err / scale
    }
}

fn params<const N: usize>(pairs: [(&str, f64); N]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn report_or_fail(
    id: CheckId,
    p: BTreeMap<String, f64>,
    tol: &Tolerance,
    f: impl FnOnce(&mut BTreeMap<String, f64>) -> Result<(Quantity, Quantity)>,
) -> IdentityReport {
    let mut p = p;
    match f(&mut p) {
        Ok((lhs, rhs)) => IdentityReport::compare(id, p, lhs, rhs, id.pass_tolerance(tol)),
        Err(e) => IdentityReport::failed(id, p, id.pass_tolerance(tol), &e),
    }
}

/// ξ at fixed truncation, which makes it a smooth function of (u, v) for
/// finite differencing.
fn xi_fixed(u: f64, v: f64, n_terms: usize) -> Result<f64> {
    let r = check_lattice_args(u, v.abs())?;
    Ok(xi_partial(r, v.abs(), n_terms))
}

/// Bessel–hyperbolic integral identities at one (u, v):
///
/// * EQ22: ∫ x ch J₁(xv) dx = v ξ(u, v)
/// * EQ29±: ∫ x² ch (J₀ ± J₂)(xv) dx = [2 + (1 ∓ 1) v∂_v] ξ(u, v)
/// * EQ30: ∫ x² sh J₁(xv) dx = v ∂_u ξ(u, v)
///
/// with ch = cosh(x(u−1))/sinh x and sh = sinh(x(u−1))/sinh x; the
/// derivatives of ξ are Ridders finite differences.
pub fn check_bessel_hyperbolic(u: f64, v: f64, tol: &Tolerance) -> Vec<IdentityReport> {
    let base = params([("u", u), ("v", v)]);
    if !(u > 0.0 && u < 2.0 && v > 0.0 && v.is_finite()) {
        let e = Error::domain(format!("need 0 < u < 2 and v > 0, got u={u}, v={v}"));
        return [CheckId::EQ22, CheckId::EQ29_PLUS, CheckId::EQ29_MINUS, CheckId::EQ30]
            .into_iter()
            .map(|id| IdentityReport::failed(id, base.clone(), id.pass_tolerance(tol), &e))
            .collect();
    }
    let rate = 1.0 - (u - 1.0).abs();
    let hyper = move |x: f64| {
        let denom = -(-2.0 * x).exp_m1();
        let near = (x * (u - 2.0)).exp();
        let far = (-x * u).exp();
        ((near + far) / denom, (near - far) / denom)
    };
    let mut out = Vec::with_capacity(4);

    let id = CheckId::EQ22;
    let nt = id.numeric_tolerance(tol);
    out.push(report_or_fail(id, base.clone(), tol, |_| {
        let lhs = integrate_semi_infinite(|x| x * hyper(x).0 * bessel_j012(x * v).1, rate, &nt)?;
        let rhs = v * xi(u, v, &nt)?;
        Ok((Quantity::Scalar(lhs), Quantity::Scalar(rhs)))
    }));

    let nt = CheckId::EQ29_PLUS.numeric_tolerance(tol);
    let integrals = integrate_semi_infinite_vec(
        |x| {
            let (ch, sh) = hyper(x);
            let (j0, j1, j2) = bessel_j012(x * v);
            let x2 = x * x;
            [x2 * ch * (j0 + j2), x2 * ch * (j0 - j2), x2 * sh * j1]
        },
        rate,
        &nt,
    );
    let lattice = xi_truncation(u, v, &nt).and_then(|n| {
        let n = 2 * n;
        let value = xi_fixed(u, v, n)?;
        // Steps stay a fixed fraction of the distance to the nearest source.
        let d = (u - 2.0 * (u / 2.0).round()).abs();
        let h0 = 0.3 * d.hypot(v);
        let dv = ridders(|t| xi_fixed(u, t, n).unwrap_or(f64::NAN), v, h0);
        let du = ridders(|t| xi_fixed(t, v, n).unwrap_or(f64::NAN), u, h0);
        Ok((value, dv, du))
    });
    let ids = [CheckId::EQ29_PLUS, CheckId::EQ29_MINUS, CheckId::EQ30];
    match (&integrals, &lattice) {
        (Ok(ints), Ok((value, dv, du))) => {
            let rhs = [2.0 * value, 2.0 * value + 2.0 * v * dv.value, v * du.value];
            for (k, id) in ids.into_iter().enumerate() {
                let fd = if k == 2 { du } else { dv };
                let mut p = base.clone();
                if k > 0 {
                    p.insert("fd_step".into(), fd.step);
                    p.insert("fd_error".into(), fd.error);
                }
                out.push(IdentityReport::compare(
                    id,
                    p,
                    Quantity::Scalar(ints[k]),
                    Quantity::Scalar(rhs[k]),
                    id.pass_tolerance(tol),
                ));
            }
        }
        (Err(e), _) | (_, Err(e)) => {
            for id in ids {
                out.push(IdentityReport::failed(id, base.clone(), id.pass_tolerance(tol), e));
            }
        }
    }
    out
}

/// EQ21 (𝔈^(+) = −𝔇^(+)/2π) at each separation and SELF_CANCEL at each
/// dipole height z/L, using the production kernels.
pub fn check_kernel_cancellation(
    sep_samples: &[Separation],
    z_samples: &[f64],
    tol: &Tolerance,
) -> Vec<IdentityReport> {
    check_kernel_cancellation_with(&ExactKernels, sep_samples, z_samples, tol)
}

/// [`check_kernel_cancellation`] with an explicit kernel provider.
pub fn check_kernel_cancellation_with(
    kernels: &dyn KernelSource,
    sep_samples: &[Separation],
    z_samples: &[f64],
    tol: &Tolerance,
) -> Vec<IdentityReport> {
    let mut out: Vec<IdentityReport> = sep_samples
        .par_iter()
        .map(|s| {
            let id = CheckId::EQ21;
            let nt = id.numeric_tolerance(tol);
            report_or_fail(id, params([("u", s.u), ("v", s.v), ("phi", s.phi)]), tol, |_| {
                let e = kernels.e_plus(s, &nt)?;
                let d = kernels.d(Sign::Plus, s, &nt)?;
                Ok((Quantity::matrix(&(-d / (2.0 * PI))), Quantity::matrix(&e)))
            })
        })
        .collect();
    let selfs: Vec<IdentityReport> = z_samples
        .par_iter()
        .map(|&z| {
            let id = CheckId::SELF_CANCEL;
            let nt = id.numeric_tolerance(tol);
            report_or_fail(id, params([("z_over_L", z)]), tol, |_| {
                if !(z > 0.0 && z < 1.0) {
                    return Err(Error::domain(format!("z/L must lie in (0, 1), got {z}")));
                }
                let quad = kernels.d(Sign::Minus, &Separation::axial(2.0 * z), &nt)?;
                let xi_part = coulomb::self_energy_xi_part(z, &nt)?;
                Ok((
                    Quantity::matrix(&(quad / (16.0 * PI * PI))),
                    Quantity::matrix(&(-xi_part / (8.0 * PI))),
                ))
            })
        })
        .collect();
    out.extend(selfs);
    out
}

/// EQ27: symmetric direct mode sum against its closed form.
pub fn check_mode_sum(grid: &[ModeSumArgs], n_max: u64, tol: &Tolerance) -> Vec<IdentityReport> {
    grid.par_iter()
        .map(|a| {
            let p = params([("alpha", a.alpha), ("beta", a.beta), ("m", a.m as f64), ("n_max", n_max as f64)]);
            let id = CheckId::EQ27;
            report_or_fail(id, p, tol, |_| {
                let direct = direct_mode_sum(*a, n_max)?;
                let closed = hyperbolic_mode_sum(*a)?;
                Ok((
                    Quantity::Complex([direct.re, direct.im]),
                    Quantity::Complex([closed.re, closed.im]),
                ))
            })
        })
        .collect()
}

/// EQ33: ∫ e^{−xu} J₀(xv) dx = (u² + v²)^{−1/2};
/// EQ34: ∫ x e^{−xu} J₁(xv) dx = v (u² + v²)^{−3/2}.
pub fn check_lipschitz(u: f64, v: f64, tol: &Tolerance) -> Vec<IdentityReport> {
    let base = params([("u", u), ("v", v)]);
    if !(u > 0.0 && u.is_finite() && v >= 0.0 && v.is_finite()) {
        let e = Error::domain(format!("need u > 0 and v ≥ 0, got u={u}, v={v}"));
        return [CheckId::EQ33, CheckId::EQ34]
            .into_iter()
            .map(|id| IdentityReport::failed(id, base.clone(), id.pass_tolerance(tol), &e))
            .collect();
    }
    let rho2 = u * u + v * v;
    let a = report_or_fail(CheckId::EQ33, base.clone(), tol, |_| {
        let nt = CheckId::EQ33.numeric_tolerance(tol);
        let lhs = integrate_semi_infinite(|x| (-x * u).exp() * bessel_j012(x * v).0, u, &nt)?;
        Ok((Quantity::Scalar(lhs), Quantity::Scalar(1.0 / rho2.sqrt())))
    });
    let b = report_or_fail(CheckId::EQ34, base, tol, |_| {
        let nt = CheckId::EQ34.numeric_tolerance(tol);
        let lhs = integrate_semi_infinite(|x| x * (-x * u).exp() * bessel_j012(x * v).1, u, &nt)?;
        Ok((Quantity::Scalar(lhs), Quantity::Scalar(v / (rho2 * rho2.sqrt()))))
    });
    vec![a, b]
}

/// Σ_n [((2n+u)² + v²)^{−1/2} − ((2n+u')² + v²)^{−1/2}], summed in ±n pairs
/// with a midpoint tail correction.
fn green_lattice(u: f64, u_prime: f64, v: f64, target: f64) -> f64 {
    let f = |s: f64| 1.0 / s.hypot(v);
    let du = (u - u_prime).abs();
    if du == 0.0 {
        return 0.0;
    }
    // Remainder per side is about |Δu|/(6a³) with a = 2N + 1.
    let a_min = (du / (3.0 * target)).cbrt();
    let n = ((a_min - 1.0) / 2.0).ceil().max(4.0) as usize;
    let a = 2.0 * n as f64 + 1.0;
    let mut sum = 0.5 * (((a + u_prime) / v).asinh() - ((a + u) / v).asinh())
        + 0.5 * (((a - u_prime) / v).asinh() - ((a - u) / v).asinh());
    for k in (1..=n).rev() {
        let two_k = 2.0 * k as f64;
        sum += (f(two_k + u) - f(two_k + u_prime)) + (f(two_k - u) - f(two_k - u_prime));
    }
    sum + f(u) - f(u_prime)
}

/// EQ36: paired lattice sum of inverse distances against
/// ∫ [cosh(x(u−1)) − cosh(x(u'−1))]/sinh(x) J₀(xv) dx.
pub fn check_green(u: f64, u_prime: f64, v: f64, tol: &Tolerance) -> IdentityReport {
    let id = CheckId::EQ36;
    let p = params([("u", u), ("u_prime", u_prime), ("v", v)]);
    report_or_fail(id, p, tol, |_| {
        if !(u > 0.0 && u < 2.0 && u_prime > 0.0 && u_prime < 2.0 && v > 0.0 && v.is_finite()) {
            return Err(Error::domain(format!(
                "need u, u' in (0, 2) and v > 0, got u={u}, u'={u_prime}, v={v}"
            )));
        }
        let nt = id.numeric_tolerance(tol);
        let lhs = green_lattice(u, u_prime, v, nt.abs_tol);
        let rate = 1.0 - (u - 1.0).abs().max((u_prime - 1.0).abs());
        let rhs = integrate_semi_infinite(
            |x| {
                let denom = -(-2.0 * x).exp_m1();
                let a = (x * (u - 2.0)).exp() + (-x * u).exp();
                let b = (x * (u_prime - 2.0)).exp() + (-x * u_prime).exp();
                (a - b) / denom * bessel_j012(x * v).0
            },
            rate,
            &nt,
        )?;
        Ok((Quantity::Scalar(lhs), Quantity::Scalar(rhs)))
    })
}

/// AXIAL20 for 𝔇^(±) at each axial offset and the three ANISO38 reports
/// (monotone decay over the lengths, final ratio, continuum integral).
pub fn check_axial_and_aniso(
    rho_z_samples: &[f64],
    l_samples: &[f64],
    cutoff: f64,
    tol: &Tolerance,
) -> Vec<IdentityReport> {
    check_axial_and_aniso_with(&ExactKernels, rho_z_samples, l_samples, cutoff, tol)
}

pub fn check_axial_and_aniso_with(
    kernels: &dyn KernelSource,
    rho_z_samples: &[f64],
    l_samples: &[f64],
    cutoff: f64,
    tol: &Tolerance,
) -> Vec<IdentityReport> {
    let id = CheckId::AXIAL20;
    let mut out: Vec<IdentityReport> = rho_z_samples
        .par_iter()
        .flat_map_iter(|&u| {
            [(Sign::Plus, 1.0), (Sign::Minus, -1.0)].map(|(sign, code)| {
                report_or_fail(id, params([("u", u), ("sign", code)]), tol, |_| {
                    let m = kernels.d(sign, &Separation::axial(u), &id.numeric_tolerance(tol))?;
                    let off = m[(0, 2)].abs().max(m[(2, 0)].abs());
                    Ok((Quantity::Scalar(off), Quantity::Scalar(0.0)))
                })
            })
        })
        .collect();
    if !l_samples.is_empty() {
        out.extend(aniso_reports(l_samples, cutoff, tol));
    }
    out
}

fn aniso_reports(l_samples: &[f64], cutoff: f64, tol: &Tolerance) -> Vec<IdentityReport> {
    let id = CheckId::ANISO38;
    let nt = id.numeric_tolerance(tol);
    let results: Result<Vec<AnisotropyResult>> = l_samples
        .par_iter()
        .map(|&l| radiation::anisotropy_delta(&CavityFrame::new(l)?, cutoff, &nt))
        .collect();
    let mut p = params([("cutoff", cutoff)]);
    for (i, l) in l_samples.iter().enumerate() {
        p.insert(format!("L_{i}"), *l);
    }
    let tol_at = |abs_tol: f64| Tolerance {
        abs_tol,
        rel_tol: 1e-300,
        max_subdivisions: tol.max_subdivisions,
    };
    let mut out = Vec::with_capacity(3);
    match results {
        Ok(res) => {
            let normalized: Vec<f64> = res.iter().map(AnisotropyResult::normalized).collect();
            for (i, r) in res.iter().enumerate() {
                p.insert(format!("delta_{i}"), r.delta);
                p.insert(format!("normalized_{i}"), normalized[i]);
            }
            for (i, s) in radiation::anisotropy_slopes(&res).iter().enumerate() {
                p.insert(format!("slope_{i}"), *s);
            }
            let violations = normalized.windows(2).filter(|w| !(w[1] < w[0])).count();
            let mut mono = p.clone();
            mono.insert("criterion".into(), 0.0);
            out.push(IdentityReport::compare(
                id,
                mono,
                Quantity::Scalar(violations as f64),
                Quantity::Scalar(0.0),
                tol_at(0.5),
            ));
            let mut ratio = p.clone();
            ratio.insert("criterion".into(), 1.0);
            let value = normalized.last().copied().unwrap_or(f64::NAN) / normalized[0];
            out.push(IdentityReport::compare(
                id,
                ratio,
                Quantity::Scalar(value),
                Quantity::Scalar(0.0),
                tol_at(1e-2),
            ));
        }
        Err(e) => {
            for c in [0.0, 1.0] {
                let mut q = p.clone();
                q.insert("criterion".into(), c);
                out.push(IdentityReport::failed(id, q, id.pass_tolerance(tol), &e));
            }
        }
    }
    // Continuum replacement of the mode sum: the angular weight 3t² − 1
    // integrates to zero.
    let cont = report_or_fail(id, params([("criterion", 2.0)]), tol, |_| {
        let v = integrate_interval(|t| 3.0 * t * t - 1.0, -1.0, 1.0, &nt)?;
        Ok((Quantity::Scalar(v), Quantity::Scalar(0.0)))
    });
    out.push(cont);
    out
}

/// Which group of checks to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Suite {
    All,
    Bessel,
    Cancellation,
    ModeSum,
    Lipschitz,
    Green,
    Aniso,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Bessel => "bessel",
            Suite::Cancellation => "cancellation",
            Suite::ModeSum => "modesum",
            Suite::Lipschitz => "lipschitz",
            Suite::Green => "green",
            Suite::Aniso => "aniso",
        }
    }

    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

/// Sample grids for the suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Number of random separations for EQ21.
    pub random_separations: usize,
    pub bessel_u: Vec<f64>,
    pub bessel_v: Vec<f64>,
    pub self_cancel_z: Vec<f64>,
    pub modesum_grid: Vec<ModeSumArgs>,
    pub modesum_n_max: u64,
    pub lipschitz_points: Vec<(f64, f64)>,
    pub green_triples: Vec<(f64, f64, f64)>,
    pub axial_u: Vec<f64>,
    pub aniso_lengths: Vec<f64>,
    pub aniso_cutoff: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        let mut modesum_grid = Vec::new();
        for alpha in [0.0, 0.5, PI] {
            for beta in [0.3, 1.0, 3.0] {
                for m in [0, 1] {
                    modesum_grid.push(ModeSumArgs { alpha, beta, m });
                }
            }
        }
        let mut lipschitz_points = Vec::new();
        for u in [1.0, 2.0] {
            for v in [0.0, 1.0, 3.0] {
                lipschitz_points.push((u, v));
            }
        }
        VerifyConfig {
            seed: 42,
            random_separations: 20,
            bessel_u: (0..10).map(|i| 0.1 + 0.2 * i as f64).collect(),
            bessel_v: vec![0.25, 0.5, 1.0, 2.0, 4.0],
            self_cancel_z: (1..10).map(|i| 0.1 * i as f64).collect(),
            modesum_grid,
            modesum_n_max: 1_000_000,
            lipschitz_points,
            green_triples: vec![(0.5, 1.0, 1.0), (0.3, 1.7, 0.5), (1.2, 0.8, 2.0)],
            axial_u: vec![0.3, 0.7, 1.0, 1.5],
            aniso_lengths: vec![1.0, 2.0, 4.0, 8.0],
            aniso_cutoff: 2.0 * PI,
        }
    }
}

impl VerifyConfig {
    /// Configuration with every grid empty.
    pub fn empty(seed: u64) -> Self {
        VerifyConfig {
            seed,
            random_separations: 0,
            bessel_u: vec![],
            bessel_v: vec![],
            self_cancel_z: vec![],
            modesum_grid: vec![],
            modesum_n_max: 1,
            lipschitz_points: vec![],
            green_triples: vec![],
            axial_u: vec![],
            aniso_lengths: vec![],
            aniso_cutoff: 2.0 * PI,
        }
    }
}

/// `count` separations with u ∈ (0.05, 1.95), v ∈ (0.05, 3), φ ∈ [0, 2π).
pub fn random_separations(seed: u64, count: usize) -> Vec<Separation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| Separation {
            u: rng.random_range(0.05..1.95),
            v: rng.random_range(0.05..3.0),
            phi: rng.random_range(0.0..2.0 * PI),
        })
        .collect()
}

/// Aggregate result of a suite run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub all_pass: bool,
    pub reports: Vec<IdentityReport>,
    pub warnings: Vec<String>,
}

/// Runs every check of the suite on the configured grids with the
/// production kernels.
pub fn run_all(config: &VerifyConfig, tol: &Tolerance) -> SuiteReport {
    run_suite(Suite::All, config, tol, &ExactKernels)
}

pub fn run_suite(suite: Suite, config: &VerifyConfig, tol: &Tolerance, kernels: &dyn KernelSource) -> SuiteReport {
    let mut groups: Vec<(&str, Vec<IdentityReport>)> = Vec::new();
    if suite.includes(Suite::Bessel) {
        let points: Vec<(f64, f64)> = config
            .bessel_u
            .iter()
            .flat_map(|&u| config.bessel_v.iter().map(move |&v| (u, v)))
            .collect();
        let r = points
            .par_iter()
            .flat_map_iter(|&(u, v)| check_bessel_hyperbolic(u, v, tol))
            .collect();
        groups.push(("bessel", r));
    }
    if suite.includes(Suite::Cancellation) {
        let seps = random_separations(config.seed, config.random_separations);
        groups.push((
            "cancellation",
            check_kernel_cancellation_with(kernels, &seps, &config.self_cancel_z, tol),
        ));
    }
    if suite.includes(Suite::ModeSum) {
        groups.push(("modesum", check_mode_sum(&config.modesum_grid, config.modesum_n_max, tol)));
    }
    if suite.includes(Suite::Lipschitz) {
        let r = config
            .lipschitz_points
            .par_iter()
            .flat_map_iter(|&(u, v)| check_lipschitz(u, v, tol))
            .collect();
        groups.push(("lipschitz", r));
    }
    if suite.includes(Suite::Green) {
        let r = config
            .green_triples
            .par_iter()
            .map(|&(u, up, v)| check_green(u, up, v, tol))
            .collect();
        groups.push(("green", r));
    }
    if suite.includes(Suite::Aniso) {
        groups.push((
            "aniso",
            check_axial_and_aniso_with(kernels, &config.axial_u, &config.aniso_lengths, config.aniso_cutoff, tol),
        ));
    }
    let mut warnings = Vec::new();
    let mut reports = Vec::new();
    for (name, r) in groups {
        if r.is_empty() {
            warnings.push(format!("no coverage: the {name} checks have no sample points"));
        }
        reports.extend(r);
    }
    SuiteReport {
        suite: suite.name().to_string(),
        seed: config.seed,
        all_pass: reports.iter().all(|r| r.pass),
        reports,
        warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn compare_semantics() {
        let t = Tolerance::new(1e-10, 1e-6, 10).unwrap();
        let r = IdentityReport::compare(CheckId::EQ22, BTreeMap::new(), Quantity::Scalar(1.0), Quantity::Scalar(1.0 + 1e-7), t);
        assert!(r.pass && r.abs_err > 0.0 && r.rel_err < 1e-6);
        let r = IdentityReport::compare(CheckId::EQ22, BTreeMap::new(), Quantity::Scalar(1e-3), Quantity::Scalar(0.0), t);
        assert!(!r.pass && r.rel_err.is_infinite());
        let r = IdentityReport::compare(CheckId::EQ22, BTreeMap::new(), Quantity::Scalar(0.0), Quantity::Scalar(0.0), t);
        assert!(r.pass && r.rel_err == 0.0);
        let r = IdentityReport::compare(CheckId::EQ22, BTreeMap::new(), Quantity::Scalar(f64::NAN), Quantity::Scalar(1.0), t);
        assert!(!r.pass);
    }

    #[test]
    fn bessel_checks_at_symmetry_point() {
        let r = check_bessel_hyperbolic(1.0, 1.0, &tol());
        assert_eq!(r.len(), 4);
        assert!(r.iter().all(|x| x.pass), "{r:#?}");
        let eq30 = &r[3];
        if let (Quantity::Scalar(l), Quantity::Scalar(rh)) = (eq30.lhs, eq30.rhs) {
            assert_eq!(l, 0.0);
            assert!(rh.abs() < 1e-9);
        }
        assert!(eq30.params["fd_step"] > 0.0);
    }

    #[test]
    fn bessel_checks_reject_domain() {
        let r = check_bessel_hyperbolic(2.5, 1.0, &tol());
        assert!(r.iter().all(|x| !x.pass && x.diagnostic.is_some()));
    }

    #[test]
    fn lipschitz_examples() {
        for (u, v) in [(1.0, 0.0), (1.0, 1.0), (2.0, 3.0)] {
            let r = check_lipschitz(u, v, &tol());
            assert!(r.iter().all(|x| x.pass && x.abs_err < 1e-10), "{r:#?}");
        }
    }

    #[test]
    fn green_examples() {
        let r = check_green(0.7, 0.7, 1.0, &tol());
        assert!(r.pass && r.abs_err < 1e-14);
        let a = check_green(0.3, 1.7, 0.5, &tol());
        let b = check_green(2.0 - 1.7, 2.0 - 0.3, 0.5, &tol());
        assert!(a.pass && b.pass);
        let r = check_green(0.5, 1.0, 1.0, &tol());
        assert!(r.pass && r.abs_err < 1e-9, "{r:#?}");
    }

    #[test]
    fn mode_sum_exact_zero() {
        let r = check_mode_sum(&[ModeSumArgs { alpha: 0.0, beta: 2.0, m: 1 }], 1000, &tol());
        assert_eq!(r[0].abs_err, 0.0);
        assert!(r[0].pass);
    }

    #[test]
    fn random_separations_are_reproducible() {
        let a = random_separations(7, 5);
        assert_eq!(a, random_separations(7, 5));
        assert_ne!(a, random_separations(8, 5));
        assert!(a.iter().all(|s| s.u > 0.05 && s.u < 1.95 && s.v > 0.05 && s.v < 3.0));
    }

    #[test]
    fn empty_grids_pass_with_warnings() {
        let r = run_all(&VerifyConfig::empty(1), &tol());
        assert!(r.all_pass && r.reports.is_empty());
        assert_eq!(r.warnings.len(), 6);
    }
}

//! Quadratic kernels 𝔇^(±) produced by the transformation to the
//! electric-dipole gauge, and the anisotropy of the divergent 𝔇^(+)(0).
//!
//! In L = 1 units, with ch = cosh(x(u−1))/sinh(x), sh = sinh(x(u−1))/sinh(x)
//! and Bessel functions of argument xv, the summed form reads
//!
//! ```text
//! xx =  π ∫ x² ch (J₂ − J₀)     yy = −π ∫ x² ch (J₀ + J₂)
//! zz = 2π ∫ x² ch J₀            xz = −2π ∫ x² sh J₁
//! ```
//!
//! for ρ_⊥ along x̂, and 𝔇^(−) = 𝔇^(+)·R.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::coulomb::{rotate, KernelKind, KernelMatrix, Separation, Sign};
use crate::geometry::{reflection_matrix, CavityFrame};
use crate::specfun::{bessel_j012, integrate_semi_infinite, integrate_semi_infinite_vec, Tolerance};
use crate::{Error, Mat3, Result};

/// 𝔇^(+) or 𝔇^(−) by quadrature of the summed form; requires 0 < u < 2.
pub fn kernel_d(sign: Sign, sep: &Separation, tol: &Tolerance) -> Result<KernelMatrix> {
    sep.validate()?;
    let plus = rotate(&d_plus_axis_frame(sep.u, sep.v, tol, true)?, sep.phi);
    Ok(match sign {
        Sign::Plus => KernelMatrix {
            m: plus,
            kind: KernelKind::DPlus,
        },
        Sign::Minus => KernelMatrix {
            m: plus * reflection_matrix(),
            kind: KernelKind::DMinus,
        },
    })
}

/// Summed-form 𝔇^(+) with ρ_⊥ along x̂; `with_j2 = false` drops the J₂ terms.
pub(crate) fn d_plus_axis_frame(u: f64, v: f64, tol: &Tolerance, with_j2: bool) -> Result<Mat3> {
    if !(u > 0.0 && u < 2.0) {
        return Err(Error::domain(format!(
            "summed kernel needs 0 < u < 2, got u={u}"
        )));
    }
    if !(v >= 0.0) || !v.is_finite() {
        return Err(Error::domain(format!("v must be non-negative, got {v}")));
    }
    let rate = 1.0 - (u - 1.0).abs();
    let j2_weight = if with_j2 { 1.0 } else { 0.0 };
    let [xx, yy, zz, xz] = integrate_semi_infinite_vec(
        |x: f64| {
            let denom = -(-2.0 * x).exp_m1();
            let near = (x * (u - 2.0)).exp();
            let far = (-x * u).exp();
            let x2 = x * x;
            let ch = x2 * (near + far) / denom;
            let sh = x2 * (near - far) / denom;
            let (j0, j1, j2) = bessel_j012(x * v);
            let j2 = j2_weight * j2;
            [ch * (j2 - j0), -ch * (j0 + j2), 2.0 * ch * j0, sh * j1]
        },
        rate,
        tol,
    )?;
    let xz = -2.0 * PI * xz;
    Ok(Mat3::new(
        PI * xx,
        0.0,
        xz,
        0.0,
        PI * yy,
        0.0,
        xz,
        0.0,
        PI * zz,
    ))
}

/// 𝔇^(+) from the mode-sum/transverse-integral representation, damped by
/// e^{−ε|k|} with |k|² = (πn)² + κ². Converges to [`kernel_d`] as ε → 0
/// with an error polynomial in ε that [`kernel_d_spectral_extrapolated`]
/// suppresses.
pub fn kernel_d_spectral(sep: &Separation, regulator_eps: f64, tol: &Tolerance) -> Result<KernelMatrix> {
    sep.validate()?;
    if !(regulator_eps > 0.0) || !regulator_eps.is_finite() {
        return Err(Error::domain(format!(
            "regulator must be positive, got {regulator_eps}"
        )));
    }
    if sep.v == 0.0 && sep.u.rem_euclid(2.0) == 0.0 {
        return Err(Error::domain("spectral kernel is undefined at the source point"));
    }
    let m = spectral_axis_frame(sep.u, sep.v, regulator_eps, tol)?;
    Ok(KernelMatrix {
        m: rotate(&m, sep.phi),
        kind: KernelKind::DPlus,
    })
}

/// Richardson extrapolation of [`kernel_d_spectral`] over 2ε, ε, ε/2, ε/4,
/// removing the ε, ε² and ε³ terms. Further levels do not help: the next
/// correction is not a clean power of ε.
pub fn kernel_d_spectral_extrapolated(
    sep: &Separation,
    regulator_eps: f64,
    tol: &Tolerance,
) -> Result<KernelMatrix> {
    let mut row = Vec::with_capacity(4);
    for scale in [2.0, 1.0, 0.5, 0.25] {
        row.push(kernel_d_spectral(sep, regulator_eps * scale, tol)?.m);
    }
    for order in 1..4 {
        let f = f64::from(1u32 << order);
        row = row.windows(2).map(|w| (f * w[1] - w[0]) / (f - 1.0)).collect();
    }
    Ok(KernelMatrix {
        m: row[0],
        kind: KernelKind::DPlus,
    })
}

fn spectral_axis_frame(u: f64, v: f64, eps: f64, tol: &Tolerance) -> Result<Mat3> {
    let floor = tol.abs_tol.min(tol.rel_tol) * 1e-3;
    let n_max = ((1.0 / floor).ln() / (eps * PI)).ceil().max(1.0) as usize;
    let modes: Vec<(f64, f64, f64)> = (1..=n_max)
        .map(|n| {
            let kn = PI * n as f64;
            let (s, c) = (kn * u).sin_cos();
            (kn, c, s)
        })
        .collect();
    let [xx, yy, zz, xz] = integrate_semi_infinite_vec(
        |kappa: f64| {
            let k2 = kappa * kappa;
            let base = (-eps * kappa).exp();
            let (mut a, mut b, mut c) = (0.0, 0.0, 0.0);
            for &(kn, cs, sn) in modes.iter().rev() {
                let big_k2 = kn * kn + k2;
                let w = (-eps * big_k2.sqrt()).exp() / big_k2;
                a += cs * w * (2.0 * kn * kn + k2);
                b += cs * w * k2;
                c += sn * w * kn;
            }
            let a = base + 2.0 * a;
            let b = base + 2.0 * b;
            let c = 4.0 * c;
            let (j0, j1, j2) = bessel_j012(kappa * v);
            [
                kappa * (a * j0 + b * j2),
                kappa * (a * j0 - b * j2),
                2.0 * kappa * b * j0,
                k2 * c * j1,
            ]
        },
        eps,
        tol,
    )?;
    let xz = PI * xz;
    Ok(Mat3::new(
        PI * xx,
        0.0,
        xz,
        0.0,
        PI * yy,
        0.0,
        xz,
        0.0,
        PI * zz,
    ))
}

/// Position-dependent single-dipole term 𝔇^(−)(2z ẑ), L = 1.
pub fn quadratic_self_term(z_over_l: f64, tol: &Tolerance) -> Result<KernelMatrix> {
    if !(z_over_l > 0.0 && z_over_l < 1.0) {
        return Err(Error::domain(format!(
            "dipole height z/L must lie in (0, 1), got {z_over_l}"
        )));
    }
    kernel_d(Sign::Minus, &Separation::axial(2.0 * z_over_l), tol)
}

/// How the divergent mode sum behind 𝔇^(+)(0) is cut off at |k| ≈ K.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum CutoffProfile {
    /// Smooth weight e^{−|k|²/K²}.
    #[default]
    Gaussian,
    /// Hard restriction |k| ≤ K.
    Sharp,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnisotropyResult {
    /// Δ = 𝔇^(+)_xx(0) − 𝔇^(+)_zz(0) in L = 1 units.
    pub delta: f64,
    pub cavity_length: f64,
    pub cutoff: f64,
    /// Size of the (cutoff-dominated) isotropic diagonal, same units as Δ.
    pub isotropic_scale: f64,
    pub profile: CutoffProfile,
}

impl AnisotropyResult {
    pub fn normalized(&self) -> f64 {
        self.delta.abs() / self.isotropic_scale
    }
}

/// Δ with the default Gaussian cutoff profile.
pub fn anisotropy_delta(frame: &CavityFrame, cutoff: f64, tol: &Tolerance) -> Result<AnisotropyResult> {
    anisotropy_delta_with(frame, cutoff, CutoffProfile::Gaussian, tol)
}

/// Δ = (π³/L²) Σ_{n∈ℤ} ∫₀^∞ dx x(2n² − x²)/(x² + n²) · w, where x = k_⊥L/π and
/// w is the cutoff weight at |k|L/π = √(x² + n²) against X = KL/π.
///
/// Replacing the n-sum by an integral makes the bracket vanish identically
/// (the angular average of 3cos²θ − 1 is zero); Δ is what the discreteness of
/// the axial modes leaves over.
pub fn anisotropy_delta_with(
    frame: &CavityFrame,
    cutoff: f64,
    profile: CutoffProfile,
    tol: &Tolerance,
) -> Result<AnisotropyResult> {
    if !(cutoff > 0.0) || !cutoff.is_finite() {
        return Err(Error::domain(format!("cutoff must be positive, got {cutoff}")));
    }
    let l = frame.length();
    let big_x = cutoff * l / PI;
    if big_x < 1.0 {
        return Err(Error::domain(format!(
            "no axial mode below the cutoff: K·L/π = {big_x} < 1"
        )));
    }
    let x2 = big_x * big_x;
    let inner_tol = Tolerance {
        abs_tol: tol.abs_tol.max(tol.rel_tol * x2) * 1e-2,
        rel_tol: tol.rel_tol,
        max_subdivisions: tol.max_subdivisions,
    };
    let mut terms = Vec::new();
    match profile {
        CutoffProfile::Gaussian => {
            // Tail of Σ_n beyond n: bounded by (3n²/2)E1 + X²/2 of e^{−n²/X²}.
            let mut n = 0u64;
            loop {
                let nf = n as f64;
                let weight = (-nf * nf / x2).exp();
                if n > 0 && weight * (x2 + nf * nf) * big_x < inner_tol.abs_tol {
                    break;
                }
                let n2 = nf * nf;
                let i = integrate_semi_infinite(
                    |x| {
                        let xx = x * x;
                        x * (2.0 * n2 - xx) / (xx + n2) * (-(xx + n2) / x2).exp()
                    },
                    1.0 / big_x,
                    &inner_tol,
                )?;
                terms.push(i);
                n += 1;
            }
        }
        CutoffProfile::Sharp => {
            let n_top = big_x.floor() as u64;
            for n in 0..=n_top {
                let n2 = (n * n) as f64;
                let upper = (x2 - n2).max(0.0).sqrt();
                let i = crate::specfun::integrate_interval(
                    |x| {
                        let xx = x * x;
                        x * (2.0 * n2 - xx) / (xx + n2)
                    },
                    0.0,
                    upper,
                    &inner_tol,
                )?;
                terms.push(i);
            }
        }
    }
    let mut bracket = 0.0;
    for (n, t) in terms.iter().enumerate().rev() {
        bracket += if n == 0 { *t } else { 2.0 * t };
    }
    let pref = PI.powi(3) / (l * l);
    Ok(AnisotropyResult {
        delta: pref * bracket,
        cavity_length: l,
        cutoff,
        isotropic_scale: pref * 2.0 * PI.sqrt() / 3.0 * x2 * big_x,
        profile,
    })
}

/// Log-log slopes of the normalized |Δ| between consecutive cavity lengths.
pub fn anisotropy_slopes(results: &[AnisotropyResult]) -> Vec<f64> {
    results
        .windows(2)
        .map(|w| {
            (w[1].normalized() / w[0].normalized()).ln()
                / (w[1].cavity_length / w[0].cavity_length).ln()
        })
        .collect()
}

//! Instantaneous image-dipole Coulomb interaction in the cavity.
//!
//! 𝔈^(+)(ρ) = Σ_{n∈ℤ} (1 − 3ρ̂ₙρ̂ₙ)/ρₙ³ with ρₙ = (ρ_⊥, 0, 2nL + ρ_z), and
//! 𝔈^(−) = 𝔈^(+)·R. Both are returned in units with L = 1.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::geometry::{image_positions, reflection_matrix, CavityFrame, DipoleSpec};
use crate::specfun::lattice::{
    check_lattice_args, inv_cube, tail_inv_cube, truncation_for,
};
use crate::specfun::{apery_zeta3, xi, Tolerance};
use crate::{Error, Mat3, Result, Vec3};

/// Relative position of two dipoles (or of a dipole and an image) in units
/// of L: axial offset u, transverse distance v ≥ 0 and its azimuth φ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Separation {
    pub u: f64,
    pub v: f64,
    pub phi: f64,
}

impl Separation {
    pub fn new(u: f64, v: f64, phi: f64) -> Result<Self> {
        if !(u.is_finite() && v.is_finite() && phi.is_finite()) {
            return Err(Error::domain(format!(
                "separation must be finite, got u={u}, v={v}, phi={phi}"
            )));
        }
        if v < 0.0 {
            return Err(Error::domain(format!("v must be non-negative, got {v}")));
        }
        Ok(Separation { u, v, phi })
    }

    /// Separation for a displacement vector ρ in a cavity of length L.
    pub fn from_vector(rho: Vec3, frame: &CavityFrame) -> Result<Self> {
        let l = frame.length();
        let v = rho.x.hypot(rho.y) / l;
        let phi = if v == 0.0 { 0.0 } else { rho.y.atan2(rho.x) };
        Separation::new(rho.z / l, v, phi)
    }

    pub fn axial(u: f64) -> Self {
        Separation { u, v: 0.0, phi: 0.0 }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        Separation::new(self.u, self.v, self.phi).map(|_| ())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelKind {
    EPlus,
    EMinus,
    DPlus,
    DMinus,
    SelfEnergy,
}

/// A dimensionless 3×3 kernel tagged with what it represents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelMatrix {
    pub m: Mat3,
    pub kind: KernelKind,
}

/// Rotation about ẑ by φ.
pub fn rotation_z(phi: f64) -> Mat3 {
    let (s, c) = phi.sin_cos();
    Mat3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

/// Conjugates a kernel computed with ρ_⊥ along x̂ into the frame where ρ_⊥
/// has azimuth φ.
pub(crate) fn rotate(m: &Mat3, phi: f64) -> Mat3 {
    if phi == 0.0 {
        return *m;
    }
    let r = rotation_z(phi);
    r * m * r.transpose()
}

/// 𝔈^(+) or 𝔈^(−) at the given separation with truncation error below tol.
pub fn kernel_e(sign: Sign, sep: &Separation, tol: &Tolerance) -> Result<KernelMatrix> {
    sep.validate()?;
    let plus = rotate(&e_plus_axis_frame(sep.u, sep.v, tol, true)?, sep.phi);
    Ok(match sign {
        Sign::Plus => KernelMatrix {
            m: plus,
            kind: KernelKind::EPlus,
        },
        Sign::Minus => KernelMatrix {
            m: plus * reflection_matrix(),
            kind: KernelKind::EMinus,
        },
    })
}

/// 𝔈^(+) with ρ_⊥ along x̂. `direct` controls whether the n = 0 lattice
/// term of the reduced separation is included.
pub(crate) fn e_plus_axis_frame(u: f64, v: f64, tol: &Tolerance, direct: bool) -> Result<Mat3> {
    let r = check_lattice_args(u, v)?;
    let scale = inv_cube(r, v) + inv_cube(2.0 - r, v);
    let target = 0.5 * tol.abs_tol.min(tol.rel_tol * scale);
    let n_terms = truncation_for(r, 2.0, target, "image-dipole kernel sum")?;
    Ok(e_plus_partial(r, v, n_terms, direct))
}

fn e_plus_partial(r: f64, v: f64, n_terms: usize, direct: bool) -> Mat3 {
    let v2 = v * v;
    let nf = n_terms as f64;
    let a_pos = 2.0 * nf + 1.0 + r;
    let a_neg = 2.0 * nf + 1.0 - r;
    // Tails first so the small terms are accumulated before the large ones.
    let [mut xx, mut yy, mut xz, mut zz] = [0.0; 4];
    for a in [a_pos, a_neg] {
        let big_r = (a * a + v2).sqrt();
        let inv_r3 = 1.0 / (big_r * big_r * big_r);
        let t = tail_inv_cube(a, v);
        xx += 0.5 * (a * inv_r3 - t);
        yy += 0.5 * t;
        zz -= 0.5 * a * inv_r3;
    }
    xz += 0.5 / 3.0 * ((a_pos * a_pos + v2).powf(-1.5) - (a_neg * a_neg + v2).powf(-1.5));
    let mut add = |s: f64| {
        let rho2 = s * s + v2;
        let inv3 = 1.0 / (rho2 * rho2.sqrt());
        let inv5 = inv3 / rho2;
        xx += inv3 - 3.0 * v2 * inv5;
        yy += inv3;
        xz += s * inv5;
        zz += (v2 - 2.0 * s * s) * inv5;
    };
    for n in (1..=n_terms).rev() {
        let two_n = 2.0 * n as f64;
        add(two_n + r);
        add(-two_n + r);
    }
    if direct {
        add(r);
    }
    let xz = -3.0 * v * xz;
    Mat3::new(xx, 0.0, xz, 0.0, yy, 0.0, xz, 0.0, zz)
}

/// Bracketed matrix of the single-dipole image energy, L = 1:
/// (ζ(3)/4)·diag(1, 1, −2) + ξ(2z, 0)·diag(−1, −1, −2).
pub fn self_energy_matrix(z_over_l: f64, tol: &Tolerance) -> Result<KernelMatrix> {
    let zeta = apery_zeta3() / 4.0;
    let m = Mat3::from_diagonal(&Vec3::new(zeta, zeta, -2.0 * zeta)) + self_energy_xi_part(z_over_l, tol)?;
    Ok(KernelMatrix {
        m,
        kind: KernelKind::SelfEnergy,
    })
}

/// Position-dependent part ξ(2z, 0)·diag(−1, −1, −2) of [`self_energy_matrix`].
pub fn self_energy_xi_part(z_over_l: f64, tol: &Tolerance) -> Result<Mat3> {
    if !(z_over_l > 0.0 && z_over_l < 1.0) {
        return Err(Error::domain(format!(
            "dipole height z/L must lie in (0, 1), got {z_over_l}"
        )));
    }
    let x = xi(2.0 * z_over_l, 0.0, tol)?;
    Ok(Mat3::from_diagonal(&Vec3::new(-x, -x, -2.0 * x)))
}

fn check_configuration(dipoles: &[DipoleSpec], frame: &CavityFrame) -> Result<()> {
    if dipoles.len() < 2 {
        return Err(Error::domain("at least two dipoles are required"));
    }
    for d in dipoles {
        DipoleSpec::new(d.position, d.moment, frame)?;
    }
    for (i, a) in dipoles.iter().enumerate() {
        for b in &dipoles[i + 1..] {
            if a.position == b.position {
                return Err(Error::domain("dipoles must be pairwise non-coincident"));
            }
        }
    }
    Ok(())
}

/// Pair interaction energy (ε₀ = 1)
///
/// (1/8π) Σ_{A≠B} d_A·[𝔈^(+)(r_A − r_B) + 𝔈^(−)((z_A + z_B)ẑ + δr_⊥)]·d_B / L³.
pub fn dipole_dipole_energy(
    dipoles: &[DipoleSpec],
    frame: &CavityFrame,
    tol: &Tolerance,
) -> Result<f64> {
    check_configuration(dipoles, frame)?;
    let l = frame.length();
    let mut total = 0.0;
    for (i, a) in dipoles.iter().enumerate() {
        for (j, b) in dipoles.iter().enumerate() {
            if i == j {
                continue;
            }
            let delta = a.position - b.position;
            let direct = Separation::from_vector(delta, frame)?;
            let mirrored = Separation::from_vector(
                Vec3::new(delta.x, delta.y, a.position.z + b.position.z),
                frame,
            )?;
            let k = kernel_e(Sign::Plus, &direct, tol)?.m + kernel_e(Sign::Minus, &mirrored, tol)?.m;
            total += a.moment.dot(&(k * b.moment));
        }
    }
    Ok(total / (8.0 * PI * l.powi(3)))
}

/// Free-space dipole pair energy (1/4π)[d₁·d₂ − 3(d₁·r̂)(d₂·r̂)]/r³.
pub fn free_dipole_energy(d1: &Vec3, d2: &Vec3, r: &Vec3) -> f64 {
    let dist = r.norm();
    let rhat = r / dist;
    (d1.dot(d2) - 3.0 * d1.dot(&rhat) * d2.dot(&rhat)) / (4.0 * PI * dist.powi(3))
}

/// Independent oracle for [`dipole_dipole_energy`]: every ordered pair
/// (A, B) interacts with the explicit images of B for |n| ≤ n_images, each
/// pair weighted by 1/2.
pub fn brute_force_coulomb(dipoles: &[DipoleSpec], frame: &CavityFrame, n_images: u64) -> Result<f64> {
    check_configuration(dipoles, frame)?;
    let n = i64::try_from(n_images).map_err(|_| Error::domain("n_images too large"))?;
    let mut total = 0.0;
    for (i, a) in dipoles.iter().enumerate() {
        for (j, b) in dipoles.iter().enumerate() {
            if i == j {
                continue;
            }
            let images = image_positions(b.position.z, frame, -n..=n)?;
            // Pair far images first to keep the accumulation balanced.
            let mut pair = 0.0;
            for (z_img, orient) in images.iter().rev() {
                let pos = Vec3::new(b.position.x, b.position.y, *z_img);
                let moment = orient.matrix() * b.moment;
                pair += free_dipole_energy(&a.moment, &moment, &(a.position - pos));
            }
            total += 0.5 * pair;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::xi;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn max_abs(m: &Mat3) -> f64 {
        m.iter().fold(0.0_f64, |a, x| a.max(x.abs()))
    }

    fn brute_lattice(u: f64, v: f64, n: i64) -> Mat3 {
        let mut m = Mat3::zeros();
        for k in (-n..=n).rev() {
            let r = Vec3::new(v, 0.0, 2.0 * k as f64 + u);
            let d = r.norm();
            let h = r / d;
            m += (Mat3::identity() - 3.0 * h * h.transpose()) / d.powi(3);
        }
        m
    }

    #[test]
    fn axial_specialisation() {
        let k = kernel_e(Sign::Plus, &Separation::axial(0.5), &tol()).unwrap().m;
        let x = xi(0.5, 0.0, &tol()).unwrap();
        let want = Mat3::from_diagonal(&Vec3::new(x, x, -2.0 * x));
        assert!(max_abs(&(k - want)) < 1e-12 * x);
    }

    #[test]
    fn matches_explicit_lattice() {
        for (u, v) in [(0.5, 1.0), (1.3, 0.2), (0.05, 2.7)] {
            let k = kernel_e(Sign::Plus, &Separation::new(u, v, 0.0).unwrap(), &tol()).unwrap().m;
            let b = brute_lattice(u, v, 200_000);
            assert!(max_abs(&(k - b)) < 1e-9 * max_abs(&k), "{u} {v}\n{k}\n{b}");
        }
    }

    #[test]
    fn direct_term_alone() {
        let m = e_plus_partial(0.5, 0.0, 0, true) - e_plus_partial(0.5, 0.0, 0, false);
        let want = Mat3::from_diagonal(&Vec3::new(8.0, 8.0, -16.0));
        assert!(max_abs(&(m - want)) < 1e-12);
    }

    #[test]
    fn minus_is_plus_times_reflection() {
        let s = Separation::new(0.7, 0.9, 1.1).unwrap();
        let p = kernel_e(Sign::Plus, &s, &tol()).unwrap().m;
        let m = kernel_e(Sign::Minus, &s, &tol()).unwrap();
        assert_eq!(m.kind, KernelKind::EMinus);
        assert_eq!(m.m, p * reflection_matrix());
    }

    #[test]
    fn rejects_coincident_points() {
        assert!(kernel_e(Sign::Plus, &Separation::axial(0.0), &tol()).is_err());
        assert!(kernel_e(Sign::Plus, &Separation::axial(4.0), &tol()).is_err());
        assert!(Separation::new(0.0, -1.0, 0.0).is_err());
    }

    #[test]
    fn self_energy_examples() {
        let z3 = apery_zeta3();
        let m = self_energy_matrix(0.5, &tol()).unwrap().m;
        let x = 1.75 * z3;
        let want = Mat3::from_diagonal(&Vec3::new(z3 / 4.0 - x, z3 / 4.0 - x, -z3 / 2.0 - 2.0 * x));
        assert!(max_abs(&(m - want)) < 1e-13);
        let a = self_energy_matrix(0.2, &tol()).unwrap().m;
        let b = self_energy_matrix(0.8, &tol()).unwrap().m;
        assert!(max_abs(&(a - b)) < 1e-12 * max_abs(&a));
        assert!(self_energy_matrix(0.0, &tol()).is_err());
        assert!(self_energy_matrix(1.0, &tol()).is_err());
    }

    #[test]
    fn energy_vanishes_for_zero_moments() {
        let f = CavityFrame::new(1.0).unwrap();
        let d = [
            DipoleSpec::new(Vec3::new(0.0, 0.0, 0.3), Vec3::zeros(), &f).unwrap(),
            DipoleSpec::new(Vec3::new(0.2, 0.1, 0.6), Vec3::zeros(), &f).unwrap(),
        ];
        assert_eq!(dipole_dipole_energy(&d, &f, &tol()).unwrap(), 0.0);
        assert_eq!(brute_force_coulomb(&d, &f, 10).unwrap(), 0.0);
    }

    #[test]
    fn brute_force_without_images_is_free_space() {
        let f = CavityFrame::new(1.0).unwrap();
        let a = DipoleSpec::new(Vec3::new(0.0, 0.0, 0.25), Vec3::z(), &f).unwrap();
        let b = DipoleSpec::new(Vec3::new(0.0, 0.0, 0.75), Vec3::z(), &f).unwrap();
        // n = 0 still contains the first mirror image of each dipole.
        let e = brute_force_coulomb(&[a, b], &f, 0).unwrap();
        let direct = free_dipole_energy(&a.moment, &b.moment, &(a.position - b.position));
        let img_b = free_dipole_energy(&a.moment, &b.moment, &Vec3::new(0.0, 0.0, 1.0));
        let img_a = free_dipole_energy(&b.moment, &a.moment, &Vec3::new(0.0, 0.0, 1.0));
        assert!((e - (direct + 0.5 * (img_a + img_b))).abs() < 1e-15);
    }

    #[test]
    fn axial_pair_matches_oracle() {
        let f = CavityFrame::new(1.0).unwrap();
        let a = DipoleSpec::new(Vec3::new(0.0, 0.0, 0.25), Vec3::z(), &f).unwrap();
        let b = DipoleSpec::new(Vec3::new(0.0, 0.0, 0.75), Vec3::z(), &f).unwrap();
        let e = dipole_dipole_energy(&[a, b], &f, &tol()).unwrap();
        let o = brute_force_coulomb(&[a, b], &f, 10_000).unwrap();
        assert!((e - o).abs() < 1e-6 * e.abs(), "{e} {o}");
        let swapped = dipole_dipole_energy(&[b, a], &f, &tol()).unwrap();
        assert!((e - swapped).abs() < 1e-14 * e.abs());
    }
}

//! Cavity geometry: mirrors at z = 0 and z = L, TE/TM mode functions and the
//! image-dipole lattice generated by the two mirrors.

use std::f64::consts::PI;
use std::ops::RangeInclusive;

use nalgebra::Vector3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Mat3, Result, Vec3};

/// Complex 3-vector, the value of a mode function.
pub type CVec3 = Vector3<Complex64>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityFrame {
    length: f64,
}

impl CavityFrame {
    pub fn new(length: f64) -> Result<Self> {
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::domain(format!("cavity length must be positive, got {length}")));
        }
        Ok(CavityFrame { length })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Whether z lies strictly between the mirrors.
    pub fn contains(&self, z: f64) -> bool {
        z > 0.0 && z < self.length
    }
}

/// Cavity wave vector k_n ẑ + k_⊥ with k_n = nπ/L.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveVector {
    n: u32,
    k_perp: [f64; 2],
    k_n: f64,
}

impl WaveVector {
    pub fn new(n: u32, k_perp: [f64; 2], frame: &CavityFrame) -> Result<Self> {
        if !k_perp.iter().all(|c| c.is_finite()) {
            return Err(Error::domain("transverse wave vector must be finite"));
        }
        Ok(WaveVector {
            n,
            k_perp,
            k_n: n as f64 * PI / frame.length(),
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k_perp(&self) -> [f64; 2] {
        self.k_perp
    }

    pub fn k_n(&self) -> f64 {
        self.k_n
    }

    pub fn k_perp_norm(&self) -> f64 {
        self.k_perp[0].hypot(self.k_perp[1])
    }

    pub fn modulus(&self) -> f64 {
        self.k_n.hypot(self.k_perp_norm())
    }

    /// Unit transverse direction; x̂ when k_⊥ = 0, where the polarization
    /// basis is arbitrary.
    pub fn k_perp_hat(&self) -> Vec3 {
        let kp = self.k_perp_norm();
        if kp == 0.0 {
            Vec3::x()
        } else {
            Vec3::new(self.k_perp[0] / kp, self.k_perp[1] / kp, 0.0)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModeKind {
    TE,
    TM,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleSpec {
    pub position: Vec3,
    pub moment: Vec3,
}

impl DipoleSpec {
    pub fn new(position: Vec3, moment: Vec3, frame: &CavityFrame) -> Result<Self> {
        if !frame.contains(position.z) {
            return Err(Error::domain(format!(
                "dipole at z={} is not inside the cavity (0, {})",
                position.z,
                frame.length()
            )));
        }
        if !position.iter().chain(moment.iter()).all(|c| c.is_finite()) {
            return Err(Error::domain("dipole position and moment must be finite"));
        }
        Ok(DipoleSpec { position, moment })
    }
}

/// Bare (unnormalized) mode function ψ^E or ψ^M at r.
///
/// TE: (k̂_⊥ × ẑ) sin(k_n z) e^{ik_⊥·r_⊥}
/// TM: (1/k)(k_⊥ cos(k_n z) ẑ − i k_n sin(k_n z) k̂_⊥) e^{ik_⊥·r_⊥}
pub fn mode_fn(kind: ModeKind, k: &WaveVector, r: Vec3) -> Result<CVec3> {
    if !r.iter().all(|c| c.is_finite()) {
        return Err(Error::domain("position must be finite"));
    }
    let phase = Complex64::from_polar(1.0, k.k_perp[0] * r.x + k.k_perp[1] * r.y);
    let (s, c) = (k.k_n * r.z).sin_cos();
    let hat = k.k_perp_hat();
    match kind {
        ModeKind::TE => {
            if k.n == 0 {
                return Err(Error::domain("there is no TE mode with n = 0"));
            }
            let dir = hat.cross(&Vec3::z());
            Ok(dir.map(|d| phase * (d * s)))
        }
        ModeKind::TM => {
            let kk = k.modulus();
            if kk == 0.0 {
                return Err(Error::domain("TM mode undefined at k = 0"));
            }
            let axial = Complex64::new(k.k_perp_norm() * c / kk, 0.0);
            let lateral = Complex64::new(0.0, -k.k_n * s / kk);
            Ok(CVec3::new(
                phase * lateral * hat.x,
                phase * lateral * hat.y,
                phase * axial,
            ))
        }
    }
}

/// Decomposition of a mode function into the two plane waves
/// c₊ e^{iK₊·r} + c₋ e^{iK₋·r} with K± = k_⊥ ± k_n ẑ.
///
/// Transversality of the mode is the statement K±·c± = 0.
pub fn plane_wave_components(kind: ModeKind, k: &WaveVector) -> Result<[(Vec3, CVec3); 2]> {
    let hat = k.k_perp_hat();
    let kp = Vec3::new(k.k_perp[0], k.k_perp[1], 0.0);
    let k_plus = kp + Vec3::z() * k.k_n;
    let k_minus = kp - Vec3::z() * k.k_n;
    let half = Complex64::new(0.5, 0.0);
    match kind {
        ModeKind::TE => {
            if k.n == 0 {
                return Err(Error::domain("there is no TE mode with n = 0"));
            }
            // sin θ = (e^{iθ} − e^{−iθ}) / 2i
            let dir = hat.cross(&Vec3::z());
            let c = Complex64::new(0.0, -0.5);
            Ok([
                (k_plus, dir.map(|d| c * d)),
                (k_minus, dir.map(|d| -c * d)),
            ])
        }
        ModeKind::TM => {
            let kk = k.modulus();
            if kk == 0.0 {
                return Err(Error::domain("TM mode undefined at k = 0"));
            }
            let kpn = k.k_perp_norm();
            let plus = (Vec3::z() * kpn - hat * k.k_n) / kk;
            let minus = (Vec3::z() * kpn + hat * k.k_n) / kk;
            Ok([
                (k_plus, plus.map(|d| half * d)),
                (k_minus, minus.map(|d| half * d)),
            ])
        }
    }
}

/// ω_k = |k| (c = 1).
pub fn dispersion(k: &WaveVector) -> f64 {
    k.modulus()
}

/// Mirror reflection R = diag(−1, −1, 1) acting on dipole moments.
pub fn reflection_matrix() -> Mat3 {
    Mat3::from_diagonal(&Vec3::new(-1.0, -1.0, 1.0))
}

/// Orientation of an image dipole relative to its source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Identity,
    Reflected,
}

impl Orientation {
    pub fn matrix(self) -> Mat3 {
        match self {
            Orientation::Identity => Mat3::identity(),
            Orientation::Reflected => reflection_matrix(),
        }
    }

    pub fn swapped(self) -> Self {
        match self {
            Orientation::Identity => Orientation::Reflected,
            Orientation::Reflected => Orientation::Identity,
        }
    }
}

/// Image lattice of a dipole at height `z_dip`: for each n the pair
/// (2nL + z, 1) and (2nL − z, R). The (n = 0, 1) entry is the dipole itself.
pub fn image_positions(
    z_dip: f64,
    frame: &CavityFrame,
    n_range: RangeInclusive<i64>,
) -> Result<Vec<(f64, Orientation)>> {
    if !frame.contains(z_dip) {
        return Err(Error::domain(format!(
            "dipole height {z_dip} outside the cavity (0, {})",
            frame.length()
        )));
    }
    let two_l = 2.0 * frame.length();
    Ok(n_range
        .flat_map(|n| {
            let base = two_l * n as f64;
            [
                (base + z_dip, Orientation::Identity),
                (base - z_dip, Orientation::Reflected),
            ]
        })
        .collect())
}

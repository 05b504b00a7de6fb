//! Dicke model H = ω_A S_z + ω_C a†a + (y/√N)(a + a†) S_x in the symmetric
//! (S = N/2) sector with a truncated boson space.
//!
//! Basis state |m⟩⊗|n⟩ with m = −S…S and n = 0…cutoff sits at index
//! (m + S)(cutoff + 1) + n. H commutes with Π = (−1)^{n + m + S}, so the two
//! parity blocks are diagonalized separately.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest Hilbert-space dimension accepted by default.
pub const DEFAULT_MAX_DIMENSION: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DickeParams {
    pub omega_a: f64,
    pub omega_c: f64,
    pub y: f64,
    pub n_atoms: u32,
    pub fock_cutoff: u32,
}

impl DickeParams {
    pub fn new(omega_a: f64, omega_c: f64, y: f64, n_atoms: u32, fock_cutoff: u32) -> Result<Self> {
        let p = DickeParams {
            omega_a,
            omega_c,
            y,
            n_atoms,
            fock_cutoff,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, w) in [("omega_a", self.omega_a), ("omega_c", self.omega_c)] {
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::domain(format!("{name} must be positive, got {w}")));
            }
        }
        if !(self.y >= 0.0) || !self.y.is_finite() {
            return Err(Error::domain(format!("coupling y must be non-negative, got {}", self.y)));
        }
        if self.n_atoms == 0 {
            return Err(Error::domain("n_atoms must be at least 1"));
        }
        if self.fock_cutoff == 0 {
            return Err(Error::domain("fock_cutoff must be at least 1"));
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        (self.n_atoms as usize + 1) * (self.fock_cutoff as usize + 1)
    }

    pub fn with_coupling(&self, y: f64) -> Self {
        DickeParams { y, ..*self }
    }

    pub fn with_cutoff(&self, fock_cutoff: u32) -> Self {
        DickeParams { fock_cutoff, ..*self }
    }

    /// (m, n) for a basis index.
    pub fn quantum_numbers(&self, index: usize) -> (f64, u32) {
        let width = self.fock_cutoff as usize + 1;
        let m = (index / width) as f64 - self.n_atoms as f64 / 2.0;
        (m, (index % width) as u32)
    }

    /// Π eigenvalue (−1)^{n + m + N/2} of a basis index.
    pub fn basis_parity(&self, index: usize) -> f64 {
        let width = self.fock_cutoff as usize + 1;
        if (index / width + index % width).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroundStateResult {
    pub energy: f64,
    pub photon_number: f64,
    pub sz_expect: f64,
    pub parity: f64,
    pub cutoff_converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanFieldResult {
    pub y_c: f64,
    pub order_parameter_sq_per_atom: f64,
    pub energy_per_atom: f64,
    /// Spin polar angle at the minimum (0 is the normal phase).
    pub theta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub y: f64,
    pub energy: f64,
    pub photon_number: f64,
    pub gap: f64,
    pub parity: f64,
}

pub fn build_hamiltonian(p: &DickeParams) -> Result<DMatrix<f64>> {
    build_hamiltonian_limited(p, DEFAULT_MAX_DIMENSION)
}

pub fn build_hamiltonian_limited(p: &DickeParams, max_dimension: usize) -> Result<DMatrix<f64>> {
    p.validate()?;
    let dim = p.dimension();
    if dim > max_dimension {
        return Err(Error::DimensionTooLarge {
            dimension: dim,
            maximum: max_dimension,
        });
    }
    let spin = p.n_atoms as f64 / 2.0;
    let width = p.fock_cutoff as usize + 1;
    let g = p.y / (p.n_atoms as f64).sqrt();
    let mut h = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        let (m, n) = p.quantum_numbers(i);
        h[(i, i)] = p.omega_a * m + p.omega_c * n as f64;
    }
    // ⟨m+1| S_x |m⟩ = √(S(S+1) − m(m+1))/2, ⟨n+1| a + a† |n⟩ = √(n+1).
    for mi in 0..p.n_atoms as usize {
        let m = mi as f64 - spin;
        let sx = 0.5 * (spin * (spin + 1.0) - m * (m + 1.0)).sqrt();
        for n in 0..width {
            let i = mi * width + n;
            let up = (mi + 1) * width;
            if n + 1 < width {
                let v = g * sx * ((n + 1) as f64).sqrt();
                h[(up + n + 1, i)] = v;
                h[(i, up + n + 1)] = v;
            }
            if n > 0 {
                let v = g * sx * (n as f64).sqrt();
                h[(up + n - 1, i)] = v;
                h[(i, up + n - 1)] = v;
            }
        }
    }
    Ok(h)
}

/// Diagonal parity matrix Π in the product basis.
pub fn parity_operator(p: &DickeParams) -> DMatrix<f64> {
    let dim = p.dimension();
    DMatrix::from_fn(dim, dim, |i, j| if i == j { p.basis_parity(i) } else { 0.0 })
}

struct Spectrum {
    ground: GroundStateResult,
    gap: f64,
}

fn solve(p: &DickeParams) -> Result<Spectrum> {
    let h = build_hamiltonian(p)?;
    let dim = p.dimension();
    let mut lowest: Vec<(f64, f64, Vec<usize>, nalgebra::DVector<f64>)> = Vec::new();
    let mut eigenvalues = Vec::new();
    for sign in [1.0, -1.0] {
        let idx: Vec<usize> = (0..dim).filter(|&i| p.basis_parity(i) == sign).collect();
        if idx.is_empty() {
            continue;
        }
        let block = DMatrix::from_fn(idx.len(), idx.len(), |a, b| h[(idx[a], idx[b])]);
        let eig = SymmetricEigen::try_new(block, f64::EPSILON, 0)
            .ok_or_else(|| Error::Eigen(format!("no convergence for dimension {}", idx.len())))?;
        let k = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(k, _)| k)
            .expect("block is non-empty");
        eigenvalues.extend(eig.eigenvalues.iter().copied());
        lowest.push((eig.eigenvalues[k], sign, idx, eig.eigenvectors.column(k).into_owned()));
    }
    // Even block wins ties, which keeps the choice deterministic.
    let best = lowest
        .iter()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("at least one parity block");
    let (energy, parity, idx, vec) = best;
    let mut photon = 0.0;
    let mut sz = 0.0;
    for (a, &i) in idx.iter().enumerate() {
        let w = vec[a] * vec[a];
        let (m, n) = p.quantum_numbers(i);
        photon += w * n as f64;
        sz += w * m;
    }
    let norm: f64 = vec.iter().map(|c| c * c).sum();
    eigenvalues.sort_by(f64::total_cmp);
    let gap = if eigenvalues.len() > 1 {
        eigenvalues[1] - eigenvalues[0]
    } else {
        f64::NAN
    };
    Ok(Spectrum {
        ground: GroundStateResult {
            energy: *energy,
            photon_number: photon / norm,
            sz_expect: sz / norm,
            parity: *parity,
            cutoff_converged: false,
        },
        gap,
    })
}

fn converged(p: &DickeParams, photon: f64) -> Result<bool> {
    let raised = ((p.fock_cutoff as f64) * 1.25).ceil() as u32;
    let check = solve(&p.with_cutoff(raised.max(p.fock_cutoff + 1)))?;
    Ok((check.ground.photon_number - photon).abs() <= 1e-8_f64.max(1e-4 * photon))
}

/// Lowest eigenpair and its observables. `cutoff_converged` compares the
/// photon number with a solve at a 25% larger boson cutoff.
pub fn ground_state(p: &DickeParams) -> Result<GroundStateResult> {
    let s = solve(p)?;
    let mut g = s.ground;
    g.cutoff_converged = converged(p, g.photon_number)?;
    Ok(g)
}

/// Classical energy per atom with spin length N/2 and a = α/√N:
/// ω_C a² − (ω_A/2) cos θ + y a sin θ.
pub fn mean_field_energy(p: &DickeParams, a: f64, theta: f64) -> f64 {
    p.omega_c * a * a - 0.5 * p.omega_a * theta.cos() + p.y * a * theta.sin()
}

/// Mean-field ground state. The a-minimization is done in closed form,
/// a = −y sin θ/(2ω_C); the remaining stationarity condition in θ is solved
/// by bisection.
pub fn mean_field(p: &DickeParams) -> Result<MeanFieldResult> {
    p.validate()?;
    let y_c = (p.omega_a * p.omega_c).sqrt();
    if p.y <= y_c {
        return Ok(MeanFieldResult {
            y_c,
            order_parameter_sq_per_atom: 0.0,
            energy_per_atom: -0.5 * p.omega_a,
            theta: 0.0,
        });
    }
    // dE/dθ = sin θ · h(θ) with h increasing on (0, π), negative at 0.
    let h = |t: f64| 0.5 * p.omega_a - p.y * p.y / (2.0 * p.omega_c) * t.cos();
    let (mut lo, mut hi) = (0.0_f64, std::f64::consts::PI);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if h(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let theta = 0.5 * (lo + hi);
    let a = -p.y * theta.sin() / (2.0 * p.omega_c);
    Ok(MeanFieldResult {
        y_c,
        order_parameter_sq_per_atom: a * a,
        energy_per_atom: mean_field_energy(p, a, theta),
        theta,
    })
}

/// Ground-state observables and first gap over a coupling grid. Rows are
/// computed in parallel and returned in grid order.
pub fn spectrum_scan(p: &DickeParams, y_grid: &[f64]) -> Result<Vec<ScanRow>> {
    if y_grid.is_empty() {
        return Err(Error::domain("coupling grid is empty"));
    }
    p.validate()?;
    y_grid
        .par_iter()
        .map(|&y| {
            let q = p.with_coupling(y);
            q.validate()?;
            let s = solve(&q)?;
            Ok(ScanRow {
                y,
                energy: s.ground.energy,
                photon_number: s.ground.photon_number,
                gap: s.gap,
                parity: s.ground.parity,
            })
        })
        .collect()
}

/// Evenly spaced grid of `steps` points from y_min to y_max inclusive.
pub fn coupling_grid(y_min: f64, y_max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 || !(y_min >= 0.0) || !(y_max >= y_min) || !y_max.is_finite() {
        return Err(Error::domain(format!(
            "invalid coupling grid: [{y_min}, {y_max}] with {steps} steps"
        )));
    }
    if steps == 1 {
        return Ok(vec![y_min]);
    }
    let h = (y_max - y_min) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| if i + 1 == steps { y_max } else { y_min + h * i as f64 })
        .collect())
}

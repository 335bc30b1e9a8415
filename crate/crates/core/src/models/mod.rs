//! Spin Hamiltonians: the Ising chain in an LMG bath, the tilted-field Ising
//! chain coupled at one end to an anisotropic ring, and the closed LMG model.
//!
//! Builders take the full [`TensorLayout`] and return operators on the whole
//! space, acting as the identity on the partition they do not touch.

mod collective;

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
// Inherent float methods shadow these whenever std is in the build graph.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{invalid, mismatch, Result};
use crate::qops::{Axis, ComplexMatrix, TensorLayout};

pub use collective::{
    collective_blocks, ladder_operators, multiplicity, sector_coupling, CollectiveBlock, LadderOps,
};

/// Ising chain (system) coupled to an isotropic LMG bath.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingLMGParams {
    pub n_system: usize,
    pub n_bath: usize,
    /// Per-site transition frequencies `ω_j`, length `n_system`.
    pub omegas: Vec<f64>,
    /// Nearest-neighbour couplings `J_j`, length `n_system - 1`.
    pub couplings: Vec<f64>,
    /// Bath-internal coupling `λ`.
    pub lambda: f64,
    /// System-bath coupling `λ̃`.
    pub lambda_tilde: f64,
    /// Bath spin frequency `ω_c`.
    pub omega_c: f64,
    pub temperature: f64,
}

impl IsingLMGParams {
    /// Uniform `ω` and `J`, with `λ̃ = λ`.
    pub fn uniform(
        n_system: usize,
        n_bath: usize,
        omega: f64,
        j_coupling: f64,
        lambda: f64,
        omega_c: f64,
        temperature: f64,
    ) -> Self {
        Self {
            n_system,
            n_bath,
            omegas: vec![omega; n_system],
            couplings: vec![j_coupling; n_system.saturating_sub(1)],
            lambda,
            lambda_tilde: lambda,
            omega_c,
            temperature,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_system == 0 || self.n_bath == 0 {
            return Err(invalid!("Ising-LMG model needs at least one system and one bath spin"));
        }
        if self.omegas.len() != self.n_system {
            return Err(invalid!("{} frequencies for {} system spins", self.omegas.len(), self.n_system));
        }
        if self.couplings.len() != self.n_system - 1 {
            return Err(invalid!("{} couplings for {} system spins", self.couplings.len(), self.n_system));
        }
        if !(self.temperature > 0.0) {
            return Err(invalid!("temperature must be positive, got {}", self.temperature));
        }
        Ok(())
    }

    pub fn layout(&self) -> TensorLayout {
        TensorLayout::spins(self.n_system, self.n_bath)
    }
}

/// Tilted-field Ising chain coupled at its last site to an anisotropic XY ring.
#[derive(Debug, Clone, PartialEq)]
pub struct TFIMParams {
    pub n_system: usize,
    pub n_bath: usize,
    pub b_field: f64,
    pub j_coupling: f64,
    /// Tilt of the field away from the z axis.
    pub theta: f64,
    /// Edge coupling `g`.
    pub g: f64,
    /// Bath anisotropy `γ`.
    pub gamma: f64,
    /// Bath field `λ_z`.
    pub lambda_z: f64,
    pub temperature: f64,
}

impl TFIMParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_system == 0 {
            return Err(invalid!("TFIM needs at least one system spin"));
        }
        if self.n_bath < 2 {
            return Err(invalid!("the bath ring needs at least two spins, got {}", self.n_bath));
        }
        if !(self.temperature > 0.0) {
            return Err(invalid!("temperature must be positive, got {}", self.temperature));
        }
        Ok(())
    }

    pub fn layout(&self) -> TensorLayout {
        TensorLayout::spins(self.n_system, self.n_bath)
    }
}

/// Closed LMG model.
#[derive(Debug, Clone, PartialEq)]
pub struct LMGClosedParams {
    pub n_spins: usize,
    pub lambda: f64,
    pub gamma: f64,
    pub omega_c: f64,
}

impl LMGClosedParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_spins < 2 {
            return Err(invalid!("closed LMG model needs at least two spins, got {}", self.n_spins));
        }
        Ok(())
    }
}

/// Adds `coeff · Π σ^{axis}_{site}` to `acc`.
///
/// Pauli strings are monomial matrices, so the term is written column by
/// column without forming any Kronecker product.
pub(crate) fn add_pauli_term(
    acc: &mut ComplexMatrix,
    layout: &TensorLayout,
    factors: &[(usize, Axis)],
    coeff: f64,
) -> Result<()> {
    let n_sites = layout.n_sites();
    if layout.dims().iter().any(|&d| d != 2) {
        return Err(invalid!("Pauli terms need an all-qubit layout"));
    }
    let dim = layout.total_dim();
    if acc.rows() != dim || acc.cols() != dim {
        return Err(mismatch!("accumulator {}x{} for dimension {dim}", acc.rows(), acc.cols()));
    }
    let mut flip = 0usize;
    for &(site, axis) in factors {
        if site >= n_sites {
            return Err(crate::Error::SiteOutOfRange { site, sites: n_sites });
        }
        if matches!(axis, Axis::X | Axis::Y) {
            flip |= 1 << (n_sites - 1 - site);
        }
    }
    for col in 0..dim {
        let mut phase = Complex64::new(coeff, 0.0);
        for &(site, axis) in factors {
            let bit = (col >> (n_sites - 1 - site)) & 1;
            phase *= match (axis, bit) {
                (Axis::X, _) => Complex64::new(1.0, 0.0),
                (Axis::Y, 0) => Complex64::new(0.0, 1.0),
                (Axis::Y, _) => Complex64::new(0.0, -1.0),
                (Axis::Z, 0) => Complex64::new(1.0, 0.0),
                (Axis::Z, _) => Complex64::new(-1.0, 0.0),
            };
        }
        acc[(col ^ flip, col)] += phase;
    }
    Ok(())
}

fn require_partitions(layout: &TensorLayout, n_system: usize, n_bath: usize) -> Result<()> {
    if layout.n_system() != n_system || layout.n_bath() != n_bath {
        return Err(mismatch!(
            "layout has {}+{} sites, parameters need {}+{}",
            layout.n_system(),
            layout.n_bath(),
            n_system,
            n_bath
        ));
    }
    Ok(())
}

/// `Σ_j ω_j σ^z_j + Σ_j J_j σ^z_j σ^z_{j+1}` on the system sites.
pub fn build_ising_chain(p: &IsingLMGParams, layout: &TensorLayout) -> Result<ComplexMatrix> {
    p.validate()?;
    require_partitions(layout, p.n_system, p.n_bath)?;
    ising_terms(p, layout)
}

/// The Ising chain on the system qubits alone, without the bath factor.
pub fn ising_chain_system(p: &IsingLMGParams) -> Result<ComplexMatrix> {
    p.validate()?;
    ising_terms(p, &TensorLayout::qubits(p.n_system))
}

fn ising_terms(p: &IsingLMGParams, layout: &TensorLayout) -> Result<ComplexMatrix> {
    let dim = layout.total_dim();
    let mut h = ComplexMatrix::zeros(dim, dim);
    for (j, &w) in p.omegas.iter().enumerate() {
        add_pauli_term(&mut h, layout, &[(j, Axis::Z)], w)?;
    }
    for (j, &c) in p.couplings.iter().enumerate() {
        add_pauli_term(&mut h, layout, &[(j, Axis::Z), (j + 1, Axis::Z)], c)?;
    }
    Ok(h)
}

/// `(λ/N) Σ_{i<j} (σ^x_i σ^x_j + σ^y_i σ^y_j) + ω_c Σ_i σ^z_i` on the bath sites.
pub fn build_lmg_bath(p: &IsingLMGParams, layout: &TensorLayout) -> Result<ComplexMatrix> {
    p.validate()?;
    require_partitions(layout, p.n_system, p.n_bath)?;
    let dim = layout.total_dim();
    let sites: Vec<usize> = layout.bath_sites().collect();
    let pair = p.lambda / p.n_bath as f64;
    let mut h = ComplexMatrix::zeros(dim, dim);
    for (a, &i) in sites.iter().enumerate() {
        for &j in &sites[a + 1..] {
            add_pauli_term(&mut h, layout, &[(i, Axis::X), (j, Axis::X)], pair)?;
            add_pauli_term(&mut h, layout, &[(i, Axis::Y), (j, Axis::Y)], pair)?;
        }
        add_pauli_term(&mut h, layout, &[(i, Axis::Z)], p.omega_c)?;
    }
    Ok(h)
}

/// `(λ̃/√N) Σ_j (σ^x_j J^x_N + σ^y_j J^y_N)` between every system spin and the bath.
pub fn build_lmg_coupling(p: &IsingLMGParams, layout: &TensorLayout) -> Result<ComplexMatrix> {
    p.validate()?;
    require_partitions(layout, p.n_system, p.n_bath)?;
    let dim = layout.total_dim();
    // J^k_N = ½ Σ_l σ^k_l, so each system-bath pair carries λ̃ / (2√N)
    let c = p.lambda_tilde / (2.0 * (p.n_bath as f64).sqrt());
    let mut h = ComplexMatrix::zeros(dim, dim);
    for j in layout.system_sites() {
        for l in layout.bath_sites() {
            add_pauli_term(&mut h, layout, &[(j, Axis::X), (l, Axis::X)], c)?;
            add_pauli_term(&mut h, layout, &[(j, Axis::Y), (l, Axis::Y)], c)?;
        }
    }
    Ok(h)
}

/// `𝓑 Σ_i (sin θ σ^x_i + cos θ σ^z_i) + 𝓙 Σ_i σ^z_i σ^z_{i+1}`, open chain on the system.
pub fn build_tfim(p: &TFIMParams, layout: &TensorLayout) -> Result<ComplexMatrix> {
    p.validate()?;
    require_partitions(layout, p.n_system, p.n_bath)?;
    let dim = layout.total_dim();
    let (s, c) = p.theta.sin_cos();
    let mut h = ComplexMatrix::zeros(dim, dim);
    for i in 0..p.n_system {
        add_pauli_term(&mut h, layout, &[(i, Axis::X)], p.b_field * s)?;
        add_pauli_term(&mut h, layout, &[(i, Axis::Z)], p.b_field * c)?;
    }
    for i in 0..p.n_system.saturating_sub(1) {
        add_pauli_term(&mut h, layout, &[(i, Axis::Z), (i + 1, Axis::Z)], p.j_coupling)?;
    }
    Ok(h)
}

/// Periodic anisotropic XY ring in a field `λ_z`.
///
/// Bonds run `(l, l+1 mod M)` for every `l`, so at `M = 2` the two bonds
/// `(1,2)` and `(2,1)` coincide and the pair coupling is doubled.
pub fn build_aniso_bath(p: &TFIMParams, layout: &TensorLayout) -> Result<ComplexMatrix> {
    p.validate()?;
    require_partitions(layout, p.n_system, p.n_bath)?;
    let dim = layout.total_dim();
    let m = p.n_bath;
    let xx = 0.5 * (1.0 + p.gamma);
    let yy = 0.5 * (1.0 - p.gamma);
    let mut h = ComplexMatrix::zeros(dim, dim);
    for l in 0..m {
        let a = layout.bath_site(l)?;
        let b = layout.bath_site((l + 1) % m)?;
        add_pauli_term(&mut h, layout, &[(a, Axis::X), (b, Axis::X)], xx)?;
        add_pauli_term(&mut h, layout, &[(a, Axis::Y), (b, Axis::Y)], yy)?;
        add_pauli_term(&mut h, layout, &[(a, Axis::Z)], p.lambda_z)?;
    }
    Ok(h)
}

/// `g (σ^x_last Σ_l σ^x_l + σ^y_last Σ_l σ^y_l)`; only the last system spin couples.
pub fn build_edge_coupling(p: &TFIMParams, layout: &TensorLayout) -> Result<ComplexMatrix> {
    p.validate()?;
    require_partitions(layout, p.n_system, p.n_bath)?;
    let dim = layout.total_dim();
    let last = p.n_system - 1;
    let mut h = ComplexMatrix::zeros(dim, dim);
    for l in layout.bath_sites() {
        add_pauli_term(&mut h, layout, &[(last, Axis::X), (l, Axis::X)], p.g)?;
        add_pauli_term(&mut h, layout, &[(last, Axis::Y), (l, Axis::Y)], p.g)?;
    }
    Ok(h)
}

/// `(λ/N) Σ_{i<j} (σ^x_i σ^x_j + γ σ^y_i σ^y_j) + ω_c Σ_i σ^z_i` on `n_spins` qubits.
pub fn build_lmg_closed(p: &LMGClosedParams) -> Result<ComplexMatrix> {
    p.validate()?;
    let layout = TensorLayout::qubits(p.n_spins);
    let dim = layout.total_dim();
    let pair = p.lambda / p.n_spins as f64;
    let mut h = ComplexMatrix::zeros(dim, dim);
    for i in 0..p.n_spins {
        for j in i + 1..p.n_spins {
            add_pauli_term(&mut h, &layout, &[(i, Axis::X), (j, Axis::X)], pair)?;
            add_pauli_term(&mut h, &layout, &[(i, Axis::Y), (j, Axis::Y)], pair * p.gamma)?;
        }
        add_pauli_term(&mut h, &layout, &[(i, Axis::Z)], p.omega_c)?;
    }
    Ok(h)
}

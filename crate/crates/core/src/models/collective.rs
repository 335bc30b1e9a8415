//! Total-spin (Dicke) sectors of a permutation-symmetric spin bath.
//!
//! The LMG bath and its coupling depend on the bath spins only through the
//! collective operators `J^k_N`, so the `2^N` bath space splits into sectors
//! `C^{m_j} ⊗ C^{2j+1}` on which the dynamics acts as `I_{m_j} ⊗ (block)`.

use alloc::vec::Vec;

use num_complex::Complex64;
// Inherent float methods shadow these whenever std is in the build graph.
#[allow(unused_imports)]
use num_traits::Float;

use super::IsingLMGParams;
use crate::error::{invalid, Result};
use crate::qops::{pauli_at, Axis, ComplexMatrix, TensorLayout};

/// Collective spin operators on the `(2j+1)`-dimensional ladder basis.
///
/// Basis index `k` is `m = j - k`, so index 0 is the fully polarized
/// `σ_z = +1` state, matching the computational-basis ordering.
#[derive(Debug, Clone)]
pub struct LadderOps {
    pub jx: ComplexMatrix,
    pub jy: ComplexMatrix,
    pub jz: ComplexMatrix,
}

/// `J_x, J_y, J_z` for total spin `j = twice_j / 2`.
pub fn ladder_operators(twice_j: usize) -> LadderOps {
    let dim = twice_j + 1;
    let j = twice_j as f64 / 2.0;
    let m_of = |k: usize| j - k as f64;
    let mut jplus = ComplexMatrix::zeros(dim, dim);
    // J+ |j, m⟩ = √(j(j+1) − m(m+1)) |j, m+1⟩, and m+1 sits at index k-1
    for k in 1..dim {
        let m = m_of(k);
        jplus[(k - 1, k)] = Complex64::new((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
    }
    let jminus = jplus.adjoint();
    let jx = (&jplus + &jminus).scale_real(0.5);
    let jy = (&jplus - &jminus).scale(Complex64::new(0.0, -0.5));
    let jz = ComplexMatrix::from_real_diagonal(&(0..dim).map(m_of).collect::<Vec<_>>());
    LadderOps { jx, jy, jz }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of copies of the spin-`j` irrep in `N` spin-½ particles:
/// `C(N, N/2 − j) − C(N, N/2 − j − 1)`.
pub fn multiplicity(n_spins: usize, twice_j: usize) -> u64 {
    if twice_j > n_spins || (n_spins - twice_j) % 2 != 0 {
        return 0;
    }
    let k = ((n_spins - twice_j) / 2) as u64;
    let n = n_spins as u64;
    binomial(n, k) - if k == 0 { 0 } else { binomial(n, k - 1) }
}

/// One total-spin sector of the bath.
#[derive(Debug, Clone)]
pub struct CollectiveBlock {
    /// `2j`, so half-integer spins stay exact.
    pub twice_j: usize,
    pub multiplicity: u64,
    /// LMG bath Hamiltonian restricted to one copy of the sector.
    pub block_hamiltonian: ComplexMatrix,
    pub ops: LadderOps,
}

impl CollectiveBlock {
    pub fn j(&self) -> f64 {
        self.twice_j as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.twice_j + 1
    }
}

/// Sectors `j = N/2, N/2 − 1, …` of the LMG bath with their block Hamiltonians
/// `(λ/N)(2(J_x² + J_y²) − N) + 2ω_c J_z`.
pub fn collective_blocks(n_bath: usize, p: &IsingLMGParams) -> Result<Vec<CollectiveBlock>> {
    if n_bath == 0 {
        return Err(invalid!("collective blocks need at least one bath spin"));
    }
    let n = n_bath as f64;
    let mut blocks = Vec::new();
    let mut twice_j = n_bath;
    loop {
        let ops = ladder_operators(twice_j);
        let dim = twice_j + 1;
        let jx2 = &ops.jx * &ops.jx;
        let jy2 = &ops.jy * &ops.jy;
        let pair = &(&jx2 + &jy2).scale_real(2.0) - &ComplexMatrix::identity(dim).scale_real(n);
        let h = &pair.scale_real(p.lambda / n) + &ops.jz.scale_real(2.0 * p.omega_c);
        blocks.push(CollectiveBlock {
            twice_j,
            multiplicity: multiplicity(n_bath, twice_j),
            block_hamiltonian: h,
            ops,
        });
        if twice_j < 2 {
            break;
        }
        twice_j -= 2;
    }
    Ok(blocks)
}

/// System-bath coupling `(λ̃/√N) Σ_j (σ^x_j ⊗ J^x + σ^y_j ⊗ J^y)` restricted to
/// one copy of `block`, on `C^{2^{N_S}} ⊗ C^{2j+1}`.
pub fn sector_coupling(p: &IsingLMGParams, block: &CollectiveBlock) -> Result<ComplexMatrix> {
    p.validate()?;
    let sys = TensorLayout::qubits(p.n_system);
    let scale = p.lambda_tilde / (p.n_bath as f64).sqrt();
    let d = sys.total_dim() * block.dim();
    let mut h = ComplexMatrix::zeros(d, d);
    for j in 0..p.n_system {
        h += &pauli_at(&sys, j, Axis::X)?.kron(&block.ops.jx);
        h += &pauli_at(&sys, j, Axis::Y)?.kron(&block.ops.jy);
    }
    Ok(h.scale_real(scale))
}

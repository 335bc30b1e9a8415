//! Spectral evaluation of the forward and backward reduced maps.
//!
//! Write the bath state as `ρ_E = Σ_k p_k |e_k⟩⟨e_k|`. Then
//! `ξ(X) = Σ_{k,e} K_{ke} X K_{ke}†` with `K_{ke} = √p_k (I ⊗ ⟨e|) U (I ⊗ |e_k⟩)`.
//! With `U = V D(t) V†` the stacked Kraus operators are the columns of
//! `V · D(t) · [V† (I ⊗ E)]`, where `E` holds the weighted `√p_k |e_k⟩`; the
//! bracket is fixed, so each time point costs one matrix product per sector.
//!
//! A sector is a subspace `C^{d_S} ⊗ C^{d_E}` invariant under both joint
//! Hamiltonians on which the bath state is block diagonal. A generic bath is
//! one sector; the LMG bath splits into total-spin sectors, each standing for
//! `multiplicity` identical copies.

use alloc::vec::Vec;

use super::superop::kraus_superoperator;
use super::{Direction, QuantumChannelRep, Sense};
use crate::error::{invalid, mismatch, Result};
use crate::models::{
    build_aniso_bath, build_edge_coupling, build_ising_chain, build_lmg_bath, build_lmg_coupling, build_tfim,
    collective_blocks, ising_chain_system, sector_coupling, IsingLMGParams, TFIMParams,
};
use crate::qops::{eig_hermitian, gemm, partial_trace, ComplexMatrix, Spectrum, TensorLayout};

/// Initial state of the bath.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BathState {
    /// Gibbs state of the bath Hamiltonian.
    Thermal { temperature: f64 },
    MaximallyMixed,
}

/// Hamiltonian pieces of one sector; `h_bath` is one copy of the bath block.
#[derive(Debug, Clone)]
pub struct SectorHamiltonians {
    pub h_system: ComplexMatrix,
    pub h_bath: ComplexMatrix,
    pub h_coupling: ComplexMatrix,
    pub multiplicity: u64,
}

#[derive(Debug, Clone)]
struct Sector {
    d_bath: usize,
    /// Number of bath eigenvectors carrying weight.
    rank: usize,
    forward: Spectrum,
    backward: Spectrum,
    embed_forward: ComplexMatrix,
    embed_backward: ComplexMatrix,
}

struct PendingSector {
    h_forward: ComplexMatrix,
    h_backward: ComplexMatrix,
    bath: Spectrum,
    multiplicity: u64,
}

/// Forward and backward reduced maps of a system-bath model at any time.
#[derive(Debug, Clone)]
pub struct OpenDynamics {
    system: TensorLayout,
    sectors: Vec<Sector>,
}

impl OpenDynamics {
    /// Builds the engine from explicit sectors acting on `system`.
    pub fn from_sectors(system: TensorLayout, sectors: &[SectorHamiltonians], bath: BathState) -> Result<Self> {
        let d_s = system.total_dim();
        let mut pending = Vec::with_capacity(sectors.len());
        for s in sectors {
            let d_e = s.h_bath.rows();
            let n = d_s * d_e;
            if s.h_system.rows() != d_s || !s.h_system.is_square() {
                return Err(mismatch!("sector system Hamiltonian is {}x{}, expected {d_s}", s.h_system.rows(), s.h_system.cols()));
            }
            if !s.h_bath.is_square() || s.h_coupling.rows() != n || !s.h_coupling.is_square() {
                return Err(mismatch!("sector coupling must be {n}x{n}"));
            }
            let sys = s.h_system.kron(&ComplexMatrix::identity(d_e));
            let rest = &ComplexMatrix::identity(d_s).kron(&s.h_bath) + &s.h_coupling;
            pending.push(PendingSector {
                h_forward: &rest + &sys,
                h_backward: &rest - &sys,
                bath: eig_hermitian(&s.h_bath)?,
                multiplicity: s.multiplicity,
            });
        }
        Self::assemble(system, pending, bath)
    }

    /// One dense sector from full-space operators on `layout`.
    pub fn dense(
        layout: &TensorLayout,
        h_system: &ComplexMatrix,
        h_bath: &ComplexMatrix,
        h_coupling: &ComplexMatrix,
        bath: BathState,
    ) -> Result<Self> {
        let dim = layout.total_dim();
        for h in [h_system, h_bath, h_coupling] {
            if h.rows() != dim || h.cols() != dim {
                return Err(mismatch!("Hamiltonian is {}x{}, layout needs {dim}", h.rows(), h.cols()));
            }
        }
        let bath_sites: Vec<usize> = layout.bath_sites().collect();
        let bath_only = if bath_sites.is_empty() {
            ComplexMatrix::zeros(1, 1)
        } else {
            partial_trace(h_bath, layout, &bath_sites)?.scale_real(1.0 / layout.system_dim() as f64)
        };
        let rest = h_bath + h_coupling;
        let pending = PendingSector {
            h_forward: &rest + h_system,
            h_backward: &rest - h_system,
            bath: eig_hermitian(&bath_only)?,
            multiplicity: 1,
        };
        Self::assemble(layout.system_layout(), alloc::vec![pending], bath)
    }

    /// Unitary dynamics of an isolated system: `ξ_f(X) = U X U†`, `ξ_b(X) = U† X U`.
    pub fn closed(layout: &TensorLayout, h_system: &ComplexMatrix) -> Result<Self> {
        if layout.n_bath() != 0 {
            return Err(invalid!("closed dynamics takes a layout without bath sites"));
        }
        let d = layout.total_dim();
        let sector = SectorHamiltonians {
            h_system: h_system.clone(),
            h_bath: ComplexMatrix::zeros(1, 1),
            h_coupling: ComplexMatrix::zeros(d, d),
            multiplicity: 1,
        };
        Self::from_sectors(layout.clone(), &[sector], BathState::MaximallyMixed)
    }

    /// Ising chain in an LMG bath, either on the full `2^{N_S + N}` space or
    /// split into total-spin sectors of the bath.
    pub fn ising_lmg(p: &IsingLMGParams, bath: BathState, collective: bool) -> Result<Self> {
        p.validate()?;
        if collective {
            let h_system = ising_chain_system(p)?;
            let mut sectors = Vec::new();
            for block in collective_blocks(p.n_bath, p)? {
                sectors.push(SectorHamiltonians {
                    h_system: h_system.clone(),
                    h_coupling: sector_coupling(p, &block)?,
                    h_bath: block.block_hamiltonian,
                    multiplicity: block.multiplicity,
                });
            }
            Self::from_sectors(TensorLayout::qubits(p.n_system), &sectors, bath)
        } else {
            let layout = p.layout();
            Self::dense(
                &layout,
                &build_ising_chain(p, &layout)?,
                &build_lmg_bath(p, &layout)?,
                &build_lmg_coupling(p, &layout)?,
                bath,
            )
        }
    }

    /// Tilted-field Ising chain coupled at its end to the anisotropic ring.
    pub fn tfim(p: &TFIMParams, bath: BathState) -> Result<Self> {
        let layout = p.layout();
        Self::dense(
            &layout,
            &build_tfim(p, &layout)?,
            &build_aniso_bath(p, &layout)?,
            &build_edge_coupling(p, &layout)?,
            bath,
        )
    }

    fn assemble(system: TensorLayout, pending: Vec<PendingSector>, bath: BathState) -> Result<Self> {
        let d_s = system.total_dim();
        let weights = bath_weights(&pending, bath)?;
        let mut sectors = Vec::with_capacity(pending.len());
        for (p, w) in pending.into_iter().zip(weights) {
            let d_e = p.bath.dim();
            let kept: Vec<usize> = (0..d_e).filter(|&k| w[k] > 0.0).collect();
            let rank = kept.len();
            // I_S ⊗ E with columns (s, k) ↦ |s⟩ ⊗ √p_k |e_k⟩
            let mut lift = ComplexMatrix::zeros(d_s * d_e, d_s * rank);
            for (col, &k) in kept.iter().enumerate() {
                let amp = w[k].sqrt();
                for e in 0..d_e {
                    let v = p.bath.eigenvectors[(e, k)] * amp;
                    for s in 0..d_s {
                        lift[(s * d_e + e, s * rank + col)] = v;
                    }
                }
            }
            let forward = eig_hermitian(&p.h_forward)?;
            let backward = eig_hermitian(&p.h_backward)?;
            let embed_forward = forward.eigenvectors.adjoint().matmul(&lift)?;
            let embed_backward = backward.eigenvectors.adjoint().matmul(&lift)?;
            sectors.push(Sector {
                d_bath: d_e,
                rank,
                forward,
                backward,
                embed_forward,
                embed_backward,
            });
        }
        Ok(Self { system, sectors })
    }

    pub fn system_layout(&self) -> &TensorLayout {
        &self.system
    }

    pub fn system_dim(&self) -> usize {
        self.system.total_dim()
    }

    /// Largest sector dimension, the size of the matrices diagonalized.
    pub fn max_sector_dim(&self) -> usize {
        self.sectors.iter().map(|s| s.forward.dim()).max().unwrap_or(0)
    }

    /// Kraus decomposition of `ξ_f(t)` or `ξ_b(t)`.
    pub fn kraus(&self, t: f64, sense: Sense) -> KrausMap {
        let d_s = self.system_dim();
        let mut ops = Vec::new();
        for sector in &self.sectors {
            let (spec, embed) = match sense {
                Sense::Forward => (&sector.forward, &sector.embed_forward),
                Sense::Backward => (&sector.backward, &sector.embed_backward),
            };
            let phases = spec.phases(t);
            let mut scaled = embed.clone();
            let cols = scaled.cols();
            for (r, ph) in phases.iter().enumerate() {
                for z in &mut scaled.as_mut_slice()[r * cols..(r + 1) * cols] {
                    *z *= ph;
                }
            }
            let mut stacked = ComplexMatrix::zeros(spec.dim(), cols);
            gemm(&spec.eigenvectors, &scaled, &mut stacked);
            let (d_e, rank) = (sector.d_bath, sector.rank);
            for k in 0..rank {
                for e in 0..d_e {
                    ops.push(ComplexMatrix::from_fn(d_s, d_s, |a, s| {
                        stacked[(a * d_e + e, s * rank + k)]
                    }));
                }
            }
        }
        KrausMap {
            system: self.system.clone(),
            sense,
            ops,
        }
    }
}

/// Bath weights `p_k` per sector, multiplicities folded in, summing to one.
fn bath_weights(pending: &[PendingSector], bath: BathState) -> Result<Vec<Vec<f64>>> {
    match bath {
        BathState::MaximallyMixed => {
            let total: f64 = pending.iter().map(|p| p.multiplicity as f64 * p.bath.dim() as f64).sum();
            Ok(pending
                .iter()
                .map(|p| alloc::vec![p.multiplicity as f64 / total; p.bath.dim()])
                .collect())
        }
        BathState::Thermal { temperature } => {
            if !(temperature > 0.0) {
                return Err(invalid!("temperature must be positive, got {temperature}"));
            }
            let floor = pending
                .iter()
                .flat_map(|p| p.bath.eigenvalues.iter().copied())
                .fold(f64::INFINITY, f64::min);
            let raw: Vec<Vec<f64>> = pending
                .iter()
                .map(|p| {
                    p.bath
                        .eigenvalues
                        .iter()
                        .map(|&e| p.multiplicity as f64 * (-(e - floor) / temperature).exp())
                        .collect()
                })
                .collect();
            let z: f64 = raw.iter().flatten().sum();
            Ok(raw.into_iter().map(|w| w.into_iter().map(|x| x / z).collect()).collect())
        }
    }
}

/// `X ↦ Σ_k K_k X K_k†` on the system.
#[derive(Debug, Clone)]
pub struct KrausMap {
    system: TensorLayout,
    sense: Sense,
    ops: Vec<ComplexMatrix>,
}

impl KrausMap {
    pub fn dim(&self) -> usize {
        self.system.total_dim()
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    fn check(&self, x: &ComplexMatrix) -> Result<()> {
        let d = self.dim();
        if x.rows() != d || x.cols() != d {
            return Err(mismatch!("operator is {}x{}, map acts on {d}x{d}", x.rows(), x.cols()));
        }
        Ok(())
    }

    /// Schrödinger picture, `Σ K X K†`; `X` need not be Hermitian.
    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check(x)?;
        let d = self.dim();
        let mut acc = ComplexMatrix::zeros(d, d);
        let mut tmp = ComplexMatrix::zeros(d, d);
        let mut out = ComplexMatrix::zeros(d, d);
        for k in &self.ops {
            gemm(k, x, &mut tmp);
            gemm(&tmp, &k.adjoint(), &mut out);
            acc += &out;
        }
        Ok(acc)
    }

    /// Heisenberg picture, `Σ K† A K`.
    pub fn apply_adjoint(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check(a)?;
        let d = self.dim();
        let mut acc = ComplexMatrix::zeros(d, d);
        let mut tmp = ComplexMatrix::zeros(d, d);
        let mut out = ComplexMatrix::zeros(d, d);
        for k in &self.ops {
            gemm(&k.adjoint(), a, &mut tmp);
            gemm(&tmp, k, &mut out);
            acc += &out;
        }
        Ok(acc)
    }

    /// Superoperator of the map in the requested direction.
    pub fn superoperator(&self, direction: Direction) -> QuantumChannelRep {
        let d = self.dim();
        let matrix = match direction {
            Direction::Schrodinger => kraus_superoperator(&self.ops, d),
            Direction::Adjoint => {
                let adj: Vec<ComplexMatrix> = self.ops.iter().map(ComplexMatrix::adjoint).collect();
                kraus_superoperator(&adj, d)
            }
        };
        QuantumChannelRep {
            matrix,
            direction,
            sense: self.sense,
            layout: self.system.clone(),
        }
    }
}

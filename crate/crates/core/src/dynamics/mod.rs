//! Reduced dynamics of a system coupled to a finite bath.
//!
//! The forward map `ξ_f(t)` comes from `H_f = H_S + H_E + H_SE` and the
//! backward map `ξ_b(t)` from `H_b = −H_S + H_E + H_SE`; in both cases the
//! bath starts in a fixed state and is traced out at the end. Nothing here is
//! a master-equation approximation: the maps are the exact reduced dynamics
//! of the finite dilation.
//!
//! [`JointPropagators`] and the free functions work on dense full-space
//! matrices and serve as the reference path. [`OpenDynamics`] diagonalizes
//! the joint Hamiltonians once per sector and produces Kraus decompositions
//! of the maps at any time, which is what the time-series code uses.

mod engine;
mod superop;

use alloc::vec::Vec;

use crate::error::{mismatch, Error, Result};
use crate::qops::{partial_trace, ComplexMatrix, Spectrum, TensorLayout, HERMITIAN_TOL};

pub use engine::{BathState, KrausMap, OpenDynamics, SectorHamiltonians};
pub use superop::{
    channel_superoperator, choi_matrix, choi_min_eigenvalue, tensor_square_apply, QuantumChannelRep,
};

/// Tolerance on the trace of an input state.
pub const STATE_TRACE_TOL: f64 = 1e-8;

/// Which joint Hamiltonian drives the evolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    /// `H_S + H_E + H_SE`.
    Forward,
    /// `−H_S + H_E + H_SE`.
    Backward,
}

/// Whether a map acts on states or on observables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Schrodinger,
    Adjoint,
}

/// `e^{−iH_f t}` and `e^{−iH_b t}` on the full system ⊗ bath space.
#[derive(Debug, Clone)]
pub struct JointPropagators {
    pub u_forward: ComplexMatrix,
    pub u_backward: ComplexMatrix,
    pub layout: TensorLayout,
    pub time: f64,
}

impl JointPropagators {
    pub fn get(&self, sense: Sense) -> &ComplexMatrix {
        match sense {
            Sense::Forward => &self.u_forward,
            Sense::Backward => &self.u_backward,
        }
    }
}

/// Spectra of `H_f` and `H_b` for operators already embedded in `layout`.
pub fn joint_spectra(
    h_system: &ComplexMatrix,
    h_bath: &ComplexMatrix,
    h_coupling: &ComplexMatrix,
    layout: &TensorLayout,
) -> Result<(Spectrum, Spectrum)> {
    let dim = layout.total_dim();
    for (name, h) in [("system", h_system), ("bath", h_bath), ("coupling", h_coupling)] {
        if h.rows() != dim || h.cols() != dim {
            return Err(mismatch!("{name} Hamiltonian is {}x{}, layout needs {dim}", h.rows(), h.cols()));
        }
        let deviation = h.hermiticity_error();
        if deviation > HERMITIAN_TOL * h.max_abs().max(1.0) {
            return Err(Error::NotHermitian { deviation });
        }
    }
    let rest = h_bath + h_coupling;
    let forward = crate::qops::eig_hermitian(&(&rest + h_system))?;
    let backward = crate::qops::eig_hermitian(&(&rest - h_system))?;
    Ok((forward, backward))
}

/// Forward and backward joint propagators at time `t`.
pub fn joint_propagators(
    h_system: &ComplexMatrix,
    h_bath: &ComplexMatrix,
    h_coupling: &ComplexMatrix,
    layout: &TensorLayout,
    t: f64,
) -> Result<JointPropagators> {
    let (forward, backward) = joint_spectra(h_system, h_bath, h_coupling, layout)?;
    Ok(JointPropagators {
        u_forward: forward.propagator(t),
        u_backward: backward.propagator(t),
        layout: layout.clone(),
        time: t,
    })
}

fn check_state(rho: &ComplexMatrix, dim: usize, what: &str) -> Result<()> {
    if rho.rows() != dim || rho.cols() != dim {
        return Err(mismatch!("{what} is {}x{}, expected {dim}x{dim}", rho.rows(), rho.cols()));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > STATE_TRACE_TOL || tr.im.abs() > STATE_TRACE_TOL {
        return Err(Error::NotAState(alloc::format!("{what} has trace {tr}")));
    }
    if rho.hermiticity_error() > STATE_TRACE_TOL {
        return Err(Error::NotAState(alloc::format!("{what} is not Hermitian")));
    }
    Ok(())
}

fn system_sites(layout: &TensorLayout) -> Vec<usize> {
    layout.system_sites().collect()
}

/// `Tr_E[U (ρ_S ⊗ ρ_E) U†]` for density matrices `ρ_S` and `ρ_E`.
pub fn apply_channel(
    jp: &JointPropagators,
    rho_system: &ComplexMatrix,
    rho_bath: &ComplexMatrix,
    sense: Sense,
) -> Result<ComplexMatrix> {
    check_state(rho_system, jp.layout.system_dim(), "system state")?;
    apply_map(jp, rho_system, rho_bath, sense)
}

/// The same map as [`apply_channel`], extended linearly to any system operator
/// `X` (for example the non-Hermitian product `B ρ_S`).
pub fn apply_map(
    jp: &JointPropagators,
    x: &ComplexMatrix,
    rho_bath: &ComplexMatrix,
    sense: Sense,
) -> Result<ComplexMatrix> {
    let layout = &jp.layout;
    let d_s = layout.system_dim();
    if x.rows() != d_s || x.cols() != d_s {
        return Err(mismatch!("system operator is {}x{}, expected {d_s}x{d_s}", x.rows(), x.cols()));
    }
    check_state(rho_bath, layout.bath_dim(), "bath state")?;
    let u = jp.get(sense);
    let joint = &(u * &x.kron(rho_bath)) * &u.adjoint();
    partial_trace(&joint, layout, &system_sites(layout))
}

/// `Tr_E[U† (A ⊗ I) U (I ⊗ ρ_E)]`, the Heisenberg-picture dual of [`apply_map`].
pub fn apply_adjoint_channel(
    jp: &JointPropagators,
    op_system: &ComplexMatrix,
    rho_bath: &ComplexMatrix,
    sense: Sense,
) -> Result<ComplexMatrix> {
    let layout = &jp.layout;
    let d_s = layout.system_dim();
    if op_system.rows() != d_s || op_system.cols() != d_s {
        return Err(mismatch!(
            "system operator is {}x{}, expected {d_s}x{d_s}",
            op_system.rows(),
            op_system.cols()
        ));
    }
    check_state(rho_bath, layout.bath_dim(), "bath state")?;
    let u = jp.get(sense);
    let heis = &(&u.adjoint() * &layout.embed_system(op_system)?) * u;
    let weighted = &heis * &layout.embed_bath(rho_bath)?;
    partial_trace(&weighted, layout, &system_sites(layout))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_ising_chain, build_lmg_bath, build_lmg_coupling, IsingLMGParams};
    use crate::qops::random::{random_density_matrix, random_hermitian, random_matrix};
    use crate::qops::{propagator, sigma, thermal_state, Axis};
    use crate::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    struct Model {
        layout: TensorLayout,
        h_s: ComplexMatrix,
        h_e: ComplexMatrix,
        h_se: ComplexMatrix,
        rho_e: ComplexMatrix,
    }

    fn lmg(n_s: usize, n: usize, lambda: f64) -> Model {
        let p = IsingLMGParams::uniform(n_s, n, 2.0, 0.5, lambda, 4.0, 10.0);
        let layout = p.layout();
        let h_e = build_lmg_bath(&p, &layout).unwrap();
        let bath_only = partial_trace(&h_e, &layout, &layout.bath_sites().collect::<Vec<_>>())
            .unwrap()
            .scale_real(1.0 / layout.system_dim() as f64);
        Model {
            h_s: build_ising_chain(&p, &layout).unwrap(),
            h_se: build_lmg_coupling(&p, &layout).unwrap(),
            rho_e: thermal_state(&bath_only, 10.0).unwrap(),
            h_e,
            layout,
        }
    }

    fn jp(m: &Model, t: f64) -> JointPropagators {
        joint_propagators(&m.h_s, &m.h_e, &m.h_se, &m.layout, t).unwrap()
    }

    /// e^{-iHt} by a plain Taylor series with scaling and squaring.
    fn taylor_expm(h: &ComplexMatrix, t: f64) -> ComplexMatrix {
        let n = h.rows();
        let a = h.scale(Complex64::new(0.0, -t / 64.0));
        let mut sum = ComplexMatrix::identity(n);
        let mut term = ComplexMatrix::identity(n);
        for k in 1..30 {
            term = (&term * &a).scale_real(1.0 / k as f64);
            sum += &term;
        }
        for _ in 0..6 {
            sum = &sum * &sum;
        }
        sum
    }

    #[test]
    fn time_zero_is_identity() {
        let m = lmg(1, 2, 1.0);
        let p = jp(&m, 0.0);
        let id = ComplexMatrix::identity(8);
        assert!(p.u_forward.max_abs_diff(&id) < 1e-12);
        assert!(p.u_backward.max_abs_diff(&id) < 1e-12);
        let rho = random_density_matrix(2, &mut ChaCha8Rng::seed_from_u64(1));
        let out = apply_channel(&p, &rho, &m.rho_e, Sense::Forward).unwrap();
        assert!(out.max_abs_diff(&rho) < 1e-12);
    }

    #[test]
    fn decoupled_factorization() {
        let m = lmg(2, 1, 1.0);
        let zero = ComplexMatrix::zeros(8, 8);
        let t = 0.9;
        let p = joint_propagators(&m.h_s, &zero, &zero, &m.layout, t).unwrap();
        let u_s = propagator(&m.h_s, t).unwrap();
        assert!(p.u_forward.max_abs_diff(&u_s) < 1e-12);
        assert!(p.u_backward.max_abs_diff(&u_s.adjoint()) < 1e-12);
        assert!(p.u_forward.is_unitary(1e-10) && p.u_backward.is_unitary(1e-10));
    }

    #[test]
    fn no_system_hamiltonian_means_equal_senses() {
        let m = lmg(1, 2, 1.0);
        let zero = ComplexMatrix::zeros(8, 8);
        let p = joint_propagators(&zero, &m.h_e, &m.h_se, &m.layout, 1.7).unwrap();
        assert!(p.u_forward.max_abs_diff(&p.u_backward) < 1e-12);
    }

    #[test]
    fn matches_brute_force_two_qubit_evolution() {
        let m = lmg(1, 1, 1.0);
        let t = 0.3;
        let p = jp(&m, t);
        let rho_s = ComplexMatrix::unit(2, 0, 0);
        let got = apply_channel(&p, &rho_s, &m.rho_e, Sense::Forward).unwrap();

        let h = &(&m.h_s + &m.h_e) + &m.h_se;
        let u = taylor_expm(&h, t);
        let full = &(&u * &rho_s.kron(&m.rho_e)) * &u.adjoint();
        let mut want = ComplexMatrix::zeros(2, 2);
        for a in 0..2 {
            for b in 0..2 {
                want[(a, b)] = (0..2).map(|e| full[(2 * a + e, 2 * b + e)]).sum();
            }
        }
        assert!(got.max_abs_diff(&want) < 1e-12, "{got:?} vs {want:?}");
        assert!((got.trace().re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn decoupled_channel_is_unitary_conjugation() {
        let m = lmg(2, 1, 0.0);
        let t = 1.1;
        let p = jp(&m, t);
        let h_sys = partial_trace(&m.h_s, &m.layout, &[0, 1]).unwrap().scale_real(0.5);
        let u = propagator(&h_sys, t).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let rho = random_density_matrix(4, &mut rng);
        let a = random_hermitian(4, &mut rng);
        let out = apply_channel(&p, &rho, &m.rho_e, Sense::Forward).unwrap();
        assert!(out.max_abs_diff(&(&(&u * &rho) * &u.adjoint())) < 1e-10);
        let heis = apply_adjoint_channel(&p, &a, &m.rho_e, Sense::Forward).unwrap();
        assert!(heis.max_abs_diff(&(&(&u.adjoint() * &a) * &u)) < 1e-10);
    }

    #[test]
    fn adjoint_is_unital() {
        let m = lmg(1, 2, 1.0);
        for t in [0.4, 2.5] {
            for sense in [Sense::Forward, Sense::Backward] {
                let out =
                    apply_adjoint_channel(&jp(&m, t), &ComplexMatrix::identity(2), &m.rho_e, sense).unwrap();
                assert!(out.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-10);
            }
        }
    }

    #[test]
    fn duality_on_random_operators() {
        let m = lmg(1, 2, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for k in 0..10 {
            let p = jp(&m, 0.37 * k as f64);
            let a = random_matrix(2, &mut rng);
            let rho = random_density_matrix(2, &mut rng);
            for sense in [Sense::Forward, Sense::Backward] {
                let lhs = a.trace_product(&apply_channel(&p, &rho, &m.rho_e, sense).unwrap()).unwrap();
                let rhs = apply_adjoint_channel(&p, &a, &m.rho_e, sense)
                    .unwrap()
                    .trace_product(&rho)
                    .unwrap();
                assert!((lhs - rhs).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn rejects_non_states_and_bad_shapes() {
        let m = lmg(1, 1, 1.0);
        let p = jp(&m, 0.5);
        let twice = ComplexMatrix::identity(2);
        assert!(matches!(
            apply_channel(&p, &twice, &m.rho_e, Sense::Forward),
            Err(Error::NotAState(_))
        ));
        assert!(matches!(
            apply_channel(&p, &ComplexMatrix::unit(4, 0, 0), &m.rho_e, Sense::Forward),
            Err(Error::DimensionMismatch(_))
        ));
        // the linear extension accepts non-Hermitian inputs
        let x = &sigma(Axis::Z) * &ComplexMatrix::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5]).unwrap();
        assert!(apply_map(&p, &x, &m.rho_e, Sense::Forward).is_ok());
        let bad = ComplexMatrix::zeros(8, 8);
        assert!(joint_propagators(&bad, &m.h_e, &m.h_se, &m.layout, 1.0).is_err());
    }
}

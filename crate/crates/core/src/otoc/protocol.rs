//! Explicit interferometric protocols with a control qubit.
//!
//! These simulate the measurement scheme step by step on the enlarged
//! register and read out `Tr(σ^x_c ρ_f)`. They are slower than the closed
//! formulas and exist to check them.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::{OtocRequest, SeriesResult};
use crate::dynamics::joint_spectra;
use crate::error::{mismatch, Result};
use crate::qops::{eig_hermitian, partial_trace, sigma, Axis, ComplexMatrix, SiteKind, TensorLayout};

fn projector(k: usize) -> ComplexMatrix {
    ComplexMatrix::unit(2, k, k)
}

fn plus_state() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5]).expect("2x2")
}

/// `I ⊗ |0⟩⟨0| + B ⊗ |1⟩⟨1|` and `B ⊗ |0⟩⟨0| + I ⊗ |1⟩⟨1|`.
fn controlled_pair(b: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let id = ComplexMatrix::identity(b.rows());
    let first = &id.kron(&projector(0)) + &b.kron(&projector(1));
    let last = &b.kron(&projector(0)) + &id.kron(&projector(1));
    (first, last)
}

fn conj(u: &ComplexMatrix, rho: &ComplexMatrix) -> ComplexMatrix {
    &(u * rho) * &u.adjoint()
}

fn readout(rho: &ComplexMatrix, d_rest: usize) -> f64 {
    let sx = ComplexMatrix::identity(d_rest).kron(&sigma(Axis::X));
    sx.trace_product(rho).map(|z| z.re).unwrap_or(f64::NAN)
}

/// Runs `U_5 … U_1` on `ρ_S ⊗ |+⟩⟨+|` (control last) and returns `Tr(σ^x_c ρ_f)`.
pub fn fotoc_protocol_closed(h_system: &ComplexMatrix, req: &OtocRequest) -> Result<SeriesResult> {
    let d = h_system.rows();
    req.validate(d)?;
    let spec = eig_hermitian(h_system)?;
    let (u1, u5) = controlled_pair(&req.op_b);
    let ic = ComplexMatrix::identity(2);
    let u3 = req.op_a.kron(&ic);
    let rho0 = req.initial_state.kron(&plus_state());
    let mut values = Vec::with_capacity(req.times.len());
    for &t in &req.times {
        let u = spec.propagator(t);
        let u2 = u.kron(&ic);
        let u4 = u.adjoint().kron(&ic);
        let mut rho = conj(&u1, &rho0);
        for step in [&u2, &u3, &u4, &u5] {
            rho = conj(step, &rho);
        }
        values.push(readout(&rho, d));
    }
    Ok(SeriesResult::new("F", req.times.clone(), values))
}

/// Embeds `x` on system ⊗ control into system ⊗ bath ⊗ control as `x ⊗ ρ_E`
/// with the bath factor in the middle.
fn attach_bath(x: &ComplexMatrix, rho_bath: &ComplexMatrix, d_s: usize) -> ComplexMatrix {
    let d_e = rho_bath.rows();
    let n = d_s * d_e * 2;
    let mut out = ComplexMatrix::zeros(n, n);
    for s in 0..d_s {
        for c in 0..2 {
            for s2 in 0..d_s {
                for c2 in 0..2 {
                    let v = x[(s * 2 + c, s2 * 2 + c2)];
                    if v == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for e in 0..d_e {
                        for e2 in 0..d_e {
                            out[((s * d_e + e) * 2 + c, (s2 * d_e + e2) * 2 + c2)] = v * rho_bath[(e, e2)];
                        }
                    }
                }
            }
        }
    }
    out
}

/// Runs the open scheme `𝓢_5 … 𝓢_1` on the full system ⊗ bath ⊗ control
/// register. The bath is traced out after each joint evolution and the next
/// one starts from a fresh `ρ_E`, so each of `ξ_f`, `ξ_b` acts with the same
/// initial bath state.
pub fn fotoc_protocol_open(
    layout: &TensorLayout,
    h_system: &ComplexMatrix,
    h_bath: &ComplexMatrix,
    h_coupling: &ComplexMatrix,
    rho_bath: &ComplexMatrix,
    req: &OtocRequest,
) -> Result<SeriesResult> {
    let d_s = layout.system_dim();
    let d_e = layout.bath_dim();
    req.validate(d_s)?;
    if rho_bath.rows() != d_e || rho_bath.cols() != d_e {
        return Err(mismatch!("bath state is {}x{}, bath dimension is {d_e}", rho_bath.rows(), rho_bath.cols()));
    }
    let (forward, backward) = joint_spectra(h_system, h_bath, h_coupling, layout)?;
    let register = TensorLayout::new(
        alloc::vec![d_s, d_e, 2],
        alloc::vec![SiteKind::System, SiteKind::Bath, SiteKind::Bath],
    )?;
    let (u1, u5) = controlled_pair(&req.op_b);
    let ic = ComplexMatrix::identity(2);
    let u3 = req.op_a.kron(&ic);
    let rho0 = req.initial_state.kron(&plus_state());
    let after_first = conj(&u1, &rho0);
    let mut values = Vec::with_capacity(req.times.len());
    for &t in &req.times {
        let uf = forward.propagator(t).kron(&ic);
        let ub = backward.propagator(t).kron(&ic);
        let joint = conj(&uf, &attach_bath(&after_first, rho_bath, d_s));
        let reduced = partial_trace(&joint, &register, &[0, 2])?;
        let kicked = conj(&u3, &reduced);
        let joint = conj(&ub, &attach_bath(&kicked, rho_bath, d_s));
        let reduced = partial_trace(&joint, &register, &[0, 2])?;
        values.push(readout(&conj(&u5, &reduced), d_s));
    }
    Ok(SeriesResult::new("F", req.times.clone(), values))
}

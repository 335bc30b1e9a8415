//! Dense operator algebra: matrices, tensor layouts, spectra, partial traces,
//! vectorization and random sampling.

mod layout;
mod matrix;
mod pauli;
pub mod random;
mod spectral;
mod trace;

pub use layout::{collective_j, pauli_at, pauli_product, SiteKind, TensorLayout};
pub use matrix::{kron, kron_all, ComplexMatrix};
pub use pauli::{sigma, Axis};
pub use random::haar_unitary;
pub use spectral::{eig_hermitian, propagator, thermal_state, Spectrum, HERMITIAN_TOL};
pub use trace::{devectorize, partial_trace, vectorize};

pub(crate) use matrix::gemm;

/// Product state `|ψ⟩^{⊗n}` with `|ψ⟩ = a|0⟩ + b|1⟩` as a density matrix.
pub fn product_state(n: usize, a: num_complex::Complex64, b: num_complex::Complex64) -> ComplexMatrix {
    let single = ComplexMatrix::outer(&[a, b], &[a, b]);
    let mut rho = ComplexMatrix::identity(1);
    for _ in 0..n {
        rho = rho.kron(&single);
    }
    rho
}

/// Maximally mixed state `I/d`.
pub fn maximally_mixed(dim: usize) -> ComplexMatrix {
    ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64)
}

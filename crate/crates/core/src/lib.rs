//! Exact-diagonalization kernels for out-of-time-ordered correlators.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only pure numerical
//! code: dense complex operator algebra, the spin Hamiltonians, reduced
//! dynamics of a finite system-bath dilation, the interferometric F-OTOC
//! family and the Haar-averaged bipartite OTOC. File formats, threading and
//! the command-line runner live in the `otoc-sim` companion crate.
//!
//! Conventions used throughout:
//!
//! * `ħ = k_B = 1`.
//! * Tensor factors are ordered by [`qops::TensorLayout`]: system sites
//!   first, then bath sites. `|0⟩` is the `σ_z = +1` state.
//! * Operators are vectorized row-major, `|i⟩⟨j| ↦ e_{i·d + j}`.
#![no_std]
#![warn(rust_2018_idioms, unused_qualifications)]

extern crate alloc;

pub mod bipartite;
pub mod dynamics;
mod error;
pub mod models;
pub mod otoc;
pub mod qops;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use qops::ComplexMatrix;

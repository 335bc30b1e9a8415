use alloc::vec::Vec;

use num_complex::Complex64;

use super::{ComplexMatrix, TensorLayout};
use crate::error::{invalid, mismatch, Error, Result};

/// Reduced operator on the sites in `keep`, tracing out the rest.
///
/// The kept factors stay in layout order regardless of the order of `keep`.
pub fn partial_trace(m: &ComplexMatrix, layout: &TensorLayout, keep: &[usize]) -> Result<ComplexMatrix> {
    let n = layout.total_dim();
    if m.rows() != n || m.cols() != n {
        return Err(mismatch!("{}x{} operator on a layout of dimension {n}", m.rows(), m.cols()));
    }
    if keep.is_empty() {
        return Err(invalid!("partial trace must keep at least one site"));
    }
    let sites = layout.n_sites();
    let mut kept = alloc::vec![false; sites];
    for &s in keep {
        if s >= sites {
            return Err(Error::SiteOutOfRange { site: s, sites });
        }
        kept[s] = true;
    }
    let dims = layout.dims();

    // Split every full index into (kept multi-index, traced multi-index).
    let keep_dim: usize = (0..sites).filter(|&s| kept[s]).map(|s| dims[s]).product();
    let trace_dim = n / keep_dim;
    let mut full_of = alloc::vec![0usize; n];
    for full in 0..n {
        let (mut k, mut t, mut rem) = (0usize, 0usize, full);
        let mut digits = alloc::vec![0usize; sites];
        for s in (0..sites).rev() {
            digits[s] = rem % dims[s];
            rem /= dims[s];
        }
        for s in 0..sites {
            if kept[s] {
                k = k * dims[s] + digits[s];
            } else {
                t = t * dims[s] + digits[s];
            }
        }
        full_of[k * trace_dim + t] = full;
    }

    let mut out = ComplexMatrix::zeros(keep_dim, keep_dim);
    for a in 0..keep_dim {
        for b in 0..keep_dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for t in 0..trace_dim {
                acc += m[(full_of[a * trace_dim + t], full_of[b * trace_dim + t])];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}

/// Row-major vectorization: `|i⟩⟨j| ↦ e_{i·cols + j}`.
pub fn vectorize(m: &ComplexMatrix) -> Vec<Complex64> {
    m.as_slice().to_vec()
}

/// Inverse of [`vectorize`].
pub fn devectorize(v: &[Complex64], rows: usize, cols: usize) -> Result<ComplexMatrix> {
    ComplexMatrix::from_vec(rows, cols, v.to_vec())
}

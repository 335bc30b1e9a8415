//! Random matrices: Haar unitaries and test ensembles.

use alloc::vec::Vec;

use num_complex::Complex64;
// Inherent float methods shadow these whenever std is in the build graph.
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::StandardNormal;

use super::ComplexMatrix;
use crate::error::{invalid, Result};

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * core::f64::consts::FRAC_1_SQRT_2
}

/// Ginibre matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng))
}

/// Householder QR of a square matrix, returning `(Q, R)`.
pub(crate) fn qr(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = a.rows();
    let mut r = a.clone();
    let mut q = ComplexMatrix::identity(n);
    for k in 0..n {
        let norm = (k..n).map(|i| r[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = r[(k, k)];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { Complex64::new(1.0, 0.0) };
        let alpha = -phase * norm;
        let mut v: Vec<Complex64> = (k..n).map(|i| r[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let scale = 2.0 / vnorm2;
        // R <- (I - 2vv†/|v|²) R on rows k..n
        for c in k..n {
            let dot: Complex64 = v.iter().enumerate().map(|(i, vi)| vi.conj() * r[(k + i, c)]).sum();
            let f = dot * scale;
            for (i, vi) in v.iter().enumerate() {
                r[(k + i, c)] -= vi * f;
            }
        }
        // Q <- Q (I - 2vv†/|v|²) on columns k..n
        for row in 0..n {
            let dot: Complex64 = v.iter().enumerate().map(|(i, vi)| q[(row, k + i)] * vi).sum();
            let f = dot * scale;
            for (i, vi) in v.iter().enumerate() {
                q[(row, k + i)] -= f * vi.conj();
            }
        }
    }
    (q, r)
}

/// Haar-distributed unitary of dimension `dim`.
///
/// QR of a Ginibre matrix, with the columns of `Q` rephased so that `R` has
/// a positive diagonal; this makes the factorization unique and the law of
/// `Q` exactly Haar.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<ComplexMatrix> {
    if dim == 0 {
        return Err(invalid!("Haar unitary of dimension 0"));
    }
    let (mut q, r) = qr(&ginibre(dim, rng));
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for row in 0..dim {
            q[(row, k)] *= phase;
        }
    }
    Ok(q)
}

/// Random Hermitian matrix `(G + G†)/2` from a Ginibre draw.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(dim, rng);
    (&g + &g.adjoint()).scale_real(0.5)
}

/// Random complex matrix with Gaussian entries.
pub fn random_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    ginibre(dim, rng)
}

/// Random full-rank density matrix `G G† / Tr(G G†)`.
pub fn random_density_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(dim, rng);
    let p = &g * &g.adjoint();
    let tr = p.trace().re;
    p.scale_real(1.0 / tr)
}

/// Random normalized state vector.
pub fn random_state_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

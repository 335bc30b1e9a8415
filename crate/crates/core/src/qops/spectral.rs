use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
// Inherent float methods shadow these whenever std is in the build graph.
#[allow(unused_imports)]
use num_traits::Float;

use super::ComplexMatrix;
use crate::error::{invalid, mismatch, Error, Result};

/// Entrywise Hermiticity tolerance, relative to the largest entry when that exceeds one.
pub const HERMITIAN_TOL: f64 = 1e-12;

const MAX_SWEEPS: usize = 100_000;

/// Eigendecomposition `H = V diag(λ) V†` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V diag(f(λ)) V†`.
    pub fn map(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let weights: Vec<Complex64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        self.weighted(&weights)
    }

    /// `V diag(weights) V†`.
    pub fn weighted(&self, weights: &[Complex64]) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for r in 0..n {
            for (c, w) in weights.iter().enumerate() {
                scaled[(r, c)] *= w;
            }
        }
        &scaled * &v.adjoint()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(|l| Complex64::new(l, 0.0))
    }

    /// `e^{-iHt}`.
    pub fn propagator(&self, t: f64) -> ComplexMatrix {
        self.map(|l| Complex64::from_polar(1.0, -l * t))
    }

    /// The phases `e^{-iλt}` in eigenvalue order.
    pub fn phases(&self, t: f64) -> Vec<Complex64> {
        self.eigenvalues
            .iter()
            .map(|&l| Complex64::from_polar(1.0, -l * t))
            .collect()
    }

    /// Unnormalized Boltzmann factors `e^{-(λ - λ_min)/T}`.
    pub fn boltzmann_factors(&self, temperature: f64) -> Result<Vec<f64>> {
        if !(temperature > 0.0) {
            return Err(invalid!("temperature must be positive, got {temperature}"));
        }
        let floor = self.eigenvalues.first().copied().unwrap_or(0.0);
        Ok(self
            .eigenvalues
            .iter()
            .map(|&l| (-(l - floor) / temperature).exp())
            .collect())
    }
}

/// Eigendecomposition of a Hermitian matrix with ascending eigenvalues.
pub fn eig_hermitian(h: &ComplexMatrix) -> Result<Spectrum> {
    if !h.is_square() {
        return Err(mismatch!("eigendecomposition of a {}x{} matrix", h.rows(), h.cols()));
    }
    let deviation = h.hermiticity_error();
    if deviation > HERMITIAN_TOL * h.max_abs().max(1.0) {
        return Err(Error::NotHermitian { deviation });
    }
    let n = h.rows();
    if n == 0 {
        return Ok(Spectrum {
            eigenvalues: Vec::new(),
            eigenvectors: ComplexMatrix::zeros(0, 0),
        });
    }
    let sym = DMatrix::<Complex64>::from_fn(n, n, |r, c| 0.5 * (h[(r, c)] + h[(c, r)].conj()));
    let eig = sym
        .try_symmetric_eigen(f64::EPSILON, MAX_SWEEPS)
        .ok_or(Error::NoConvergence)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// `e^{-iHt}` by eigendecomposition.
pub fn propagator(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    Ok(eig_hermitian(h)?.propagator(t))
}

/// Gibbs state `e^{-H/T} / Tr e^{-H/T}`.
pub fn thermal_state(h: &ComplexMatrix, temperature: f64) -> Result<ComplexMatrix> {
    if !(temperature > 0.0) {
        return Err(invalid!("temperature must be positive, got {temperature}"));
    }
    let spec = eig_hermitian(h)?;
    thermal_from_spectrum(&spec, temperature)
}

fn thermal_from_spectrum(spec: &Spectrum, temperature: f64) -> Result<ComplexMatrix> {
    let w = spec.boltzmann_factors(temperature)?;
    let z: f64 = w.iter().sum();
    let weights: Vec<Complex64> = w.iter().map(|&wk| Complex64::new(wk / z, 0.0)).collect();
    Ok(spec.weighted(&weights))
}

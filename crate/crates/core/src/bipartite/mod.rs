//! Haar-averaged bipartite OTOC.
//!
//! For `H = H_A ⊗ H_B` of dimension `d = d_A d_B` and Haar-random unitaries
//! `A` on `H_A`, `B` on `H_B`,
//! `G = (1/2d) E_{A,B} ‖[𝓔†(A ⊗ I), I ⊗ B]‖₂²`. The average reduces to swap
//! operators on two copies `H_A ⊗ H_B ⊗ H_A' ⊗ H_B'`, in that factor order.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynamics::{tensor_square_apply, Direction, QuantumChannelRep};
use crate::error::{invalid, mismatch, Error, Result};
use crate::qops::{haar_unitary, ComplexMatrix};

/// Deviation of a unitary input tolerated by [`bipartite_otoc_closed`].
pub const UNITARY_TOL: f64 = 1e-8;

/// Imaginary part and range excess tolerated before a value is clamped.
pub const VALUE_TOL: f64 = 1e-9;

/// Monte Carlo samples are summed in blocks of this size, in index order.
const REDUCTION_BLOCK: usize = 256;

/// Dimensions of the two parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bipartition {
    pub d_a: usize,
    pub d_b: usize,
}

impl Bipartition {
    pub fn new(d_a: usize, d_b: usize) -> Result<Self> {
        if d_a < 2 || d_b < 2 {
            return Err(invalid!("both parts need dimension at least 2, got {d_a} and {d_b}"));
        }
        Ok(Self { d_a, d_b })
    }

    pub fn dim(&self) -> usize {
        self.d_a * self.d_b
    }
}

/// Swap operators on `H_A ⊗ H_B ⊗ H_A' ⊗ H_B'`.
#[derive(Debug, Clone)]
pub struct SwapOps {
    /// `Σ |a b a' b'⟩⟨a' b' a b|`.
    pub s_full: ComplexMatrix,
    /// `Σ |a b a' b'⟩⟨a' b a b'|`.
    pub s_aa: ComplexMatrix,
    /// `Σ |a b a' b'⟩⟨a b' a' b|`.
    pub s_bb: ComplexMatrix,
}

pub fn build_swaps(p: Bipartition) -> SwapOps {
    let (da, db) = (p.d_a, p.d_b);
    let n = p.dim() * p.dim();
    let idx = |a: usize, b: usize, a2: usize, b2: usize| ((a * db + b) * da + a2) * db + b2;
    let one = Complex64::new(1.0, 0.0);
    let mut s_full = ComplexMatrix::zeros(n, n);
    let mut s_aa = ComplexMatrix::zeros(n, n);
    let mut s_bb = ComplexMatrix::zeros(n, n);
    for a in 0..da {
        for b in 0..db {
            for a2 in 0..da {
                for b2 in 0..db {
                    let row = idx(a, b, a2, b2);
                    s_full[(row, idx(a2, b2, a, b))] = one;
                    s_aa[(row, idx(a2, b, a, b2))] = one;
                    s_bb[(row, idx(a, b2, a2, b))] = one;
                }
            }
        }
    }
    SwapOps { s_full, s_aa, s_bb }
}

/// A bipartite OTOC value: `value` is `raw.re` clamped to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GValue {
    pub value: f64,
    pub raw: Complex64,
}

impl GValue {
    fn checked(raw: Complex64) -> Result<Self> {
        if raw.im.abs() > VALUE_TOL {
            return Err(invalid!("bipartite OTOC has imaginary part {:e}", raw.im));
        }
        Ok(Self {
            value: raw.re.clamp(0.0, 1.0),
            raw,
        })
    }

    /// Distance of the raw value from `[0, 1]`.
    pub fn excess(&self) -> f64 {
        (-self.raw.re).max(self.raw.re - 1.0).max(0.0)
    }
}

/// `G = 1 − Tr(S_AA' U^{⊗2} S_AA' U†^{⊗2}) / d²`.
///
/// With `U^{ac}` the `d_B × d_B` block `U[(a,·),(c,·)]`, the trace equals
/// `Σ |⟨U^{ac}, U^{a'c'}⟩|²` over Hilbert-Schmidt overlaps, which avoids
/// forming anything on the doubled space.
pub fn bipartite_otoc_closed(u: &ComplexMatrix, p: Bipartition) -> Result<GValue> {
    let d = p.dim();
    if u.rows() != d || u.cols() != d {
        return Err(mismatch!("unitary is {}x{}, bipartition has dimension {d}", u.rows(), u.cols()));
    }
    let deviation = u.unitarity_error();
    if deviation > UNITARY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    let (da, db) = (p.d_a, p.d_b);
    // rows of `blocks` are the flattened U^{ac}
    let blocks = ComplexMatrix::from_fn(da * da, db * db, |ac, bd| {
        let (a, c) = (ac / da, ac % da);
        let (b, e) = (bd / db, bd % db);
        u[(a * db + b, c * db + e)]
    });
    let gram = &blocks.conj() * &blocks.transpose();
    let tr: f64 = gram.as_slice().iter().map(|z| z.norm_sqr()).sum();
    GValue::checked(Complex64::new(1.0 - tr / (d * d) as f64, 0.0))
}

/// Reference form of [`bipartite_otoc_closed`] that builds `U^{⊗2}` explicitly.
pub fn bipartite_otoc_closed_explicit(u: &ComplexMatrix, p: Bipartition) -> Result<GValue> {
    let d = p.dim();
    if u.rows() != d || u.cols() != d {
        return Err(mismatch!("unitary is {}x{}, bipartition has dimension {d}", u.rows(), u.cols()));
    }
    let swaps = build_swaps(p);
    let uu = u.kron(u);
    let m = &(&(&swaps.s_aa * &uu) * &swaps.s_aa) * &uu.adjoint();
    GValue::checked(Complex64::new(1.0, 0.0) - m.trace() / (d * d) as f64)
}

/// `G = Tr{(S d_B − S_AA') (𝓔†⊗𝓔†)(S_AA')} / d²` for an adjoint channel.
pub fn bipartite_otoc_open(rep: &QuantumChannelRep, p: Bipartition) -> Result<GValue> {
    let d = p.dim();
    if rep.dim() != d {
        return Err(mismatch!("channel acts on dimension {}, bipartition has {d}", rep.dim()));
    }
    if rep.direction != Direction::Adjoint {
        return Err(invalid!("the open bipartite OTOC takes the adjoint (Heisenberg) map"));
    }
    let swaps = build_swaps(p);
    let evolved = tensor_square_apply(rep, &swaps.s_aa)?;
    let weight = &swaps.s_full.scale_real(p.d_b as f64) - &swaps.s_aa;
    GValue::checked(weight.trace_product(&evolved)? / (d * d) as f64)
}

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
}

/// Minimum number of Monte Carlo samples.
pub const MIN_SAMPLES: usize = 100;

/// The generator for sample `index`: stream `index` of the ChaCha8 generator
/// seeded with `seed`, so samples can be drawn in any order.
pub fn sample_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// One sample `‖[𝓔†(A ⊗ I), I ⊗ B]‖₂² / 2d` for independent Haar `A`, `B`.
pub fn haar_mc_sample<R: Rng + ?Sized>(
    adjoint: &impl Fn(&ComplexMatrix) -> Result<ComplexMatrix>,
    p: Bipartition,
    rng: &mut R,
) -> Result<f64> {
    let a = haar_unitary(p.d_a, rng)?;
    let b = haar_unitary(p.d_b, rng)?;
    let x = adjoint(&a.kron(&ComplexMatrix::identity(p.d_b)))?;
    let y = ComplexMatrix::identity(p.d_a).kron(&b);
    let c = x.commutator(&y)?;
    let norm = c.frobenius_norm();
    Ok(norm * norm / (2 * p.dim()) as f64)
}

/// Mean and standard error of per-sample values, summed in fixed blocks in
/// index order so the result does not depend on how the values were produced.
pub fn reduce_samples(values: &[f64]) -> McEstimate {
    let n = values.len();
    let blocked_sum = |f: &dyn Fn(f64) -> f64| -> f64 {
        values
            .chunks(REDUCTION_BLOCK)
            .map(|c| c.iter().map(|&v| f(v)).sum::<f64>())
            .sum()
    };
    let mean = blocked_sum(&|v| v) / n as f64;
    let var = if n > 1 {
        blocked_sum(&|v| (v - mean) * (v - mean)) / (n - 1) as f64
    } else {
        0.0
    };
    McEstimate {
        mean,
        stderr: (var / n as f64).sqrt(),
        samples: n,
    }
}

/// Sequential Monte Carlo estimate of the bipartite OTOC of `adjoint`.
pub fn bipartite_otoc_haar_mc(
    adjoint: impl Fn(&ComplexMatrix) -> Result<ComplexMatrix>,
    p: Bipartition,
    samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    if samples < MIN_SAMPLES {
        return Err(invalid!("at least {MIN_SAMPLES} samples are needed, got {samples}"));
    }
    let values = (0..samples)
        .map(|i| haar_mc_sample(&adjoint, p, &mut sample_rng(seed, i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(reduce_samples(&values))
}

/// `max |mean(U ⊗ U†) − S/d|` over `samples` Haar draws; `S` swaps the two factors.
pub fn haar_identity_check<R: Rng + ?Sized>(dim: usize, samples: usize, rng: &mut R) -> Result<f64> {
    if samples < MIN_SAMPLES {
        return Err(invalid!("at least {MIN_SAMPLES} samples are needed, got {samples}"));
    }
    let n = dim * dim;
    let mut acc = ComplexMatrix::zeros(n, n);
    for _ in 0..samples {
        let u = haar_unitary(dim, rng)?;
        acc += &u.kron(&u.adjoint());
    }
    let mean = acc.scale_real(1.0 / samples as f64);
    let swap = ComplexMatrix::from_fn(n, n, |r, c| {
        let (i, j) = (r / dim, r % dim);
        if c == j * dim + i {
            Complex64::new(1.0 / dim as f64, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    Ok(mean.max_abs_diff(&swap))
}

#[cfg(test)]
mod tests;

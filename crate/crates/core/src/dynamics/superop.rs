//! Superoperator matrices of linear maps on `d × d` operators.

use num_complex::Complex64;

use super::{Direction, Sense};
use crate::error::{mismatch, Result};
use crate::qops::{devectorize, vectorize, ComplexMatrix, TensorLayout};

/// A linear map on system operators as a `d² × d²` matrix acting on
/// row-major vectorizations.
#[derive(Debug, Clone)]
pub struct QuantumChannelRep {
    pub matrix: ComplexMatrix,
    pub direction: Direction,
    pub sense: Sense,
    pub layout: TensorLayout,
}

impl QuantumChannelRep {
    /// Operator dimension `d`.
    pub fn dim(&self) -> usize {
        self.layout.total_dim()
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let d = self.dim();
        if x.rows() != d || x.cols() != d {
            return Err(mismatch!("operator is {}x{}, channel acts on {d}x{d}", x.rows(), x.cols()));
        }
        devectorize(&self.matrix.mul_vec(&vectorize(x))?, d, d)
    }

    /// `max |Tr Λ(|i⟩⟨j|) − δ_ij|`; zero for trace-preserving maps.
    pub fn trace_preservation_error(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let col = i * d + j;
                let tr: Complex64 = (0..d).map(|a| self.matrix[(a * d + a, col)]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((tr - want).norm());
            }
        }
        worst
    }

    /// `max |Λ(I) − I|`; zero for unital maps.
    pub fn unitality_error(&self) -> f64 {
        let d = self.dim();
        match self.apply(&ComplexMatrix::identity(d)) {
            Ok(img) => img.max_abs_diff(&ComplexMatrix::identity(d)),
            Err(_) => f64::INFINITY,
        }
    }

    /// The map `Λ₁ ∘ Λ₂` with `self = Λ₁`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        Ok(Self {
            matrix: self.matrix.matmul(&inner.matrix)?,
            ..self.clone()
        })
    }
}

/// Superoperator of `applier`, whose column `k = i·d + j` is
/// `vectorize(applier(|i⟩⟨j|))`.
pub fn channel_superoperator(
    applier: impl Fn(&ComplexMatrix) -> Result<ComplexMatrix>,
    layout: &TensorLayout,
    direction: Direction,
    sense: Sense,
) -> Result<QuantumChannelRep> {
    let d = layout.total_dim();
    let mut matrix = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            let image = applier(&ComplexMatrix::unit(d, i, j))?;
            if image.rows() != d || image.cols() != d {
                return Err(mismatch!("map output is {}x{}, expected {d}x{d}", image.rows(), image.cols()));
            }
            matrix.set_column(i * d + j, image.as_slice());
        }
    }
    Ok(QuantumChannelRep {
        matrix,
        direction,
        sense,
        layout: layout.clone(),
    })
}

/// Swaps the middle indices: `R[(a,b),(c,e)] = M[(a,c),(b,e)]` for `M` on `C^d ⊗ C^d`.
fn realign(m: &ComplexMatrix, d: usize) -> ComplexMatrix {
    let dd = d * d;
    let mut out = ComplexMatrix::zeros(dd, dd);
    for a in 0..d {
        for c in 0..d {
            for b in 0..d {
                for e in 0..d {
                    out[(a * d + b, c * d + e)] = m[(a * d + c, b * d + e)];
                }
            }
        }
    }
    out
}

/// `(Λ ⊗ Λ)(X)` for an operator `X` on two copies of the system.
///
/// Realigning `X` into `X̃[(i,j),(i',j')] = X[(i,i'),(j,j')]` turns the double
/// application into `S X̃ Sᵀ`.
pub fn tensor_square_apply(rep: &QuantumChannelRep, big_op: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = rep.dim();
    let dd = d * d;
    if big_op.rows() != dd || big_op.cols() != dd {
        return Err(mismatch!(
            "operator is {}x{}, two copies need {dd}x{dd}",
            big_op.rows(),
            big_op.cols()
        ));
    }
    let s = &rep.matrix;
    let inner = s.matmul(&realign(big_op, d))?;
    let both = inner.matmul(&s.transpose())?;
    // realignment is an involution
    Ok(realign(&both, d))
}

/// Choi matrix `Σ_ij |i⟩⟨j| ⊗ Λ(|i⟩⟨j|)`.
pub fn choi_matrix(rep: &QuantumChannelRep) -> ComplexMatrix {
    let d = rep.dim();
    let s = &rep.matrix;
    ComplexMatrix::from_fn(d * d, d * d, |r, c| {
        let (i, a) = (r / d, r % d);
        let (j, b) = (c / d, c % d);
        s[(a * d + b, i * d + j)]
    })
}

/// Smallest eigenvalue of the Hermitian part of the Choi matrix; nonnegative
/// (up to rounding) exactly when the map is completely positive.
pub fn choi_min_eigenvalue(rep: &QuantumChannelRep) -> Result<f64> {
    let c = choi_matrix(rep);
    let herm = (&c + &c.adjoint()).scale_real(0.5);
    let spec = crate::qops::eig_hermitian(&herm)?;
    Ok(spec.eigenvalues.first().copied().unwrap_or(0.0))
}

/// Superoperator `Σ_k K_k ⊗ conj(K_k)` of `X ↦ Σ_k K_k X K_k†`.
pub(crate) fn kraus_superoperator(ops: &[ComplexMatrix], d: usize) -> ComplexMatrix {
    let mut acc = ComplexMatrix::zeros(d * d, d * d);
    for k in ops {
        acc += &k.kron(&k.conj());
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qops::random::{random_matrix, random_density_matrix};
    use crate::qops::{sigma, Axis};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rep_of(f: impl Fn(&ComplexMatrix) -> Result<ComplexMatrix>, d_qubits: usize) -> QuantumChannelRep {
        channel_superoperator(f, &TensorLayout::qubits(d_qubits), Direction::Schrodinger, Sense::Forward).unwrap()
    }

    #[test]
    fn identity_map_is_identity_matrix() {
        let rep = rep_of(|x| Ok(x.clone()), 1);
        assert!(rep.matrix.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-15);
    }

    #[test]
    fn sigma_x_conjugation_reverses_indices() {
        let x = sigma(Axis::X);
        let rep = rep_of(|m| Ok(&(&x * m) * &x), 1);
        let mut want = ComplexMatrix::zeros(4, 4);
        for k in 0..4 {
            want[(3 - k, k)] = Complex64::new(1.0, 0.0);
        }
        assert!(rep.matrix.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn reconstruction_on_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let k1 = random_matrix(4, &mut rng);
        let k2 = random_matrix(4, &mut rng);
        let map = |x: &ComplexMatrix| Ok(&(&(&k1 * x) * &k1.adjoint()) + &(&(&k2 * x) * &k2.adjoint()));
        let rep = rep_of(map, 2);
        assert!(rep.matrix.max_abs_diff(&kraus_superoperator(&[k1.clone(), k2.clone()], 4)) < 1e-12);
        for _ in 0..10 {
            let x = random_matrix(4, &mut rng);
            assert!(rep.apply(&x).unwrap().max_abs_diff(&map(&x).unwrap()) < 1e-10);
        }
    }

    #[test]
    fn tensor_square_identity_and_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let id = rep_of(|x| Ok(x.clone()), 1);
        let big = random_matrix(4, &mut rng);
        assert!(tensor_square_apply(&id, &big).unwrap().max_abs_diff(&big) < 1e-14);

        let k = random_matrix(2, &mut rng);
        let rep = rep_of(|x| Ok(&(&k * x) * &k.adjoint()), 1);
        let a = random_matrix(2, &mut rng);
        let b = random_matrix(2, &mut rng);
        let got = tensor_square_apply(&rep, &a.kron(&b)).unwrap();
        let want = rep.apply(&a).unwrap().kron(&rep.apply(&b).unwrap());
        assert!(got.max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn choi_of_unitary_conjugation_is_rank_one() {
        let h = 1.0 / 2.0f64.sqrt();
        let u = ComplexMatrix::from_real(2, 2, &[h, h, h, -h]).unwrap();
        let rep = rep_of(|x| Ok(&(&u * x) * &u.adjoint()), 1);
        let spec = crate::qops::eig_hermitian(&choi_matrix(&rep)).unwrap();
        assert!(spec.eigenvalues[..3].iter().all(|e| e.abs() < 1e-12));
        assert!((spec.eigenvalues[3] - 2.0).abs() < 1e-12);
        // transposition is positive but not completely positive
        let t = rep_of(|x| Ok(x.transpose()), 1);
        assert!(choi_min_eigenvalue(&t).unwrap() < -0.5);
    }

    #[test]
    fn trace_and_unitality_diagnostics() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let rho = random_density_matrix(2, &mut rng);
        let replace = rep_of(|x| Ok(rho.scale(x.trace())), 1);
        assert!(replace.trace_preservation_error() < 1e-14);
        assert!(replace.unitality_error() > 0.0);
        let two = replace.compose(&replace).unwrap();
        assert!(two.matrix.max_abs_diff(&replace.matrix) < 1e-12);
    }
}

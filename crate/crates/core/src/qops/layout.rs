use alloc::vec;
use alloc::vec::Vec;

use super::pauli::{sigma, Axis};
use super::ComplexMatrix;
use crate::error::{invalid, mismatch, Error, Result};

/// Whether a tensor factor belongs to the system or the environment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SiteKind {
    System,
    Bath,
}

/// Ordered tensor factors of a composite Hilbert space.
///
/// Site `k` is the `k`-th factor of every Kronecker product; system sites
/// always precede bath sites.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TensorLayout {
    dims: Vec<usize>,
    labels: Vec<SiteKind>,
}

impl TensorLayout {
    pub fn new(dims: Vec<usize>, labels: Vec<SiteKind>) -> Result<Self> {
        if dims.len() != labels.len() {
            return Err(mismatch!("{} dims but {} labels", dims.len(), labels.len()));
        }
        if dims.iter().any(|&d| d == 0) {
            return Err(invalid!("local dimensions must be positive"));
        }
        if labels.windows(2).any(|w| w[0] == SiteKind::Bath && w[1] == SiteKind::System) {
            return Err(invalid!("system sites must precede bath sites"));
        }
        Ok(Self { dims, labels })
    }

    /// `n_system` system qubits followed by `n_bath` bath qubits.
    pub fn spins(n_system: usize, n_bath: usize) -> Self {
        let mut labels = vec![SiteKind::System; n_system];
        labels.extend(core::iter::repeat(SiteKind::Bath).take(n_bath));
        Self {
            dims: vec![2; n_system + n_bath],
            labels,
        }
    }

    /// A layout of `n` system qubits and no bath.
    pub fn qubits(n: usize) -> Self {
        Self::spins(n, 0)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self) -> &[SiteKind] {
        &self.labels
    }

    pub fn n_sites(&self) -> usize {
        self.dims.len()
    }

    pub fn n_system(&self) -> usize {
        self.labels.iter().filter(|&&k| k == SiteKind::System).count()
    }

    pub fn n_bath(&self) -> usize {
        self.n_sites() - self.n_system()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn system_dim(&self) -> usize {
        self.dims[..self.n_system()].iter().product()
    }

    pub fn bath_dim(&self) -> usize {
        self.dims[self.n_system()..].iter().product()
    }

    /// Layout positions of the system sites.
    pub fn system_sites(&self) -> core::ops::Range<usize> {
        0..self.n_system()
    }

    /// Layout positions of the bath sites.
    pub fn bath_sites(&self) -> core::ops::Range<usize> {
        self.n_system()..self.n_sites()
    }

    /// Layout position of the `l`-th bath site.
    pub fn bath_site(&self, l: usize) -> Result<usize> {
        if l >= self.n_bath() {
            return Err(Error::SiteOutOfRange {
                site: l,
                sites: self.n_bath(),
            });
        }
        Ok(self.n_system() + l)
    }

    pub fn system_layout(&self) -> Self {
        let n = self.n_system();
        Self {
            dims: self.dims[..n].to_vec(),
            labels: self.labels[..n].to_vec(),
        }
    }

    /// The bath factors, relabelled as a standalone layout.
    pub fn bath_layout(&self) -> Self {
        let n = self.n_system();
        Self {
            dims: self.dims[n..].to_vec(),
            labels: vec![SiteKind::System; self.n_bath()],
        }
    }

    fn check_site(&self, site: usize) -> Result<()> {
        if site >= self.n_sites() {
            return Err(Error::SiteOutOfRange {
                site,
                sites: self.n_sites(),
            });
        }
        Ok(())
    }

    /// Tensor product of local operators, identity on every site not listed.
    pub fn embed(&self, factors: &[(usize, &ComplexMatrix)]) -> Result<ComplexMatrix> {
        let mut locals: Vec<Option<&ComplexMatrix>> = vec![None; self.n_sites()];
        for &(site, op) in factors {
            self.check_site(site)?;
            if op.rows() != self.dims[site] || op.cols() != self.dims[site] {
                return Err(mismatch!(
                    "local operator {}x{} on site {site} of dimension {}",
                    op.rows(),
                    op.cols(),
                    self.dims[site]
                ));
            }
            if locals[site].is_some() {
                return Err(invalid!("site {site} listed twice"));
            }
            locals[site] = Some(op);
        }
        let mut out = ComplexMatrix::identity(1);
        let mut pending_identity = 1usize;
        for (site, local) in locals.into_iter().enumerate() {
            match local {
                None => pending_identity *= self.dims[site],
                Some(op) => {
                    if pending_identity > 1 {
                        out = out.kron(&ComplexMatrix::identity(pending_identity));
                        pending_identity = 1;
                    }
                    out = out.kron(op);
                }
            }
        }
        if pending_identity > 1 {
            out = out.kron(&ComplexMatrix::identity(pending_identity));
        }
        Ok(out)
    }

    /// `op_system ⊗ I_bath`.
    pub fn embed_system(&self, op: &ComplexMatrix) -> Result<ComplexMatrix> {
        let d = self.system_dim();
        if op.rows() != d || op.cols() != d {
            return Err(mismatch!("system operator {}x{} for system dimension {d}", op.rows(), op.cols()));
        }
        Ok(op.kron(&ComplexMatrix::identity(self.bath_dim())))
    }

    /// `I_system ⊗ op_bath`.
    pub fn embed_bath(&self, op: &ComplexMatrix) -> Result<ComplexMatrix> {
        let d = self.bath_dim();
        if op.rows() != d || op.cols() != d {
            return Err(mismatch!("bath operator {}x{} for bath dimension {d}", op.rows(), op.cols()));
        }
        Ok(ComplexMatrix::identity(self.system_dim()).kron(op))
    }
}

fn require_qubit(layout: &TensorLayout, site: usize) -> Result<()> {
    layout.check_site(site)?;
    if layout.dims[site] != 2 {
        return Err(invalid!("site {site} is not a qubit"));
    }
    Ok(())
}

/// `σ^axis` on `site`, identity elsewhere.
pub fn pauli_at(layout: &TensorLayout, site: usize, axis: Axis) -> Result<ComplexMatrix> {
    require_qubit(layout, site)?;
    layout.embed(&[(site, &sigma(axis))])
}

/// Product of Paulis on distinct sites, e.g. `σ^x_i σ^x_j`.
pub fn pauli_product(layout: &TensorLayout, factors: &[(usize, Axis)]) -> Result<ComplexMatrix> {
    let mats: Vec<(usize, ComplexMatrix)> = factors
        .iter()
        .map(|&(site, axis)| require_qubit(layout, site).map(|()| (site, sigma(axis))))
        .collect::<Result<_>>()?;
    let refs: Vec<(usize, &ComplexMatrix)> = mats.iter().map(|(s, m)| (*s, m)).collect();
    layout.embed(&refs)
}

/// Collective spin `½ Σ_{j ∈ sites} σ^axis_j`.
pub fn collective_j(layout: &TensorLayout, sites: &[usize], axis: Axis) -> Result<ComplexMatrix> {
    if sites.is_empty() {
        return Err(invalid!("collective operator over an empty site set"));
    }
    let n = layout.total_dim();
    let mut acc = ComplexMatrix::zeros(n, n);
    for &site in sites {
        acc += &pauli_at(layout, site, axis)?;
    }
    Ok(acc.scale_real(0.5))
}

use alloc::string::String;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("site {site} out of range for a layout with {sites} sites")]
    SiteOutOfRange { site: usize, sites: usize },
    #[error("matrix is not Hermitian (max |M - M†| = {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not unitary (max |U†U - I| = {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("not a density matrix: {0}")]
    NotAState(String),
    #[error("eigendecomposition failed to converge")]
    NoConvergence,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! mismatch {
    ($($arg:tt)*) => {
        $crate::Error::DimensionMismatch(alloc::format!($($arg)*))
    };
}
pub(crate) use mismatch;

macro_rules! invalid {
    ($($arg:tt)*) => {
        $crate::Error::InvalidParameter(alloc::format!($($arg)*))
    };
}
pub(crate) use invalid;

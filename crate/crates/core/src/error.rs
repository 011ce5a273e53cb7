use thiserror::Error;

use crate::fock::SubsystemLabel;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("layout conflict: label {0} appears more than once")]
    LayoutConflict(SubsystemLabel),

    #[error("layout does not contain label {0}")]
    UnknownLabel(SubsystemLabel),

    #[error("partial trace would discard every factor")]
    EmptyRemainder,

    #[error("shape mismatch: expected {expected}, got {actual}")]
    Shape { expected: usize, actual: usize },

    #[error("state is not normalized: norm = {0}")]
    Normalization(f64),

    #[error("columns are not orthonormal: max |V^dagger V - I| = {0:e}")]
    NotIsometry(f64),

    #[error("density matrix trace is {0}, expected 1")]
    Trace(f64),

    #[error("matrix is not Hermitian: max |M - M^dagger| = {0:e}")]
    NotHermitian(f64),

    #[error("negative eigenvalue {0:e} below tolerance")]
    Spectrum(f64),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("parameter `{param}` = {value} is outside its domain {domain}")]
    Domain {
        param: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("invalid split: {0}")]
    Split(String),

    #[error("invalid sweep: {0}")]
    Sweep(String),

    #[error("sweep failed at {point}: {source}")]
    GridPoint {
        point: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn domain(param: &'static str, value: f64, domain: &'static str) -> Self {
        Error::Domain {
            param,
            value,
            domain,
        }
    }

    /// Name of the offending parameter for domain errors, looking through
    /// sweep wrappers.
    pub fn domain_param(&self) -> Option<&'static str> {
        match self {
            Error::Domain { param, .. } => Some(param),
            Error::GridPoint { source, .. } => source.domain_param(),
            _ => None,
        }
    }
}

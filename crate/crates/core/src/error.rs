use thiserror::Error;

/// Failures raised by the economic model and its solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {value} violates {bound}")]
    InvalidParameter {
        field: &'static str,
        value: f64,
        bound: &'static str,
    },
    #[error("incompatible mode: {0}")]
    IncompatibleMode(&'static str),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("degenerate allocation at tau = {tau}: consumption {consumption}")]
    DegenerateAllocation { tau: f64, consumption: f64 },
    #[error("degenerate marginal utility of the public good at the no-tax allocation: u_G = {u_g}")]
    DegenerateMarginalUtility { u_g: f64 },
    #[error("threshold hypothesis violated: MEB(0) = {meb0}, MR(0) = {mr0} (both must be positive)")]
    HypothesisViolation { meb0: f64, mr0: f64 },
    #[error("welfare maximum pressed against tau_max = {tau_max}")]
    BoundaryMaximum { tau_max: f64 },
    #[error("mode mismatch: {0}")]
    ModeMismatch(&'static str),
    #[error("at tau = {tau}: {source}")]
    AtTau {
        tau: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Stable variant name, used in CLI diagnostics and schedule rows.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "InvalidParameter",
            Error::IncompatibleMode(_) => "IncompatibleMode",
            Error::DomainError(_) => "DomainError",
            Error::NoConvergence(_) => "NoConvergence",
            Error::DegenerateAllocation { .. } => "DegenerateAllocation",
            Error::DegenerateMarginalUtility { .. } => "DegenerateMarginalUtility",
            Error::HypothesisViolation { .. } => "HypothesisViolation",
            Error::BoundaryMaximum { .. } => "BoundaryMaximum",
            Error::ModeMismatch(_) => "ModeMismatch",
            Error::AtTau { source, .. } => source.name(),
        }
    }

    /// Strips any `AtTau` context wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtTau { source, .. } => source.root(),
            other => other,
        }
    }

    pub(crate) fn at_tau(self, tau: f64) -> Error {
        match self {
            e @ Error::AtTau { .. } => e,
            e => Error::AtTau {
                tau,
                source: Box::new(e),
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

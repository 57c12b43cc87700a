//! The crate-wide error, tagged with the module it came from, and its
//! process exit code.

use crate::analysis::psifix::PsifixError;
use crate::analysis::{MeasureError, Psi0Error};
use crate::corpus::CorpusError;
use crate::gaps::GapError;
use crate::rate::RateError;
use crate::saddle::{CacheError, SaddleError};
use crate::surface::SurfaceError;
use crate::targets::TargetError;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;
pub const EXIT_INTERNAL: u8 = 4;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("surface: {0}")]
    Surface(#[from] SurfaceError),
    #[error("harness: {0}")]
    Corpus(#[from] CorpusError),
    #[error("saddle: {0}")]
    Saddle(#[from] SaddleError),
    #[error("saddle: {0}")]
    Cache(#[from] CacheError),
    #[error("rate: {0}")]
    Rate(#[from] RateError),
    #[error("gaps: {0}")]
    Gap(#[from] GapError),
    #[error("targets: {0}")]
    Target(#[from] TargetError),
    #[error("analysis: {0}")]
    Psi0(#[from] Psi0Error),
    #[error("analysis: {0}")]
    Psifix(#[from] PsifixError),
    #[error("analysis: {0}")]
    Measure(#[from] MeasureError),
    #[error("harness: invalid experiment spec: {0}")]
    Spec(String),
    #[error("harness: cannot read {path}: {source}")]
    Input { path: String, source: std::io::Error },
    #[error("harness: cannot write {path}: {source}")]
    Output { path: String, source: std::io::Error },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

fn saddle_code(e: &SaddleError) -> u8 {
    match e {
        SaddleError::BudgetExceeded { .. } => EXIT_BUDGET,
        SaddleError::Internal(_) => EXIT_INTERNAL,
        _ => EXIT_VALIDATION,
    }
}

fn surface_code(e: &SurfaceError) -> u8 {
    match e {
        SurfaceError::Internal(_) => EXIT_INTERNAL,
        _ => EXIT_VALIDATION,
    }
}

impl Error {
    /// 2 for invalid input, 3 for exhausted budgets, 4 for internal failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Surface(e) => surface_code(e),
            Error::Corpus(CorpusError::Invalid { source, .. }) => surface_code(source),
            Error::Corpus(_) => EXIT_VALIDATION,
            Error::Saddle(e) => saddle_code(e),
            Error::Cache(CacheError::Enumerate(e)) => saddle_code(e),
            Error::Cache(CacheError::Io(_)) => EXIT_INTERNAL,
            Error::Gap(GapError::Enumeration(e)) => saddle_code(e),
            Error::Target(TargetError::Enumeration(e)) => saddle_code(e),
            Error::Target(TargetError::Surface(e)) => surface_code(e),
            Error::Psi0(Psi0Error::IntegralBudgetExceeded { .. }) => EXIT_BUDGET,
            Error::Rate(_)
            | Error::Gap(_)
            | Error::Target(_)
            | Error::Psi0(_)
            | Error::Psifix(_)
            | Error::Measure(_)
            | Error::Spec(_)
            | Error::Input { .. } => EXIT_VALIDATION,
            Error::Output { .. } | Error::Internal(_) => EXIT_INTERNAL,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_contract() {
        assert_eq!(Error::from(SaddleError::BudgetExceeded { limit: 1 }).exit_code(), EXIT_BUDGET);
        assert_eq!(Error::from(GapError::Enumeration(SaddleError::BudgetExceeded { limit: 1 })).exit_code(), EXIT_BUDGET);
        assert_eq!(Error::from(CorpusError::UnknownSurface("x".into())).exit_code(), EXIT_VALIDATION);
        assert_eq!(Error::Internal("x".into()).exit_code(), EXIT_INTERNAL);
        let e = Error::from(SaddleError::InvalidRadius(-1.0));
        assert_eq!(e.exit_code(), EXIT_VALIDATION);
        assert!(e.to_string().starts_with("saddle:"));
    }
}

use std::path::PathBuf;

use ppersist::diagram::DiagramError;
use ppersist::filtration::FiltrationError;
use ppersist::linalg::LinalgError;
use ppersist::persistence::PersistenceError;
use ppersist::poset::PosetError;
use ppersist::semigroup::SemigroupError;
use ppersist::simplicial::HomologyError;
use serde_json::{json, Value};
use thiserror::Error;

/// Failures split by exit code: bad input exits 1, a failed internal
/// consistency check exits 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{message}")]
    Validation { message: String, detail: Option<Value> },
    #[error("{0}")]
    Internal(String),
    #[error("cannot access {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        CliError::Validation { message: message.into(), detail: None }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation { .. } | CliError::Io { .. } => 1,
            CliError::Internal(_) => 2,
        }
    }

    pub fn to_json(&self) -> Value {
        let kind = if self.exit_code() == 2 { "internal" } else { "validation" };
        let mut out = json!({ "error": kind, "message": self.to_string() });
        if let CliError::Validation { detail: Some(d), .. } = self {
            out["detail"] = d.clone();
        }
        out
    }
}

impl From<LinalgError> for CliError {
    fn from(e: LinalgError) -> Self {
        CliError::validation(e.to_string())
    }
}

impl From<PosetError> for CliError {
    fn from(e: PosetError) -> Self {
        CliError::validation(e.to_string())
    }
}

impl From<HomologyError> for CliError {
    fn from(e: HomologyError) -> Self {
        match e {
            HomologyError::NotAChainMap | HomologyError::BoundarySquaredNonzero(_) => CliError::Internal(e.to_string()),
            _ => CliError::validation(e.to_string()),
        }
    }
}

impl From<FiltrationError> for CliError {
    fn from(e: FiltrationError) -> Self {
        match e {
            FiltrationError::LambdaEscape { source_point, target_point, ref prob, ref target_prob, ref threshold } => {
                let detail = json!({
                    "witness": {
                        "source_point": source_point,
                        "target_point": target_point,
                        "prob": prob,
                        "target_prob": target_prob,
                        "threshold": threshold,
                    }
                });
                CliError::Validation { message: e.to_string(), detail: Some(detail) }
            }
            FiltrationError::Homology(h) => h.into(),
            _ => CliError::validation(e.to_string()),
        }
    }
}

impl From<PersistenceError> for CliError {
    fn from(e: PersistenceError) -> Self {
        match e {
            PersistenceError::Inconsistent(_) | PersistenceError::PathDependence { .. } => {
                CliError::Internal(e.to_string())
            }
            PersistenceError::Filtration(f) => f.into(),
            PersistenceError::Homology(h) => h.into(),
            _ => CliError::validation(e.to_string()),
        }
    }
}

impl From<DiagramError> for CliError {
    fn from(e: DiagramError) -> Self {
        match e {
            DiagramError::NotClosed | DiagramError::RangeEscape(_) => CliError::Internal(e.to_string()),
            DiagramError::Persistence(p) => p.into(),
            DiagramError::Filtration(f) => f.into(),
            DiagramError::Homology(h) => h.into(),
            _ => CliError::validation(e.to_string()),
        }
    }
}

impl From<SemigroupError> for CliError {
    fn from(e: SemigroupError) -> Self {
        match e {
            SemigroupError::SublevelMismatch { .. } => CliError::Internal(e.to_string()),
            _ => CliError::validation(e.to_string()),
        }
    }
}

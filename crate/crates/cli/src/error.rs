use lgpair::checks::SelfcheckError;
use lgpair::mf::MfError;
use lgpair::pairing::PairingError;
use lgpair::residues::ResidueError;

use crate::manifest::ManifestError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Manifest(#[from] ManifestError),
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("computation failed: {0}")]
    Computation(String),
    #[error("{failed} of {total} checks failed")]
    ChecksFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ChecksFailed { .. } => 1,
            CliError::Manifest(_) | CliError::Validation(_) => 2,
            CliError::Computation(_) => 3,
            CliError::Usage(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Manifest(_) => "manifest",
            CliError::Validation(_) => "validation",
            CliError::Computation(_) => "computation",
            CliError::ChecksFailed { .. } => "selfcheck",
        }
    }
}

impl From<MfError> for CliError {
    fn from(e: MfError) -> Self {
        match e {
            MfError::NoStabilization { .. } | MfError::SearchExhausted { .. } => CliError::Computation(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<ResidueError> for CliError {
    fn from(e: ResidueError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<PairingError> for CliError {
    fn from(e: PairingError) -> Self {
        match e {
            PairingError::Mf(inner) => inner.into(),
            PairingError::DimensionMismatch { .. } => CliError::Computation(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<SelfcheckError> for CliError {
    fn from(e: SelfcheckError) -> Self {
        match e {
            SelfcheckError::Pairing(p) => p.into(),
            SelfcheckError::UnknownCheck(_) => CliError::Usage(e.to_string()),
        }
    }
}

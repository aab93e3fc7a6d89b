use bsys::discretize::DiscretizeError;
use bsys::graph::GraphError;
use bsys::io::IoError;
use bsys::linrel::LinRelError;
use bsys::secular::SecularError;
use bsys::transport::TransportError;

/// Errors split by exit code: bad input (1) or a violated mathematical invariant (2).
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Invariant(_) => 2,
        }
    }

    pub fn input(msg: impl std::fmt::Display) -> Self {
        CliError::Input(msg.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<LinRelError> for CliError {
    fn from(e: LinRelError) -> Self {
        let msg = e.to_string();
        match e {
            LinRelError::FieldMismatch { .. }
            | LinRelError::ImaginaryInRealField
            | LinRelError::DimensionMismatch { .. }
            | LinRelError::NotOrthonormal { .. }
            | LinRelError::Inconsistent(_)
            | LinRelError::FiniteInstance(_) => CliError::Input(msg),
            _ => CliError::Invariant(msg),
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::UnknownVertex(_) | GraphError::Dimension { .. } | GraphError::WrongBoundaryKind { .. } => {
                CliError::Input(e.to_string())
            }
            GraphError::LinRel(inner) => inner.into(),
            _ => CliError::Invariant(e.to_string()),
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        match e {
            IoError::LinRel(inner) => inner.into(),
            IoError::Graph(inner) => inner.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<DiscretizeError> for CliError {
    fn from(e: DiscretizeError) -> Self {
        match e {
            DiscretizeError::Graph(inner) => inner.into(),
            DiscretizeError::LinRel(inner) => inner.into(),
            DiscretizeError::GridTooCoarse { .. }
            | DiscretizeError::TooLarge { .. }
            | DiscretizeError::TooManyEigenvalues { .. }
            | DiscretizeError::InvalidOption(_) => CliError::Input(e.to_string()),
            _ => CliError::Invariant(e.to_string()),
        }
    }
}

impl From<SecularError> for CliError {
    fn from(e: SecularError) -> Self {
        match e {
            SecularError::Graph(inner) => inner.into(),
            SecularError::LinRel(inner) => inner.into(),
            SecularError::InvalidOption(_) => CliError::Input(e.to_string()),
            _ => CliError::Invariant(e.to_string()),
        }
    }
}

impl From<TransportError> for CliError {
    fn from(e: TransportError) -> Self {
        match e {
            TransportError::Graph(inner) => inner.into(),
            TransportError::InvalidStep(_) | TransportError::Dimension { .. } | TransportError::TooLarge(_) => {
                CliError::Input(e.to_string())
            }
            _ => CliError::Invariant(e.to_string()),
        }
    }
}

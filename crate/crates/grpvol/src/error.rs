use serde_json::{json, Value};

/// Failure of a command. Findings are never errors.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{0}")]
    Resource(String),
    #[error("{0}")]
    Precondition(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn parse(path: impl Into<String>, message: impl ToString) -> Self {
        CliError::Parse {
            path: path.into(),
            message: message.to_string(),
        }
    }

    pub fn precondition(message: impl ToString) -> Self {
        CliError::Precondition(message.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse { .. } => 1,
            CliError::Resource(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Io { .. } => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Parse { .. } => "parse",
            CliError::Resource(_) => "resource",
            CliError::Precondition(_) => "precondition",
            CliError::Io { .. } => "io",
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "error": {
                "kind": self.kind(),
                "exit_code": self.exit_code(),
                "message": self.to_string(),
            }
        })
    }
}

impl From<grpvol_core::subgroups::EnumerationError> for CliError {
    fn from(e: grpvol_core::subgroups::EnumerationError) -> Self {
        use grpvol_core::subgroups::EnumerationError::*;
        match e {
            ZeroIndex => CliError::Usage(e.to_string()),
            NodeBudgetExceeded { .. } => CliError::Resource(e.to_string()),
        }
    }
}

impl From<grpvol_core::volumes::VolumeError> for CliError {
    fn from(e: grpvol_core::volumes::VolumeError) -> Self {
        use grpvol_core::volumes::VolumeError::*;
        match e {
            Enumeration(inner) => inner.into(),
            NotPrime(_) => CliError::Usage(e.to_string()),
            AsphericityNotAsserted => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<grpvol_core::volumes::HopfianError> for CliError {
    fn from(e: grpvol_core::volumes::HopfianError) -> Self {
        match e {
            grpvol_core::volumes::HopfianError::Volume(v) => v.into(),
            other => CliError::precondition(other),
        }
    }
}

impl From<grpvol_core::hopf::HopfError> for CliError {
    fn from(e: grpvol_core::hopf::HopfError) -> Self {
        CliError::precondition(e)
    }
}

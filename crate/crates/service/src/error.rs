use serde_json::{json, Value};
use thiserror::Error;

use intermodal_core::motorhome::MotorhomeError;
use intermodal_core::SearchError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    InvalidRequest,
    Unreachable,
    Io,
    InvalidGraph,
    Internal,
}

impl ErrorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorKind::InvalidRequest => "invalid_request",
            ErrorKind::Unreachable => "unreachable",
            ErrorKind::Io => "io",
            ErrorKind::InvalidGraph => "invalid_graph",
            ErrorKind::Internal => "internal",
        }
    }

    /// Process exit status for the command-line tool.
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Unreachable => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}: {message}", kind.as_str())]
pub struct ApiError {
    pub kind: ErrorKind,
    pub message: String,
    /// Path of the offending request field, e.g. `allowed_modes[1]`.
    pub field: Option<String>,
}

impl ApiError {
    pub fn new(kind: ErrorKind, message: impl Into<String>) -> Self {
        ApiError {
            kind,
            message: message.into(),
            field: None,
        }
    }

    pub fn invalid(field: Option<String>, message: impl Into<String>) -> Self {
        ApiError {
            field,
            ..ApiError::new(ErrorKind::InvalidRequest, message)
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({"kind": self.kind.as_str(), "message": self.message});
        if let Some(field) = &self.field {
            v["field"] = json!(field);
        }
        v
    }
}

impl From<SearchError> for ApiError {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::Unreachable => ApiError::new(ErrorKind::Unreachable, e.to_string()),
            SearchError::InvalidRequest(_) => ApiError::invalid(None, e.to_string()),
            SearchError::StateBudgetExceeded { .. } => ApiError::new(ErrorKind::Internal, e.to_string()),
        }
    }
}

impl From<MotorhomeError> for ApiError {
    fn from(e: MotorhomeError) -> Self {
        match e {
            MotorhomeError::Unreachable => ApiError::new(ErrorKind::Unreachable, e.to_string()),
            MotorhomeError::MissingMotorhome
            | MotorhomeError::SeveralMotorhomes
            | MotorhomeError::MotorhomeNotAtOrigin => ApiError::invalid(Some("vehicles".into()), e.to_string()),
            MotorhomeError::TrivialTrip => ApiError::invalid(Some("destination".into()), e.to_string()),
            MotorhomeError::InvalidRequest(_) => ApiError::invalid(None, e.to_string()),
        }
    }
}

use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BOUND: i32 = 3;

/// A failure carried to the process boundary as a JSON object and an exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub kind: String,
    pub message: String,
}

impl CliError {
    pub fn input(kind: &str, message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INPUT,
            kind: kind.into(),
            message: message.into(),
        }
    }

    pub fn property(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_PROPERTY,
            kind: "PropertyFailed".into(),
            message: message.into(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "error": {
                "kind": self.kind,
                "message": self.message,
                "exit_code": self.code,
            }
        })
    }
}

impl From<dft_core::Error> for CliError {
    fn from(e: dft_core::Error) -> Self {
        let code = match &e {
            dft_core::Error::BoundExceeded { .. } => EXIT_BOUND,
            dft_core::Error::DegenerateForm => EXIT_INPUT,
            e if e.is_input_error() => EXIT_INPUT,
            _ => EXIT_PROPERTY,
        };
        CliError {
            code,
            kind: e.kind().into(),
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::input("IoError", e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::input("JsonError", e.to_string())
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

impl std::error::Error for CliError {}

use std::fmt;

/// Machine-parsable error categories; every failing CLI run prints exactly
/// one line of the form `error[<CODE>]: <message>` to stderr.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCode {
    Usage,
    Parse,
    Validate,
    Domain,
    Io,
    Certify,
    Internal,
}

impl ErrorCode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ErrorCode::Usage => "E-USAGE",
            ErrorCode::Parse => "E-PARSE",
            ErrorCode::Validate => "E-VALIDATE",
            ErrorCode::Domain => "E-DOMAIN",
            ErrorCode::Io => "E-IO",
            ErrorCode::Certify => "E-CERTIFY",
            ErrorCode::Internal => "E-INTERNAL",
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub code: ErrorCode,
    pub message: String,
}

impl CliError {
    pub fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new(ErrorCode::Usage, message)
    }

    pub fn exit_code(&self) -> i32 {
        match self.code {
            ErrorCode::Usage => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Keep it one line whatever the source message contained.
        let flat = self.message.replace('\n', " ");
        write!(f, "error[{}]: {}", self.code.as_str(), flat.trim())
    }
}

impl std::error::Error for CliError {}

impl From<fef_core::Error> for CliError {
    fn from(e: fef_core::Error) -> Self {
        use fef_core::Error as E;
        let code = match e {
            E::InvalidDimension(_)
            | E::IndexOutOfRange { .. }
            | E::ParameterOutOfRange { .. }
            | E::InvalidWeights(_) => ErrorCode::Domain,
            E::CertificationFailed { .. } => ErrorCode::Certify,
            _ => ErrorCode::Validate,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::new(ErrorCode::Io, e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::new(ErrorCode::Parse, e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

use std::fmt;
use std::path::{Path, PathBuf};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Precondition,
}

/// An error tied to a config file and the offending field.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct CliError {
    pub kind: ErrorKind,
    pub file: PathBuf,
    pub field: String,
    pub message: String,
}

impl CliError {
    pub fn config(file: &Path, field: &str, message: impl Into<String>) -> Self {
        CliError { kind: ErrorKind::Config, file: file.to_path_buf(), field: field.into(), message: message.into() }
    }

    pub fn precondition(file: &Path, field: &str, message: impl Into<String>) -> Self {
        CliError { kind: ErrorKind::Precondition, ..CliError::config(file, field, message) }
    }

    pub fn from_core(file: &Path, field: &str, e: expanse_core::Error) -> Self {
        if let expanse_core::Error::Precondition(msg) = e {
            CliError::precondition(file, field, msg)
        } else if e.is_precondition() {
            CliError::precondition(file, field, e.to_string())
        } else {
            CliError::config(file, field, e.to_string())
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Config => 2,
            ErrorKind::Precondition => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ErrorKind::Config => "configuration error",
            ErrorKind::Precondition => "precondition failed",
        };
        write!(f, "{}", self.file.display())?;
        if !self.field.is_empty() {
            write!(f, ": {}", self.field)?;
        }
        write!(f, ": {kind}: {}", self.message)
    }
}

use std::path::{Path, PathBuf};

use sociolex::error::{BratError, EvalError, LexiconError, LlmError, NoteError, SampleError, TemplateError};
use sociolex::records::RecordError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config {path}: {reason}")]
    Config { path: PathBuf, reason: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {reason}")]
    Input { path: PathBuf, reason: String },
    #[error(transparent)]
    Note(#[from] NoteError),
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error(transparent)]
    Brat(#[from] BratError),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Llm(#[from] LlmError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error("{path}: {source}")]
    Records { path: PathBuf, source: RecordError },
    #[error("{count} categories below --min-f {threshold}: {labels}")]
    BelowThreshold { threshold: f64, count: usize, labels: String },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn input(path: &Path, reason: impl Into<String>) -> Self {
        CliError::Input {
            path: path.to_path_buf(),
            reason: reason.into(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Config { .. } => "config",
            CliError::Io { .. } => "io",
            CliError::Input { .. } => "input",
            CliError::Note(_) => "note",
            CliError::Template(_) => "template",
            CliError::Brat(_) => "brat",
            CliError::Lexicon(_) => "lexicon",
            CliError::Llm(_) => "llm",
            CliError::Eval(_) => "evaluation",
            CliError::Sample(_) => "sample",
            CliError::Records { .. } => "records",
            CliError::BelowThreshold { .. } => "threshold",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::BelowThreshold { .. } => 3,
            _ => 1,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": { "kind": self.kind(), "message": self.to_string() } }).to_string()
    }
}

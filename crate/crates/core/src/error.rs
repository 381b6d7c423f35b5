//! Error types, one enum per subsystem.

use std::path::PathBuf;

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("unknown category name {0:?}")]
pub struct CategoryParseError(pub String);

/// File read failure with the path that caused it.
#[derive(Error, Debug)]
#[error("{path}: {source}")]
pub struct IoError {
    pub path: PathBuf,
    #[source]
    pub source: std::io::Error,
}

impl IoError {
    pub fn new(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self { path: path.into(), source }
    }
}

pub(crate) fn read_to_string(path: &std::path::Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|e| IoError::new(path, e))
}

#[derive(Error, Debug)]
pub enum NoteError {
    #[error("malformed note filename {filename:?}: segment {segment:?} {reason}")]
    Filename {
        filename: String,
        segment: String,
        reason: &'static str,
    },
    #[error("note has empty {0}")]
    EmptyField(&'static str),
    #[error(transparent)]
    Io(#[from] IoError),
}

#[derive(Error, Debug)]
pub enum TemplateError {
    #[error("template pattern on line {line} does not compile: {source}")]
    InvalidPattern {
        line: usize,
        #[source]
        source: regex::Error,
    },
    #[error(transparent)]
    Io(#[from] IoError),
}

#[derive(Error, Debug)]
pub enum BratError {
    #[error("line {line}: malformed standoff line {content:?}")]
    Malformed { line: usize, content: String },
    #[error("entity {id}: span {start}..{end} outside text of length {len}")]
    OffsetOutOfBounds {
        id: String,
        start: usize,
        end: usize,
        len: usize,
    },
    #[error("entity {id}: annotated surface {annotated:?} does not match note text {text:?}")]
    SurfaceMismatch {
        id: String,
        annotated: String,
        text: String,
    },
    #[error("attribute {attribute} references missing entity {entity}")]
    MissingEntity { attribute: String, entity: String },
    #[error("entity {id}: negation is only allowed on loneliness, found {category}")]
    NegationNotAllowed { id: String, category: String },
    #[error("attribute {attribute}: unknown temporality value {value:?}")]
    BadTemporality { attribute: String, value: String },
    #[error("tag map line {line}: {reason}")]
    TagMap { line: usize, reason: String },
    #[error("{path}: {source}")]
    InFile {
        path: PathBuf,
        #[source]
        source: Box<BratError>,
    },
    #[error(transparent)]
    Note(#[from] NoteError),
    #[error(transparent)]
    Io(#[from] IoError),
}

#[derive(Error, Debug)]
pub enum LexiconError {
    #[error("line {line}: unknown category {name:?}")]
    UnknownCategory { line: usize, name: String },
    #[error("line {line}: probable categories cannot carry lexicon phrases")]
    ProbableCategory { line: usize },
    #[error("line {line}: empty phrase")]
    EmptyPhrase { line: usize },
    #[error("line {line}: expected `category<TAB>phrase`")]
    MissingTab { line: usize },
    #[error("no embedding coverage for {0}")]
    NoEmbeddingCoverage(String),
    #[error("embedding file line {line}: {reason}")]
    EmbeddingFormat { line: usize, reason: String },
    #[error("review file line {line}: {reason}")]
    Review { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] IoError),
}

#[derive(Error, Debug)]
pub enum LlmError {
    #[error("category {0} cannot be prompted")]
    UnsupportedCategory(String),
    #[error("token budget {budget} does not leave room beyond the {scaffold}-token prompt scaffold")]
    BudgetTooSmall { budget: usize, scaffold: usize },
    #[error("unmappable answer {0:?}")]
    UnmappableAnswer(String),
    #[error("examples line {line}: {reason}")]
    Examples { line: usize, reason: String },
    #[error("script line {line}: {reason}")]
    Script { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] IoError),
}

/// Failure reported by an answer backend for one request.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum BackendError {
    /// Not worth retrying (HTTP 4xx, unscripted request in strict mode).
    #[error("permanent: {0}")]
    Permanent(String),
    /// Transient (HTTP 5xx, timeouts, connection failures).
    #[error("retryable: {0}")]
    Retryable(String),
}

impl BackendError {
    pub fn is_retryable(&self) -> bool {
        matches!(self, BackendError::Retryable(_))
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("label vectors differ in length: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("cannot compute agreement over zero items")]
    Empty,
    #[error("unmatched note ids: missing from predictions {missing_in_pred:?}, missing from gold {missing_in_gold:?}")]
    IdMismatch {
        missing_in_pred: Vec<String>,
        missing_in_gold: Vec<String>,
    },
    #[error("gold note {0} has no visit record")]
    MissingVisit(String),
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SampleError {
    #[error("duplicate note id {0} in corpus index")]
    DuplicateNoteId(String),
}

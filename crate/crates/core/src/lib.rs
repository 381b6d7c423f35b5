//! Detection of social support and social isolation mentions in clinical
//! notes, with a rule-based matcher and a prompt-based classifier.
//!
//! Numeric code (embeddings, metrics) is generic over [`Scalar`]; the
//! aliases below fix the common precisions.

pub mod brat;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod labels;
pub mod lexicon;
pub mod llm;
pub mod matcher;
pub mod records;
pub mod sampler;
pub mod scalar;
pub mod taxonomy;
pub mod text;
pub mod tokenize;

pub use brat::{EntityMention, GoldDocument, Source, TagMap, Temporality};
pub use corpus::{Note, Preprocessor, Segmenter, TemplateSet};
pub use labels::{derive_document_labels, DocumentLabels};
pub use lexicon::{EmbeddingTable, Lexicon, Phrase};
pub use matcher::{MatchConfig, RuleMatcher};
pub use records::LabelRecord;
pub use scalar::Scalar;
pub use taxonomy::{CoarseCategory, FineCategory};
pub use text::Span;

pub type EmbeddingTableF32 = lexicon::EmbeddingTable<f32>;
pub type EmbeddingTableF64 = lexicon::EmbeddingTable<f64>;
pub type CandidateF32 = lexicon::Candidate<f32>;
pub type PrfF64 = eval::Prf<f64>;
pub type EvalReportF64 = eval::EvalReport<f64>;
pub type EvalReportF32 = eval::EvalReport<f32>;
pub type AgreementReportF64 = eval::AgreementReport<f64>;

/// Toolkit version string.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

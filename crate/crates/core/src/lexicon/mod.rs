//! Inclusion and exclusion phrase lists, plus embedding-based expansion.

mod embedding;
mod expand;

pub use embedding::{lexicon_vector, most_similar, EmbeddingTable, LexiconVector, Neighbor};
pub use expand::{expansion_round, merge_review, parse_review, write_review, Candidate, ReviewDecision, ReviewRow};

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{read_to_string, LexiconError};
use crate::taxonomy::FineCategory;
use crate::tokenize::token_texts;

/// Built-in exclusion phrases, one per line.
pub const DEFAULT_EXCLUSIONS: &str = include_str!("../../data/exclusion_terms.txt");
/// Small illustrative inclusion lexicon used when no site lexicon is given.
pub const SAMPLE_INCLUSION: &str = include_str!("../../data/sample_inclusion.tsv");

/// A normalized phrase: lowercase, single-spaced, with its token sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phrase {
    pub text: String,
    pub tokens: Vec<String>,
}

impl Phrase {
    /// Returns `None` for phrases that are empty after normalization.
    pub fn new(raw: &str) -> Option<Self> {
        let text = raw.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase();
        let tokens = token_texts(&text);
        (!tokens.is_empty()).then_some(Self { text, tokens })
    }
}

/// Per-category inclusion phrases and one global exclusion list.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Lexicon {
    pub inclusion: BTreeMap<FineCategory, Vec<Phrase>>,
    pub exclusion: Vec<Phrase>,
    pub version: String,
}

impl Lexicon {
    pub fn new(version: impl Into<String>) -> Self {
        Self {
            version: version.into(),
            ..Default::default()
        }
    }

    /// Adds an inclusion phrase; returns `Ok(false)` when it is already
    /// present for that category.
    pub fn add_inclusion(&mut self, category: FineCategory, raw: &str) -> Result<bool, LexiconError> {
        if category.is_probable() {
            return Err(LexiconError::ProbableCategory { line: 0 });
        }
        let phrase = Phrase::new(raw).ok_or(LexiconError::EmptyPhrase { line: 0 })?;
        let list = self.inclusion.entry(category).or_default();
        if list.contains(&phrase) {
            return Ok(false);
        }
        list.push(phrase);
        Ok(true)
    }

    pub fn add_exclusion(&mut self, raw: &str) -> Result<bool, LexiconError> {
        let phrase = Phrase::new(raw).ok_or(LexiconError::EmptyPhrase { line: 0 })?;
        if self.exclusion.contains(&phrase) {
            return Ok(false);
        }
        self.exclusion.push(phrase);
        Ok(true)
    }

    pub fn phrases(&self, category: FineCategory) -> &[Phrase] {
        self.inclusion.get(&category).map_or(&[], Vec::as_slice)
    }

    pub fn inclusion_count(&self) -> usize {
        self.inclusion.values().map(Vec::len).sum()
    }

    /// Parses the inclusion TSV (`category<TAB>phrase`) and the exclusion
    /// list (one phrase per line). Both accept `#` comments; a
    /// `# version: <v>` comment in the inclusion file sets the version,
    /// otherwise it is a content hash. Duplicates are dropped with a warning.
    pub fn parse(inclusion: &str, exclusion: &str) -> Result<(Self, Vec<String>), LexiconError> {
        let mut warnings = Vec::new();
        let mut version = None;
        let mut lex = Lexicon::default();
        for (i, line) in inclusion.lines().enumerate() {
            let line_no = i + 1;
            let line = line.trim_end_matches('\r');
            let trimmed = line.trim();
            if let Some(comment) = trimmed.strip_prefix('#') {
                if let Some(v) = comment.trim().strip_prefix("version:") {
                    version = Some(v.trim().to_string());
                }
                continue;
            }
            if trimmed.is_empty() {
                continue;
            }
            let (name, raw) = line.split_once('\t').ok_or(LexiconError::MissingTab { line: line_no })?;
            let category: FineCategory = name.parse().map_err(|_| LexiconError::UnknownCategory {
                line: line_no,
                name: name.to_string(),
            })?;
            if category.is_probable() {
                return Err(LexiconError::ProbableCategory { line: line_no });
            }
            let phrase = Phrase::new(raw).ok_or(LexiconError::EmptyPhrase { line: line_no })?;
            let list = lex.inclusion.entry(category).or_default();
            if list.contains(&phrase) {
                warnings.push(format!("inclusion line {line_no}: duplicate phrase {:?} for {category} dropped", phrase.text));
            } else {
                list.push(phrase);
            }
        }
        for (i, line) in exclusion.lines().enumerate() {
            let line_no = i + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let phrase = Phrase::new(trimmed).ok_or(LexiconError::EmptyPhrase { line: line_no })?;
            if lex.exclusion.contains(&phrase) {
                warnings.push(format!("exclusion line {line_no}: duplicate phrase {:?} dropped", phrase.text));
            } else {
                lex.exclusion.push(phrase);
            }
        }
        lex.version = version.unwrap_or_else(|| {
            let mut hasher = Sha256::new();
            hasher.update(inclusion.as_bytes());
            hasher.update([0u8]);
            hasher.update(exclusion.as_bytes());
            let digest = hasher.finalize();
            let hex: String = digest.iter().take(6).map(|b| format!("{b:02x}")).collect();
            format!("sha256:{hex}")
        });
        Ok((lex, warnings))
    }

    pub fn load(inclusion_file: &Path, exclusion_file: Option<&Path>) -> Result<(Self, Vec<String>), LexiconError> {
        let inclusion = read_to_string(inclusion_file)?;
        let exclusion = match exclusion_file {
            Some(p) => read_to_string(p)?,
            None => String::new(),
        };
        Self::parse(&inclusion, &exclusion)
    }

    /// Inclusion phrases in the TSV format accepted by [`Lexicon::parse`].
    pub fn to_inclusion_tsv(&self) -> String {
        let mut out = String::new();
        for (category, phrases) in &self.inclusion {
            for p in phrases {
                let _ = writeln!(out, "{}\t{}", category.name(), p.text);
            }
        }
        out
    }
}

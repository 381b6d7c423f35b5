//! JSONL label records shared by `gold`, `extract` and `evaluate`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::brat::EntityMention;
use crate::labels::DocumentLabels;
use crate::llm::{ChoiceAnswer, RequestFailure};
use crate::taxonomy::{CoarseCategory, FineCategory};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MentionRecord {
    pub category: FineCategory,
    pub start: usize,
    pub end: usize,
    pub surface: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub negated: bool,
}

impl From<&EntityMention> for MentionRecord {
    fn from(m: &EntityMention) -> Self {
        MentionRecord {
            category: m.category,
            start: m.span.start,
            end: m.span.end,
            surface: m.surface.clone(),
            negated: m.negated,
        }
    }
}

/// Labels for one note. `fine`, `coarse` and `none` always agree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelRecord {
    pub note_id: String,
    pub person_id: String,
    pub fine: Vec<FineCategory>,
    pub coarse: Vec<CoarseCategory>,
    pub none: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub mentions: Vec<MentionRecord>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub incomplete: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<RequestFailure>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub answers: Vec<ChoiceAnswer>,
}

impl LabelRecord {
    pub fn new(note_id: impl Into<String>, person_id: impl Into<String>, labels: &DocumentLabels) -> Self {
        LabelRecord {
            note_id: note_id.into(),
            person_id: person_id.into(),
            fine: labels.fine.iter().copied().collect(),
            coarse: labels.coarse.iter().copied().collect(),
            none: labels.none,
            mentions: Vec::new(),
            incomplete: false,
            failures: Vec::new(),
            answers: Vec::new(),
        }
    }

    pub fn with_mentions(mut self, mentions: &[EntityMention]) -> Self {
        self.mentions = mentions.iter().map(MentionRecord::from).collect();
        self
    }

    pub fn labels(&self) -> DocumentLabels {
        DocumentLabels {
            fine: self.fine.iter().copied().collect(),
            coarse: self.coarse.iter().copied().collect(),
            none: self.none,
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("label record serializes") + "\n"
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RecordError {
    #[error("line {line}: {source}")]
    Json { line: usize, source: serde_json::Error },
    #[error("line {line}: labels for {note_id} are inconsistent (coarse/none do not follow from fine)")]
    Inconsistent { line: usize, note_id: String },
    #[error("line {line}: duplicate note id {note_id}")]
    Duplicate { line: usize, note_id: String },
}

/// Parses a label JSONL file into a map keyed by note id.
pub fn parse_label_records(jsonl: &str) -> Result<BTreeMap<String, LabelRecord>, RecordError> {
    let mut out = BTreeMap::new();
    for (i, line) in jsonl.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let line_no = i + 1;
        let rec: LabelRecord = serde_json::from_str(line).map_err(|source| RecordError::Json { line: line_no, source })?;
        if !rec.labels().is_consistent() {
            return Err(RecordError::Inconsistent {
                line: line_no,
                note_id: rec.note_id,
            });
        }
        if out.contains_key(&rec.note_id) {
            return Err(RecordError::Duplicate {
                line: line_no,
                note_id: rec.note_id,
            });
        }
        out.insert(rec.note_id.clone(), rec);
    }
    Ok(out)
}

/// Document labels keyed by note id.
pub fn label_map(records: &BTreeMap<String, LabelRecord>) -> BTreeMap<String, DocumentLabels> {
    records.iter().map(|(k, r)| (k.clone(), r.labels())).collect()
}

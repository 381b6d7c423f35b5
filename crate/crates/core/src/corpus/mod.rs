//! Clinical notes: identity metadata, template blanking and sentence spans.

mod segment;
mod template;

pub use segment::{Segmenter, DEFAULT_ABBREVIATIONS};
pub use template::{RemovedTemplates, TemplateSet};

use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{read_to_string, IoError, NoteError};
use crate::text::{CharIndex, Span};

/// Identity fields carried by a note filename.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoteName {
    pub index: u64,
    pub person_id: String,
    pub note_id: String,
    pub note_date: NaiveDate,
}

/// Parses `<index>_<person_id>_<note_id...>_<YYYY-MM-DD>.txt`.
///
/// Extra middle fields are joined into the note id with underscores, so
/// `1_101_1001_10001_100001_2000-01-01.txt` has note id `1001_10001_100001`.
pub fn parse_note_filename(filename: &str) -> Result<NoteName, NoteError> {
    let malformed = |segment: &str, reason| NoteError::Filename {
        filename: filename.to_string(),
        segment: segment.to_string(),
        reason,
    };
    let stem = filename
        .strip_suffix(".txt")
        .ok_or_else(|| malformed(filename, "does not end in .txt"))?;
    let fields: Vec<&str> = stem.split('_').collect();
    if fields.len() < 4 {
        return Err(malformed(stem, "has fewer than four underscore-separated fields"));
    }
    let index = fields[0]
        .parse::<u64>()
        .map_err(|_| malformed(fields[0], "is not an integer index"))?;
    let date_field = fields[fields.len() - 1];
    let note_date = NaiveDate::parse_from_str(date_field, "%Y-%m-%d")
        .map_err(|_| malformed(date_field, "is not a YYYY-MM-DD date"))?;
    let person_id = fields[1];
    if person_id.is_empty() {
        return Err(malformed(person_id, "is an empty person id"));
    }
    let id_parts = &fields[2..fields.len() - 1];
    if id_parts.iter().any(|p| p.is_empty()) {
        return Err(malformed(&id_parts.join("_"), "contains an empty note id component"));
    }
    Ok(NoteName {
        index,
        person_id: person_id.to_string(),
        note_id: id_parts.join("_"),
        note_date,
    })
}

/// Template removal plus sentence segmentation, applied to every note.
#[derive(Debug, Clone, Default)]
pub struct Preprocessor {
    pub templates: TemplateSet,
    pub segmenter: Segmenter,
}

impl Preprocessor {
    pub fn new(templates: TemplateSet, segmenter: Segmenter) -> Self {
        Self { templates, segmenter }
    }
}

/// One clinical document.
///
/// `clean_text` has the same character length as `raw_text`: template spans
/// are overwritten with spaces, so offsets into either string agree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Note {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<u64>,
    pub person_id: String,
    pub note_id: String,
    pub note_date: NaiveDate,
    pub raw_text: String,
    pub clean_text: String,
    pub sentences: Vec<Span>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub removed_spans: Vec<Span>,
}

impl Note {
    pub fn build(
        person_id: impl Into<String>,
        note_id: impl Into<String>,
        note_date: NaiveDate,
        raw_text: impl Into<String>,
        pre: &Preprocessor,
    ) -> Result<Self, NoteError> {
        let person_id = person_id.into();
        let note_id = note_id.into();
        if person_id.is_empty() {
            return Err(NoteError::EmptyField("person_id"));
        }
        if note_id.is_empty() {
            return Err(NoteError::EmptyField("note_id"));
        }
        let raw_text = raw_text.into();
        let RemovedTemplates { clean_text, removed_spans } = pre.templates.remove(&raw_text);
        let sentences = pre.segmenter.segment(&clean_text);
        Ok(Self {
            index: None,
            person_id,
            note_id,
            note_date,
            raw_text,
            clean_text,
            sentences,
            removed_spans,
        })
    }

    /// Reads a note whose filename follows the naming convention.
    pub fn from_file(path: &Path, pre: &Preprocessor) -> Result<Self, NoteError> {
        let filename = path
            .file_name()
            .and_then(|n| n.to_str())
            .unwrap_or_default();
        let name = parse_note_filename(filename)?;
        let raw = read_to_string(path)?;
        let mut note = Note::build(name.person_id, name.note_id, name.note_date, raw, pre)?;
        note.index = Some(name.index);
        Ok(note)
    }

    pub fn char_len(&self) -> usize {
        self.clean_text.chars().count()
    }

    /// Slice of `clean_text`.
    pub fn clean_slice(&self, span: Span) -> Option<&str> {
        CharIndex::new(&self.clean_text).slice(span)
    }

    /// Slice of `raw_text`.
    pub fn raw_slice(&self, span: Span) -> Option<&str> {
        CharIndex::new(&self.raw_text).slice(span)
    }

    /// Index of the sentence containing character `pos`, if any.
    pub fn sentence_at(&self, pos: usize) -> Option<usize> {
        let i = self.sentences.partition_point(|s| s.end <= pos);
        self.sentences
            .get(i)
            .filter(|s| s.start <= pos && pos < s.end)
            .map(|_| i)
    }
}

/// All `.txt` files in `dir`, sorted by filename.
pub fn list_note_files(dir: &Path) -> Result<Vec<std::path::PathBuf>, IoError> {
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(|e| IoError::new(dir, e))? {
        let path = entry.map_err(|e| IoError::new(dir, e))?.path();
        if path.extension().is_some_and(|ext| ext == "txt") && path.is_file() {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

pub fn load_notes_dir(dir: &Path, pre: &Preprocessor) -> Result<Vec<Note>, NoteError> {
    list_note_files(dir)?
        .iter()
        .map(|p| Note::from_file(p, pre))
        .collect()
}

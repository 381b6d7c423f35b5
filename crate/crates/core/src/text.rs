//! Character-offset spans and helpers for slicing text by character index.

use serde::{Deserialize, Serialize};

/// Half-open `[start, end)` range in character (not byte) units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        Self { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn covering(spans: &[Span]) -> Option<Span> {
        let start = spans.iter().map(|s| s.start).min()?;
        let end = spans.iter().map(|s| s.end).max()?;
        Some(Span { start, end })
    }
}

/// Byte offset of every character boundary in a string, so that character
/// spans can be sliced in O(1).
#[derive(Debug, Clone)]
pub struct CharIndex<'a> {
    text: &'a str,
    bounds: Vec<usize>,
}

impl<'a> CharIndex<'a> {
    pub fn new(text: &'a str) -> Self {
        let mut bounds: Vec<usize> = text.char_indices().map(|(b, _)| b).collect();
        bounds.push(text.len());
        Self { text, bounds }
    }

    /// Number of characters.
    pub fn len(&self) -> usize {
        self.bounds.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn slice(&self, span: Span) -> Option<&'a str> {
        if span.start > span.end || span.end > self.len() {
            return None;
        }
        Some(&self.text[self.bounds[span.start]..self.bounds[span.end]])
    }
}

pub fn char_len(text: &str) -> usize {
    text.chars().count()
}

/// Character slice; panics when the span is out of bounds.
pub fn slice_chars(text: &str, span: Span) -> &str {
    CharIndex::new(text)
        .slice(span)
        .unwrap_or_else(|| panic!("span {span:?} out of bounds"))
}

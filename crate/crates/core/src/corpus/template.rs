use std::path::Path;

use regex::Regex;

use crate::error::{read_to_string, TemplateError};
use crate::text::Span;

/// Site-specific template patterns, blanked out of notes before matching.
#[derive(Debug, Clone, Default)]
pub struct TemplateSet {
    patterns: Vec<Regex>,
}

/// Output of [`TemplateSet::remove`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemovedTemplates {
    pub clean_text: String,
    /// Merged, non-overlapping spans in offset order (character units).
    pub removed_spans: Vec<Span>,
}

impl TemplateSet {
    /// Compiles every pattern up front; a bad pattern is reported with its
    /// 1-based position.
    pub fn new<I, S>(patterns: I) -> Result<Self, TemplateError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let patterns = patterns
            .into_iter()
            .enumerate()
            .map(|(i, p)| {
                Regex::new(p.as_ref()).map_err(|source| TemplateError::InvalidPattern { line: i + 1, source })
            })
            .collect::<Result<_, _>>()?;
        Ok(Self { patterns })
    }

    /// Parses a pattern file: one regular expression per line, blank lines
    /// and `#` comments ignored.
    pub fn parse(content: &str) -> Result<Self, TemplateError> {
        let mut patterns = Vec::new();
        for (i, line) in content.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let re = Regex::new(line).map_err(|source| TemplateError::InvalidPattern { line: i + 1, source })?;
            patterns.push(re);
        }
        Ok(Self { patterns })
    }

    pub fn load(path: &Path) -> Result<Self, TemplateError> {
        Self::parse(&read_to_string(path)?)
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// Overwrites every match of every pattern with spaces, one space per
    /// character, so the output has the same character length.
    pub fn remove(&self, raw_text: &str) -> RemovedTemplates {
        let mut byte_spans: Vec<(usize, usize)> = self
            .patterns
            .iter()
            .flat_map(|re| re.find_iter(raw_text).map(|m| (m.start(), m.end())))
            .filter(|(s, e)| s < e)
            .collect();
        if byte_spans.is_empty() {
            return RemovedTemplates {
                clean_text: raw_text.to_string(),
                removed_spans: Vec::new(),
            };
        }
        byte_spans.sort_unstable();
        let mut merged: Vec<(usize, usize)> = Vec::with_capacity(byte_spans.len());
        for (s, e) in byte_spans {
            match merged.last_mut() {
                Some(last) if s <= last.1 => last.1 = last.1.max(e),
                _ => merged.push((s, e)),
            }
        }

        let mut clean = String::with_capacity(raw_text.len());
        let mut removed_spans = Vec::with_capacity(merged.len());
        let mut spans = merged.iter().peekable();
        let mut current: Option<(usize, usize, usize)> = None; // (byte start, byte end, char start)
        for (char_pos, (byte_pos, c)) in raw_text.char_indices().enumerate() {
            if current.is_none() {
                if let Some(&&(s, e)) = spans.peek() {
                    if byte_pos >= s {
                        spans.next();
                        current = Some((s, e, char_pos));
                    }
                }
            }
            match current {
                Some((_, e, char_start)) if byte_pos < e => {
                    clean.push(' ');
                    if byte_pos + c.len_utf8() >= e {
                        removed_spans.push(Span::new(char_start, char_pos + 1));
                        current = None;
                    }
                }
                _ => clean.push(c),
            }
        }
        RemovedTemplates { clean_text: clean, removed_spans }
    }
}

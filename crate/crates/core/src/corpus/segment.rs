use std::collections::HashSet;

use crate::text::Span;

/// Abbreviations that end in a period but do not end a sentence.
pub const DEFAULT_ABBREVIATIONS: &[&str] = &[
    "pt.", "pts.", "hx.", "dx.", "tx.", "rx.", "sx.", "y/o", "y.o.", "dr.", "mr.", "mrs.", "ms.",
    "e.g.", "i.e.", "vs.", "approx.", "st.", "b.i.d.", "t.i.d.", "q.d.", "p.o.", "a.m.",
    "p.m.",
];

/// Rule-based sentence splitter.
///
/// Splits on newlines and on `.`, `!` or `?` followed by whitespace or end of
/// text, unless the word ending at the period is a known abbreviation.
/// Returned spans are trimmed of surrounding whitespace.
#[derive(Debug, Clone)]
pub struct Segmenter {
    abbreviations: HashSet<String>,
}

impl Default for Segmenter {
    fn default() -> Self {
        Self::with_abbreviations(DEFAULT_ABBREVIATIONS.iter().copied())
    }
}

impl Segmenter {
    pub fn with_abbreviations<I, S>(abbreviations: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Self {
            abbreviations: abbreviations
                .into_iter()
                .map(|a| a.as_ref().trim().to_lowercase())
                .filter(|a| !a.is_empty())
                .collect(),
        }
    }

    pub fn segment(&self, text: &str) -> Vec<Span> {
        let chars: Vec<char> = text.chars().collect();
        let mut spans = Vec::new();
        let mut start: Option<usize> = None;
        let mut last_non_ws = 0;
        let mut word_start = 0;

        for (i, &c) in chars.iter().enumerate() {
            if c == '\n' || c == '\r' {
                if let Some(s) = start.take() {
                    spans.push(Span::new(s, last_non_ws + 1));
                }
                word_start = i + 1;
                continue;
            }
            if c.is_whitespace() {
                word_start = i + 1;
                continue;
            }
            if start.is_none() {
                start = Some(i);
            }
            last_non_ws = i;
            if matches!(c, '.' | '!' | '?') {
                let at_boundary = chars.get(i + 1).is_none_or(|n| n.is_whitespace());
                if at_boundary && !(c == '.' && self.is_abbreviation(&chars[word_start..=i])) {
                    let s = start.take().expect("sentence start set above");
                    spans.push(Span::new(s, i + 1));
                }
            }
        }
        if let Some(s) = start {
            spans.push(Span::new(s, last_non_ws + 1));
        }
        spans
    }

    fn is_abbreviation(&self, word: &[char]) -> bool {
        // leading brackets or quotes are not part of the abbreviation
        let word: String = word
            .iter()
            .skip_while(|c| matches!(c, '(' | '[' | '"' | '\''))
            .flat_map(|c| c.to_lowercase())
            .collect();
        self.abbreviations.contains(&word)
    }
}

use crate::corpus::Note;
use crate::error::LlmError;
use crate::taxonomy::FineCategory;
use crate::text::{CharIndex, Span};

use super::prompt::{question, wrap_context, CHOICES, INSTRUCTION};

/// Default whitespace-token budget, leaving headroom under a 512-token model
/// limit for subword inflation.
pub const DEFAULT_TOKEN_BUDGET: usize = 400;

pub fn whitespace_tokens(text: &str) -> usize {
    text.split_whitespace().count()
}

/// Tokens used by everything in a prompt except the chunk itself: the
/// instruction, the longest question, the choices and the context wrapper.
pub fn scaffold_tokens() -> usize {
    let longest_question = FineCategory::MAIN
        .iter()
        .filter_map(|c| question(*c))
        .map(whitespace_tokens)
        .max()
        .unwrap_or(0);
    whitespace_tokens(INSTRUCTION) + longest_question + whitespace_tokens(&CHOICES.join(" ")) + wrapper_tokens()
}

/// The quotes attach to the chunk's first and last words, so only the
/// leading words of the wrapper add tokens.
fn wrapper_tokens() -> usize {
    whitespace_tokens(&wrap_context("x")) - 1
}

/// A run of consecutive sentences (or pieces of one long sentence).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chunk {
    pub index: usize,
    /// Sentence spans, or sub-spans of an oversize sentence, in order.
    pub segments: Vec<Span>,
    /// Segment texts joined by single spaces.
    pub text: String,
    pub tokens: usize,
}

/// Whitespace-delimited words inside `span`, as character spans.
fn word_spans(chars: &[char], span: Span) -> Vec<Span> {
    let mut words = Vec::new();
    let mut start = None;
    for i in span.start..span.end {
        match (chars[i].is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                words.push(Span::new(s, i));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        words.push(Span::new(s, span.end));
    }
    words
}

/// Packs sentences greedily, in order, into chunks that fit the budget
/// together with the prompt scaffold. A sentence longer than the available
/// room is split at word boundaries.
pub fn slice_note(note: &Note, token_budget: usize) -> Result<Vec<Chunk>, LlmError> {
    let scaffold = scaffold_tokens();
    if token_budget <= scaffold {
        return Err(LlmError::BudgetTooSmall {
            budget: token_budget,
            scaffold,
        });
    }
    let room = token_budget - scaffold;
    let chars: Vec<char> = note.clean_text.chars().collect();
    let index = CharIndex::new(&note.clean_text);

    let mut pieces: Vec<(Span, usize)> = Vec::new();
    for &sentence in &note.sentences {
        let words = word_spans(&chars, sentence);
        if words.is_empty() {
            continue;
        }
        if words.len() <= room {
            pieces.push((sentence, words.len()));
        } else {
            for group in words.chunks(room) {
                let span = Span::new(group[0].start, group[group.len() - 1].end);
                pieces.push((span, group.len()));
            }
        }
    }

    let mut chunks: Vec<Chunk> = Vec::new();
    let mut segments: Vec<Span> = Vec::new();
    let mut used = 0;
    let mut flush = |segments: &mut Vec<Span>, used: &mut usize| {
        if segments.is_empty() {
            return;
        }
        let text = segments
            .iter()
            .map(|s| index.slice(*s).unwrap_or_default())
            .collect::<Vec<_>>()
            .join(" ");
        chunks.push(Chunk {
            index: chunks.len(),
            segments: std::mem::take(segments),
            text,
            tokens: *used,
        });
        *used = 0;
    };
    for (span, n) in pieces {
        if used + n > room {
            flush(&mut segments, &mut used);
        }
        segments.push(span);
        used += n;
    }
    flush(&mut segments, &mut used);
    Ok(chunks)
}

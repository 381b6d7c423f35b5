//! Offset-preserving word tokenizer shared by the lexicon and the matcher.

use crate::text::Span;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    /// Token text, lowercased when case folding is on.
    pub text: String,
    /// Character span in the source text.
    pub span: Span,
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

/// Splits on whitespace; every other non-alphanumeric character becomes a
/// single-character token.
pub fn tokenize(text: &str, case_fold: bool) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut word_start: Option<usize> = None;
    let mut word = String::new();
    let flush = |tokens: &mut Vec<Token>, word: &mut String, start: &mut Option<usize>, end: usize| {
        if let Some(s) = start.take() {
            tokens.push(Token {
                text: std::mem::take(word),
                span: Span::new(s, end),
            });
        }
    };
    for (i, c) in text.chars().enumerate() {
        if is_word_char(c) {
            if word_start.is_none() {
                word_start = Some(i);
            }
            if case_fold {
                word.extend(c.to_lowercase());
            } else {
                word.push(c);
            }
            continue;
        }
        flush(&mut tokens, &mut word, &mut word_start, i);
        if !c.is_whitespace() {
            let text = if case_fold { c.to_lowercase().collect() } else { c.to_string() };
            tokens.push(Token {
                text,
                span: Span::new(i, i + 1),
            });
        }
    }
    let n = text.chars().count();
    flush(&mut tokens, &mut word, &mut word_start, n);
    tokens
}

/// Token texts only, case folded.
pub fn token_texts(text: &str) -> Vec<String> {
    tokenize(text, true).into_iter().map(|t| t.text).collect()
}

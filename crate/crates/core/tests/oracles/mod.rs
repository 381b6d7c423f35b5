//! Brute-force reference implementations used by the property tests and
//! the acceptance suite. Written from the definitions, sharing no code with
//! the library beyond its data types.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use sociolex::corpus::Note;
use sociolex::lexicon::Lexicon;
use sociolex::matcher::MatchConfig;
use sociolex::{CoarseCategory, FineCategory};

pub const SS_NAMES: [&str; 4] = ["social_network", "emotional_support", "instrumental_support", "ss_general"];
pub const SI_NAMES: [&str; 5] = ["loneliness", "no_social_network", "no_emotional_support", "no_instrumental_support", "si_general"];

/// Coarse labels from the rules table: SS iff some SS-side subcategory is
/// present, SI likewise; `none` iff neither.
pub fn coarse_oracle(fine: &BTreeSet<FineCategory>) -> (BTreeSet<CoarseCategory>, bool) {
    let names: HashSet<&str> = fine.iter().map(|c| c.name()).collect();
    let mut coarse = BTreeSet::new();
    if SS_NAMES.iter().any(|n| names.contains(n)) {
        coarse.insert(CoarseCategory::SS);
    }
    if SI_NAMES.iter().any(|n| names.contains(n)) {
        coarse.insert(CoarseCategory::SI);
    }
    let none = coarse.is_empty();
    (coarse, none)
}

/// (tp, fp, fn, tn) by explicit case analysis.
pub fn confusion_oracle(gold: &[bool], pred: &[bool]) -> (usize, usize, usize, usize) {
    let mut c = (0, 0, 0, 0);
    for i in 0..gold.len() {
        if gold[i] && pred[i] {
            c.0 += 1;
        } else if !gold[i] && pred[i] {
            c.1 += 1;
        } else if gold[i] && !pred[i] {
            c.2 += 1;
        } else {
            c.3 += 1;
        }
    }
    c
}

/// Precision, recall and F, with F from the count form 2tp/(2tp+fp+fn).
pub fn prf_oracle(gold: &[bool], pred: &[bool]) -> (f64, f64, f64) {
    let (tp, fp, fn_, _) = confusion_oracle(gold, pred);
    let div = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    (div(tp, tp + fp), div(tp, tp + fn_), div(2 * tp, 2 * tp + fp + fn_))
}

/// Kappa from the 2x2 contingency table.
pub fn kappa_oracle(a: &[bool], b: &[bool]) -> f64 {
    let n = a.len() as f64;
    let mut t = [[0f64; 2]; 2];
    for i in 0..a.len() {
        t[a[i] as usize][b[i] as usize] += 1.0;
    }
    let p_o = (t[0][0] + t[1][1]) / n;
    let a1 = (t[1][0] + t[1][1]) / n;
    let b1 = (t[0][1] + t[1][1]) / n;
    let p_e = a1 * b1 + (1.0 - a1) * (1.0 - b1);
    if (1.0 - p_e).abs() < 1e-15 {
        return if p_o == 1.0 { 1.0 } else { 0.0 };
    }
    (p_o - p_e) / (1.0 - p_e)
}

/// Word tokens as (lowercased text, char start, char end): runs of
/// alphanumerics, and each other non-space character alone.
pub fn tokens_oracle(text: &str) -> Vec<(String, usize, usize)> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_alphanumeric() {
            let s = i;
            while i < chars.len() && chars[i].is_alphanumeric() {
                i += 1;
            }
            out.push((chars[s..i].iter().collect::<String>().to_lowercase(), s, i));
        } else {
            out.push((c.to_lowercase().collect(), i, i + 1));
            i += 1;
        }
    }
    out
}

fn occurrences(tokens: &[(String, usize, usize)], phrase: &[String]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    if phrase.is_empty() || phrase.len() > tokens.len() {
        return out;
    }
    for i in 0..=tokens.len() - phrase.len() {
        if (0..phrase.len()).all(|j| tokens[i + j].0 == phrase[j]) {
            out.push((i, i + phrase.len()));
        }
    }
    out
}

/// One expected mention: category, char start, char end, negated.
pub type OracleMention = (FineCategory, usize, usize, bool);

/// Scans every phrase at every position, keeps the longest per category and
/// start, drops those inside an exclusion occurrence, and negates loneliness
/// when a cue ends before it, starts within the window and shares its
/// sentence. Sorted by (start, category name, end).
pub fn match_oracle(note: &Note, lex: &Lexicon, cfg: &MatchConfig) -> Vec<OracleMention> {
    let toks = tokens_oracle(&note.clean_text);
    let excl: Vec<(usize, usize)> = lex.exclusion.iter().flat_map(|p| occurrences(&toks, &p.tokens)).collect();
    let cues: Vec<(usize, usize)> = cfg.negation_cues.iter().flat_map(|p| occurrences(&toks, &p.tokens)).collect();
    let sentence_of = |char_pos: usize| note.sentences.iter().position(|s| s.start <= char_pos && char_pos < s.end);
    let mut out = Vec::new();
    for (cat, phrases) in &lex.inclusion {
        let mut best: Vec<Option<usize>> = vec![None; toks.len()];
        for p in phrases {
            for (s, e) in occurrences(&toks, &p.tokens) {
                if best[s].is_none_or(|b| e > b) {
                    best[s] = Some(e);
                }
            }
        }
        for (s, e) in best.iter().enumerate().filter_map(|(s, e)| e.map(|e| (s, e))) {
            if excl.iter().any(|&(xs, xe)| xs <= s && e <= xe) {
                continue;
            }
            let negated = *cat == FineCategory::Loneliness
                && cues.iter().any(|&(cs, ce)| {
                    ce <= s && s - cs <= cfg.negation_window && sentence_of(toks[cs].1) == sentence_of(toks[s].1)
                });
            out.push((*cat, toks[s].1, toks[e - 1].2, negated));
        }
    }
    out.sort_by(|a, b| (a.1, a.0.name(), a.2).cmp(&(b.1, b.0.name(), b.2)));
    out
}

pub fn cosine_oracle(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

/// Scores every row, sorts by cosine descending then token, keeps `k`.
pub fn most_similar_oracle(query: &[f64], rows: &[(String, Vec<f64>)], k: usize, exclude: &HashSet<String>) -> Vec<(String, f64)> {
    let mut all: Vec<(String, f64)> = rows
        .iter()
        .filter(|(t, _)| !exclude.contains(t))
        .map(|(t, v)| (t.clone(), cosine_oracle(query, v)))
        .collect();
    all.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0)));
    all.truncate(k);
    all
}

/// Component-wise mean of the rows named by `tokens` that exist.
pub fn mean_oracle(tokens: &[String], rows: &[(String, Vec<f64>)], dim: usize) -> Option<Vec<f64>> {
    let found: Vec<&Vec<f64>> = tokens.iter().filter_map(|t| rows.iter().find(|(r, _)| r == t).map(|(_, v)| v)).collect();
    if found.is_empty() {
        return None;
    }
    Some((0..dim).map(|d| found.iter().map(|v| v[d]).sum::<f64>() / found.len() as f64).collect())
}

/// Any-yes aggregation for a single category over chunk answers.
pub fn any_yes_oracle(answers: &[&str]) -> bool {
    answers.contains(&"yes")
}

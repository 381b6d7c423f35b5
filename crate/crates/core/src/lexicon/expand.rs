use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use super::embedding::{lexicon_vector, most_similar, EmbeddingTable};
use super::Lexicon;
use crate::error::LexiconError;
use crate::scalar::Scalar;
use crate::taxonomy::FineCategory;

/// A neighbor proposed for human review.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate<T> {
    pub category: FineCategory,
    pub token: String,
    /// Best cosine over all phrase vectors that proposed the token.
    pub cosine: T,
}

/// One round of embedding-based expansion for a category.
///
/// Builds one vector per phrase, takes the `k` nearest tokens of each,
/// drops tokens already used by the category's phrases and returns the
/// union ordered by best cosine. Nothing is added to the lexicon here.
pub fn expansion_round<T: Scalar>(lex: &Lexicon, category: FineCategory, emb: &EmbeddingTable<T>, k: usize) -> Result<Vec<Candidate<T>>, LexiconError> {
    let phrases = lex.phrases(category);
    let existing: HashSet<String> = phrases.iter().flat_map(|p| p.tokens.iter().cloned()).collect();
    let mut best: BTreeMap<String, T> = BTreeMap::new();
    let mut covered_any = false;
    for phrase in phrases {
        let Ok(query) = lexicon_vector(&phrase.tokens, emb) else {
            continue;
        };
        covered_any = true;
        for n in most_similar(&query, emb, k, &existing) {
            best.entry(n.token)
                .and_modify(|c| {
                    if n.cosine > *c {
                        *c = n.cosine
                    }
                })
                .or_insert(n.cosine);
        }
    }
    if !covered_any {
        return Err(LexiconError::NoEmbeddingCoverage(format!("any {category} phrase")));
    }
    let mut out: Vec<Candidate<T>> = best
        .into_iter()
        .map(|(token, cosine)| Candidate { category, token, cosine })
        .collect();
    out.sort_by(|a, b| b.cosine.partial_cmp(&a.cosine).unwrap_or(std::cmp::Ordering::Equal).then_with(|| a.token.cmp(&b.token)));
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReviewDecision {
    Pending,
    Accept,
    Reject,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReviewRow {
    pub category: FineCategory,
    pub candidate: String,
    pub cosine: f64,
    pub decision: ReviewDecision,
}

/// Review file: `category<TAB>candidate<TAB>cosine<TAB>decision`, decision
/// left blank for the reviewer.
pub fn write_review<T: Scalar>(candidates: &[Candidate<T>]) -> String {
    let mut out = String::from("# category\tcandidate\tcosine\tdecision (accept/reject)\n");
    for c in candidates {
        let _ = writeln!(out, "{}\t{}\t{:.6}\t", c.category.name(), c.token, c.cosine.to_f64().unwrap_or(0.0));
    }
    out
}

pub fn parse_review(content: &str) -> Result<Vec<ReviewRow>, LexiconError> {
    let mut rows = Vec::new();
    for (i, line) in content.lines().enumerate() {
        let line_no = i + 1;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |reason: String| LexiconError::Review { line: line_no, reason };
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() < 3 {
            return Err(bad("expected category, candidate, cosine and decision columns".into()));
        }
        let category: FineCategory = fields[0].parse().map_err(|_| LexiconError::UnknownCategory {
            line: line_no,
            name: fields[0].to_string(),
        })?;
        let cosine: f64 = fields[2].trim().parse().map_err(|_| bad(format!("bad cosine {:?}", fields[2])))?;
        let decision = match fields.get(3).map(|d| d.trim().to_lowercase()).as_deref() {
            None | Some("") => ReviewDecision::Pending,
            Some("accept" | "accepted" | "yes" | "y") => ReviewDecision::Accept,
            Some("reject" | "rejected" | "no" | "n") => ReviewDecision::Reject,
            Some(other) => return Err(bad(format!("unknown decision {other:?}"))),
        };
        rows.push(ReviewRow {
            category,
            candidate: fields[1].trim().to_string(),
            cosine,
            decision,
        });
    }
    Ok(rows)
}

/// Adds accepted candidates to the lexicon; returns how many were new.
pub fn merge_review(lex: &mut Lexicon, rows: &[ReviewRow]) -> Result<usize, LexiconError> {
    let mut added = 0;
    for row in rows.iter().filter(|r| r.decision == ReviewDecision::Accept) {
        if lex.add_inclusion(row.category, &row.candidate)? {
            added += 1;
        }
    }
    Ok(added)
}

use std::collections::BTreeMap;

use serde::Serialize;

use super::metrics::{Confusion, Prf};
use crate::error::EvalError;
use crate::labels::DocumentLabels;
use crate::scalar::Scalar;
use crate::taxonomy::{CoarseCategory, FineCategory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    Fine,
    Coarse,
}

impl Level {
    pub fn name(self) -> &'static str {
        match self {
            Level::Fine => "fine",
            Level::Coarse => "coarse",
        }
    }

    /// Labels scored at this level, in report order.
    pub fn labels(self) -> Vec<LabelKey> {
        match self {
            Level::Fine => FineCategory::MAIN.into_iter().map(LabelKey::Fine).collect(),
            Level::Coarse => CoarseCategory::ALL.into_iter().map(LabelKey::Coarse).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelKey {
    Fine(FineCategory),
    Coarse(CoarseCategory),
}

impl LabelKey {
    pub fn name(self) -> &'static str {
        match self {
            LabelKey::Fine(c) => c.name(),
            LabelKey::Coarse(c) => c.name(),
        }
    }

    pub fn present(self, labels: &DocumentLabels) -> bool {
        match self {
            LabelKey::Fine(c) => labels.has_fine(c),
            LabelKey::Coarse(c) => labels.has_coarse(c),
        }
    }
}

/// Ids present in both maps, or the symmetric difference as an error.
pub(crate) fn join_ids<'a, V, W>(gold: &'a BTreeMap<String, V>, pred: &BTreeMap<String, W>) -> Result<Vec<&'a String>, EvalError> {
    let missing_in_pred: Vec<String> = gold.keys().filter(|k| !pred.contains_key(*k)).cloned().collect();
    let missing_in_gold: Vec<String> = pred.keys().filter(|k| !gold.contains_key(*k)).cloned().collect();
    if !missing_in_pred.is_empty() || !missing_in_gold.is_empty() {
        return Err(EvalError::IdMismatch {
            missing_in_pred,
            missing_in_gold,
        });
    }
    Ok(gold.keys().collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CategoryRow<T> {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub side: Option<CoarseCategory>,
    pub confusion: Confusion,
    pub support: usize,
    pub scores: Prf<T>,
    /// Rows without gold positives are shown but left out of the macro mean.
    pub in_macro: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport<T> {
    pub level: Level,
    pub documents: usize,
    pub rows: Vec<CategoryRow<T>>,
    #[serde(rename = "macro")]
    pub macro_avg: Prf<T>,
    /// Per-side macro over fine rows; empty at the coarse level.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub side_macro: BTreeMap<CoarseCategory, Prf<T>>,
    pub skipped: Vec<String>,
}

/// Per-label precision, recall and F1 plus the macro mean over labels with
/// at least one gold positive.
pub fn macro_report<T: Scalar>(
    gold: &BTreeMap<String, DocumentLabels>,
    pred: &BTreeMap<String, DocumentLabels>,
    level: Level,
) -> Result<EvalReport<T>, EvalError> {
    let ids = join_ids(gold, pred)?;
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for key in level.labels() {
        let mut c = Confusion::default();
        for id in &ids {
            c.add(key.present(&gold[*id]), key.present(&pred[*id]));
        }
        let in_macro = c.gold_positives() > 0;
        if !in_macro {
            skipped.push(key.name().to_string());
        }
        rows.push(CategoryRow {
            label: key.name().to_string(),
            side: match key {
                LabelKey::Fine(f) => Some(f.side()),
                LabelKey::Coarse(_) => None,
            },
            confusion: c,
            support: c.gold_positives(),
            scores: c.scores(),
            in_macro,
        });
    }
    let macro_avg = Prf::mean(rows.iter().filter(|r| r.in_macro).map(|r| &r.scores));
    let mut side_macro = BTreeMap::new();
    if level == Level::Fine {
        for side in CoarseCategory::ALL {
            let m = Prf::mean(rows.iter().filter(|r| r.in_macro && r.side == Some(side)).map(|r| &r.scores));
            side_macro.insert(side, m);
        }
    }
    Ok(EvalReport {
        level,
        documents: ids.len(),
        rows,
        macro_avg,
        side_macro,
        skipped,
    })
}

fn f(x: impl Scalar) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

impl<T: Scalar> EvalReport<T> {
    pub fn render_text(&self) -> String {
        let mut out = format!("level: {}  documents: {}\n", self.level.name(), self.documents);
        out += &format!("{:<26} {:>7} {:>7} {:>7} {:>8}\n", "label", "P", "R", "F", "support");
        let line = |name: &str, s: &Prf<T>, support: String| {
            format!("{:<26} {:>7.4} {:>7.4} {:>7.4} {:>8}\n", name, f(s.precision), f(s.recall), f(s.f), support)
        };
        for r in &self.rows {
            let mark = if r.in_macro { String::new() } else { "*".into() };
            out += &line(&format!("{}{mark}", r.label), &r.scores, r.support.to_string());
        }
        for (side, s) in &self.side_macro {
            out += &line(&format!("macro ({side})"), s, String::new());
        }
        out += &line("macro", &self.macro_avg, String::new());
        if !self.skipped.is_empty() {
            out += "* no gold positives, excluded from macro\n";
        }
        out
    }
}

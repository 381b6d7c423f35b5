use std::collections::BTreeMap;

use serde::Serialize;

use super::report::{join_ids, Level};
use crate::error::EvalError;
use crate::labels::DocumentLabels;
use crate::scalar::Scalar;

/// Cohen's kappa for two binary label vectors.
///
/// When chance agreement is total (both raters constant), kappa is 1 for
/// identical vectors and 0 otherwise.
pub fn cohens_kappa<T: Scalar>(labels_a: &[bool], labels_b: &[bool]) -> Result<T, EvalError> {
    if labels_a.len() != labels_b.len() {
        return Err(EvalError::LengthMismatch {
            left: labels_a.len(),
            right: labels_b.len(),
        });
    }
    let n = labels_a.len();
    if n == 0 {
        return Err(EvalError::Empty);
    }
    let agree = labels_a.iter().zip(labels_b).filter(|(a, b)| a == b).count();
    let a_yes = labels_a.iter().filter(|x| **x).count();
    let b_yes = labels_b.iter().filter(|x| **x).count();
    let chance = a_yes * b_yes + (n - a_yes) * (n - b_yes);
    if chance == n * n {
        return Ok(if agree == n { T::one() } else { T::zero() });
    }
    let nf = T::from_count(n);
    let p_o = T::from_count(agree) / nf;
    let p_e = T::from_count(chance) / (nf * nf);
    Ok((p_o - p_e) / (T::one() - p_e))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabelKappa<T> {
    pub label: String,
    pub kappa: T,
    /// False when neither annotator used the label; such labels are left out
    /// of the headline mean.
    pub included: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelAgreement<T> {
    pub level: Level,
    pub labels: Vec<LabelKappa<T>>,
    /// Mean over included labels.
    pub headline: T,
}

/// Inter-annotator agreement at both levels, joined by note id.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgreementReport<T> {
    pub documents: usize,
    pub fine: LevelAgreement<T>,
    pub coarse: LevelAgreement<T>,
    pub pooling: &'static str,
}

fn level_agreement<T: Scalar>(level: Level, ids: &[&String], a: &BTreeMap<String, DocumentLabels>, b: &BTreeMap<String, DocumentLabels>) -> LevelAgreement<T> {
    let mut labels = Vec::new();
    for key in level.labels() {
        let va: Vec<bool> = ids.iter().map(|id| key.present(&a[*id])).collect();
        let vb: Vec<bool> = ids.iter().map(|id| key.present(&b[*id])).collect();
        let included = va.iter().chain(&vb).any(|x| *x);
        let kappa = cohens_kappa(&va, &vb).unwrap_or_else(|_| T::zero());
        labels.push(LabelKappa {
            label: key.name().to_string(),
            kappa,
            included,
        });
    }
    let used: Vec<T> = labels.iter().filter(|l| l.included).map(|l| l.kappa).collect();
    let headline = if used.is_empty() {
        T::zero()
    } else {
        used.iter().fold(T::zero(), |acc, k| acc + *k) / T::from_count(used.len())
    };
    LevelAgreement { level, labels, headline }
}

pub fn agreement_report<T: Scalar>(a: &BTreeMap<String, DocumentLabels>, b: &BTreeMap<String, DocumentLabels>) -> Result<AgreementReport<T>, EvalError> {
    let ids = join_ids(a, b)?;
    if ids.is_empty() {
        return Err(EvalError::Empty);
    }
    Ok(AgreementReport {
        documents: ids.len(),
        fine: level_agreement(Level::Fine, &ids, a, b),
        coarse: level_agreement(Level::Coarse, &ids, a, b),
        pooling: "headline = unweighted mean of per-label binary kappa over labels used by either annotator",
    })
}

impl<T: Scalar> AgreementReport<T> {
    pub fn render_text(&self) -> String {
        let mut out = format!("documents: {}\n", self.documents);
        for lvl in [&self.fine, &self.coarse] {
            out += &format!("{} κ={:.4}\n", lvl.level.name(), lvl.headline.to_f64().unwrap_or(f64::NAN));
            for l in &lvl.labels {
                let note = if l.included { "" } else { "  (unused, excluded)" };
                out += &format!("  {:<26} {:>7.4}{note}\n", l.label, l.kappa.to_f64().unwrap_or(f64::NAN));
            }
        }
        out += &format!("note: {}\n", self.pooling);
        out
    }
}

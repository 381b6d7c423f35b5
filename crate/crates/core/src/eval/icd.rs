use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::EvalError;
use crate::labels::DocumentLabels;
use crate::taxonomy::CoarseCategory;

/// ICD-10 and ICD-9 codes for social circumstances indicating isolation.
pub const DEFAULT_SI_CODES: [&str; 5] = ["Z60.2", "Z60.4", "Z60.9", "V60.3", "V62.4"];
/// Family-related codes listed alongside the defaults; off unless requested.
pub const OPTIONAL_FAMILY_CODES: [&str; 2] = ["Z63.2", "Z63.3"];

fn normalize(code: &str) -> String {
    code.trim().to_ascii_uppercase()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IcdCodeSet {
    codes: BTreeSet<String>,
}

impl Default for IcdCodeSet {
    fn default() -> Self {
        Self::new(DEFAULT_SI_CODES)
    }
}

impl IcdCodeSet {
    pub fn new<I, S>(codes: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        IcdCodeSet {
            codes: codes.into_iter().map(|c| normalize(c.as_ref())).filter(|c| !c.is_empty()).collect(),
        }
    }

    pub fn with_family_codes(mut self) -> Self {
        self.codes.extend(OPTIONAL_FAMILY_CODES.iter().map(|c| c.to_string()));
        self
    }

    /// Case-insensitive, exact after trimming.
    pub fn contains(&self, code: &str) -> bool {
        self.codes.contains(&normalize(code))
    }

    pub fn codes(&self) -> impl Iterator<Item = &str> {
        self.codes.iter().map(String::as_str)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IcdComparison {
    /// Gold notes whose visit carries at least one SI code.
    pub coded: usize,
    pub gold_si: usize,
    pub overlap: usize,
}

/// Compares structured SI codes with gold SI labels over the gold notes.
pub fn icd_comparison(
    visits: &BTreeMap<String, Vec<String>>,
    gold: &BTreeMap<String, DocumentLabels>,
    codes: &IcdCodeSet,
) -> Result<IcdComparison, EvalError> {
    let mut out = IcdComparison { coded: 0, gold_si: 0, overlap: 0 };
    for (id, labels) in gold {
        let visit = visits.get(id).ok_or_else(|| EvalError::MissingVisit(id.clone()))?;
        let coded = visit.iter().any(|c| codes.contains(c));
        let si = labels.has_coarse(CoarseCategory::SI);
        out.coded += coded as usize;
        out.gold_si += si as usize;
        out.overlap += (coded && si) as usize;
    }
    Ok(out)
}

//! Stratified selection of notes for annotation, one note per patient.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::SampleError;

/// One row of the corpus index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexEntry {
    pub note_id: String,
    pub person_id: String,
    pub ss_hit: bool,
    pub si_hit: bool,
    pub has_template: bool,
}

/// Strata in fill priority order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stratum {
    Si,
    Ss,
    Template,
    Random,
}

impl Stratum {
    pub const PRIORITY: [Stratum; 4] = [Stratum::Si, Stratum::Ss, Stratum::Template, Stratum::Random];

    pub fn name(self) -> &'static str {
        match self {
            Stratum::Si => "si",
            Stratum::Ss => "ss",
            Stratum::Template => "template",
            Stratum::Random => "random",
        }
    }

    fn admits(self, e: &IndexEntry) -> bool {
        match self {
            Stratum::Si => e.si_hit,
            Stratum::Ss => e.ss_hit,
            Stratum::Template => e.has_template,
            Stratum::Random => true,
        }
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stratum {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Stratum::PRIORITY
            .into_iter()
            .find(|x| x.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown stratum {s:?} (expected si, ss, template or random)"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Selected {
    pub note_id: String,
    pub person_id: String,
    pub stratum: Stratum,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Shortfall {
    pub requested: usize,
    pub selected: usize,
    pub missing: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampleResult {
    pub seed: u64,
    /// In selection order: stratum by stratum.
    pub selected: Vec<Selected>,
    /// Only strata that could not be filled.
    pub shortfalls: BTreeMap<Stratum, Shortfall>,
}

impl SampleResult {
    pub fn note_ids(&self) -> Vec<&str> {
        self.selected.iter().map(|s| s.note_id.as_str()).collect()
    }
}

/// Fills strata in priority order (SI, SS, template, random), drawing
/// uniformly within each stratum. A patient contributes at most one note
/// across the whole sample; unfilled quota is reported, never taken from
/// another stratum.
pub fn stratified_sample(index: &[IndexEntry], quotas: &BTreeMap<Stratum, usize>, seed: u64) -> Result<SampleResult, SampleError> {
    let mut seen = HashSet::new();
    for e in index {
        if !seen.insert(e.note_id.as_str()) {
            return Err(SampleError::DuplicateNoteId(e.note_id.clone()));
        }
    }
    // Independent of input row order.
    let mut entries: Vec<&IndexEntry> = index.iter().collect();
    entries.sort_by(|a, b| a.note_id.cmp(&b.note_id));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut used_persons: HashSet<&str> = HashSet::new();
    let mut used_notes: HashSet<&str> = HashSet::new();
    let mut selected = Vec::new();
    let mut shortfalls = BTreeMap::new();

    for stratum in Stratum::PRIORITY {
        let quota = quotas.get(&stratum).copied().unwrap_or(0);
        if quota == 0 {
            continue;
        }
        let mut pool: Vec<&IndexEntry> = entries
            .iter()
            .copied()
            .filter(|e| stratum.admits(e) && !used_notes.contains(e.note_id.as_str()) && !used_persons.contains(e.person_id.as_str()))
            .collect();
        pool.shuffle(&mut rng);
        let mut taken = 0;
        for e in pool {
            if taken == quota {
                break;
            }
            if !used_persons.insert(e.person_id.as_str()) {
                continue;
            }
            used_notes.insert(e.note_id.as_str());
            selected.push(Selected {
                note_id: e.note_id.clone(),
                person_id: e.person_id.clone(),
                stratum,
            });
            taken += 1;
        }
        if taken < quota {
            shortfalls.insert(
                stratum,
                Shortfall {
                    requested: quota,
                    selected: taken,
                    missing: quota - taken,
                },
            );
        }
    }
    Ok(SampleResult { seed, selected, shortfalls })
}

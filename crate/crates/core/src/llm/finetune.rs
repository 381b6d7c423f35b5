use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::prompt::{build_prompt, Answer};
use crate::error::LlmError;
use crate::taxonomy::FineCategory;

/// Input line of a curated example file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuratedExample {
    pub category: FineCategory,
    pub context: String,
    pub answer: String,
}

/// Output line of the fine-tuning dataset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinetuneRecord {
    pub input: String,
    pub target: String,
    pub category: FineCategory,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AnswerCounts {
    pub yes: usize,
    pub no: usize,
    pub not_relevant: usize,
}

impl AnswerCounts {
    fn bump(&mut self, a: Answer) {
        match a {
            Answer::Yes => self.yes += 1,
            Answer::No => self.no += 1,
            Answer::NotRelevant => self.not_relevant += 1,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct FinetuneDataset {
    pub records: Vec<FinetuneRecord>,
    pub counts: BTreeMap<FineCategory, AnswerCounts>,
    pub warnings: Vec<String>,
}

impl FinetuneDataset {
    pub fn to_jsonl(&self) -> String {
        self.records
            .iter()
            .map(|r| serde_json::to_string(r).expect("record serializes") + "\n")
            .collect()
    }
}

/// Turns curated `(category, context, answer)` JSONL lines into prompt /
/// target pairs. Categories lacking any of the three answer classes are
/// reported as warnings.
pub fn emit_finetune_dataset(examples_jsonl: &str) -> Result<FinetuneDataset, LlmError> {
    let mut ds = FinetuneDataset::default();
    for (i, line) in examples_jsonl.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let bad = |reason: String| LlmError::Examples { line: i + 1, reason };
        let ex: CuratedExample = serde_json::from_str(line).map_err(|e| bad(e.to_string()))?;
        let answer: Answer = ex.answer.parse().map_err(|e: LlmError| bad(e.to_string()))?;
        let prompt = build_prompt(ex.category, &ex.context).map_err(|e| bad(e.to_string()))?;
        ds.records.push(FinetuneRecord {
            input: prompt.serialize(),
            target: answer.target().to_string(),
            category: ex.category,
        });
        ds.counts.entry(ex.category).or_default().bump(answer);
    }
    for c in FineCategory::MAIN {
        let counts = ds.counts.get(&c).cloned().unwrap_or_default();
        let missing: Vec<&str> = [(counts.yes, "yes"), (counts.no, "no"), (counts.not_relevant, "not relevant")]
            .into_iter()
            .filter(|(n, _)| *n == 0)
            .map(|(_, name)| name)
            .collect();
        if !missing.is_empty() {
            ds.warnings.push(format!("{c}: no examples for {}", missing.join(", ")));
        }
    }
    Ok(ds)
}

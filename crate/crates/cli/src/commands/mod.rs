mod corpus;
mod evaluate;
mod extract;
mod lexicon;
mod sample;

use std::path::Path;

use sociolex::corpus::{load_notes_dir, Note, Preprocessor};
use sociolex::records::{parse_label_records, LabelRecord};
use std::collections::BTreeMap;

use crate::error::CliError;
use crate::read;

pub(crate) use corpus::{emit_finetune, gold, ingest};
pub(crate) use evaluate::evaluate;
pub(crate) use extract::extract;
pub(crate) use lexicon::{expand_lexicon, merge_lexicon};
pub(crate) use sample::sample;

/// Notes from a directory of `.txt` files or a JSONL store written by `ingest`.
pub(crate) fn load_notes(input: &Path, pre: &Preprocessor) -> Result<Vec<Note>, CliError> {
    if input.is_dir() {
        return Ok(load_notes_dir(input, pre)?);
    }
    let content = read(input)?;
    content
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str::<Note>(l).map_err(|e| CliError::input(input, format!("line {}: {e}", i + 1))))
        .collect()
}

pub(crate) fn load_records(path: &Path) -> Result<BTreeMap<String, LabelRecord>, CliError> {
    parse_label_records(&read(path)?).map_err(|source| CliError::Records {
        path: path.to_path_buf(),
        source,
    })
}

pub(crate) fn jsonl<T: serde::Serialize>(items: &[T]) -> String {
    items
        .iter()
        .map(|x| serde_json::to_string(x).expect("serializable record") + "\n")
        .collect()
}

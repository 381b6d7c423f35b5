use std::collections::BTreeMap;
use std::path::Path;

use sociolex::sampler::{stratified_sample, IndexEntry, Stratum};

use crate::args::SampleArgs;
use crate::error::CliError;
use crate::{write_output, Context};

fn flag(value: &str) -> Option<bool> {
    match value.trim().to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "y" => Some(true),
        "0" | "false" | "no" | "n" | "" => Some(false),
        _ => None,
    }
}

fn load_index(path: &Path) -> Result<Vec<IndexEntry>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::input(path, e.to_string()))?;
    let headers = reader.headers().map_err(|e| CliError::input(path, e.to_string()))?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::input(path, format!("missing column {name}")))
    };
    let [note, person, ss, si, tpl] = [col("note_id")?, col("person_id")?, col("ss_hit")?, col("si_hit")?, col("has_template")?];
    let mut entries = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row = row.map_err(|e| CliError::input(path, e.to_string()))?;
        let field = |c: usize| row.get(c).unwrap_or_default();
        let bool_at = |c: usize| {
            flag(field(c)).ok_or_else(|| CliError::input(path, format!("row {}: {:?} is not a boolean", i + 2, field(c))))
        };
        entries.push(IndexEntry {
            note_id: field(note).to_string(),
            person_id: field(person).to_string(),
            ss_hit: bool_at(ss)?,
            si_hit: bool_at(si)?,
            has_template: bool_at(tpl)?,
        });
    }
    Ok(entries)
}

fn parse_quotas(specs: &[String]) -> Result<BTreeMap<Stratum, usize>, CliError> {
    let mut quotas = BTreeMap::new();
    for spec in specs {
        let (name, n) = spec
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("quota {spec:?} is not STRATUM=N")))?;
        let stratum: Stratum = name.parse().map_err(CliError::Usage)?;
        let n: usize = n.trim().parse().map_err(|_| CliError::Usage(format!("quota {spec:?}: {n:?} is not a count")))?;
        quotas.insert(stratum, n);
    }
    Ok(quotas)
}

pub(crate) fn sample(ctx: &Context, args: SampleArgs) -> Result<(), CliError> {
    let quotas = parse_quotas(&args.quotas)?;
    let seed = args.seed.or(ctx.config.seed).unwrap_or(0);
    let result = stratified_sample(&load_index(&args.index)?, &quotas, seed)?;
    for (stratum, s) in &result.shortfalls {
        log::warn!("stratum {stratum}: {} of {} selected ({} short)", s.selected, s.requested, s.missing);
    }
    let ids: String = result.note_ids().iter().map(|id| format!("{id}\n")).collect();
    write_output(args.output.as_deref(), &ids)?;
    if let Some(path) = &args.report {
        write_output(Some(path), &(serde_json::to_string_pretty(&result).expect("report serializes") + "\n"))?;
    }
    Ok(())
}

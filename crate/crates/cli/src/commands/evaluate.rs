use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use sociolex::eval::{icd_comparison, macro_report, IcdCodeSet, IcdComparison, Level};
use sociolex::records::label_map;
use sociolex::EvalReportF64;

use super::load_records;
use crate::args::{EvaluateArgs, LevelArg};
use crate::error::CliError;
use crate::{write_output, Context};

#[derive(Serialize)]
struct Report {
    documents: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    fine: Option<EvalReportF64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    coarse: Option<EvalReportF64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    icd: Option<IcdComparison>,
}

/// `note_id,code` rows with a header; a row with an empty code records a
/// visit without codes.
fn load_visits(path: &Path) -> Result<BTreeMap<String, Vec<String>>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(|e| CliError::input(path, e.to_string()))?;
    let mut visits: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for row in reader.records() {
        let row = row.map_err(|e| CliError::input(path, e.to_string()))?;
        let note = row.get(0).unwrap_or_default();
        if note.is_empty() {
            continue;
        }
        let codes = visits.entry(note.to_string()).or_default();
        if let Some(code) = row.get(1).filter(|c| !c.is_empty()) {
            codes.push(code.to_string());
        }
    }
    Ok(visits)
}

pub(crate) fn evaluate(_ctx: &Context, args: EvaluateArgs) -> Result<(), CliError> {
    let gold = label_map(&load_records(&args.gold)?);
    let pred = label_map(&load_records(&args.pred)?);
    let want = |l: LevelArg| args.level == l || args.level == LevelArg::Both;
    let fine = want(LevelArg::Fine).then(|| macro_report::<f64>(&gold, &pred, Level::Fine)).transpose()?;
    let coarse = want(LevelArg::Coarse).then(|| macro_report::<f64>(&gold, &pred, Level::Coarse)).transpose()?;
    let icd = match &args.icd {
        Some(path) => {
            let codes = if args.family_codes {
                IcdCodeSet::default().with_family_codes()
            } else {
                IcdCodeSet::default()
            };
            Some(icd_comparison(&load_visits(path)?, &gold, &codes)?)
        }
        None => None,
    };

    let mut text = String::new();
    for r in fine.iter().chain(&coarse) {
        text += &r.render_text();
        text.push('\n');
    }
    if let Some(c) = &icd {
        text += &format!(
            "icd: coded visits {}  gold SI notes {}  overlap {}\n",
            c.coded, c.gold_si, c.overlap
        );
    }
    write_output(None, &text)?;

    let report = Report {
        documents: gold.len(),
        fine,
        coarse,
        icd,
    };
    if let Some(path) = &args.json {
        write_output(Some(path), &(serde_json::to_string_pretty(&report).expect("report serializes") + "\n"))?;
    }

    if let Some(threshold) = args.min_f {
        let below: Vec<String> = report
            .fine
            .iter()
            .chain(&report.coarse)
            .flat_map(|r| r.rows.iter().filter(|row| row.in_macro && row.scores.f < threshold).map(move |row| format!("{}:{}", r.level.name(), row.label)))
            .collect();
        if !below.is_empty() {
            return Err(CliError::BelowThreshold {
                threshold,
                count: below.len(),
                labels: below.join(", "),
            });
        }
    }
    Ok(())
}

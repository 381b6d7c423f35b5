use std::collections::BTreeMap;

use sociolex::brat::{load_gold_dir, GoldDocument};
use sociolex::eval::agreement_report;
use sociolex::llm::emit_finetune_dataset;
use sociolex::records::LabelRecord;
use sociolex::DocumentLabels;

use super::jsonl;
use crate::args::{FinetuneArgs, GoldArgs, IngestArgs};
use crate::error::CliError;
use crate::{read, write_output, Context};

pub(crate) fn ingest(ctx: &Context, args: IngestArgs) -> Result<(), CliError> {
    let pre = ctx.preprocessor()?;
    let notes = sociolex::corpus::load_notes_dir(&args.input, &pre)?;
    log::info!("ingested {} notes", notes.len());
    write_output(args.output.as_deref(), &jsonl(&notes))
}

fn gold_records(docs: &[GoldDocument]) -> Vec<LabelRecord> {
    docs.iter()
        .map(|d| LabelRecord::new(&d.note.note_id, &d.note.person_id, &d.doc_labels).with_mentions(&d.mentions))
        .collect()
}

fn load_gold(ctx: &Context, dir: &std::path::Path) -> Result<Vec<GoldDocument>, CliError> {
    let (docs, warnings) = load_gold_dir(dir, &ctx.preprocessor()?, &ctx.tag_map()?)?;
    for w in warnings {
        log::warn!("{w}");
    }
    Ok(docs)
}

pub(crate) fn gold(ctx: &Context, args: GoldArgs) -> Result<(), CliError> {
    if let Some(dirs) = &args.iaa {
        let maps = dirs
            .iter()
            .map(|d| {
                let docs = load_gold(ctx, d)?;
                Ok(docs
                    .into_iter()
                    .map(|g| (g.note.note_id, g.doc_labels))
                    .collect::<BTreeMap<String, DocumentLabels>>())
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let report = agreement_report::<f64>(&maps[0], &maps[1])?;
        let text = if args.json {
            serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
        } else {
            report.render_text()
        };
        return write_output(args.output.as_deref(), &text);
    }
    let input = args.input.as_deref().ok_or_else(|| CliError::Usage("gold needs a directory or --iaa".into()))?;
    let docs = load_gold(ctx, input)?;
    write_output(args.output.as_deref(), &jsonl(&gold_records(&docs)))
}

pub(crate) fn emit_finetune(_ctx: &Context, args: FinetuneArgs) -> Result<(), CliError> {
    let ds = emit_finetune_dataset(&read(&args.examples)?)?;
    for w in &ds.warnings {
        log::warn!("{w}");
    }
    write_output(args.output.as_deref(), &ds.to_jsonl())
}

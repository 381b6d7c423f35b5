use std::collections::BTreeSet;
use std::path::Path;
use std::time::Duration;

use rayon::prelude::*;
use sociolex::brat::write_standoff;
use sociolex::corpus::Note;
use sociolex::llm::{classify_note, AnswerBackend, InferenceEndpoint, ScriptedBackend, DEFAULT_TOKEN_BUDGET};
use sociolex::records::LabelRecord;
use sociolex::{derive_document_labels, EntityMention, FineCategory, RuleMatcher};

use super::{jsonl, load_notes};
use crate::args::{Engine, ExtractArgs};
use crate::error::CliError;
use crate::{write_output, Context};

fn pool(jobs: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {jobs} worker threads: {e}")))
}

pub(crate) fn extract(ctx: &Context, args: ExtractArgs) -> Result<(), CliError> {
    let notes = load_notes(&args.input, &ctx.preprocessor()?)?;
    let jobs = args
        .jobs
        .or(ctx.config.jobs)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let pool = pool(jobs)?;
    let records = match args.engine {
        Engine::Rbs => extract_rbs(ctx, &args, &notes, &pool)?,
        Engine::Llm => extract_llm(ctx, &args, &notes, &pool)?,
    };
    write_output(args.output.as_deref(), &jsonl(&records))
}

fn extract_rbs(ctx: &Context, args: &ExtractArgs, notes: &[Note], pool: &rayon::ThreadPool) -> Result<Vec<LabelRecord>, CliError> {
    let (lex, _) = ctx.lexicon()?;
    let cfg = ctx.match_config(&lex)?;
    let matcher = RuleMatcher::new(&lex, &cfg);
    // Collecting an indexed parallel iterator keeps input order.
    let matched: Vec<Vec<EntityMention>> = pool.install(|| notes.par_iter().map(|n| matcher.match_note(n)).collect());
    if let Some(dir) = &args.ann_dir {
        write_audit(dir, notes, &matched)?;
    }
    Ok(notes
        .iter()
        .zip(&matched)
        .map(|(note, mentions)| {
            let labels = derive_document_labels(mentions.iter().filter(|m| m.is_effective()).map(|m| m.category));
            LabelRecord::new(&note.note_id, &note.person_id, &labels).with_mentions(mentions)
        })
        .collect())
}

fn write_audit(dir: &Path, notes: &[Note], matched: &[Vec<EntityMention>]) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    for (note, mentions) in notes.iter().zip(matched) {
        let txt = dir.join(format!("{}.txt", note.note_id));
        std::fs::write(&txt, &note.raw_text).map_err(|e| CliError::io(&txt, e))?;
        let ann = dir.join(format!("{}.ann", note.note_id));
        std::fs::write(&ann, write_standoff(mentions)).map_err(|e| CliError::io(&ann, e))?;
    }
    Ok(())
}

fn categories(args: &ExtractArgs, ctx: &Context) -> Result<BTreeSet<FineCategory>, CliError> {
    let names = args.categories.clone().or_else(|| ctx.config.llm.categories.clone());
    let Some(names) = names else {
        return Ok(FineCategory::MAIN.into_iter().collect());
    };
    names
        .iter()
        .map(|n| {
            let c: FineCategory = n.parse().map_err(|_| CliError::Usage(format!("unknown category {n:?}")))?;
            if c.is_probable() {
                return Err(CliError::Usage(format!("{c} cannot be asked about")));
            }
            Ok(c)
        })
        .collect()
}

fn extract_llm(ctx: &Context, args: &ExtractArgs, notes: &[Note], pool: &rayon::ThreadPool) -> Result<Vec<LabelRecord>, CliError> {
    if args.ann_dir.is_some() {
        return Err(CliError::Usage("--ann-dir is only available with --engine rbs".into()));
    }
    let llm = &ctx.config.llm;
    let cats = categories(args, ctx)?;
    let budget = args.budget.or(llm.budget).unwrap_or(DEFAULT_TOKEN_BUDGET);
    let mut endpoint = InferenceEndpoint::new(String::new());
    if let Some(n) = args.max_concurrency.or(llm.max_concurrency) {
        endpoint.max_concurrency = n.max(1);
    }
    if let Some(t) = args.timeout.or(llm.timeout) {
        endpoint.timeout = Duration::from_secs(t);
    }
    if let Some(r) = args.max_retries.or(llm.max_retries) {
        endpoint.max_retries = r;
    }
    let backend: Box<dyn AnswerBackend> = if let Some(script) = &args.stub_script {
        Box::new(ScriptedBackend::load(script)?)
    } else {
        endpoint.base_url = args
            .endpoint
            .clone()
            .or_else(|| llm.endpoint.clone())
            .ok_or_else(|| CliError::Usage("--engine llm needs --endpoint (or --stub-script)".into()))?;
        Box::new(endpoint.client())
    };
    let backend = backend.as_ref();
    let max_concurrency = endpoint.max_concurrency;

    let results = pool.install(|| {
        notes
            .par_iter()
            .map(|note| classify_note(note, &cats, backend, budget, max_concurrency))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let mut incomplete = 0;
    let records = notes
        .iter()
        .zip(results)
        .map(|(note, out)| {
            let mut rec = LabelRecord::new(&note.note_id, &note.person_id, &out.labels);
            if out.incomplete() {
                incomplete += 1;
                for f in &out.failures {
                    log::warn!("{} {} chunk {}: {}", note.note_id, f.category, f.chunk_index, f.error);
                }
            }
            rec.incomplete = out.incomplete();
            rec.failures = out.failures;
            if args.with_answers {
                rec.answers = out.answers;
            }
            rec
        })
        .collect();
    if incomplete > 0 {
        log::warn!("{incomplete} notes have incomplete labels");
    }
    Ok(records)
}

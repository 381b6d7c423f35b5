use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "sociolex", about = "Social support / social isolation extraction from clinical notes", disable_version_flag = true)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Print toolkit and lexicon versions.
    #[arg(long, short = 'V', global = true)]
    pub version: bool,

    /// TOML config file.
    #[arg(long, global = true, env = "SDOH_CONFIG")]
    pub config: Option<PathBuf>,

    /// Report errors as JSON on stderr.
    #[arg(long, global = true)]
    pub json_errors: bool,

    /// Template regexes removed from notes before anything else, one per line.
    #[arg(long, global = true, env = "SDOH_TEMPLATES")]
    pub templates: Option<PathBuf>,

    /// Inclusion lexicon TSV (`category<TAB>phrase`).
    #[arg(long, global = true, env = "SDOH_LEXICON")]
    pub lexicon: Option<PathBuf>,

    /// Exclusion phrases, one per line. Defaults to the built-in list.
    #[arg(long, global = true, env = "SDOH_EXCLUSION")]
    pub exclusion: Option<PathBuf>,

    /// Negation cues for loneliness, one per line.
    #[arg(long, global = true, env = "SDOH_NEGATION_CUES")]
    pub negation_cues: Option<PathBuf>,

    /// Tokens before a loneliness match searched for a negation cue.
    #[arg(long, global = true, env = "SDOH_NEGATION_WINDOW")]
    pub negation_window: Option<usize>,

    /// BRAT tag to category map (`tag<TAB>category`).
    #[arg(long, global = true, env = "SDOH_TAG_MAP")]
    pub tag_map: Option<PathBuf>,

    /// More log output (repeatable).
    #[arg(long, short = 'v', global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load .txt notes, remove templates and write a JSONL note store.
    Ingest(IngestArgs),
    /// Gold labels from BRAT .txt/.ann pairs, or annotator agreement.
    Gold(GoldArgs),
    /// Predict labels with the rule-based matcher or the LLM service.
    Extract(ExtractArgs),
    /// Propose lexicon candidates from word embeddings for review.
    ExpandLexicon(ExpandArgs),
    /// Fold accepted review rows into the inclusion lexicon.
    MergeLexicon(MergeArgs),
    /// Score predicted labels against gold labels.
    Evaluate(EvaluateArgs),
    /// Stratified selection of notes for annotation.
    Sample(SampleArgs),
    /// Turn curated examples into a fine-tuning dataset.
    EmitFinetune(FinetuneArgs),
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Directory of .txt notes.
    pub input: PathBuf,
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GoldArgs {
    /// Directory of BRAT .txt/.ann pairs.
    #[arg(required_unless_present = "iaa")]
    pub input: Option<PathBuf>,
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
    /// Two annotators' directories; prints Cohen's kappa.
    #[arg(long, num_args = 2, value_names = ["DIR_A", "DIR_B"], conflicts_with = "input")]
    pub iaa: Option<Vec<PathBuf>>,
    /// Agreement report as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Rbs,
    Llm,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    /// Directory of .txt notes or a JSONL note store from `ingest`.
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "rbs")]
    pub engine: Engine,
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
    /// Write .txt/.ann audit pairs of the matched mentions (rbs only).
    #[arg(long)]
    pub ann_dir: Option<PathBuf>,
    /// Notes processed in parallel.
    #[arg(long, env = "SDOH_JOBS")]
    pub jobs: Option<usize>,
    /// Inference base URL; `{category}` selects a per-category model.
    #[arg(long, env = "SDOH_ENDPOINT")]
    pub endpoint: Option<String>,
    /// Answer from a JSONL script instead of calling a service.
    #[arg(long, conflicts_with = "endpoint")]
    pub stub_script: Option<PathBuf>,
    /// Whitespace-token budget per prompt.
    #[arg(long, env = "SDOH_BUDGET")]
    pub budget: Option<usize>,
    /// Comma-separated categories to ask about (default: all nine).
    #[arg(long, value_delimiter = ',', env = "SDOH_CATEGORIES")]
    pub categories: Option<Vec<String>>,
    /// Requests in flight per note.
    #[arg(long, env = "SDOH_MAX_CONCURRENCY")]
    pub max_concurrency: Option<usize>,
    /// Request timeout in seconds.
    #[arg(long, env = "SDOH_TIMEOUT")]
    pub timeout: Option<u64>,
    #[arg(long, env = "SDOH_MAX_RETRIES")]
    pub max_retries: Option<u32>,
    /// Include per-chunk answers in the output records.
    #[arg(long)]
    pub with_answers: bool,
}

#[derive(Debug, Args)]
pub struct ExpandArgs {
    /// Word vectors in text format (`count dim` header, then `token v1 .. vd`).
    #[arg(long)]
    pub embeddings: PathBuf,
    /// Categories to expand (default: every category with phrases).
    #[arg(long, value_delimiter = ',')]
    pub category: Vec<String>,
    #[arg(long, default_value_t = 10)]
    pub top_k: usize,
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MergeArgs {
    /// Review TSV from `expand-lexicon` with decisions filled in.
    #[arg(long)]
    pub review: PathBuf,
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LevelArg {
    Fine,
    Coarse,
    Both,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub gold: PathBuf,
    #[arg(long)]
    pub pred: PathBuf,
    #[arg(long, value_enum, default_value = "both")]
    pub level: LevelArg,
    /// Visit codes CSV (`note_id,code`) for the structured-code comparison.
    #[arg(long)]
    pub icd: Option<PathBuf>,
    /// Also count the family-circumstance codes.
    #[arg(long, requires = "icd")]
    pub family_codes: bool,
    /// Exit nonzero if any scored category has F below this.
    #[arg(long)]
    pub min_f: Option<f64>,
    /// Write the report as JSON here.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Index CSV: `note_id,person_id,ss_hit,si_hit,has_template`.
    #[arg(long)]
    pub index: PathBuf,
    /// Quota per stratum, e.g. `si=75` (repeatable).
    #[arg(long = "quota", value_name = "STRATUM=N")]
    pub quotas: Vec<String>,
    #[arg(long, env = "SDOH_SEED")]
    pub seed: Option<u64>,
    /// Selected note ids, one per line.
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
    /// JSON report with strata and shortfalls.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FinetuneArgs {
    /// Curated examples, JSONL `{"category", "context", "answer"}`.
    #[arg(long)]
    pub examples: PathBuf,
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
}

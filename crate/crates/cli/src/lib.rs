//! `sociolex` command-line driver.

mod args;
mod commands;
mod config;
mod error;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Parser;
use sociolex::corpus::{Preprocessor, Segmenter, TemplateSet};
use sociolex::lexicon::{Lexicon, DEFAULT_EXCLUSIONS, SAMPLE_INCLUSION};
use sociolex::matcher::MatchConfig;
use sociolex::TagMap;

pub use args::Cli;
pub use config::Config;
pub use error::CliError;

use args::{Command, GlobalArgs};

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let level = match cli.global.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .parse_env("SDOH_LOG")
        .format_timestamp(None)
        .try_init();

    let json_errors = cli.global.json_errors;
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            if json_errors {
                eprintln!("{}", e.to_json());
            } else {
                eprintln!("error: {e}");
            }
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let ctx = Context::new(cli.global)?;
    if ctx.global.version {
        let (lex, _) = ctx.lexicon()?;
        println!("sociolex {}", sociolex::VERSION);
        println!("lexicon {}", lex.version);
        return Ok(());
    }
    let Some(command) = cli.command else {
        return Err(CliError::Usage("no subcommand given (see --help)".into()));
    };
    match command {
        Command::Ingest(a) => commands::ingest(&ctx, a),
        Command::Gold(a) => commands::gold(&ctx, a),
        Command::Extract(a) => commands::extract(&ctx, a),
        Command::ExpandLexicon(a) => commands::expand_lexicon(&ctx, a),
        Command::MergeLexicon(a) => commands::merge_lexicon(&ctx, a),
        Command::Evaluate(a) => commands::evaluate(&ctx, a),
        Command::Sample(a) => commands::sample(&ctx, a),
        Command::EmitFinetune(a) => commands::emit_finetune(&ctx, a),
    }
}

/// Global flags merged with the config file.
pub(crate) struct Context {
    pub global: GlobalArgs,
    pub config: Config,
}

impl Context {
    fn new(global: GlobalArgs) -> Result<Self, CliError> {
        let config = Config::load(global.config.as_deref())?;
        Ok(Context { global, config })
    }

    fn path(&self, flag: &Option<PathBuf>, cfg: &Option<PathBuf>) -> Option<PathBuf> {
        flag.clone().or_else(|| cfg.clone())
    }

    pub fn preprocessor(&self) -> Result<Preprocessor, CliError> {
        let templates = match self.path(&self.global.templates, &self.config.templates) {
            Some(p) => TemplateSet::load(&p)?,
            None => TemplateSet::default(),
        };
        Ok(Preprocessor::new(templates, Segmenter::default()))
    }

    pub fn lexicon(&self) -> Result<(Lexicon, Vec<String>), CliError> {
        let inclusion = match self.path(&self.global.lexicon, &self.config.lexicon) {
            Some(p) => read(&p)?,
            None => {
                log::info!("no --lexicon given, using the built-in sample lexicon");
                SAMPLE_INCLUSION.to_string()
            }
        };
        let exclusion = match self.path(&self.global.exclusion, &self.config.exclusion) {
            Some(p) => read(&p)?,
            None => DEFAULT_EXCLUSIONS.to_string(),
        };
        let (lex, warnings) = Lexicon::parse(&inclusion, &exclusion)?;
        for w in &warnings {
            log::warn!("{w}");
        }
        Ok((lex, warnings))
    }

    pub fn match_config(&self, lex: &Lexicon) -> Result<MatchConfig, CliError> {
        let mut cfg = MatchConfig::default();
        if let Some(p) = self.path(&self.global.negation_cues, &self.config.negation_cues) {
            let content = read(&p)?;
            let cues: Vec<&str> = content.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect();
            cfg = cfg.with_cues(cues);
        }
        if let Some(w) = self.global.negation_window.or(self.config.negation_window) {
            cfg.negation_window = w;
        }
        cfg.validate(lex).map_err(CliError::Usage)?;
        Ok(cfg)
    }

    pub fn tag_map(&self) -> Result<TagMap, CliError> {
        Ok(match self.path(&self.global.tag_map, &self.config.tag_map) {
            Some(p) => TagMap::load(&p)?,
            None => TagMap::default(),
        })
    }
}

pub(crate) fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Writes to `path`, or stdout when `None`.
pub(crate) fn write_output(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
            }
            std::fs::write(p, content).map_err(|e| CliError::io(p, e))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes()).map_err(|e| CliError::io(Path::new("<stdout>"), e))?;
            out.flush().map_err(|e| CliError::io(Path::new("<stdout>"), e))
        }
    }
}

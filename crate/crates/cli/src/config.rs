//! Settings file. Precedence is flag, then `SDOH_*` environment variable
//! (both handled by clap), then this file, then built-in defaults.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub templates: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub exclusion: Option<PathBuf>,
    pub negation_cues: Option<PathBuf>,
    pub negation_window: Option<usize>,
    pub tag_map: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub llm: LlmConfig,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LlmConfig {
    pub endpoint: Option<String>,
    pub budget: Option<usize>,
    pub categories: Option<Vec<String>>,
    pub max_concurrency: Option<usize>,
    /// Seconds.
    pub timeout: Option<u64>,
    pub max_retries: Option<u32>,
}

impl Config {
    pub fn parse(content: &str, base_dir: &Path) -> Result<Self, String> {
        let mut cfg: Config = toml::from_str(content).map_err(|e| e.to_string())?;
        // Relative paths are relative to the config file.
        for p in [&mut cfg.templates, &mut cfg.lexicon, &mut cfg.exclusion, &mut cfg.negation_cues, &mut cfg.tag_map]
            .into_iter()
            .flatten()
        {
            if p.is_relative() {
                *p = base_dir.join(&*p);
            }
        }
        Ok(cfg)
    }

    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Config::default());
        };
        let content = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Config::parse(&content, base).map_err(|reason| CliError::Config {
            path: path.to_path_buf(),
            reason,
        })
    }
}

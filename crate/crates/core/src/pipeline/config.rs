use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::coupling::CouplingConfig;
use crate::generation::{DEFAULT_K, DEFAULT_M};
use crate::llm::ProviderConfig;
use crate::minilang::Limits;
use crate::validation::DEFAULT_MUTANT_CAP;

/// Either an explicit list of method specs (`Class.name` or
/// `Class.name(int, string)`) or the string `"all-public"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Targets {
    Keyword(String),
    List(Vec<String>),
}

impl Default for Targets {
    fn default() -> Self {
        Targets::Keyword("all-public".into())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub corpus: PathBuf,
    #[serde(default)]
    pub targets: Targets,
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default = "default_m")]
    pub m: usize,
    #[serde(default = "default_cap")]
    pub mutant_cap: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    /// Test files (corpus-relative) never offered as invocation examples.
    #[serde(default)]
    pub exclude_examples: Vec<String>,
    /// Human-written reference tests (corpus-relative) for skeleton
    /// similarity.
    #[serde(default)]
    pub references: Vec<String>,
    #[serde(default = "default_budget")]
    pub skeleton_budget: usize,
    pub provider: ProviderConfig,
    #[serde(default)]
    pub limits: Limits,
    #[serde(default)]
    pub coupling: CouplingConfig,
}

fn default_k() -> usize {
    DEFAULT_K
}
fn default_m() -> usize {
    DEFAULT_M
}
fn default_cap() -> usize {
    DEFAULT_MUTANT_CAP
}
fn default_workers() -> usize {
    4
}
fn default_out() -> PathBuf {
    PathBuf::from("out")
}
fn default_budget() -> usize {
    4096
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {0}: {1}")]
    Io(PathBuf, std::io::Error),
    #[error("invalid config {0}: {1}")]
    Parse(PathBuf, String),
    #[error("invalid config: {0}")]
    Invalid(String),
}

impl PipelineConfig {
    /// Defaults for everything but the corpus and the provider.
    pub fn new(corpus: impl Into<PathBuf>, provider: ProviderConfig) -> PipelineConfig {
        PipelineConfig {
            corpus: corpus.into(),
            targets: Targets::default(),
            k: default_k(),
            m: default_m(),
            mutant_cap: default_cap(),
            seed: 0,
            workers: default_workers(),
            out: default_out(),
            exclude_examples: Vec::new(),
            references: Vec::new(),
            skeleton_budget: default_budget(),
            provider,
            limits: Limits::default(),
            coupling: CouplingConfig::default(),
        }
    }

    /// Reads a TOML config. Relative paths are taken relative to the config
    /// file's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<PipelineConfig, ConfigError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io(path.to_path_buf(), e))?;
        let mut cfg: PipelineConfig = toml::from_str(&text).map_err(|e| ConfigError::Parse(path.to_path_buf(), e.to_string()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.corpus = base.join(&cfg.corpus);
        cfg.out = base.join(&cfg.out);
        if let Some(f) = &cfg.provider.fixtures {
            cfg.provider.fixtures = Some(base.join(f));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.k == 0 || self.m == 0 {
            return Err(ConfigError::Invalid("k and m must be at least 1".into()));
        }
        if let Targets::Keyword(k) = &self.targets {
            if k != "all-public" {
                return Err(ConfigError::Invalid(format!("targets must be a list or \"all-public\", got {k:?}")));
            }
        }
        self.provider.validate().map_err(ConfigError::Invalid)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_relative_paths() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.toml");
        std::fs::write(
            &p,
            "corpus = \"corpus/aes\"\ntargets = [\"AESCodec.encryptText\"]\n[provider]\nkind = \"replay\"\nfixtures = \"f.jsonl\"\n",
        )
        .unwrap();
        let c = PipelineConfig::load(&p).unwrap();
        assert_eq!((c.k, c.m, c.mutant_cap), (5, 10, 20));
        assert_eq!(c.corpus, dir.path().join("corpus/aes"));
        assert_eq!(c.provider.fixtures, Some(dir.path().join("f.jsonl")));
        assert_eq!(c.provider.temperature, 0.2);
    }

    #[test]
    fn rejects_zero_k() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.toml");
        std::fs::write(&p, "corpus = \"x\"\nk = 0\n[provider]\nkind = \"replay\"\nfixtures = \"f\"\n").unwrap();
        assert!(matches!(PipelineConfig::load(&p), Err(ConfigError::Invalid(_))));
    }
}

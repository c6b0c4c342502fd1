//! Effective run configuration: flags override the config file, which
//! overrides the built-in defaults.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::formats::ReportFormat;

pub const DEFAULT_EPSILON: f64 = 0.1;
pub const DEFAULT_MAX_RETRIES: u32 = 20;
/// Admits the biclique search up to roughly n = 128, t = 4.
pub const DEFAULT_BUDGET: u64 = 4_000_000_000;
pub const DEFAULT_SEED: u64 = 0;

/// Optional values as they appear on the command line or in a config file.
#[derive(Debug, Default, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub k: Option<u32>,
    pub m: Option<u32>,
    pub n: Option<usize>,
    pub t: Option<usize>,
    pub seed: Option<u64>,
    pub epsilon: Option<f64>,
    pub max_retries: Option<u32>,
    pub budget: Option<u64>,
    pub tol: Option<f64>,
    pub format: Option<ReportFormat>,
    pub out_dir: Option<PathBuf>,
}

impl PartialConfig {
    /// `self` wins over `fallback`.
    fn or(self, fallback: PartialConfig) -> PartialConfig {
        PartialConfig {
            k: self.k.or(fallback.k),
            m: self.m.or(fallback.m),
            n: self.n.or(fallback.n),
            t: self.t.or(fallback.t),
            seed: self.seed.or(fallback.seed),
            epsilon: self.epsilon.or(fallback.epsilon),
            max_retries: self.max_retries.or(fallback.max_retries),
            budget: self.budget.or(fallback.budget),
            tol: self.tol.or(fallback.tol),
            format: self.format.or(fallback.format),
            out_dir: self.out_dir.or(fallback.out_dir),
        }
    }
}

/// The resolved configuration every command runs with.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub k: Option<u32>,
    pub m: Option<u32>,
    pub n: Option<usize>,
    pub t: Option<usize>,
    pub seed: u64,
    pub epsilon: f64,
    pub max_retries: u32,
    pub budget: u64,
    pub tol: f64,
    pub format: ReportFormat,
    pub out_dir: PathBuf,
}

impl RunConfig {
    /// Applies precedence: `flags` > `config_file` > defaults.
    pub fn resolve(flags: PartialConfig, config_file: Option<&PathBuf>) -> Result<Self, CliError> {
        let from_file: PartialConfig = match config_file {
            Some(path) => crate::formats::read_json(path)?,
            None => PartialConfig::default(),
        };
        let merged = flags.or(from_file);
        Ok(RunConfig {
            k: merged.k,
            m: merged.m,
            n: merged.n,
            t: merged.t,
            seed: merged.seed.unwrap_or(DEFAULT_SEED),
            epsilon: merged.epsilon.unwrap_or(DEFAULT_EPSILON),
            max_retries: merged.max_retries.unwrap_or(DEFAULT_MAX_RETRIES),
            budget: merged.budget.unwrap_or(DEFAULT_BUDGET),
            tol: merged.tol.unwrap_or(orthorep_core::DEFAULT_TOL),
            format: merged.format.unwrap_or(ReportFormat::Json),
            out_dir: merged.out_dir.unwrap_or_else(|| PathBuf::from(".")),
        })
    }

    pub fn require_n(&self) -> Result<usize, CliError> {
        self.n.ok_or_else(|| {
            CliError::Core(orthorep_core::Error::InvalidParameter("--n is required".into()))
        })
    }

    pub fn require_t(&self) -> Result<usize, CliError> {
        self.t.ok_or_else(|| {
            CliError::Core(orthorep_core::Error::InvalidParameter("--t is required".into()))
        })
    }
}

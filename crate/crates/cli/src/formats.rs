//! On-disk document schemas and atomic writers.
//!
//! JSON documents carry full float precision; text reports round to six
//! significant digits. All files are written via a temp-and-rename so a
//! crashed run never leaves a half-written artifact.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use orthorep_core::construction::FamilySample;
use orthorep_core::graph::Graph;
use orthorep_core::hypercube::TensorVector;
use orthorep_core::nonneg_rank::SupportMatrix;
use orthorep_core::sdp::{SdpSolution, SdpVariant};
use orthorep_core::spectral::GramMatrix;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
    Text,
}

impl ReportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Json => "json",
            ReportFormat::Csv => "csv",
            ReportFormat::Text => "txt",
        }
    }
}

/// `{"n": ..., "edges": [[u, v], ...]}` with `u < v`, sorted.
#[derive(Debug, Serialize, Deserialize)]
pub struct GraphDoc {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl GraphDoc {
    pub fn from_graph(g: &Graph) -> Self {
        Self { n: g.n(), edges: g.edges() }
    }

    pub fn to_graph(&self) -> Result<Graph, CliError> {
        Ok(Graph::from_edges(self.n, &self.edges)?)
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FamilyParamsDoc {
    pub k: u32,
    pub m: u32,
    pub n: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TensorDoc {
    pub k: u32,
    pub m: u32,
    pub factors: Vec<u64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FamilyDoc {
    pub params: FamilyParamsDoc,
    pub seed: u64,
    pub vectors: Vec<TensorDoc>,
}

impl FamilyDoc {
    pub fn from_family(f: &FamilySample) -> Self {
        Self {
            params: FamilyParamsDoc { k: f.k, m: f.m, n: f.n() },
            seed: f.seed,
            vectors: f
                .vectors
                .iter()
                .map(|v| TensorDoc { k: v.k(), m: v.m(), factors: v.factors().to_vec() })
                .collect(),
        }
    }

    pub fn to_family(&self, path: &Path) -> Result<FamilySample, CliError> {
        if self.vectors.len() != self.params.n {
            return Err(CliError::Parse {
                path: path.display().to_string(),
                message: format!(
                    "family declares n = {} but carries {} vectors",
                    self.params.n,
                    self.vectors.len()
                ),
            });
        }
        let vectors: Result<Vec<TensorVector>, _> = self
            .vectors
            .iter()
            .map(|d| {
                if d.k != self.params.k || d.m != self.params.m {
                    return Err(CliError::Parse {
                        path: path.display().to_string(),
                        message: format!(
                            "vector with (k, m) = ({}, {}) in a ({}, {}) family",
                            d.k, d.m, self.params.k, self.params.m
                        ),
                    });
                }
                TensorVector::new(d.k, d.factors.clone()).map_err(CliError::from)
            })
            .collect();
        Ok(FamilySample {
            k: self.params.k,
            m: self.params.m,
            seed: self.seed,
            vectors: vectors?,
        })
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SolutionDoc {
    pub variant: String,
    pub n: usize,
    pub objective: f64,
    pub certified_value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub floored_value: Option<f64>,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl SolutionDoc {
    pub fn from_solution(s: &SdpSolution) -> Self {
        Self {
            variant: match s.variant {
                SdpVariant::ThetaBar => "theta_bar".into(),
                SdpVariant::ChiVec => "chi_vec".into(),
            },
            n: s.n,
            objective: s.objective,
            certified_value: s.certified_value,
            floored_value: s.floored_value,
            primal_residual: s.primal_residual,
            dual_residual: s.dual_residual,
            iterations: s.iterations,
            converged: s.converged,
        }
    }
}

/// Atomically writes `contents` (temp file in the same directory + rename).
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        }
    }
    let tmp: PathBuf = path.with_extension(format!(
        "{}.tmp",
        path.extension().and_then(|e| e.to_str()).unwrap_or("out")
    ));
    {
        let mut f = fs::File::create(&tmp).map_err(|e| CliError::io(&tmp, e))?;
        f.write_all(contents).map_err(|e| CliError::io(&tmp, e))?;
        f.sync_all().map_err(|e| CliError::io(&tmp, e))?;
    }
    fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, doc: &T) -> Result<(), CliError> {
    let mut body = serde_json::to_string_pretty(doc).expect("document serialization");
    body.push('\n');
    write_atomic(path, body.as_bytes())
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let body = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&body).map_err(|e| CliError::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Row-major CSV with 17 significant digits, for external cross-checks.
pub fn gram_csv(g: &GramMatrix) -> String {
    let n = g.n();
    let mut out = String::new();
    for i in 0..n {
        for j in 0..n {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&format!("{:.16e}", g.get(i, j)));
        }
        out.push('\n');
    }
    out
}

pub fn support_matrix_csv(m: &SupportMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.n_rows() {
        for j in 0..m.n_cols() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&format!("{:.16e}", m.get(i, j)));
        }
        out.push('\n');
    }
    out
}

/// Sidecar JSON listing the exact support cells of a matrix.
#[derive(Debug, Serialize, Deserialize)]
pub struct SupportDoc {
    pub n_rows: usize,
    pub n_cols: usize,
    pub support: Vec<(usize, usize)>,
}

impl SupportDoc {
    pub fn from_matrix(m: &SupportMatrix) -> Self {
        Self { n_rows: m.n_rows(), n_cols: m.n_cols(), support: m.support_cells() }
    }
}

/// Renders `value` with six significant digits for text reports.
pub fn sig6(value: f64) -> String {
    if value == 0.0 || !value.is_finite() {
        return format!("{value}");
    }
    format!("{value:.5e}")
}

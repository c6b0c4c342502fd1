use serde::Serialize;

use orthorep_core::construction::{construct_verified, Schedule};
use orthorep_core::spectral::{theta_lower, Representation, MAX_GRAM_N};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::formats::{write_json, FamilyDoc, GraphDoc};
use crate::report::{write_report, Field};

#[derive(Serialize)]
struct SummaryDoc {
    n: usize,
    edges: usize,
    k: u32,
    m: u32,
    t: usize,
    seed: u64,
    retries: u32,
    /// Ambient dimension k^m; omitted when it overflows u64.
    #[serde(skip_serializing_if = "Option::is_none")]
    dim: Option<u64>,
    /// Largest Gram eigenvalue, a certified theta-of-complement lower bound;
    /// omitted beyond the dense guard.
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda1_lower: Option<f64>,
}

pub fn construct(cfg: &RunConfig) -> Result<(), CliError> {
    let n = cfg.require_n()?;
    let (k, m, t) = match (cfg.k, cfg.m) {
        (Some(k), Some(m)) => (k, m, cfg.require_t()?),
        (None, None) => {
            let t = cfg.require_t()?;
            let s = Schedule::derive(t as u64, n as u64, cfg.epsilon)?;
            (s.k, s.m, t)
        }
        _ => {
            return Err(CliError::Core(orthorep_core::Error::InvalidParameter(
                "--k and --m must be given together (or neither, for schedule mode)".into(),
            )))
        }
    };

    let c = construct_verified(k, m, n, t, cfg.seed, cfg.max_retries, cfg.budget)?;
    let edges = c.graph.edge_count();

    write_json(&cfg.out_dir.join("graph.json"), &GraphDoc::from_graph(&c.graph))?;
    write_json(&cfg.out_dir.join("family.json"), &FamilyDoc::from_family(&c.family))?;

    let dim = c.family.dim().and_then(|d| u64::try_from(d).ok());
    let lambda1_lower = if n <= MAX_GRAM_N {
        let rep = Representation::factored(c.graph.clone(), c.family.clone())?;
        Some(theta_lower(&rep, cfg.tol)?)
    } else {
        None
    };

    let summary = SummaryDoc { n, edges, k, m, t, seed: cfg.seed, retries: c.retries, dim, lambda1_lower };
    let mut fields = vec![
        Field::UInt("n", n as u64),
        Field::UInt("edges", edges as u64),
        Field::UInt("k", k as u64),
        Field::UInt("m", m as u64),
        Field::UInt("t", t as u64),
        Field::UInt("seed", cfg.seed),
        Field::UInt("retries", c.retries as u64),
    ];
    if let Some(d) = dim {
        fields.push(Field::UInt("dim", d));
    }
    if let Some(l) = lambda1_lower {
        fields.push(Field::Float("lambda1_lower", l));
    }
    let path = write_report(&cfg.out_dir, "summary", cfg.format, &summary, &fields)?;

    println!(
        "constructed K_{{{t},{t}}}-free graph: n={n} edges={edges} k={k} m={m} retries={} -> {}",
        c.retries,
        path.display()
    );
    Ok(())
}

use std::path::Path;

use serde::Serialize;

use orthorep_core::construction::find_biclique;
use orthorep_core::nonneg_rank::{gap_report, squared_gram};
use orthorep_core::spectral::Representation;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::formats::{read_json, support_matrix_csv, write_atomic, write_json, FamilyDoc, GraphDoc, SupportDoc};
use crate::report::{write_report, Field};

#[derive(Serialize)]
struct GapDoc {
    n: usize,
    t: usize,
    nnz: usize,
    numeric_rank: usize,
    rc_lower_bound: usize,
    greedy_cover: usize,
    ratio: f64,
    chain: String,
}

pub fn gap(cfg: &RunConfig, graph_path: &Path, family_path: &Path) -> Result<(), CliError> {
    let t = cfg.require_t()?;
    let graph = read_json::<GraphDoc>(graph_path)?.to_graph()?;
    let family = read_json::<FamilyDoc>(family_path)?.to_family(family_path)?;
    let rep = Representation::factored(graph.clone(), family)?;

    // the rectangle bound is meaningless on a graph that still contains a
    // biclique, so freeness is re-verified before anything is reported
    if let Some(w) = find_biclique(&graph, t, cfg.budget)? {
        return Err(CliError::Verification(format!(
            "graph contains K_{{{t},{t}}}: left={:?} right={:?}",
            w.left, w.right
        )));
    }

    let r = gap_report(&rep, t, cfg.tol)?;
    let m = squared_gram(&rep, cfg.tol)?;
    write_atomic(&cfg.out_dir.join("squared_gram.csv"), support_matrix_csv(&m).as_bytes())?;
    write_json(&cfg.out_dir.join("squared_gram_support.json"), &SupportDoc::from_matrix(&m))?;

    let doc = GapDoc {
        n: r.n,
        t,
        nnz: r.nnz,
        numeric_rank: r.numeric_rank,
        rc_lower_bound: r.rc_lower,
        greedy_cover: r.greedy_cover,
        ratio: r.ratio,
        chain: r.chain.clone(),
    };
    let fields = vec![
        Field::UInt("n", r.n as u64),
        Field::UInt("t", t as u64),
        Field::UInt("nnz", r.nnz as u64),
        Field::UInt("numeric_rank", r.numeric_rank as u64),
        Field::UInt("rc_lower_bound", r.rc_lower as u64),
        Field::UInt("greedy_cover", r.greedy_cover as u64),
        Field::Float("ratio", r.ratio),
        Field::Text("chain", r.chain.clone()),
    ];
    let path = write_report(&cfg.out_dir, "gap_report", cfg.format, &doc, &fields)?;
    println!(
        "gap report: n={} nnz={} rank={} rc_lower={} ({}) -> {}",
        r.n,
        r.nnz,
        r.numeric_rank,
        r.rc_lower,
        r.chain,
        path.display()
    );
    Ok(())
}

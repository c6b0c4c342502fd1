use std::path::Path;

use orthorep_core::sdp::{solve_chi_vec, solve_theta_bar};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::formats::{read_json, write_json, GraphDoc, SolutionDoc};

pub fn sdp(cfg: &RunConfig, graph_path: &Path) -> Result<(), CliError> {
    let graph = read_json::<GraphDoc>(graph_path)?.to_graph()?;
    let theta = solve_theta_bar(&graph)?;
    let chi = solve_chi_vec(&graph)?;

    write_json(&cfg.out_dir.join("theta_bar.json"), &SolutionDoc::from_solution(&theta))?;
    write_json(&cfg.out_dir.join("chi_vec.json"), &SolutionDoc::from_solution(&chi))?;

    let tag = |ok: bool| if ok { "" } else { " [unconverged]" };
    println!(
        "theta_bar: objective={:.10} certified={:.10} iterations={}{}",
        theta.objective,
        theta.certified_value,
        theta.iterations,
        tag(theta.converged)
    );
    println!(
        "chi_vec:   objective={:.10} certified={:.10} floored={:.10} iterations={}{}",
        chi.objective,
        chi.certified_value,
        chi.floored_value.unwrap_or(f64::NAN),
        chi.iterations,
        tag(chi.converged)
    );
    Ok(())
}

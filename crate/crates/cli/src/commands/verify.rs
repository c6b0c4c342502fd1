use std::path::{Path, PathBuf};

use serde::Serialize;

use orthorep_core::sdp::{
    solve_chi_vec, solve_theta_bar, witness_eigen_lift, witness_identity_lift, SdpSolution,
    MAX_SDP_N,
};
use orthorep_core::spectral::{
    check_edge_bound, gram, msr_upper, theta_lower, validate, Representation, Verdict,
};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::formats::{gram_csv, read_json, write_atomic, FamilyDoc, GraphDoc, SolutionDoc};
use crate::report::{write_report, Field};

#[derive(Serialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Serialize)]
struct CheckDoc {
    name: &'static str,
    status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    lhs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rhs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

#[derive(Serialize)]
struct ViolationDoc {
    u: usize,
    v: usize,
    value: f64,
    constraint: String,
    verdict: String,
}

#[derive(Serialize)]
struct ValidationDoc {
    orthonormal: Option<bool>,
    faithful: Option<bool>,
    nonnegative: Option<bool>,
    exact: bool,
    violations: Vec<ViolationDoc>,
}

#[derive(Serialize)]
struct VerifyDoc {
    n: usize,
    edges: usize,
    validation: ValidationDoc,
    checks: Vec<CheckDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta_bar: Option<SolutionDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    chi_vec: Option<SolutionDoc>,
    all_pass: bool,
}

struct Checks(Vec<CheckDoc>);

impl Checks {
    fn push(&mut self, name: &'static str, pass: bool, lhs: f64, rhs: f64) {
        self.0.push(CheckDoc {
            name,
            status: if pass { Status::Pass } else { Status::Fail },
            lhs: Some(lhs),
            rhs: Some(rhs),
            note: None,
        });
    }

    fn skip(&mut self, name: &'static str, note: String) {
        self.0
            .push(CheckDoc { name, status: Status::Skipped, lhs: None, rhs: None, note: Some(note) });
    }
}

fn converged(s: &SdpSolution) -> bool {
    s.converged
}

pub fn verify(
    cfg: &RunConfig,
    graph_path: &Path,
    family_path: &Path,
    gram_csv_path: Option<&PathBuf>,
) -> Result<(), CliError> {
    let graph = read_json::<GraphDoc>(graph_path)?.to_graph()?;
    let family = read_json::<FamilyDoc>(family_path)?.to_family(family_path)?;
    let rep = Representation::factored(graph.clone(), family)?;
    let n = graph.n();
    let edges = graph.edge_count();

    let val = validate(&rep, cfg.tol);
    let validation = ValidationDoc {
        orthonormal: val.orthonormal,
        faithful: val.faithful,
        nonnegative: val.nonnegative,
        exact: val.exact,
        violations: val
            .reports
            .iter()
            .map(|r| ViolationDoc {
                u: r.u,
                v: r.v,
                value: r.value,
                constraint: format!("{:?}", r.constraint),
                verdict: match r.verdict {
                    Verdict::Violated => "violated".into(),
                    Verdict::Indeterminate => "indeterminate".into(),
                },
            })
            .collect(),
    };

    let mut checks = Checks(Vec::new());
    checks.push(
        "representation_orthonormal",
        val.orthonormal == Some(true),
        0.0,
        0.0,
    );
    checks.push("representation_faithful", val.faithful == Some(true), 0.0, 0.0);

    let mut theta_doc = None;
    let mut chi_doc = None;

    if val.orthonormal == Some(true) {
        let lambda1 = theta_lower(&rep, cfg.tol)?;
        let rank = msr_upper(&rep, cfg.tol)?;
        let eb = check_edge_bound(&rep, cfg.tol)?;
        checks.push("edge_bound_lambda1_sq_le_trace_m2", eb.lambda1_sq <= eb.trace_m2 * (1.0 + 1e-6) + 1e-6, eb.lambda1_sq, eb.trace_m2);
        checks.push("edge_bound_trace_m2_le_2m_plus_n", eb.trace_m2 <= eb.edge_bound * (1.0 + 1e-6) + 1e-6, eb.trace_m2, eb.edge_bound);
        checks.push("trace_over_rank", lambda1 >= n as f64 / rank as f64 - 1e-6, lambda1, n as f64 / rank as f64);
        checks.push("theta_lower_times_msr_ge_n", lambda1 * rank as f64 >= n as f64 - 1e-4, lambda1 * rank as f64, n as f64);

        if n <= MAX_SDP_N {
            let theta = solve_theta_bar(&graph)?;
            let chi = solve_chi_vec(&graph)?;
            theta_doc = Some(SolutionDoc::from_solution(&theta));
            chi_doc = Some(SolutionDoc::from_solution(&chi));

            if converged(&theta) && converged(&chi) {
                checks.push("chi_vec_le_theta_bar", chi.certified_value <= theta.objective + 1e-6, chi.certified_value, theta.objective);
                if edges > 0 {
                    checks.push(
                        "chi_vec_ge_theta_bar_sq_over_n",
                        chi.objective >= theta.objective * theta.objective / n as f64 - 1e-5,
                        chi.objective,
                        theta.objective * theta.objective / n as f64,
                    );
                    checks.push("chi_vec_times_msr_ge_n", chi.objective * rank as f64 >= n as f64 - 1e-4, chi.objective * rank as f64, n as f64);
                }
                checks.push("theta_bar_times_msr_ge_n", theta.objective * rank as f64 >= n as f64 - 1e-4, theta.objective * rank as f64, n as f64);
                checks.push("rep_lambda1_le_theta_bar", lambda1 <= theta.objective + 1e-5, lambda1, theta.objective);

                let w_eig = witness_eigen_lift(&rep, cfg.tol)?;
                checks.push("eigen_lift_le_chi_vec", w_eig.certificate <= chi.objective + 1e-5, w_eig.certificate, chi.objective);
                checks.push("eigen_lift_ge_its_bound", w_eig.certificate >= w_eig.bound - 1e-9, w_eig.certificate, w_eig.bound);
                match witness_identity_lift(&rep, cfg.tol) {
                    Ok(w_id) => {
                        checks.push("identity_lift_le_chi_vec", w_id.certificate <= chi.objective + 1e-5, w_id.certificate, chi.objective);
                    }
                    Err(orthorep_core::Error::SizeGuard(msg)) => {
                        checks.skip("identity_lift_le_chi_vec", msg.to_string());
                    }
                    Err(e) => return Err(e.into()),
                }
            } else {
                checks.skip(
                    "sdp_inequalities",
                    format!(
                        "unconverged solve excluded (theta: {} iters, chi: {} iters)",
                        theta.iterations, chi.iterations
                    ),
                );
            }
        } else {
            checks.skip("sdp_inequalities", format!("n = {n} beyond exact-SDP guard {MAX_SDP_N}"));
        }
    } else {
        checks.skip("spectral_checks", "representation failed validation".into());
    }

    if let Some(csv_path) = gram_csv_path {
        let g = gram(&rep)?;
        write_atomic(csv_path, gram_csv(&g).as_bytes())?;
    }

    let all_pass = checks.0.iter().all(|c| c.status != Status::Fail)
        && val.orthonormal == Some(true)
        && val.faithful == Some(true);

    for c in &checks.0 {
        let status = match c.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        };
        match (c.lhs, c.rhs) {
            (Some(l), Some(r)) => println!("{status} {} (lhs={l:.6e}, rhs={r:.6e})", c.name),
            _ => println!("{status} {} ({})", c.name, c.note.as_deref().unwrap_or("")),
        }
    }

    let fields: Vec<Field> = checks
        .0
        .iter()
        .map(|c| {
            Field::Text(
                c.name,
                match c.status {
                    Status::Pass => "pass".into(),
                    Status::Fail => "fail".into(),
                    Status::Skipped => "skipped".into(),
                },
            )
        })
        .collect();
    let doc = VerifyDoc {
        n,
        edges,
        validation,
        checks: checks.0,
        theta_bar: theta_doc,
        chi_vec: chi_doc,
        all_pass,
    };
    write_report(&cfg.out_dir, "verify_report", cfg.format, &doc, &fields)?;

    if all_pass {
        println!("verify: all checks passed");
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "verification failed; see {}",
            cfg.out_dir.join(format!("verify_report.{}", cfg.format.extension())).display()
        )))
    }
}

use serde::Serialize;

use orthorep_core::construction::Schedule;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::formats::ReportFormat;

#[derive(Serialize)]
struct ScheduleDoc {
    t: u64,
    n: u64,
    epsilon: f64,
    k: u32,
    m: u32,
}

/// Prints the derived parameters to stdout without constructing anything.
pub fn schedule(cfg: &RunConfig) -> Result<(), CliError> {
    let t = cfg.require_t()? as u64;
    let n = cfg.require_n()? as u64;
    let s = Schedule::derive(t, n, cfg.epsilon)?;
    let doc = ScheduleDoc { t, n, epsilon: s.epsilon, k: s.k, m: s.m };
    match cfg.format {
        ReportFormat::Json => println!("{}", serde_json::to_string(&doc).expect("serializable")),
        ReportFormat::Csv => {
            println!("key,value");
            println!("t,{t}");
            println!("n,{n}");
            println!("epsilon,{}", s.epsilon);
            println!("k,{}", s.k);
            println!("m,{}", s.m);
        }
        ReportFormat::Text => {
            println!("t: {t}");
            println!("n: {n}");
            println!("epsilon: {}", s.epsilon);
            println!("k: {}", s.k);
            println!("m: {}", s.m);
        }
    }
    Ok(())
}

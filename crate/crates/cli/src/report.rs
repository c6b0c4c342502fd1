//! Report rendering in the three output formats.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::CliError;
use crate::formats::{sig6, write_atomic, write_json, ReportFormat};

/// One key/value row of a flat report.
#[derive(Debug, Clone)]
pub enum Field {
    UInt(&'static str, u64),
    Float(&'static str, f64),
    Text(&'static str, String),
}

impl Field {
    fn key(&self) -> &'static str {
        match self {
            Field::UInt(k, _) | Field::Float(k, _) | Field::Text(k, _) => k,
        }
    }

    fn render(&self, rounded: bool) -> String {
        match self {
            Field::UInt(_, v) => v.to_string(),
            Field::Float(_, v) => {
                if rounded {
                    sig6(*v)
                } else {
                    format!("{v}")
                }
            }
            Field::Text(_, v) => v.clone(),
        }
    }
}

/// Writes `doc` as JSON, or the flat `fields` view as CSV/text, choosing the
/// file extension from the format. Returns the path written.
pub fn write_report<T: Serialize>(
    dir: &Path,
    stem: &str,
    format: ReportFormat,
    doc: &T,
    fields: &[Field],
) -> Result<PathBuf, CliError> {
    let path = dir.join(format!("{stem}.{}", format.extension()));
    match format {
        ReportFormat::Json => write_json(&path, doc)?,
        ReportFormat::Csv => {
            let mut body = String::from("key,value\n");
            for f in fields {
                body.push_str(&format!("{},{}\n", f.key(), f.render(false)));
            }
            write_atomic(&path, body.as_bytes())?;
        }
        ReportFormat::Text => {
            let mut body = String::new();
            for f in fields {
                body.push_str(&format!("{}: {}\n", f.key(), f.render(true)));
            }
            write_atomic(&path, body.as_bytes())?;
        }
    }
    Ok(path)
}

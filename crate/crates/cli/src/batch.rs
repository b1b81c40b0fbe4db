//! Batch runs: a list of configs, optional overrides and sweeps, and a
//! summary CSV written once at the end in config order.

use std::path::{Path, PathBuf};
use std::time::Instant;

use expanse_core::io::{csv_string, format_f64};
use serde::Deserialize;
use serde_json::Value;

use crate::config::{parse_config, plan, read_config};
use crate::error::CliError;
use crate::run::execute;

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum BatchFile {
    List(Vec<RunEntry>),
    Full(BatchSpec),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BatchSpec {
    #[serde(default)]
    runs: Vec<RunEntry>,
    #[serde(default)]
    sweeps: Vec<Sweep>,
    #[serde(default)]
    summary: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RunEntry {
    Path(PathBuf),
    Override {
        config: PathBuf,
        #[serde(default)]
        set: serde_json::Map<String, Value>,
    },
}

/// Runs `config` once per value, with the value written at the JSON
/// pointer `pointer` and the name suffixed by the value's position.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Sweep {
    config: PathBuf,
    pointer: String,
    values: Vec<Value>,
}

struct Job {
    source: PathBuf,
    sets: Vec<(String, Value)>,
    suffix: Option<String>,
}

pub struct BatchResult {
    pub summary_path: PathBuf,
    pub exit_code: i32,
}

fn set_pointer(doc: &mut Value, pointer: &str, value: Value) -> Result<(), String> {
    if let Some(slot) = doc.pointer_mut(pointer) {
        *slot = value;
        return Ok(());
    }
    let (parent, last) = pointer.rsplit_once('/').ok_or_else(|| format!("{pointer:?} is not a JSON pointer"))?;
    match doc.pointer_mut(parent) {
        Some(Value::Object(map)) => {
            map.insert(last.replace("~1", "/").replace("~0", "~"), value);
            Ok(())
        }
        _ => Err(format!("{pointer:?} does not name a field of the config")),
    }
}

fn load_jobs(path: &Path) -> Result<(Vec<Job>, Option<PathBuf>), CliError> {
    let value = read_config(path)?;
    let file: BatchFile = serde_path_to_error::deserialize(value)
        .map_err(|e| CliError::config(path, &e.path().to_string(), e.into_inner().to_string()))?;
    let spec = match file {
        BatchFile::List(runs) => BatchSpec { runs, sweeps: Vec::new(), summary: None },
        BatchFile::Full(spec) => spec,
    };
    let base = path.parent().unwrap_or(Path::new("."));
    let mut jobs = Vec::new();
    for entry in spec.runs {
        jobs.push(match entry {
            RunEntry::Path(p) => Job { source: base.join(p), sets: Vec::new(), suffix: None },
            RunEntry::Override { config, set } => {
                Job { source: base.join(config), sets: set.into_iter().collect(), suffix: None }
            }
        });
    }
    for sweep in spec.sweeps {
        for (i, v) in sweep.values.into_iter().enumerate() {
            jobs.push(Job {
                source: base.join(&sweep.config),
                sets: vec![(sweep.pointer.clone(), v)],
                suffix: Some(format!("{:02}", i + 1)),
            });
        }
    }
    Ok((jobs, spec.summary))
}

struct Row {
    config: String,
    name: String,
    operation: String,
    estimate: String,
    margin: String,
    verdict: String,
    exit_code: i32,
    seconds: f64,
    error: String,
}

fn run_job(job: &Job, out_dir: &Path) -> Row {
    let started = Instant::now();
    let mut row = Row {
        config: job.source.display().to_string(),
        name: String::new(),
        operation: String::new(),
        estimate: String::new(),
        margin: String::new(),
        verdict: String::new(),
        exit_code: 0,
        seconds: 0.0,
        error: String::new(),
    };
    let result = (|| -> Result<crate::run::Outcome, CliError> {
        let mut doc = read_config(&job.source)?;
        for (ptr, v) in &job.sets {
            set_pointer(&mut doc, ptr, v.clone()).map_err(|e| CliError::config(&job.source, ptr, e))?;
        }
        if let Some(suffix) = &job.suffix {
            let stem = match doc.get("name").and_then(Value::as_str) {
                Some(n) => n.to_string(),
                None => job.source.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
            };
            set_pointer(&mut doc, "/name", Value::String(format!("{stem}-{suffix}")))
                .map_err(|e| CliError::config(&job.source, "name", e))?;
        }
        let config = parse_config(&job.source, doc)?;
        let plan = plan(&job.source, config, None)?;
        let outcome = execute(&plan)?;
        outcome
            .write(out_dir)
            .map_err(|e| CliError::config(&job.source, "output", format!("cannot write reports: {e}")))?;
        Ok(outcome)
    })();
    match result {
        Ok(o) => {
            row.name = o.name.clone();
            row.operation = o.operation.as_str().to_string();
            row.estimate = o.estimate.map(|e| e.to_string()).unwrap_or_default();
            row.margin = o.margin.map(format_f64).unwrap_or_default();
            row.verdict = o
                .verdict
                .map(|v| serde_json::to_value(v).unwrap().as_str().unwrap().to_string())
                .unwrap_or_else(|| "completed".into());
            row.exit_code = o.exit_code();
        }
        Err(e) => {
            row.exit_code = e.exit_code();
            row.verdict = "error".into();
            row.error = e.to_string();
        }
    }
    row.seconds = started.elapsed().as_secs_f64();
    row
}

/// Runs every job in order and writes the summary. The exit code is the
/// largest of the per-run codes.
pub fn run_batch(path: &Path, out_dir: Option<&Path>) -> Result<BatchResult, CliError> {
    let (jobs, summary) = load_jobs(path)?;
    if jobs.is_empty() {
        return Err(CliError::config(path, "runs", "the batch lists no runs"));
    }
    let out_dir = out_dir.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("."));
    let rows: Vec<Row> = jobs.iter().map(|j| run_job(j, &out_dir)).collect();
    let exit_code = rows.iter().map(|r| r.exit_code).max().unwrap_or(0);
    let csv = csv_string(
        &["config", "name", "operation", "estimate", "margin", "verdict", "exit_code", "wall_time_s", "error"],
        rows.into_iter().map(|r| {
            vec![
                r.config,
                r.name,
                r.operation,
                r.estimate,
                r.margin,
                r.verdict,
                r.exit_code.to_string(),
                format!("{:.3}", r.seconds),
                r.error,
            ]
        }),
    )
    .map_err(|e| CliError::config(path, "summary", e.to_string()))?;
    let summary_path = out_dir.join(summary.unwrap_or_else(|| {
        PathBuf::from(format!(
            "{}.summary.csv",
            path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "batch".into())
        ))
    }));
    std::fs::create_dir_all(&out_dir)
        .and_then(|_| std::fs::write(&summary_path, csv))
        .map_err(|e| CliError::config(path, "summary", format!("cannot write summary: {e}")))?;
    Ok(BatchResult { summary_path, exit_code })
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn set_pointer_replaces_and_inserts() {
        let mut doc = json!({"map": {"type": "tent", "slope": 1.5}});
        set_pointer(&mut doc, "/map/slope", json!(1.1)).unwrap();
        set_pointer(&mut doc, "/name", json!("x")).unwrap();
        assert_eq!(doc, json!({"map": {"type": "tent", "slope": 1.1}, "name": "x"}));
        assert!(set_pointer(&mut doc, "/grids/epsilon", json!([0.1])).is_err());
    }
}

//! Cartesian sweeps over scenario keys.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::run::{run_scenario, RunError};
use crate::scenario::{from_entries, ConfigError, RawEntries, ScenarioConfig};

#[derive(Debug, thiserror::Error)]
pub enum SweepError {
    #[error("`{0}`: expected key=v1,v2,...")]
    Syntax(String),
    #[error("`{key}` is not a scenario key")]
    UnknownKey { key: String },
    #[error("`{key}` is varied twice")]
    Repeated { key: String },
    #[error("`{key} = {value}`: {reason}")]
    Value {
        key: String,
        value: String,
        reason: String,
    },
    #[error("run {name}: {source}")]
    Config { name: String, source: ConfigError },
    #[error("cannot build worker pool: {0}")]
    Pool(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// One `--vary` argument.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub key: String,
    pub values: Vec<String>,
}

impl std::str::FromStr for Axis {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, SweepError> {
        let (key, values) = s
            .split_once('=')
            .ok_or_else(|| SweepError::Syntax(s.into()))?;
        let values: Vec<String> = values.split(',').map(|v| v.trim().to_string()).collect();
        if key.trim().is_empty() || values.iter().any(String::is_empty) {
            return Err(SweepError::Syntax(s.into()));
        }
        let key = key.trim().to_string();
        for v in &values {
            match ScenarioConfig::default().set(&key, v) {
                Ok(true) => {}
                Ok(false) => return Err(SweepError::UnknownKey { key }),
                Err(reason) => {
                    return Err(SweepError::Value {
                        key,
                        value: v.clone(),
                        reason,
                    })
                }
            }
        }
        Ok(Self { key, values })
    }
}

/// Every combination of axis values, first axis varying slowest.
pub fn combinations(axes: &[Axis]) -> Vec<Vec<(String, String)>> {
    axes.iter().fold(vec![Vec::new()], |acc, axis| {
        acc.iter()
            .flat_map(|prefix| {
                axis.values.iter().map(move |v| {
                    let mut next = prefix.clone();
                    next.push((axis.key.clone(), v.clone()));
                    next
                })
            })
            .collect()
    })
}

/// Expands a base file into one validated configuration per combination.
pub fn expand(base: &RawEntries, axes: &[Axis]) -> Result<Vec<ScenarioConfig>, SweepError> {
    for (i, a) in axes.iter().enumerate() {
        if axes[..i].iter().any(|b| b.key == a.key) {
            return Err(SweepError::Repeated { key: a.key.clone() });
        }
    }
    let base_name = base
        .get("name")
        .map(|(v, _)| v.as_str())
        .unwrap_or("scenario");
    combinations(axes)
        .into_iter()
        .map(|combo| {
            let mut entries = base.clone();
            let mut suffix = Vec::new();
            for (k, v) in &combo {
                let line = entries.get(k).map(|(_, l)| *l).unwrap_or(0);
                entries.insert(k.clone(), (v.clone(), line));
                if k != "name" {
                    suffix.push(format!("{k}={v}"));
                }
            }
            let name = if suffix.is_empty() {
                base_name.to_string()
            } else {
                format!("{base_name}_{}", suffix.join("_"))
            };
            entries.insert("name".into(), (name.clone(), 0));
            from_entries(&entries).map_err(|source| SweepError::Config { name, source })
        })
        .collect()
}

/// Result of one sweep member.
#[derive(Debug)]
pub struct SweepRow {
    pub name: String,
    pub outcome: Result<(String, f64, f64), String>,
    pub exit_code: i32,
}

/// Runs all configurations on at most `jobs` threads. Each run writes only
/// its own files; the summary is written once, in input order.
pub fn run_sweep(
    configs: &[ScenarioConfig],
    jobs: usize,
    out: Option<&Path>,
) -> Result<Vec<SweepRow>, SweepError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| SweepError::Pool(e.to_string()))?;
    let rows: Vec<SweepRow> = pool.install(|| {
        configs
            .par_iter()
            .map(|cfg| match run_scenario(cfg, out) {
                Ok(o) => SweepRow {
                    name: cfg.name.clone(),
                    exit_code: o.exit_code(),
                    outcome: Ok((
                        o.trace.event.kind.name().to_string(),
                        o.trace.event.t_f,
                        o.trace.event.min_r_ep,
                    )),
                },
                Err(e) => SweepRow {
                    name: cfg.name.clone(),
                    exit_code: RunError::exit_code(&e),
                    outcome: Err(e.to_string()),
                },
            })
            .collect()
    });
    if let Some(dir) = out {
        let path = dir.join("summary.csv");
        write_summary(&rows, &path).map_err(|source| SweepError::Io { path, source })?;
    }
    Ok(rows)
}

fn write_summary(rows: &[SweepRow], path: &Path) -> std::io::Result<()> {
    std::fs::create_dir_all(path.parent().unwrap_or(Path::new(".")))?;
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["name", "event", "t_f", "min_r_EP", "error"])?;
    for r in rows {
        match &r.outcome {
            Ok((event, t_f, min_r)) => {
                w.write_record([&r.name, event, &t_f.to_string(), &min_r.to_string(), ""])?
            }
            Err(e) => w.write_record([r.name.as_str(), "", "", "", e])?,
        }
    }
    w.flush()
}

/// Worst exit code of a sweep: any failure outranks every success.
pub fn exit_code(rows: &[SweepRow]) -> i32 {
    rows.iter().map(|r| r.exit_code).max().unwrap_or(0)
}

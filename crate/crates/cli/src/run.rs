//! Running one scenario and writing its artifacts.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use pursuit_core::simulator::{run, SimulationTrace, TerminalKind};

use crate::scenario::{ConfigError, ScenarioConfig};
use crate::svg;
use crate::trace::{self, TraceError};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("simulation failed: {0}")]
    Simulation(pursuit_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Trace(#[from] TraceError),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Simulation(_) => ExitCode::NUMERICAL,
            RunError::Config(_) | RunError::Io { .. } | RunError::Trace(_) => ExitCode::CONFIG,
        }
    }
}

/// Process exit statuses.
pub struct ExitCode;

impl ExitCode {
    pub const OK: i32 = 0;
    pub const EVADER_LOST: i32 = 2;
    pub const TIMEOUT: i32 = 3;
    pub const CONFIG: i32 = 4;
    pub const NUMERICAL: i32 = 5;

    pub fn for_event(kind: TerminalKind) -> i32 {
        match kind {
            TerminalKind::DefenderCapturesPursuer => Self::OK,
            TerminalKind::PursuerCapturesEvader => Self::EVADER_LOST,
            TerminalKind::Timeout => Self::TIMEOUT,
            TerminalKind::DegenerateGeometryAbort => Self::NUMERICAL,
        }
    }
}

#[derive(Debug)]
pub struct RunOutcome {
    pub name: String,
    pub trace: SimulationTrace<f64>,
    pub artifacts: Vec<PathBuf>,
}

impl RunOutcome {
    /// `name event=... t_f=... min_r_EP=...`
    pub fn summary(&self) -> String {
        let e = &self.trace.event;
        format!(
            "{} event={} t_f={:.3} min_r_EP={:.3}",
            self.name,
            e.kind.name(),
            e.t_f,
            e.min_r_ep
        )
    }

    pub fn exit_code(&self) -> i32 {
        ExitCode::for_event(self.trace.event.kind)
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> RunError + '_ {
    move |source| RunError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Simulates `cfg` and writes `<out>/<name>.csv` and `<out>/<name>.svg`
/// as enabled. Nothing is written when `out` is `None`.
pub fn run_scenario(cfg: &ScenarioConfig, out: Option<&Path>) -> Result<RunOutcome, RunError> {
    let scenario = cfg
        .to_scenario()
        .map_err(|source| ConfigError::Invalid { line: None, source })?;
    let trace = run(&scenario).map_err(RunError::Simulation)?;
    let mut artifacts = Vec::new();
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        if cfg.write_csv {
            let path = dir.join(format!("{}.csv", cfg.name));
            let file = File::create(&path).map_err(io_err(&path))?;
            trace::write_csv(&trace, BufWriter::new(file))?;
            artifacts.push(path);
        }
        if cfg.write_svg {
            let path = dir.join(format!("{}.svg", cfg.name));
            fs::write(&path, svg::render(&trace, &cfg.name)).map_err(io_err(&path))?;
            artifacts.push(path);
        }
    }
    Ok(RunOutcome {
        name: cfg.name.clone(),
        trace,
        artifacts,
    })
}

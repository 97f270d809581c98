use std::path::{Path, PathBuf};
use std::process;

use clap::{Parser, Subcommand};

use pursuit_sim::acceptance::{run_criterion, Suite};
use pursuit_sim::scenario::{from_entries, read_entries};
use pursuit_sim::sweep::{self, Axis};
use pursuit_sim::{catalog, parse_scenario, run_scenario, ExitCode};

/// Cooperative evader/defender guidance simulator.
#[derive(Parser)]
#[command(name = "pursuit-sim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario file or catalog entry.
    Run {
        /// Scenario file, or the name of a catalog entry.
        file: String,
        /// Validate only, write nothing.
        #[arg(long)]
        dry_run: bool,
        /// Override the integration step in seconds.
        #[arg(long)]
        dt: Option<f64>,
        /// Output directory (PURSUIT_SIM_OUT takes precedence).
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run the cartesian product of varied keys.
    Sweep {
        file: String,
        /// key=v1,v2,... (repeatable)
        #[arg(long, required = true)]
        vary: Vec<Axis>,
        /// Concurrent runs.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run an acceptance suite: maneuver, info, properties or all.
    Accept { suite: Suite },
    /// List the shipped scenarios.
    Catalog,
}

fn out_dir(arg: PathBuf) -> PathBuf {
    std::env::var_os("PURSUIT_SIM_OUT")
        .map(PathBuf::from)
        .unwrap_or(arg)
}

fn source_text(file: &str) -> Result<String, String> {
    let path = Path::new(file);
    if !path.exists() {
        if let Some(text) = catalog::source(file) {
            return Ok(text.to_string());
        }
    }
    std::fs::read_to_string(path).map_err(|e| format!("{file}: {e}"))
}

fn fail(code: i32, msg: impl std::fmt::Display) -> ! {
    eprintln!("error: {msg}");
    process::exit(code)
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run {
            file,
            dry_run,
            dt,
            out,
        } => {
            let path = Path::new(&file);
            let parsed = if path.exists() {
                parse_scenario(path)
            } else {
                match catalog::load(&file) {
                    Some(r) => r,
                    None => parse_scenario(path),
                }
            };
            let mut cfg = parsed.unwrap_or_else(|e| fail(ExitCode::CONFIG, e));
            if let Some(dt) = dt {
                cfg.dt = dt;
            }
            if let Err(e) = cfg.to_scenario() {
                fail(ExitCode::CONFIG, e);
            }
            if dry_run {
                println!("{} ok", cfg.name);
                ExitCode::OK
            } else {
                let dir = out_dir(out);
                let outcome =
                    run_scenario(&cfg, Some(&dir)).unwrap_or_else(|e| fail(e.exit_code(), e));
                println!("{}", outcome.summary());
                outcome.exit_code()
            }
        }
        Command::Sweep {
            file,
            vary,
            jobs,
            out,
        } => {
            let text = source_text(&file).unwrap_or_else(|e| fail(ExitCode::CONFIG, e));
            let entries = read_entries(&text).unwrap_or_else(|e| fail(ExitCode::CONFIG, e));
            if let Err(e) = from_entries(&entries) {
                fail(ExitCode::CONFIG, e);
            }
            let configs =
                sweep::expand(&entries, &vary).unwrap_or_else(|e| fail(ExitCode::CONFIG, e));
            let dir = out_dir(out);
            let rows = sweep::run_sweep(&configs, jobs, Some(&dir))
                .unwrap_or_else(|e| fail(ExitCode::CONFIG, e));
            for r in &rows {
                match &r.outcome {
                    Ok((event, t_f, min_r)) => {
                        println!("{} event={event} t_f={t_f:.3} min_r_EP={min_r:.3}", r.name)
                    }
                    Err(e) => println!("{} error={e}", r.name),
                }
            }
            sweep::exit_code(&rows)
        }
        Command::Accept { suite } => {
            let mut all = true;
            for &id in suite.ids() {
                let c = run_criterion(id);
                println!("{c}");
                all &= c.pass;
            }
            if all {
                ExitCode::OK
            } else {
                1
            }
        }
        Command::Catalog => {
            for (name, _) in catalog::CATALOG {
                println!("{name:<20} {}", catalog::describe(name).unwrap_or(""));
            }
            ExitCode::OK
        }
    };
    process::exit(code)
}

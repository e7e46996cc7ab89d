//! The `hermite-verify` command line: `run`, `describe` and `list`.
//!
//! Output goes to `--out`, else `$HERMITE_VERIFY_OUT`, else the `out` key of
//! the config, else `results/`. Each run writes `<experiment>.csv`,
//! `<experiment>.summary` and the effective `<experiment>.config`.
//! Exit status: 0 when every check passes, 2 when a check fails, 1 on a
//! configuration or runtime error.

pub mod config;
pub mod registry;
pub mod report;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

pub use config::ExperimentConfig;
pub use registry::{find, names, Experiment, REGISTRY};

use crate::error::{Error, Result};

pub const OUT_ENV: &str = "HERMITE_VERIFY_OUT";

#[derive(Debug, Parser)]
#[command(name = "hermite-verify", about = "Hermite spectral estimates at desk scale")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Run the experiment named in a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the seed in the config.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Anchor, parameters, defaults and thresholds of an experiment.
    Describe { experiment: String },
    /// Registered experiments.
    List,
}

/// What a finished run left behind.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub passed: bool,
    pub csv: PathBuf,
    pub summary: PathBuf,
    pub config: PathBuf,
}

fn unknown(name: &str) -> Error {
    Error::Config(format!(
        "unknown experiment '{name}'; registered: {}",
        names().join(", ")
    ))
}

pub fn output_dir(flag: Option<&Path>, cfg: &ExperimentConfig) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    if let Some(p) = std::env::var_os(OUT_ENV).filter(|v| !v.is_empty()) {
        return PathBuf::from(p);
    }
    cfg.out.as_deref().map(PathBuf::from).unwrap_or_else(|| PathBuf::from("results"))
}

fn io(e: std::io::Error, path: &Path) -> Error {
    Error::Config(format!("{}: {e}", path.display()))
}

/// Runs `cfg` and writes its files into `dir`.
pub fn run_config(cfg: &ExperimentConfig, dir: &Path, threads: Option<usize>) -> Result<RunOutcome> {
    let exp = find(&cfg.name).ok_or_else(|| unknown(&cfg.name))?;
    let run = match threads {
        Some(0) => return Err(Error::Config("--threads must be positive".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(|| exp.run(cfg))?,
        None => exp.run(cfg)?,
    };
    fs::create_dir_all(dir).map_err(|e| io(e, dir))?;
    let write = |ext: &str, body: String| -> Result<PathBuf> {
        let path = dir.join(format!("{}.{ext}", exp.name));
        let mut f = fs::File::create(&path).map_err(|e| io(e, &path))?;
        f.write_all(body.as_bytes()).map_err(|e| io(e, &path))?;
        Ok(path)
    };
    let csv = write("csv", report::csv(&run, cfg.seed))?;
    let summary = write("summary", report::summary(&run.result, cfg.seed))?;
    let config = write("config", cfg.to_string())?;
    Ok(RunOutcome {
        passed: run.result.passed(),
        csv,
        summary,
        config,
    })
}

fn load(path: &Path, seed: Option<u64>) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(path).map_err(|e| io(e, path))?;
    let mut cfg = ExperimentConfig::parse(&text)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

/// Parses `args` (program name first), runs, and returns the exit status.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            if code == 0 {
                let _ = write!(stdout, "{e}");
            } else {
                let _ = write!(stderr, "{e}");
            }
            return code;
        }
    };
    match cli.cmd {
        Cmd::List => {
            for e in REGISTRY {
                let _ = writeln!(stdout, "{}", e.name);
            }
            0
        }
        Cmd::Describe { experiment } => match find(&experiment) {
            Some(e) => {
                let _ = write!(stdout, "{}", e.describe());
                0
            }
            None => {
                let _ = writeln!(stderr, "error: {}", unknown(&experiment));
                1
            }
        },
        Cmd::Run {
            config,
            seed,
            out,
            threads,
        } => {
            let outcome = load(&config, seed).and_then(|cfg| {
                let dir = output_dir(out.as_deref(), &cfg);
                run_config(&cfg, &dir, threads)
            });
            match outcome {
                Ok(o) => {
                    let text = fs::read_to_string(&o.summary).unwrap_or_default();
                    let _ = write!(stdout, "{text}");
                    let _ = writeln!(stdout, "csv = {}", o.csv.display());
                    if o.passed {
                        0
                    } else {
                        2
                    }
                }
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    1
                }
            }
        }
    }
}

pub fn main() -> i32 {
    main_with(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr())
}

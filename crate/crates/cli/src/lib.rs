//! `robustcnot` command-line driver.
//!
//! Every subcommand emits a CSV with a `# params:` comment line echoing the
//! resolved configuration, then a header row. Output is deterministic: grid
//! points may be evaluated in parallel but rows are written in grid order.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::RunConfig;
pub use error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "robustcnot", version, about = "Robust exchange CNOT sweeps and gate-time tables")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// CNOT error against the fractional coupling error Δ.
    SweepDelta(DeltaArgs),
    /// CNOT error for each row of an exchange table.
    SweepSeparation,
    /// CNOT error against the number of characterization measurements.
    Measurements(MeasurementArgs),
    /// CNOT error against total gate time, with dephasing.
    TimeError(TimeErrorArgs),
    /// Gate times for implementation levels 0–2.
    Table1,
    /// Gate counts: recurrence against generated sequences.
    Counts,
    /// Run every sweep and table into an output directory.
    MakeFigures(MeasurementArgs),
}

#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// Comma-separated implementation levels.
    #[arg(long, global = true)]
    pub levels: Option<String>,
    /// Re-isolation slices per concatenated constituent.
    #[arg(long, global = true)]
    pub nr: Option<u32>,
    /// Output file (directory for make-figures); stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Exchange table CSV; the bundled [100] sample when absent.
    #[arg(long, global = true)]
    pub exchange_table: Option<PathBuf>,
    /// Time points per characterization frequency estimate.
    #[arg(long, global = true)]
    pub nt: Option<u64>,
    /// Dephasing time in ms.
    #[arg(long = "t2-ms", global = true)]
    pub t2_ms: Option<f64>,
    /// `key=value` settings file; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Also write the CNOT pulse sequence(s) in text form to this path.
    #[arg(long, global = true)]
    pub dump_seq: Option<PathBuf>,
    /// Single-qubit π rotation time, ns.
    #[arg(long = "t-pi-1q", global = true)]
    pub t_pi_1q: Option<f64>,
    /// Isolated π/4 ZZ rotation time at the reference coupling, ns.
    #[arg(long = "t-quarter-2q", global = true)]
    pub t_quarter_2q: Option<f64>,
    /// Reference coupling for the two-qubit time, µeV.
    #[arg(long = "j-ref", global = true)]
    pub j_ref: Option<f64>,
}

#[derive(Debug, Args, Default)]
pub struct DeltaArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub delta_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub delta_max: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    /// Permit Δ > 1, where correction no longer helps.
    #[arg(long)]
    pub allow_beyond: bool,
}

#[derive(Debug, Args, Default)]
pub struct MeasurementArgs {
    #[arg(long)]
    pub n_min: Option<u64>,
    #[arg(long)]
    pub n_max: Option<u64>,
    #[arg(long)]
    pub n_points: Option<usize>,
}

#[derive(Debug, Args, Default)]
pub struct TimeErrorArgs {
    /// Fractional characterization uncertainty δJ_c/J_c.
    #[arg(long)]
    pub char_uncertainty: Option<f64>,
    #[arg(long)]
    pub char_level: Option<u32>,
}

fn set<T: ToString>(cfg: &mut RunConfig, key: &str, v: &Option<T>) -> CliResult<()> {
    match v {
        Some(v) => cfg.set(key, &v.to_string()),
        None => Ok(()),
    }
}

impl Cli {
    /// Defaults, then the `--config` file, then flags.
    pub fn resolve(&self) -> CliResult<RunConfig> {
        let mut cfg = RunConfig::default();
        let c = &self.common;
        if let Some(path) = &c.config {
            cfg.apply_file(path)?;
        }
        set(&mut cfg, "levels", &c.levels)?;
        set(&mut cfg, "nr", &c.nr)?;
        set(&mut cfg, "nt", &c.nt)?;
        set(&mut cfg, "t2-ms", &c.t2_ms)?;
        set(&mut cfg, "t-pi-1q", &c.t_pi_1q)?;
        set(&mut cfg, "t-quarter-2q", &c.t_quarter_2q)?;
        set(&mut cfg, "j-ref", &c.j_ref)?;
        if let Some(p) = &c.out {
            cfg.out = Some(p.clone());
        }
        if let Some(p) = &c.exchange_table {
            cfg.exchange_table = Some(p.clone());
        }
        if let Some(p) = &c.dump_seq {
            cfg.dump_seq = Some(p.clone());
        }
        match &self.command {
            Command::SweepDelta(a) => {
                set(&mut cfg, "delta-min", &a.delta_min)?;
                set(&mut cfg, "delta-max", &a.delta_max)?;
                set(&mut cfg, "points", &a.points)?;
                if a.allow_beyond {
                    cfg.allow_beyond = true;
                }
            }
            Command::Measurements(a) | Command::MakeFigures(a) => {
                set(&mut cfg, "n-min", &a.n_min)?;
                set(&mut cfg, "n-max", &a.n_max)?;
                set(&mut cfg, "n-points", &a.n_points)?;
            }
            Command::TimeError(a) => {
                set(&mut cfg, "char-uncertainty", &a.char_uncertainty)?;
                set(&mut cfg, "char-level", &a.char_level)?;
            }
            Command::SweepSeparation | Command::Table1 | Command::Counts => {}
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Runs a parsed command line. Messages about written files go to `log`.
pub fn run(cli: &Cli, log: &mut dyn Write) -> CliResult<()> {
    let cfg = cli.resolve()?;
    if let Some(path) = &cfg.dump_seq {
        for p in commands::dump_sequences(&cfg, path)? {
            let _ = writeln!(log, "wrote {}", p.display());
        }
    }
    let doc = match &cli.command {
        Command::SweepDelta(_) => commands::sweep_delta(&cfg)?,
        Command::SweepSeparation => commands::sweep_separation(&cfg)?,
        Command::Measurements(_) => commands::measurements(&cfg)?,
        Command::TimeError(_) => commands::time_error(&cfg)?,
        Command::Table1 => commands::table1(&cfg)?,
        Command::Counts => commands::counts(&cfg)?,
        Command::MakeFigures(_) => {
            let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("figures"));
            for p in commands::make_figures(&cfg, &dir)? {
                let _ = writeln!(log, "wrote {}", p.display());
            }
            return Ok(());
        }
    };
    match &cfg.out {
        Some(path) => {
            doc.write_to(path)?;
            let _ = writeln!(log, "wrote {}", path.display());
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(doc.render().as_bytes())
                .map_err(|e| CliError::io("<stdout>", e))?;
        }
    }
    Ok(())
}

//! Run configuration: defaults, an optional `key=value` file, then flags.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use robustcnot_core::cost::TimingModel;
use robustcnot_core::pulse::{DEFAULT_NR, MAX_LEVEL};

use crate::error::{CliError, CliResult};

/// Highest level the sweeps accept.
pub const MAX_SWEEP_LEVEL: u32 = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub levels: Vec<u32>,
    pub nr: u32,
    /// Whether `nr` was set explicitly (otherwise `table1` infers it).
    pub nr_explicit: bool,
    pub delta_min: f64,
    pub delta_max: f64,
    pub delta_points: usize,
    pub allow_beyond: bool,
    pub exchange_table: Option<PathBuf>,
    pub timing: TimingModel,
    pub nt: u64,
    /// Defaults to 6·N_t + 1 when unset.
    pub n_min: Option<u64>,
    pub n_max: u64,
    pub n_points: usize,
    pub t2_ms: f64,
    pub char_uncertainty: f64,
    pub char_level: u32,
    pub sites_uncharacterized: usize,
    pub sites_characterized: usize,
    pub out: Option<PathBuf>,
    pub dump_seq: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            levels: vec![0, 1, 2],
            nr: DEFAULT_NR,
            nr_explicit: false,
            delta_min: -0.9,
            delta_max: 0.9,
            delta_points: 181,
            allow_beyond: false,
            exchange_table: None,
            timing: TimingModel::default(),
            nt: 10,
            n_min: None,
            n_max: 5000,
            n_points: 60,
            t2_ms: 60.0,
            char_uncertainty: 0.1,
            char_level: 1,
            sites_uncharacterized: 2,
            sites_characterized: 6,
            out: None,
            dump_seq: None,
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> CliResult<T> {
    value
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("bad value `{value}` for `{key}`")))
}

pub fn parse_levels(value: &str) -> CliResult<Vec<u32>> {
    value
        .split(',')
        .map(|s| parse::<u32>("levels", s))
        .collect()
}

fn parse_bool(key: &str, value: &str) -> CliResult<bool> {
    match value.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(CliError::Usage(format!("bad boolean `{other}` for `{key}`"))),
    }
}

impl RunConfig {
    /// Applies one `key=value` setting. Keys match the long flag names;
    /// `_` and `-` are interchangeable.
    pub fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        let key = key.trim().replace('_', "-");
        let k = key.as_str();
        match k {
            "levels" => self.levels = parse_levels(value)?,
            "nr" => {
                self.nr = parse(k, value)?;
                self.nr_explicit = true;
            }
            "delta-min" => self.delta_min = parse(k, value)?,
            "delta-max" => self.delta_max = parse(k, value)?,
            "points" | "delta-points" => self.delta_points = parse(k, value)?,
            "allow-beyond" => self.allow_beyond = parse_bool(k, value)?,
            "exchange-table" => self.exchange_table = Some(PathBuf::from(value.trim())),
            "t-pi-1q" => self.timing.t_pi_1q_ns = parse(k, value)?,
            "t-quarter-2q" => self.timing.t_quarter_2q_ns = parse(k, value)?,
            "j-ref" => self.timing.j_ref_uev = parse(k, value)?,
            "nt" => self.nt = parse(k, value)?,
            "n-min" => self.n_min = Some(parse(k, value)?),
            "n-max" => self.n_max = parse(k, value)?,
            "n-points" => self.n_points = parse(k, value)?,
            "t2-ms" => self.t2_ms = parse(k, value)?,
            "char-uncertainty" => self.char_uncertainty = parse(k, value)?,
            "char-level" => self.char_level = parse(k, value)?,
            "sites-uncharacterized" => self.sites_uncharacterized = parse(k, value)?,
            "sites-characterized" => self.sites_characterized = parse(k, value)?,
            "out" => self.out = Some(PathBuf::from(value.trim())),
            "dump-seq" => self.dump_seq = Some(PathBuf::from(value.trim())),
            _ => return Err(CliError::Usage(format!("unknown config key `{key}`"))),
        }
        Ok(())
    }

    /// Reads `key=value` lines; `#` starts a comment.
    pub fn apply_file(&mut self, path: &Path) -> CliResult<()> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        self.apply_text(&text)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    pub fn apply_text(&mut self, text: &str) -> CliResult<()> {
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("line {}: expected key=value", no + 1)))?;
            self.set(k, v)
                .map_err(|e| CliError::Usage(format!("line {}: {e}", no + 1)))?;
        }
        Ok(())
    }

    pub fn n_min(&self) -> u64 {
        self.n_min.unwrap_or(6 * self.nt + 1)
    }

    pub fn validate(&self) -> CliResult<()> {
        let usage = |m: String| Err(CliError::Usage(m));
        if self.levels.is_empty() {
            return usage("at least one level is required".into());
        }
        if let Some(l) = self.levels.iter().find(|l| **l > MAX_SWEEP_LEVEL) {
            return usage(format!("level {l} outside 0..={MAX_SWEEP_LEVEL}"));
        }
        if self.char_level > MAX_LEVEL.min(MAX_SWEEP_LEVEL) {
            return usage(format!("char-level {} outside 0..={MAX_SWEEP_LEVEL}", self.char_level));
        }
        if self.nr == 0 {
            return usage("nr must be at least 1".into());
        }
        if self.delta_points < 2 {
            return usage("the Δ grid needs at least two points".into());
        }
        if !(self.delta_min < self.delta_max) {
            return usage(format!("delta-min {} must be below delta-max {}", self.delta_min, self.delta_max));
        }
        if !(self.delta_min > -1.0) {
            return usage("Δ must exceed -1 (the coupling must stay positive)".into());
        }
        if !self.allow_beyond && self.delta_max > 1.0 {
            return usage("Δ grid extends beyond 1; pass --allow-beyond to evaluate it".into());
        }
        if self.nt == 0 {
            return usage("nt must be at least 1".into());
        }
        if self.n_points < 1 {
            return usage("the N grid needs at least one point".into());
        }
        let n_min = self.n_min();
        if n_min <= 6 * self.nt {
            return usage(format!("N grid must exceed 6·N_t = {}", 6 * self.nt));
        }
        if self.n_points > 1 && n_min >= self.n_max {
            return usage(format!("n-min {n_min} must be below n-max {}", self.n_max));
        }
        if !(self.t2_ms > 0.0) {
            return usage("t2-ms must be positive".into());
        }
        if !(self.char_uncertainty >= 0.0 && self.char_uncertainty < 1.0) {
            return usage("char-uncertainty must lie in [0, 1)".into());
        }
        self.timing
            .validate()
            .map_err(|e| CliError::Usage(e.to_string()))
    }

    /// Evenly spaced Δ values; symmetric grids hit Δ = 0 exactly.
    pub fn delta_grid(&self) -> Vec<f64> {
        let n = self.delta_points;
        let last = (n - 1) as f64;
        (0..n)
            .map(|i| (self.delta_min * (last - i as f64) + self.delta_max * i as f64) / last)
            .collect()
    }

    /// Log-spaced measurement totals, rounded and deduplicated.
    pub fn n_grid(&self) -> Vec<u64> {
        let lo = self.n_min();
        if self.n_points == 1 {
            return vec![lo];
        }
        let (a, b) = ((lo as f64).ln(), (self.n_max as f64).ln());
        let last = (self.n_points - 1) as f64;
        let mut grid: Vec<u64> = (0..self.n_points)
            .map(|i| (a + (b - a) * i as f64 / last).exp().round() as u64)
            .map(|n| n.clamp(lo, self.n_max))
            .collect();
        grid.dedup();
        grid
    }

    /// Echo of the settings, for the `# params:` line.
    pub fn describe(&self, subcommand: &str) -> String {
        let mut s = format!("subcommand={subcommand}");
        let levels: Vec<String> = self.levels.iter().map(u32::to_string).collect();
        let table = self
            .exchange_table
            .as_ref()
            .map_or("bundled".to_owned(), |p| p.display().to_string());
        let _ = write!(
            s,
            " levels={} nr={} delta_min={} delta_max={} points={} allow_beyond={} exchange_table={} \
             t_pi_1q={} t_quarter_2q={} j_ref={} nt={} n_min={} n_max={} n_points={} t2_ms={} \
             char_uncertainty={} char_level={} sites_uncharacterized={} sites_characterized={}",
            levels.join(","),
            self.nr,
            self.delta_min,
            self.delta_max,
            self.delta_points,
            self.allow_beyond,
            table,
            self.timing.t_pi_1q_ns,
            self.timing.t_quarter_2q_ns,
            self.timing.j_ref_uev,
            self.nt,
            self.n_min(),
            self.n_max,
            self.n_points,
            self.t2_ms,
            self.char_uncertainty,
            self.char_level,
            self.sites_uncharacterized,
            self.sites_characterized,
        );
        s
    }
}

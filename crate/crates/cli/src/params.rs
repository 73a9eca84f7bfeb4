//! Command-line flags, the optional `key = value` config file, and how the
//! two are merged over per-command defaults.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "otto", version, about = "Harmonic quantum Otto refrigerator: sweeps and figure data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// COP at maximum figure of merit against the energy ratio tau.
    CopSweep(CopSweepArgs),
    /// Minimal stroke duration that still cools, against the cold temperature T1.
    CriticalTime(Common),
    /// Adiabaticity factor of one stroke against its duration.
    Qstar(Common),
    /// Full bookkeeping for one operating point.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepVariable {
    TauCl,
    TauQ,
}

#[derive(Debug, Args)]
pub struct CopSweepArgs {
    #[command(flatten)]
    pub common: Common,
    /// Classical (tau = T1/T2) or quantum sweep at fixed beta1*hbar*omega1.
    #[arg(long)]
    pub variable: Option<SweepVariable>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub common: Common,
    /// Adiabaticity factor of the compression stroke (overrides --protocol).
    #[arg(long)]
    pub q1: Option<f64>,
    /// Adiabaticity factor of the expansion stroke (overrides --protocol).
    #[arg(long)]
    pub q2: Option<f64>,
}

#[derive(Debug, Default, Args)]
pub struct Common {
    #[arg(long)]
    pub omega1: Option<f64>,
    #[arg(long)]
    pub omega2: Option<f64>,
    /// Inverse temperature of the cold bath.
    #[arg(long)]
    pub beta1: Option<f64>,
    /// Inverse temperature of the hot bath.
    #[arg(long)]
    pub beta2: Option<f64>,
    /// Cold bath temperature (alternative to --beta1).
    #[arg(long = "T1")]
    pub t1: Option<f64>,
    /// Hot bath temperature (alternative to --beta2).
    #[arg(long = "T2")]
    pub t2: Option<f64>,
    #[arg(long)]
    pub hbar: Option<f64>,
    #[arg(long)]
    pub tcycle: Option<f64>,
    /// Nonadiabatic correction y = Q* - 1.
    #[arg(long)]
    pub y: Option<f64>,
    /// linear, linear-squared, sudden, quasistatic or file:PATH.
    #[arg(long)]
    pub protocol: Option<String>,
    /// Stroke duration.
    #[arg(long)]
    pub t0: Option<f64>,
    /// START:STOP:COUNT[:log] for the swept variable.
    #[arg(long)]
    pub range: Option<String>,
    /// Write CSV here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads for sweeps.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Flat key = value file with defaults for any of the flags above.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

const CONFIG_KEYS: &[&str] = &[
    "omega1", "omega2", "beta1", "beta2", "T1", "T2", "hbar", "tcycle", "y", "protocol", "t0", "range",
    "jobs", "variable", "q1", "q2",
];

/// Parses `key = value` lines; blank lines and `#` comments are ignored.
pub fn parse_config(text: &str) -> Result<HashMap<String, String>, CliError> {
    let mut map = HashMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Invalid(format!("config line {}: expected key = value", n + 1)))?;
        let key = key.trim();
        if !CONFIG_KEYS.contains(&key) {
            return Err(CliError::Invalid(format!("config line {}: unknown key {key:?}", n + 1)));
        }
        map.insert(key.to_string(), value.trim().to_string());
    }
    Ok(map)
}

pub fn load_config(path: Option<&Path>) -> Result<HashMap<String, String>, CliError> {
    match path {
        None => Ok(HashMap::new()),
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| CliError::Invalid(format!("reading config {}: {e}", p.display())))?;
            parse_config(&text)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub log: bool,
}

impl FromStr for Range {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = |why: &str| CliError::Invalid(format!("range {s:?}: {why}"));
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let log = match parts.len() {
            3 => false,
            4 if parts[3] == "log" => true,
            4 if parts[3] == "linear" => false,
            _ => return Err(bad("expected START:STOP:COUNT[:log]")),
        };
        let start: f64 = parts[0].parse().map_err(|_| bad("START is not a number"))?;
        let stop: f64 = parts[1].parse().map_err(|_| bad("STOP is not a number"))?;
        let count: usize = parts[2].parse().map_err(|_| bad("COUNT is not a positive integer"))?;
        if !(start.is_finite() && stop.is_finite()) {
            return Err(bad("bounds must be finite"));
        }
        if count < 2 {
            return Err(bad("COUNT must be at least 2"));
        }
        if start >= stop {
            return Err(bad("START must be below STOP"));
        }
        if log && start <= 0.0 {
            return Err(bad("log spacing needs START > 0"));
        }
        Ok(Range { start, stop, count, log })
    }
}

impl Range {
    /// Grid points with both endpoints exact.
    pub fn points(&self) -> Vec<f64> {
        let n = self.count - 1;
        (0..=n)
            .map(|i| {
                if i == 0 {
                    self.start
                } else if i == n {
                    self.stop
                } else if self.log {
                    let (a, b) = (self.start.ln(), self.stop.ln());
                    (a + (b - a) * i as f64 / n as f64).exp()
                } else {
                    self.start + (self.stop - self.start) * i as f64 / n as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProtocolChoice {
    Linear,
    LinearSquared,
    Sudden,
    Quasistatic,
    File(PathBuf),
}

impl FromStr for ProtocolChoice {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "linear" => Ok(Self::Linear),
            "linear-squared" => Ok(Self::LinearSquared),
            "sudden" => Ok(Self::Sudden),
            "quasistatic" => Ok(Self::Quasistatic),
            _ => match s.strip_prefix("file:") {
                Some(p) if !p.is_empty() => Ok(Self::File(PathBuf::from(p))),
                _ => Err(CliError::Invalid(format!(
                    "unknown protocol {s:?}; expected linear, linear-squared, sudden, quasistatic or file:PATH"
                ))),
            },
        }
    }
}

/// Flags layered over the config file.
pub struct Layers<'a> {
    pub flags: &'a Common,
    pub config: HashMap<String, String>,
}

impl<'a> Layers<'a> {
    pub fn new(flags: &'a Common) -> Result<Self, CliError> {
        Ok(Self {
            flags,
            config: load_config(flags.config.as_deref())?,
        })
    }

    fn from_config<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.config.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| CliError::Invalid(format!("config value for {key} is not valid: {v:?}"))),
        }
    }

    pub fn number(&self, key: &str, flag: Option<f64>) -> Result<Option<f64>, CliError> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.from_config(key),
        }
    }

    pub fn number_or(&self, key: &str, flag: Option<f64>, default: f64) -> Result<f64, CliError> {
        Ok(self.number(key, flag)?.unwrap_or(default))
    }

    pub fn parsed<T: FromStr<Err = CliError>>(&self, key: &str, flag: Option<&str>) -> Result<Option<T>, CliError> {
        match flag.map(str::to_string).or_else(|| self.config.get(key).cloned()) {
            Some(v) => v.parse().map(Some),
            None => Ok(None),
        }
    }

    pub fn text(&self, key: &str) -> Option<&str> {
        self.config.get(key).map(String::as_str)
    }

    /// An inverse temperature given either directly or as a temperature.
    /// Flags win over the config file; within one layer both spellings at
    /// once are rejected.
    fn inverse_temperature(
        &self,
        beta_key: &str,
        t_key: &str,
        beta_flag: Option<f64>,
        t_flag: Option<f64>,
    ) -> Result<Option<f64>, CliError> {
        let pick = |beta: Option<f64>, t: Option<f64>, layer: &str| match (beta, t) {
            (Some(_), Some(_)) => Err(CliError::Invalid(format!(
                "{layer} sets both {beta_key} and {t_key}"
            ))),
            (Some(b), None) => Ok(Some(b)),
            (None, Some(t)) => Ok(Some(1.0 / t)),
            (None, None) => Ok(None),
        };
        if let Some(b) = pick(beta_flag, t_flag, "command line")? {
            return Ok(Some(b));
        }
        pick(self.from_config(beta_key)?, self.from_config(t_key)?, "config file")
    }

    pub fn beta_cold(&self) -> Result<Option<f64>, CliError> {
        self.inverse_temperature("beta1", "T1", self.flags.beta1, self.flags.t1)
    }

    pub fn beta_hot(&self) -> Result<Option<f64>, CliError> {
        self.inverse_temperature("beta2", "T2", self.flags.beta2, self.flags.t2)
    }

    pub fn range(&self) -> Result<Option<Range>, CliError> {
        self.parsed("range", self.flags.range.as_deref())
    }

    pub fn protocol(&self) -> Result<Option<ProtocolChoice>, CliError> {
        self.parsed("protocol", self.flags.protocol.as_deref())
    }

    pub fn jobs(&self) -> Result<Option<usize>, CliError> {
        match self.flags.jobs {
            Some(j) => Ok(Some(j)),
            None => self.from_config("jobs"),
        }
    }
}

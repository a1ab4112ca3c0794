//! Flag parsing and config-file resolution.
//!
//! Every long flag has a mirror key in the optional `--config` JSON file
//! (same spelling, e.g. `"delta-r"`); explicit flags override file values,
//! and built-in defaults fill whatever remains.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use fmfbm::{FmfBmParams, Hurst, PriceModelParams, StableIndex, TimeGrid};

use crate::CliError;

#[derive(Parser)]
#[command(
    name = "fmfbm",
    version,
    about = "Simulate and verify the time-changed fractional Brownian mixture"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Sample ensemble paths of the time-changed mixture (CSV: path_id,t,value)
    Simulate(CommonArgs),
    /// Evaluate every closed form at the given parameters (JSON on stdout)
    Theory(CommonArgs),
    /// Monte Carlo verification checks; exit 1 when an exact oracle fails
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Fit the correlation decay exponent and compare with the predicted one
    LrdScan(LrdArgs),
    /// Sample subdiffusive price paths (CSV: path_id,t,value)
    Price(PriceArgs),
}

#[derive(Subcommand)]
pub enum VerifyCommand {
    /// Stable-sampler Laplace transform check
    Laplace(LaplaceArgs),
    /// Inverse-subordinator moment check
    Moments(MomentsArgs),
    /// Covariance comparison: simulation vs closed forms vs exact oracle
    Cov(CommonArgs),
}

#[derive(Args, Clone, Default)]
pub struct CommonArgs {
    /// Stability index in (0, 1]; 1 is the identity clock
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Coefficient of the H1 component
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Coefficient of the H2 component
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    /// Hurst exponent of the first component, in (0, 1)
    #[arg(long)]
    pub h1: Option<f64>,
    /// Hurst exponent of the second component, in (0, 1)
    #[arg(long)]
    pub h2: Option<f64>,
    /// Anchor time s
    #[arg(long)]
    pub s: Option<f64>,
    /// Evaluation time t
    #[arg(long)]
    pub t: Option<f64>,
    /// Grid spec: lin:<t0>:<t1>:<n> or log:<t0>:<t1>:<n>
    #[arg(long)]
    pub grid: Option<String>,
    /// Number of Monte Carlo paths
    #[arg(long)]
    pub paths: Option<usize>,
    /// Operational-time step; defaults to an expected ~1e4-point grid
    #[arg(long = "delta-r")]
    pub delta_r: Option<f64>,
    /// Master seed; every command is deterministic given its full flag set
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file for CSV artifacts (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format for path artifacts: csv (default) or json
    #[arg(long)]
    pub format: Option<String>,
    /// Tolerance for decay-exponent verdicts
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// JSON file whose keys mirror the long flags; flags override it
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args)]
pub struct LaplaceArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Comma-separated Laplace arguments, e.g. 0.5,1,2
    #[arg(long)]
    pub u: Option<String>,
}

#[derive(Args)]
pub struct MomentsArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Comma-separated moment orders, e.g. 1,2 or 1.4
    #[arg(long)]
    pub orders: Option<String>,
}

#[derive(Args)]
pub struct LrdArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Replay mode: fit a previously written t,corr,stderr CSV instead of
    /// simulating
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Args)]
pub struct PriceArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Initial price, > 0
    #[arg(long)]
    pub s0: Option<f64>,
    /// Rate of return
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    /// Volatility
    #[arg(long, allow_negative_numbers = true)]
    pub sigma: Option<f64>,
}

/// Flag values after merging with the config file.
pub struct Resolved {
    file: serde_json::Map<String, serde_json::Value>,
    pub common: CommonArgs,
}

impl Resolved {
    pub fn new(common: &CommonArgs) -> Result<Self, CliError> {
        let file = match &common.config {
            None => serde_json::Map::new(),
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Io(format!("cannot read config {path:?}: {e}")))?;
                let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| {
                    CliError::Params(format!("config {path:?} is not valid JSON: {e}"))
                })?;
                match value {
                    serde_json::Value::Object(map) => map,
                    _ => {
                        return Err(CliError::Params(format!(
                            "config {path:?} must hold a JSON object"
                        )))
                    }
                }
            }
        };
        Ok(Self {
            file,
            common: common.clone(),
        })
    }

    fn file_f64(&self, key: &str) -> Option<f64> {
        self.file.get(key).and_then(|v| v.as_f64())
    }

    fn file_u64(&self, key: &str) -> Option<u64> {
        self.file.get(key).and_then(|v| v.as_u64())
    }

    fn file_str(&self, key: &str) -> Option<String> {
        self.file.get(key).and_then(|v| v.as_str().map(String::from))
    }

    pub fn f64_or(&self, flag: Option<f64>, key: &str, default: f64) -> f64 {
        flag.or_else(|| self.file_f64(key)).unwrap_or(default)
    }

    pub fn f64_opt(&self, flag: Option<f64>, key: &str) -> Option<f64> {
        flag.or_else(|| self.file_f64(key))
    }

    pub fn alpha(&self) -> Result<StableIndex, CliError> {
        Ok(StableIndex::new(self.f64_or(self.common.alpha, "alpha", 0.8))?)
    }

    pub fn params(&self) -> Result<FmfBmParams, CliError> {
        let a = self.f64_or(self.common.a, "a", 1.0);
        let b = self.f64_or(self.common.b, "b", 1.0);
        let h1 = Hurst::new(self.f64_or(self.common.h1, "h1", 0.3))?;
        let h2 = Hurst::new(self.f64_or(self.common.h2, "h2", 0.7))?;
        Ok(FmfBmParams::new(a, b, h1, h2, self.alpha()?)?)
    }

    pub fn price_params(&self, args: &PriceArgs) -> Result<PriceModelParams, CliError> {
        let s0 = self.f64_or(args.s0, "s0", 1.0);
        let mu = self.f64_or(args.mu, "mu", 0.0);
        let sigma = self.f64_or(args.sigma, "sigma", 1.0);
        Ok(PriceModelParams::new(s0, mu, sigma, self.params()?)?)
    }

    pub fn s(&self) -> f64 {
        self.f64_or(self.common.s, "s", 1.0)
    }

    pub fn t(&self) -> f64 {
        self.f64_or(self.common.t, "t", 2.0)
    }

    pub fn paths(&self, default: usize) -> usize {
        self.common
            .paths
            .or_else(|| self.file_u64("paths").map(|v| v as usize))
            .unwrap_or(default)
    }

    pub fn seed(&self) -> u64 {
        self.common.seed.or_else(|| self.file_u64("seed")).unwrap_or(0)
    }

    pub fn tolerance(&self) -> f64 {
        self.f64_or(self.common.tolerance, "tolerance", 0.15)
    }

    /// delta_r flag/file value, or the expected-grid default for the horizon.
    pub fn delta_r(&self, alpha: StableIndex, t_max: f64) -> f64 {
        self.f64_opt(self.common.delta_r, "delta-r")
            .unwrap_or_else(|| fmfbm::default_delta_r(alpha, t_max))
    }

    pub fn grid(&self, default_spec: &str) -> Result<TimeGrid, CliError> {
        let spec = self
            .common
            .grid
            .clone()
            .or_else(|| self.file_str("grid"))
            .unwrap_or_else(|| default_spec.to_string());
        parse_grid_spec(&spec)
    }

    pub fn out(&self) -> Option<PathBuf> {
        self.common
            .out
            .clone()
            .or_else(|| self.file_str("out").map(PathBuf::from))
    }

    pub fn format(&self) -> Result<OutputFormat, CliError> {
        let value = self
            .common
            .format
            .clone()
            .or_else(|| self.file_str("format"))
            .unwrap_or_else(|| "csv".to_string());
        match value.as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(CliError::Params(format!(
                "unknown format {other:?}; expected csv or json"
            ))),
        }
    }

    pub fn list(&self, flag: &Option<String>, key: &str, default: &str) -> Result<Vec<f64>, CliError> {
        let spec = flag
            .clone()
            .or_else(|| self.file_str(key))
            .unwrap_or_else(|| default.to_string());
        spec.split(',')
            .map(|piece| {
                piece.trim().parse::<f64>().map_err(|_| {
                    CliError::Params(format!("cannot parse {piece:?} in list {spec:?}"))
                })
            })
            .collect()
    }

    pub fn input(&self, flag: &Option<PathBuf>) -> Option<PathBuf> {
        flag.clone().or_else(|| self.file_str("input").map(PathBuf::from))
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Parses `lin:<t0>:<t1>:<n>` or `log:<t0>:<t1>:<n>`.
pub fn parse_grid_spec(spec: &str) -> Result<TimeGrid, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 4 {
        return Err(CliError::Params(format!(
            "grid spec must be lin:<t0>:<t1>:<n> or log:<t0>:<t1>:<n>, got {spec:?}"
        )));
    }
    let t0: f64 = parts[1]
        .parse()
        .map_err(|_| CliError::Params(format!("bad t0 in grid spec {spec:?}")))?;
    let t1: f64 = parts[2]
        .parse()
        .map_err(|_| CliError::Params(format!("bad t1 in grid spec {spec:?}")))?;
    let n: usize = parts[3]
        .parse()
        .map_err(|_| CliError::Params(format!("bad n in grid spec {spec:?}")))?;
    match parts[0] {
        "lin" => Ok(TimeGrid::linspace(t0, t1, n)?),
        "log" => Ok(TimeGrid::logspace(t0, t1, n)?),
        other => Err(CliError::Params(format!(
            "grid spec must start with lin or log, got {other:?}"
        ))),
    }
}

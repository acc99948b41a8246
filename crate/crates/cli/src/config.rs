use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepKind {
    /// Fitted modulus exponent of I^alpha[x^-beta].
    Sharpness,
    /// Derivative modulus bound on x^beta.
    Derivative,
    /// Fractional-integral modulus and growth bounds.
    Integral,
    /// Riesz modulus bound.
    Riesz,
    /// Dilation identities.
    Scaling,
    /// Derivative-constant curve over beta.
    Kd,
    /// Grand Lebesgue form of the Riesz bound.
    Gls,
}

/// Flags shared by every subcommand. Lists are comma separated.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Fractional orders.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub alpha: Vec<f64>,
    /// Lebesgue exponents.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub p: Vec<f64>,
    /// Power exponents of test functions.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub beta: Vec<f64>,
    /// Window sizes.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub h: Vec<f64>,
    /// Dyadic window sizes 2^-k for k in LO..=HI, written LO:HI.
    #[arg(long, value_name = "LO:HI")]
    pub dyadic: Option<String>,
    /// Dimension (1 or 2).
    #[arg(long)]
    pub d: Option<usize>,
    /// Grid cells per axis (at least 64); powers of two keep dyadic windows aligned.
    #[arg(long)]
    pub n: Option<usize>,
    /// Dilation factors.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub lambda: Vec<f64>,
    /// Proxy constants, KEY=VALUE (repeatable).
    #[arg(long, value_name = "KEY=VALUE")]
    pub proxy: Vec<String>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// JSON file with defaults for any of these flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Test function: power:B, singular:B, indicator:C:D or const:C.
    #[arg(long = "f", value_name = "SPEC")]
    pub function: Option<String>,
    /// Sweep to run.
    #[arg(long, value_enum)]
    pub cmd: Option<SweepKind>,
    /// Norm variant: local or global (integral), lebesgue or orlicz (riesz).
    #[arg(long)]
    pub variant: Option<String>,
    /// Stored JSON run to re-render.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

/// Contents of a `--config` file. Field names follow the flags.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct FileConfig {
    alpha: Vec<f64>,
    p: Vec<f64>,
    beta: Vec<f64>,
    h: Vec<f64>,
    dyadic: Option<String>,
    d: Option<usize>,
    n: Option<usize>,
    lambda: Vec<f64>,
    proxy: BTreeMap<String, f64>,
    out: Option<PathBuf>,
    format: Option<Format>,
    seed: Option<u64>,
    f: Option<String>,
    cmd: Option<SweepKind>,
    variant: Option<String>,
    input: Option<PathBuf>,
}

/// Flags merged over the config file, with defaults filled in.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub alpha: Vec<f64>,
    pub p: Vec<f64>,
    pub beta: Vec<f64>,
    pub h: Vec<f64>,
    pub d: usize,
    pub n: usize,
    pub lambda: Vec<f64>,
    pub proxy: BTreeMap<String, f64>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
    pub function: Option<String>,
    pub cmd: Option<SweepKind>,
    pub variant: Option<String>,
    #[serde(skip)]
    pub input: Option<PathBuf>,
}

pub const MIN_N: usize = 64;
pub const DEFAULT_N: usize = 2048;
pub const DEFAULT_SEED: u64 = 1;
/// Largest default window is `2^-DEFAULT_K_LO`.
pub const DEFAULT_K_LO: i32 = 3;
/// Smallest default window spans at least this many cells.
pub const MIN_WINDOW_CELLS: f64 = 16.0;

fn pick<T>(flag: Vec<T>, file: Vec<T>) -> Vec<T> {
    if flag.is_empty() {
        file
    } else {
        flag
    }
}

fn parse_dyadic(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("--dyadic expects LO:HI with integers LO <= HI, got {s:?}"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    let lo: i32 = lo.trim().parse().map_err(|_| bad())?;
    let hi: i32 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi || !(0..=60).contains(&lo) || hi > 60 {
        return Err(bad());
    }
    Ok(fracmod::harness::dyadic(lo, hi))
}

fn parse_proxy(items: &[String]) -> Result<BTreeMap<String, f64>, CliError> {
    let mut out = BTreeMap::new();
    for item in items {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--proxy expects KEY=VALUE, got {item:?}")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("--proxy value for {k:?} is not a number")))?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

fn read_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
}

impl RunConfig {
    pub fn resolve(flags: Flags) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(path) => read_file(path)?,
            None => FileConfig::default(),
        };
        let h = if let Some(spec) = flags.dyadic.as_deref() {
            parse_dyadic(spec)?
        } else if !flags.h.is_empty() {
            flags.h
        } else if let Some(spec) = file.dyadic.as_deref() {
            parse_dyadic(spec)?
        } else {
            file.h
        };
        let mut proxy = file.proxy;
        proxy.extend(parse_proxy(&flags.proxy)?);
        let cfg = Self {
            alpha: pick(flags.alpha, file.alpha),
            p: pick(flags.p, file.p),
            beta: pick(flags.beta, file.beta),
            h,
            d: flags.d.or(file.d).unwrap_or(1),
            n: flags.n.or(file.n).unwrap_or(DEFAULT_N),
            lambda: pick(flags.lambda, file.lambda),
            proxy,
            out: flags.out.or(file.out),
            format: flags.format.or(file.format).unwrap_or(Format::Json),
            seed: flags.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            function: flags.function.or(file.f),
            cmd: flags.cmd.or(file.cmd),
            variant: flags.variant.or(file.variant),
            input: flags.input.or(file.input),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.n < MIN_N {
            return Err(CliError::Usage(format!("--n must be at least {MIN_N}, got {}", self.n)));
        }
        if !(self.d == 1 || self.d == 2) {
            return Err(CliError::Usage(format!("--d must be 1 or 2, got {}", self.d)));
        }
        for (name, list) in [("alpha", &self.alpha), ("p", &self.p), ("beta", &self.beta), ("h", &self.h), ("lambda", &self.lambda)] {
            if let Some(v) = list.iter().find(|v| !v.is_finite()) {
                return Err(CliError::Usage(format!("--{name} value {v} is not finite")));
            }
        }
        Ok(())
    }

    /// The list named `name`, or a usage error if it is empty.
    pub fn require<'a>(&self, name: &str, list: &'a [f64]) -> Result<&'a [f64], CliError> {
        if list.is_empty() {
            Err(CliError::Usage(format!("--{name} is required for this command")))
        } else {
            Ok(list)
        }
    }

    /// The single value of a list that must hold exactly one entry.
    pub fn single(&self, name: &str, list: &[f64]) -> Result<f64, CliError> {
        match self.require(name, list)? {
            [v] => Ok(*v),
            _ => Err(CliError::Usage(format!("--{name} takes a single value for this command"))),
        }
    }

    /// The requested windows, or dyadic ones from `2^-3` down to the
    /// smallest power of two spanning `MIN_WINDOW_CELLS` cells of size `step`
    /// (at least four windows).
    pub fn windows(&self, step: f64) -> Vec<f64> {
        if self.h.is_empty() {
            let k_hi = (1.0 / (MIN_WINDOW_CELLS * step)).log2().floor() as i32;
            fracmod::harness::dyadic(DEFAULT_K_LO, k_hi.max(DEFAULT_K_LO + 3))
        } else {
            self.h.clone()
        }
    }

    pub fn proxy_or(&self, key: &str, default: f64) -> f64 {
        self.proxy.get(key).copied().unwrap_or(default)
    }

    pub fn function_or(&self, default: &str) -> Result<fracmod::ClosedFormFunction, CliError> {
        let spec = self.function.as_deref().unwrap_or(default);
        spec.parse().map_err(|e: fracmod::Error| CliError::Usage(format!("--f: {e}")))
    }
}

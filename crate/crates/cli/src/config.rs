//! Run configuration: optional `key=value` file, overridden by flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ionbound::bounds::Constants;
use ionbound::grid::MIN_NODES;
use ionbound::hartree::scf::ScfConfig;

/// Environment variable naming the directory results go to when `--output` is absent.
pub const OUTPUT_DIR_ENV: &str = "IONBOUND_OUTPUT_DIR";

pub const C_LO_RANGE: (f64, f64) = (1.0, 2.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("format must be csv or json, got {other:?}")),
        }
    }
}

/// Values that may come from the config file or from flags.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub c_lo: Option<f64>,
    pub c_gn: Option<f64>,
    pub d_const: Option<f64>,
    pub beta_lower: Option<f64>,
    pub nodes: Option<usize>,
    pub r_max: Option<f64>,
    pub mixing: Option<f64>,
    pub tol_density: Option<f64>,
    pub max_iter: Option<usize>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
}

impl Overrides {
    /// Fields set in `other` win.
    pub fn merged(self, other: Overrides) -> Overrides {
        Overrides {
            c_lo: other.c_lo.or(self.c_lo),
            c_gn: other.c_gn.or(self.c_gn),
            d_const: other.d_const.or(self.d_const),
            beta_lower: other.beta_lower.or(self.beta_lower),
            nodes: other.nodes.or(self.nodes),
            r_max: other.r_max.or(self.r_max),
            mixing: other.mixing.or(self.mixing),
            tol_density: other.tol_density.or(self.tol_density),
            max_iter: other.max_iter.or(self.max_iter),
            seed: other.seed.or(self.seed),
            format: other.format.or(self.format),
            output: other.output.or(self.output),
        }
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str, lineno: usize) -> Result<Option<T>, String>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map(Some)
        .map_err(|e| format!("config line {lineno}: {key}: {e}"))
}

/// Parse `key=value` lines. Blank lines and `#` comments are skipped; unknown
/// keys are an error so typos do not pass silently.
pub fn parse_config(text: &str) -> Result<Overrides, String> {
    let mut o = Overrides::default();
    let mut seen = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {lineno}: expected key=value"))?;
        let (key, value) = (key.trim(), value.trim());
        if let Some(prev) = seen.insert(key.to_string(), lineno) {
            return Err(format!("config line {lineno}: {key} already set on line {prev}"));
        }
        match key {
            "c_lo" => o.c_lo = parse_value(key, value, lineno)?,
            "c_gn" => o.c_gn = parse_value(key, value, lineno)?,
            "d_const" | "d" => o.d_const = parse_value(key, value, lineno)?,
            "beta_lower" => o.beta_lower = parse_value(key, value, lineno)?,
            "n" | "nodes" => o.nodes = parse_value(key, value, lineno)?,
            "r_max" => o.r_max = parse_value(key, value, lineno)?,
            "mixing" => o.mixing = parse_value(key, value, lineno)?,
            "tol_density" => o.tol_density = parse_value(key, value, lineno)?,
            "max_iter" => o.max_iter = parse_value(key, value, lineno)?,
            "seed" => o.seed = parse_value(key, value, lineno)?,
            "format" => o.format = parse_value(key, value, lineno)?,
            "output" => o.output = Some(PathBuf::from(value)),
            other => return Err(format!("config line {lineno}: unknown key {other:?}")),
        }
    }
    Ok(o)
}

pub fn read_config(path: &Path) -> Result<Overrides, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    parse_config(&text)
}

fn in_range(name: &str, v: f64, lo: f64, hi: f64) -> Result<f64, String> {
    if v.is_finite() && v >= lo && v <= hi {
        Ok(v)
    } else {
        Err(format!("{name} must lie in [{lo}, {hi}], got {v}"))
    }
}

/// Validated settings for one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub constants: Constants,
    pub scf: ScfConfig,
    pub seed: u64,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_overrides(o: &Overrides) -> Result<Self, String> {
        // C_LO and C_GN recompute D; an explicit D is applied last
        let mut c = Constants::default();
        if let Some(v) = o.c_lo {
            c = c.with_c_lo(in_range("c_lo", v, C_LO_RANGE.0, C_LO_RANGE.1)?);
        }
        if let Some(v) = o.c_gn {
            c = c.with_c_gn(in_range("c_gn", v, 0.01, 1.0)?);
        }
        if let Some(v) = o.d_const {
            c = c.with_d(in_range("d_const", v, 0.01, 2.0)?);
        }
        if let Some(v) = o.beta_lower {
            c = c.with_beta_lower(in_range("beta_lower", v, 0.5, 1.0)?);
        }

        let mut scf = ScfConfig::default();
        if let Some(n) = o.nodes {
            if n < MIN_NODES {
                return Err(format!("n must be at least {MIN_NODES}, got {n}"));
            }
            scf.nodes = n;
        }
        if let Some(v) = o.r_max {
            scf.r_max = in_range("r_max", v, 1.0, 1e5)?;
        }
        if let Some(v) = o.mixing {
            scf.mixing = v;
        }
        if let Some(v) = o.tol_density {
            scf.tol_density = v;
        }
        if let Some(v) = o.max_iter {
            scf.max_iter = v;
        }
        scf.validate().map_err(|e| e.to_string())?;

        Ok(Self { constants: c, scf, seed: o.seed.unwrap_or(2024), format: o.format, output: o.output.clone() })
    }
}

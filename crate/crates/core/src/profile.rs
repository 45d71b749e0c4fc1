//! Radially symmetric functions sampled on a [`RadialGrid`], plus the
//! two-column text format used to persist them.

use crate::error::{Error, Result};
use crate::grid::{RadialGrid, DEFAULT_INNER_RATIO, TAIL_LIMIT};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::io::{BufRead, Write};

/// Closed-form origin of a sampled profile, kept for oracle comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ClosedForm {
    /// `amplitude · e^{−decay·r}`
    Exponential { amplitude: f64, decay: f64 },
    /// `amplitude · e^{−r²/(2·width²)}`
    Gaussian { amplitude: f64, width: f64 },
}

impl ClosedForm {
    pub fn eval(&self, r: f64) -> f64 {
        match *self {
            ClosedForm::Exponential { amplitude, decay } => amplitude * (-decay * r).exp(),
            ClosedForm::Gaussian { amplitude, width } => {
                amplitude * (-0.5 * (r / width).powi(2)).exp()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    grid: RadialGrid,
    values: Vec<f64>,
    tag: Option<ClosedForm>,
}

impl RadialProfile {
    pub fn new(grid: RadialGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidInput(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite value at node {i}")));
        }
        Ok(Self { grid, values, tag: None })
    }

    /// Sample `f` on the nodes of `grid`.
    pub fn from_fn(grid: RadialGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.nodes().iter().map(|&r| f(r)).collect();
        Self::new(grid, values)
    }

    /// Sample `f` on an `n`-node log grid, doubling `r_max` from `r_max_start`
    /// until every integrand `r^k f²` and `r^k f′²`, `k ≤ 6`, passes the tail criterion.
    pub fn sample_adaptive(n: usize, r_max_start: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        let mut r_max = r_max_start;
        let mut last = None;
        for _ in 0..40 {
            let grid = RadialGrid::log_with_ratio(n, r_max, DEFAULT_INNER_RATIO)?;
            let p = Self::from_fn(grid, &f)?;
            let worst = p.worst_tail();
            if worst <= TAIL_LIMIT {
                return Ok(p);
            }
            last = Some(worst);
            r_max *= 2.0;
        }
        Err(Error::TailNotConverged { fraction: last.unwrap_or(f64::NAN), limit: TAIL_LIMIT })
    }

    /// Closed-form profile on an adaptively sized grid, tagged for oracle tests.
    pub fn closed_form(form: ClosedForm, n: usize) -> Result<Self> {
        let start = match form {
            ClosedForm::Exponential { decay, .. } => 10.0 / decay,
            ClosedForm::Gaussian { width, .. } => 3.0 * width,
        };
        let mut p = Self::sample_adaptive(n, start, |r| form.eval(r))?;
        p.tag = Some(form);
        Ok(p)
    }

    pub fn exponential(decay: f64, n: usize) -> Result<Self> {
        Self::closed_form(ClosedForm::Exponential { amplitude: 1.0, decay }, n)
    }

    pub fn gaussian(width: f64, n: usize) -> Result<Self> {
        Self::closed_form(ClosedForm::Gaussian { amplitude: 1.0, width }, n)
    }

    /// Largest tail fraction over `r^k ψ²` and `r^k ψ′²`, `k = 0..=6`.
    pub fn worst_tail(&self) -> f64 {
        let r = self.grid.nodes();
        let d = self.grid.derivative(&self.values);
        (0..=6)
            .flat_map(|k| [(k, &self.values), (k, &d)])
            .map(|(k, v)| {
                let f: Vec<f64> = r.iter().zip(v.iter()).map(|(r, v)| r.powi(k) * v * v).collect();
                self.grid.tail_fraction(&f)
            })
            .fold(0.0, f64::max)
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn tag(&self) -> Option<ClosedForm> {
        self.tag
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == 0.0)
    }

    /// Value at an arbitrary radius (cubic interpolation in `ln r`).
    pub fn at(&self, r: f64) -> f64 {
        self.grid.interpolate(&self.values, r)
    }

    /// `ψ_{λ,μ}(r) = λ^{1/2} μ^{3/2} ψ(μ r)`, represented on the grid scaled by `1/μ`
    /// so that the discrete functionals transform exactly.
    pub fn rescaled(&self, lambda: f64, mu: f64) -> Self {
        let amp = lambda.sqrt() * mu.powf(1.5);
        Self {
            grid: self.grid.scaled(1.0 / mu),
            values: self.values.iter().map(|v| amp * v).collect(),
            tag: self.tag.map(|t| match t {
                ClosedForm::Exponential { amplitude, decay } => ClosedForm::Exponential {
                    amplitude: amplitude * amp,
                    decay: decay * mu,
                },
                ClosedForm::Gaussian { amplitude, width } => ClosedForm::Gaussian {
                    amplitude: amplitude * amp,
                    width: width / mu,
                },
            }),
        }
    }

    /// Multiply every value by `factor`.
    pub fn scaled_values(&self, factor: f64) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| factor * v).collect(),
            tag: None,
        }
    }

    /// Resample onto another grid; zero beyond the original `r_max`.
    pub fn resample(&self, grid: &RadialGrid) -> Self {
        let values = grid.nodes().iter().map(|&r| self.at(r)).collect();
        Self { grid: grid.clone(), values, tag: None }
    }

    /// Header line of the text format.
    pub fn header(&self) -> String {
        format!("# radial-profile v1 n={} rmax={:e}", self.len(), self.grid.r_max())
    }

    pub fn to_text(&self) -> String {
        let mut s = self.header();
        s.push('\n');
        for (r, v) in self.grid.nodes().iter().zip(&self.values) {
            let _ = writeln!(s, "{r:e} {v:e}");
        }
        s
    }

    pub fn write_text<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        out.write_all(self.to_text().as_bytes())
    }

    pub fn read_text<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty input".into()))?
            .map_err(|e| Error::Parse(e.to_string()))?;
        let (n, r_max) = parse_header(&header)?;
        let mut nodes = Vec::with_capacity(n);
        let mut values = Vec::with_capacity(n);
        for (lineno, line) in lines.enumerate() {
            let line = line.map_err(|e| Error::Parse(e.to_string()))?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split_whitespace();
            let mut num = || -> Result<f64> {
                cols.next()
                    .ok_or_else(|| Error::Parse(format!("line {}: expected two columns", lineno + 2)))?
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 2)))
            };
            nodes.push(num()?);
            values.push(num()?);
        }
        if nodes.len() != n {
            return Err(Error::Parse(format!("header promises {n} nodes, found {}", nodes.len())));
        }
        let last = *nodes.last().ok_or_else(|| Error::Parse("no nodes".into()))?;
        if ((last - r_max) / r_max).abs() > 1e-12 {
            return Err(Error::Parse(format!("last node {last} disagrees with rmax {r_max}")));
        }
        let grid = RadialGrid::log_with_ratio(n, r_max, nodes[0] / r_max)?;
        for (i, (a, b)) in grid.nodes().iter().zip(&nodes).enumerate() {
            if ((a - b) / a).abs() > 1e-9 {
                return Err(Error::Parse(format!("node {i} at {b} is not on a log grid")));
            }
        }
        Self::new(grid, values)
    }
}

fn parse_header(line: &str) -> Result<(usize, f64)> {
    let rest = line
        .strip_prefix("# radial-profile v1")
        .ok_or_else(|| Error::Parse(format!("bad header: {line}")))?;
    let mut n = None;
    let mut r_max = None;
    for field in rest.split_whitespace() {
        if let Some(v) = field.strip_prefix("n=") {
            n = v.parse::<usize>().ok();
        } else if let Some(v) = field.strip_prefix("rmax=") {
            r_max = v.parse::<f64>().ok();
        }
    }
    match (n, r_max) {
        (Some(n), Some(r)) => Ok((n, r)),
        _ => Err(Error::Parse(format!("header missing n= or rmax=: {line}"))),
    }
}

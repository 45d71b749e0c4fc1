//! Nam's continuum constant
//!
//! ```text
//! β = inf_ρ ½∬ρ(x)ρ(y)(|x|²+|y|²)/|x−y| / (∫|x|ρ · ∫ρ)
//! ```
//!
//! evaluated on radial trial densities, and its discrete analogue `α_N` over
//! point configurations.

use crate::error::{Error, Result};
use crate::grid::{RadialGrid, DEFAULT_NODES, TAIL_LIMIT};
use crate::profile::RadialProfile;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

const FOUR_PI: f64 = 4.0 * PI;
/// Adopted lower bound on `β`.
pub const BETA_LOWER: f64 = 0.8218;
/// Published variational upper bound on `β`.
pub const BETA_UPPER: f64 = 0.8705;

/// A nonnegative radial density `ρ` (not squared).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TrialDensity {
    /// Sampled density; `ρ ~ r^origin_power` below the first node.
    Radial { profile: RadialProfile, origin_power: f64 },
    /// Uniform shells of total mass `weights[i]` at `radii[i]`.
    Shells { radii: Vec<f64>, weights: Vec<f64> },
}

impl TrialDensity {
    pub fn radial(profile: RadialProfile, origin_power: f64) -> Result<Self> {
        if let Some(i) = profile.values().iter().position(|v| *v < 0.0) {
            return Err(Error::InvalidInput(format!("negative density at node {i}")));
        }
        if origin_power <= -3.0 {
            return Err(Error::InvalidInput(format!(
                "density ~ r^{origin_power} is not integrable at the origin"
            )));
        }
        Ok(Self::Radial { profile, origin_power })
    }

    /// Sample `f` on an `n`-node log grid whose first node sits at `inner`,
    /// doubling `r_max` until the mass and first two moments pass the tail criterion.
    pub fn from_fn(f: impl Fn(f64) -> f64, origin_power: f64, inner: f64, n: usize) -> Result<Self> {
        let mut r_max = 1e6 * inner;
        let mut worst = f64::NAN;
        for _ in 0..60 {
            let grid = RadialGrid::log_with_ratio(n, r_max, inner / r_max)?;
            let profile = RadialProfile::from_fn(grid, &f)?;
            worst = (2..=4)
                .map(|k| {
                    let g = profile.grid();
                    let v: Vec<f64> = g.nodes().iter().zip(profile.values()).map(|(r, p)| r.powi(k) * p).collect();
                    g.tail_fraction(&v)
                })
                .fold(0.0, f64::max);
            if worst <= TAIL_LIMIT {
                return Self::radial(profile, origin_power);
            }
            r_max *= 2.0;
        }
        Err(Error::TailNotConverged { fraction: worst, limit: TAIL_LIMIT })
    }

    pub fn shells(radii: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if radii.len() != weights.len() || radii.is_empty() {
            return Err(Error::InvalidInput("shell radii and weights must be nonempty and equal in length".into()));
        }
        if radii.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
            return Err(Error::InvalidInput("shell radii must be positive".into()));
        }
        if weights.iter().any(|w| !(*w >= 0.0 && w.is_finite())) {
            return Err(Error::InvalidInput("shell weights must be nonnegative".into()));
        }
        Ok(Self::Shells { radii, weights })
    }

    pub fn shell(radius: f64) -> Result<Self> {
        Self::shells(vec![radius], vec![1.0])
    }

    /// `ρ(r/λ)`, the same shape dilated by `λ`.
    pub fn dilated(&self, lambda: f64) -> Self {
        match self {
            Self::Radial { profile, origin_power } => Self::Radial {
                profile: RadialProfile::new(profile.grid().scaled(lambda), profile.values().to_vec())
                    .expect("same length"),
                origin_power: *origin_power,
            },
            Self::Shells { radii, weights } => Self::Shells {
                radii: radii.iter().map(|r| r * lambda).collect(),
                weights: weights.clone(),
            },
        }
    }
}

/// `½∬ρρ(|x|²+|y|²)/|x−y| / (∫|x|ρ ∫ρ)`.
///
/// The angular average of `1/|x−y|` is `1/max(r, s)`, so the numerator is a
/// radial double integral, computed in linear time from running moments.
pub fn beta_functional(rho: &TrialDensity) -> Result<f64> {
    match rho {
        TrialDensity::Radial { profile, origin_power } => beta_radial(profile, *origin_power),
        TrialDensity::Shells { radii, weights } => beta_shells(radii, weights),
    }
}

fn beta_radial(p: &RadialProfile, origin_power: f64) -> Result<f64> {
    if p.is_zero() {
        return Err(Error::ZeroDensity);
    }
    let g = p.grid();
    let r = g.nodes();
    let q = 2.0 + origin_power;
    let w: Vec<f64> = r.iter().zip(p.values()).map(|(r, v)| FOUR_PI * r * r * v).collect();
    let w2: Vec<f64> = w.iter().zip(r).map(|(w, r)| w * r * r).collect();
    let (r0, w0) = (r[0], w[0]);
    let m0: Vec<f64> = g.cumulative(&w).iter().map(|c| c + w0 * r0 / (q + 1.0)).collect();
    let m2: Vec<f64> = g.cumulative(&w2).iter().map(|c| c + w0 * r0 * r0 * r0 / (q + 3.0)).collect();
    // ordered pairs s < r, each counted once; the factor ½ cancels the symmetry
    let f: Vec<f64> = (0..r.len()).map(|i| w[i] * (r[i] * m0[i] + m2[i] / r[i])).collect();
    let num = g.integrate_from_origin_checked(&f, 2.0 * q + 2.0)?;
    let mass = g.integrate_from_origin_checked(&w, q)?;
    let wr: Vec<f64> = w.iter().zip(r).map(|(w, r)| w * r).collect();
    let first = g.integrate_from_origin_checked(&wr, q + 1.0)?;
    Ok(num / (first * mass))
}

fn shell_numerator(radii: &[f64], weights: &[f64]) -> f64 {
    let mut num = 0.0;
    for (i, (&ri, &wi)) in radii.iter().zip(weights).enumerate() {
        num += wi * wi * ri;
        for (&rj, &wj) in radii[i + 1..].iter().zip(&weights[i + 1..]) {
            num += wi * wj * (ri * ri + rj * rj) / ri.max(rj);
        }
    }
    num
}

fn beta_shells(radii: &[f64], weights: &[f64]) -> Result<f64> {
    let mass: f64 = weights.iter().sum();
    if mass == 0.0 {
        return Err(Error::ZeroDensity);
    }
    let first: f64 = radii.iter().zip(weights).map(|(r, w)| r * w).sum();
    Ok(shell_numerator(radii, weights) / (first * mass))
}

/// Trial families for the variational upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    /// `r^a e^{−r}`, `a ∈ [0, 40]`
    PowerExp,
    /// `r^a e^{−r^b}`
    GenGamma,
    /// a single uniform shell
    Shell,
    /// free weights on a fixed log-spaced set of shells
    ShellMix,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::PowerExp, Family::GenGamma, Family::Shell, Family::ShellMix];

    pub fn name(self) -> &'static str {
        match self {
            Family::PowerExp => "power-exp",
            Family::GenGamma => "gen-gamma",
            Family::Shell => "shell",
            Family::ShellMix => "shell-mix",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown family `{s}`")))
    }
}

pub const POWER_EXP_RANGE: (f64, f64) = (0.0, 40.0);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaEstimate {
    pub family: Family,
    pub beta_lower: f64,
    /// Best (lowest) functional value found.
    pub beta_upper: f64,
    /// Parameters achieving `beta_upper`.
    pub parameters: Vec<f64>,
    pub evaluations: usize,
    /// Lowest value over every density evaluated.
    pub min_evaluated: f64,
    pub notes: String,
}

impl BetaEstimate {
    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "family": self.family.name(),
            "best": self.beta_upper,
            "parameters": self.parameters,
            "evaluations": self.evaluations,
            "min_evaluated": self.min_evaluated,
            "reference_interval": [BETA_LOWER, BETA_UPPER],
            "notes": self.notes,
        })
    }
}

/// First node of sampled trial densities; every family has its bulk near `r ~ 1`.
const TRIAL_INNER: f64 = 1e-6;

pub fn power_exp(a: f64) -> Result<TrialDensity> {
    TrialDensity::from_fn(move |r| r.powf(a) * (-r).exp(), a, TRIAL_INNER, DEFAULT_NODES)
}

pub fn gen_gamma(a: f64, b: f64) -> Result<TrialDensity> {
    if b.is_nan() || b <= 0.0 {
        return Err(Error::InvalidInput(format!("gen-gamma exponent b must be positive, got {b}")));
    }
    TrialDensity::from_fn(move |r| r.powf(a) * (-r.powf(b)).exp(), a, TRIAL_INNER, DEFAULT_NODES)
}

/// Minimum of `β` over a trial family within `budget` evaluations (or descent
/// iterations for `shell-mix`).
pub fn optimize_beta_upper(family: Family, budget: usize) -> Result<BetaEstimate> {
    if budget == 0 {
        return Err(Error::OptimizerStalled("budget must be positive".into()));
    }
    let mut tracker = Tracker::default();
    let notes = match family {
        Family::PowerExp => {
            let (lo, hi) = POWER_EXP_RANGE;
            golden_section(lo, hi, budget, |a| tracker.eval(&[a], || power_exp(a)));
            format!("a in [{lo}, {hi}]")
        }
        Family::GenGamma => {
            nelder_mead([1.0, 1.0], 0.3, budget, |x| {
                if x[0] <= -2.5 || x[1] < 0.25 || x[1] > 10.0 || x[0] > 40.0 {
                    return f64::INFINITY;
                }
                tracker.eval(x, || gen_gamma(x[0], x[1]))
            });
            "a in (-2.5, 40], b in [0.25, 10]".to_string()
        }
        Family::Shell => {
            tracker.eval(&[1.0], || TrialDensity::shell(1.0));
            "degenerate family: every radius gives the same value".to_string()
        }
        Family::ShellMix => {
            let (weights, values) = shell_mix(SHELL_MIX_COUNT, budget);
            for v in values {
                tracker.record(&[], v);
            }
            // parameters are the shell weights, radii log-spaced over the span
            tracker.best_params = weights;
            format!("{SHELL_MIX_COUNT} shells log-spaced over [{}, {}]", SHELL_MIX_SPAN.0, SHELL_MIX_SPAN.1)
        }
    };
    if !tracker.best.is_finite() {
        return Err(Error::OptimizerStalled(format!("no finite value for family {family}")));
    }
    Ok(BetaEstimate {
        family,
        beta_lower: BETA_LOWER,
        beta_upper: tracker.best,
        parameters: tracker.best_params,
        evaluations: tracker.count,
        min_evaluated: tracker.best,
        notes,
    })
}

#[derive(Default)]
struct Tracker {
    best: f64,
    best_params: Vec<f64>,
    count: usize,
    seen: bool,
}

impl Tracker {
    fn eval(&mut self, params: &[f64], build: impl FnOnce() -> Result<TrialDensity>) -> f64 {
        let value = build()
            .and_then(|d| beta_functional(&d))
            .ok()
            .filter(|v| v.is_finite())
            .unwrap_or(f64::INFINITY);
        self.record(params, value);
        value
    }

    fn record(&mut self, params: &[f64], value: f64) {
        self.count += 1;
        if !self.seen || value < self.best {
            self.best = value;
            self.best_params = params.to_vec();
            self.seen = true;
        }
    }
}

/// Golden-section search on `[lo, hi]`, endpoints included.
fn golden_section(mut lo: f64, mut hi: f64, budget: usize, mut f: impl FnMut(f64) -> f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (f_lo, f_hi) = (f(lo), f(hi));
    let (mut best_x, mut best_f) = if f_lo <= f_hi { (lo, f_lo) } else { (hi, f_hi) };
    if budget <= 2 {
        return best_x;
    }
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    let mut used = 4;
    loop {
        for (x, v) in [(x1, f1), (x2, f2)] {
            if v < best_f {
                best_x = x;
                best_f = v;
            }
        }
        if used >= budget || hi - lo < 1e-10 {
            return best_x;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        }
        used += 1;
    }
}

/// Nelder–Mead in two dimensions; infeasible points should return `+∞`.
fn nelder_mead(start: [f64; 2], step: f64, budget: usize, mut f: impl FnMut(&[f64]) -> f64) -> [f64; 2] {
    let mut simplex = [start, [start[0] + step, start[1]], [start[0], start[1] + step]];
    let mut values = simplex.map(|p| f(&p));
    let mut used = 3;
    while used < budget {
        let mut order = [0, 1, 2];
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.map(|i| simplex[i]);
        values = order.map(|i| values[i]);
        if (values[2] - values[0]).abs() < 1e-13 {
            break;
        }
        let centroid = [(simplex[0][0] + simplex[1][0]) / 2.0, (simplex[0][1] + simplex[1][1]) / 2.0];
        let along = |t: f64| [centroid[0] + t * (simplex[2][0] - centroid[0]), centroid[1] + t * (simplex[2][1] - centroid[1])];
        let reflected = along(-1.0);
        let fr = f(&reflected);
        used += 1;
        if fr < values[0] {
            let expanded = along(-2.0);
            let fe = f(&expanded);
            used += 1;
            (simplex[2], values[2]) = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < values[1] {
            (simplex[2], values[2]) = (reflected, fr);
        } else {
            let contracted = if fr < values[2] { along(-0.5) } else { along(0.5) };
            let fc = f(&contracted);
            used += 1;
            if fc < values[2].min(fr) {
                (simplex[2], values[2]) = (contracted, fc);
            } else {
                for i in 1..3 {
                    simplex[i] = [
                        (simplex[0][0] + simplex[i][0]) / 2.0,
                        (simplex[0][1] + simplex[i][1]) / 2.0,
                    ];
                    values[i] = f(&simplex[i]);
                    used += 1;
                }
            }
        }
    }
    let best = (0..3).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap_or(0);
    simplex[best]
}

pub const SHELL_MIX_COUNT: usize = 300;
pub const SHELL_MIX_SPAN: (f64, f64) = (1e-3, 1e2);

/// Log-spaced shell radii used by the `shell-mix` family.
pub fn shell_mix_radii(count: usize) -> Vec<f64> {
    let (lo, hi) = SHELL_MIX_SPAN;
    (0..count)
        .map(|i| lo * (hi / lo).powf(i as f64 / (count - 1) as f64))
        .collect()
}

/// Exponentiated-gradient descent on shell weights over the simplex. Returns the
/// best weights and the value at each iteration.
fn shell_mix(count: usize, iterations: usize) -> (Vec<f64>, Vec<f64>) {
    let radii = shell_mix_radii(count);
    // kernel Q_ij = (r_i² + r_j²)/(2 max(r_i, r_j)); numerator = wᵀQw
    let q: Vec<f64> = (0..count * count)
        .map(|k| {
            let (i, j) = (k / count, k % count);
            let (a, b) = (radii[i], radii[j]);
            (a * a + b * b) / (2.0 * a.max(b))
        })
        .collect();
    // start from e^{−r}-like weights r³e^{−r} on a log grid
    let mut w: Vec<f64> = radii.iter().map(|r| r.powi(3) * (-r).exp()).collect();
    normalize(&mut w);
    let mut eta = 0.5;
    let mut values = Vec::with_capacity(iterations);
    let mut best = (f64::INFINITY, w.clone());
    let mut qw = vec![0.0; count];
    for _ in 0..iterations {
        for i in 0..count {
            qw[i] = q[i * count..(i + 1) * count].iter().zip(&w).map(|(a, b)| a * b).sum();
        }
        let num: f64 = qw.iter().zip(&w).map(|(a, b)| a * b).sum();
        let first: f64 = radii.iter().zip(&w).map(|(r, w)| r * w).sum();
        let value = num / first;
        values.push(value);
        if value < best.0 {
            best = (value, w.clone());
        } else {
            eta *= 0.7;
        }
        // ∂β/∂w_i with Σw = 1 held fixed by the normalization below
        let grad: Vec<f64> = qw.iter().zip(&radii).map(|(g, r)| 2.0 * g / first - value * r / first).collect();
        let scale = grad.iter().fold(0.0, |m: f64, g| m.max(g.abs())).max(1e-300);
        for (wi, g) in w.iter_mut().zip(&grad) {
            *wi *= (-eta * g / scale).exp();
        }
        normalize(&mut w);
    }
    (best.1, values)
}

fn normalize(w: &mut [f64]) {
    let s: f64 = w.iter().sum();
    for x in w.iter_mut() {
        *x /= s;
    }
}

/// `N ≥ 2` points in R³.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointConfig {
    pub points: Vec<[f64; 3]>,
}

fn norm(x: &[f64; 3]) -> f64 {
    (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
}

fn dist(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    norm(&[a[0] - b[0], a[1] - b[1], a[2] - b[2]])
}

impl PointConfig {
    pub fn new(points: Vec<[f64; 3]>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidInput(format!("need at least 2 points, got {}", points.len())));
        }
        if points.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("non-finite coordinate".into()));
        }
        let scale = points.iter().map(norm).fold(0.0, f64::max);
        if scale == 0.0 {
            return Err(Error::InvalidInput("all points at the origin".into()));
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if dist(&points[i], &points[j]) <= 1e-12 * scale {
                    return Err(Error::CoincidentPoints(i, j));
                }
            }
        }
        Ok(Self { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// `Σ_{i<j}(|x_i|²+|x_j|²)/|x_i−x_j| / ((N−1)Σ|x_i|)` for one configuration.
pub fn alpha_n_value(cfg: &PointConfig) -> f64 {
    alpha_objective(&cfg.points)
}

fn alpha_objective(x: &[[f64; 3]]) -> f64 {
    let n = x.len();
    let sq: Vec<f64> = x.iter().map(|p| p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).collect();
    let mut num = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            num += (sq[i] + sq[j]) / dist(&x[i], &x[j]);
        }
    }
    let den: f64 = sq.iter().map(|s| s.sqrt()).sum();
    num / ((n - 1) as f64 * den)
}

fn alpha_gradient(x: &[[f64; 3]]) -> (f64, Vec<[f64; 3]>) {
    let n = x.len();
    let norms: Vec<f64> = x.iter().map(norm).collect();
    let mut num = 0.0;
    let mut dnum = vec![[0.0; 3]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = [x[i][0] - x[j][0], x[i][1] - x[j][1], x[i][2] - x[j][2]];
            let r = norm(&d);
            let s = norms[i] * norms[i] + norms[j] * norms[j];
            num += s / r;
            for c in 0..3 {
                let g = -s * d[c] / (r * r * r);
                dnum[i][c] += 2.0 * x[i][c] / r + g;
                dnum[j][c] += 2.0 * x[j][c] / r - g;
            }
        }
    }
    let den: f64 = norms.iter().sum();
    let m = (n - 1) as f64;
    let value = num / (m * den);
    let grad = (0..n)
        .map(|i| {
            let unit = if norms[i] > 0.0 { norms[i] } else { f64::INFINITY };
            std::array::from_fn(|c| (dnum[i][c] - value * m * x[i][c] / unit) / (m * den))
        })
        .collect();
    (value, grad)
}

fn gauge(x: &mut [[f64; 3]]) {
    let n = x.len() as f64;
    let s: f64 = x.iter().map(norm).sum();
    for p in x.iter_mut() {
        for c in p.iter_mut() {
            *c *= n / s;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaNResult {
    pub n: usize,
    pub value: f64,
    pub config: PointConfig,
    /// Best value reached from each seed.
    pub seed_values: Vec<f64>,
}

impl AlphaNResult {
    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "N": self.n,
            "best": self.value,
            "points": self.config.points,
            "seeds": self.seed_values.len(),
            "beta_lower": BETA_LOWER,
            "reference_interval": [BETA_LOWER, BETA_UPPER],
        })
    }
}

pub const DEFAULT_SEEDS: usize = 64;
const DESCENT_STEPS: usize = 4000;

/// Multi-start projected gradient descent on `α_N` with the gauge `Σ|x_i| = N`.
/// Seeds are derived from `rng_seed`, so results are reproducible.
pub fn minimize_alpha_n(n: usize, seeds: usize, rng_seed: u64) -> Result<AlphaNResult> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("N must be at least 2, got {n}")));
    }
    if seeds == 0 {
        return Err(Error::InvalidInput("need at least one seed".into()));
    }
    let runs: Vec<(f64, Vec<[f64; 3]>)> = (0..seeds)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(rng_seed.wrapping_add(k as u64));
            let start: Vec<[f64; 3]> =
                (0..n).map(|_| std::array::from_fn(|_| rng.gen_range(-1.0..1.0))).collect();
            descend(start)
        })
        .collect();
    let seed_values: Vec<f64> = runs.iter().map(|r| r.0).collect();
    let (value, points) = runs
        .into_iter()
        .filter(|r| r.0.is_finite())
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .ok_or_else(|| Error::OptimizerStalled("no seed produced a finite value".into()))?;
    let config = PointConfig::new(points)?;
    Ok(AlphaNResult { n, value, config, seed_values })
}

/// Gradient descent with backtracking; returns the final value and points.
fn descend(mut x: Vec<[f64; 3]>) -> (f64, Vec<[f64; 3]>) {
    gauge(&mut x);
    let (mut value, mut grad) = alpha_gradient(&x);
    let mut step = 0.1;
    for _ in 0..DESCENT_STEPS {
        let g2: f64 = grad.iter().flatten().map(|g| g * g).sum();
        if g2 < 1e-28 {
            break;
        }
        let mut accepted = false;
        while step > 1e-16 {
            let mut trial: Vec<[f64; 3]> = x
                .iter()
                .zip(&grad)
                .map(|(p, g)| std::array::from_fn(|c| p[c] - step * g[c]))
                .collect();
            gauge(&mut trial);
            let v = alpha_objective(&trial);
            if v.is_finite() && v <= value - 1e-4 * step * g2 {
                x = trial;
                accepted = true;
                step *= 1.5;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
        (value, grad) = alpha_gradient(&x);
    }
    (value, x)
}

//! Logarithmic radial grids and the quadrature/differentiation rules used on them.
//!
//! Nodes are uniform in `x = ln r`. Every radial integral `∫ f(r) dr` is done as
//! `∫ f(e^x) e^x dx` with the trapezoid rule plus Gregory end corrections up to
//! eighth differences. Integrands that vanish at both ends see only the
//! trapezoid part, which is spectrally accurate for them.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Minimum node count accepted by [`RadialGrid`].
pub const MIN_NODES: usize = 100;
/// Default node count.
pub const DEFAULT_NODES: usize = 4000;
/// Default ratio `r_1 / r_max`.
pub const DEFAULT_INNER_RATIO: f64 = 1e-6;
/// Fraction of an integral allowed in the outermost decade `[r_max/10, r_max]`.
pub const TAIL_LIMIT: f64 = 1e-8;

// Gregory coefficients: trapezoid corrections by backward/forward differences
// of order 1..=8 at each end.
const GREGORY: [f64; 8] = [
    1.0 / 12.0,
    1.0 / 24.0,
    19.0 / 720.0,
    3.0 / 160.0,
    863.0 / 60480.0,
    275.0 / 24192.0,
    33953.0 / 3628800.0,
    8183.0 / 1036800.0,
];

/// Per-node multipliers of the end-corrected trapezoid rule on `n` uniform nodes.
fn gregory_factors(n: usize) -> Vec<f64> {
    let mut c = vec![1.0; n];
    c[0] = 0.5;
    c[n - 1] = 0.5;
    for (k, g) in GREGORY.iter().enumerate() {
        let order = k + 1;
        let mut binom = 1.0;
        for j in 0..=order {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            // backward difference at the right end, forward difference at the left
            c[n - 1 - j] -= g * sign * binom;
            let left_sign = if (order - j + order) % 2 == 0 { 1.0 } else { -1.0 };
            c[j] -= g * left_sign * binom;
            binom = binom * (order - j) as f64 / (j + 1) as f64;
        }
    }
    c
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    step: f64,
}

impl RadialGrid {
    /// Log grid with `n` nodes on `[1e-6·r_max, r_max]`.
    pub fn log(n: usize, r_max: f64) -> Result<Self> {
        Self::log_with_ratio(n, r_max, DEFAULT_INNER_RATIO)
    }

    pub fn log_with_ratio(n: usize, r_max: f64, inner_ratio: f64) -> Result<Self> {
        if n < MIN_NODES {
            return Err(Error::InvalidGrid(format!("need at least {MIN_NODES} nodes, got {n}")));
        }
        if !(r_max.is_finite() && r_max > 0.0) {
            return Err(Error::InvalidGrid(format!("r_max must be positive, got {r_max}")));
        }
        if !(inner_ratio > 0.0 && inner_ratio <= 1e-5) {
            return Err(Error::InvalidGrid(format!(
                "r_1/r_max must lie in (0, 1e-5], got {inner_ratio}"
            )));
        }
        let x0 = (r_max * inner_ratio).ln();
        let x1 = r_max.ln();
        let step = (x1 - x0) / (n - 1) as f64;
        let mut nodes: Vec<f64> = (0..n).map(|i| (x0 + step * i as f64).exp()).collect();
        nodes[n - 1] = r_max;
        Ok(Self::from_nodes_unchecked(nodes, step))
    }

    fn from_nodes_unchecked(nodes: Vec<f64>, step: f64) -> Self {
        let factors = gregory_factors(nodes.len());
        let weights = nodes.iter().zip(&factors).map(|(r, c)| step * r * c).collect();
        Self { nodes, weights, step }
    }

    /// Same grid with every radius multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let nodes = self.nodes.iter().map(|r| r * factor).collect();
        Self::from_nodes_unchecked(nodes, self.step)
    }

    /// Same node count and inner ratio, new outer radius.
    pub fn with_r_max(&self, r_max: f64) -> Result<Self> {
        Self::log_with_ratio(self.len(), r_max, self.inner_ratio())
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Uniform spacing in `ln r`.
    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn r_min(&self) -> f64 {
        self.nodes[0]
    }

    pub fn r_max(&self) -> f64 {
        self.nodes[self.len() - 1]
    }

    pub fn inner_ratio(&self) -> f64 {
        self.r_min() / self.r_max()
    }

    /// `∫ f dr` over `[r_1, r_max]`.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        debug_assert_eq!(f.len(), self.len());
        self.weights.iter().zip(f).map(|(w, v)| w * v).sum()
    }

    /// Share of `∫|f| dr` sitting in the outermost decade. Zero for a zero integrand.
    pub fn tail_fraction(&self, f: &[f64]) -> f64 {
        let cut = self.r_max() / 10.0;
        let mut total = 0.0;
        let mut tail = 0.0;
        for ((r, w), v) in self.nodes.iter().zip(&self.weights).zip(f) {
            let c = (w * v).abs();
            total += c;
            if *r >= cut {
                tail += c;
            }
        }
        if total == 0.0 {
            0.0
        } else {
            tail / total
        }
    }

    /// `∫ f dr`, failing when the outermost decade carries more than [`TAIL_LIMIT`].
    pub fn integrate_checked(&self, f: &[f64]) -> Result<f64> {
        let fraction = self.tail_fraction(f);
        if fraction > TAIL_LIMIT {
            return Err(Error::TailNotConverged { fraction, limit: TAIL_LIMIT });
        }
        Ok(self.integrate(f))
    }

    /// `∫_0^{r_max} f dr` where `f ~ r^power` inside the first node.
    pub fn integrate_from_origin(&self, f: &[f64], power: f64) -> f64 {
        self.integrate(f) + f[0] * self.r_min() / (power + 1.0)
    }

    /// [`Self::integrate_from_origin`] with the tail criterion applied.
    pub fn integrate_from_origin_checked(&self, f: &[f64], power: f64) -> Result<f64> {
        let fraction = self.tail_fraction(f);
        if fraction > TAIL_LIMIT {
            return Err(Error::TailNotConverged { fraction, limit: TAIL_LIMIT });
        }
        Ok(self.integrate_from_origin(f, power))
    }

    /// Running integral `C_i = ∫_{r_1}^{r_i} f dr` (fourth order, `C_0 = 0`).
    pub fn cumulative(&self, f: &[f64]) -> Vec<f64> {
        let n = self.len();
        let h = self.step / 24.0;
        let g: Vec<f64> = f.iter().zip(&self.nodes).map(|(v, r)| v * r).collect();
        let mut out = vec![0.0; n];
        for i in 0..n - 1 {
            let piece = if i == 0 {
                9.0 * g[0] + 19.0 * g[1] - 5.0 * g[2] + g[3]
            } else if i == n - 2 {
                g[n - 4] - 5.0 * g[n - 3] + 19.0 * g[n - 2] + 9.0 * g[n - 1]
            } else {
                -g[i - 1] + 13.0 * g[i] + 13.0 * g[i + 1] - g[i + 2]
            };
            out[i + 1] = out[i] + h * piece;
        }
        out
    }

    /// `df/dx` with `x = ln r`: fourth-order central stencil, one-sided at the ends.
    pub fn derivative_log(&self, f: &[f64]) -> Vec<f64> {
        let n = self.len();
        let s = 1.0 / (12.0 * self.step);
        (0..n)
            .map(|i| {
                s * if i == 0 {
                    -25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]
                } else if i == 1 {
                    -3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]
                } else if i == n - 2 {
                    3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]
                } else if i == n - 1 {
                    25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4]
                        + 3.0 * f[n - 5]
                } else {
                    f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]
                }
            })
            .collect()
    }

    /// `df/dr` on the nodes.
    pub fn derivative(&self, f: &[f64]) -> Vec<f64> {
        self.derivative_log(f)
            .into_iter()
            .zip(&self.nodes)
            .map(|(d, r)| d / r)
            .collect()
    }

    /// Cubic interpolation in `ln r` of nodal values at an arbitrary radius.
    /// Outside `[r_1, r_max]` the nearest end value is returned for `r < r_1`
    /// and zero beyond `r_max`.
    pub fn interpolate(&self, f: &[f64], r: f64) -> f64 {
        let n = self.len();
        if r <= self.r_min() {
            return f[0];
        }
        if r > self.r_max() {
            return 0.0;
        }
        let t = (r.ln() - self.r_min().ln()) / self.step;
        let i = (t.floor() as usize).clamp(1, n - 3);
        let s = t - i as f64;
        let (p0, p1, p2, p3) = (f[i - 1], f[i], f[i + 1], f[i + 2]);
        // Lagrange cubic through nodes i-1..i+2 at offset s from node i.
        -p0 * s * (s - 1.0) * (s - 2.0) / 6.0 + p1 * (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0
            - p2 * (s + 1.0) * s * (s - 2.0) / 2.0
            + p3 * (s + 1.0) * s * (s - 1.0) / 6.0
    }
}

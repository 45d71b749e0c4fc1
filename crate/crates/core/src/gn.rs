//! Sharp Gagliardo–Nirenberg constant for
//!
//! ```text
//! ∫|ψ|^{8/3} ≤ C ‖∇ψ‖₂ ‖ψ‖₂^{5/3}     in R³,
//! ```
//!
//! from the radial ground state of `−Δu + u = u^{5/3}`, plus the analytic Nasibov
//! upper bound for the general family `‖u‖_{ρ+2} ≤ k ‖∇u‖₂^α ‖u‖₂^{1−α}`.

use crate::error::{Error, Result};
use crate::functionals::{kinetic, moment};
use crate::grid::{RadialGrid, DEFAULT_NODES, TAIL_LIMIT};
use crate::profile::RadialProfile;
use crate::special::{beta, sphere_area};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const FOUR_PI: f64 = 4.0 * PI;
const EXPONENT: f64 = 5.0 / 3.0;
/// Shooting bracket for `u(0)`.
pub const SHOOT_BRACKET: (f64, f64) = (1.1, 50.0);
/// Radius where shooting starts from the series expansion.
const SERIES_RADIUS: f64 = 1e-4;
/// Outer limit of a shooting trajectory.
const SHOOT_LIMIT: f64 = 60.0;
/// The ODE trajectory is replaced by `c e^{−r}/r` once `u < SPLICE_FRACTION · u(0)`.
const SPLICE_FRACTION: f64 = 1e-4;
const RTOL: f64 = 1e-12;
const ATOL: f64 = 1e-15;

/// State `(u, u′)` of the radial equation `u″ = −2u′/r + u − u^{5/3}`.
type State = [f64; 2];

fn rhs(r: f64, y: State) -> State {
    [y[1], -2.0 * y[1] / r + y[0] - y[0].abs().powf(EXPONENT).copysign(y[0])]
}

// Dormand–Prince 5(4) tableau
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One trial step of size `h`; returns the 5th-order solution and the error estimate.
fn dp_step(r: f64, y: State, h: f64) -> (State, f64) {
    let mut k = [[0.0; 2]; 7];
    for s in 0..7 {
        let mut ys = y;
        for (j, kj) in k.iter().enumerate().take(s) {
            ys[0] += h * A[s][j] * kj[0];
            ys[1] += h * A[s][j] * kj[1];
        }
        k[s] = rhs(r + C[s] * h, ys);
    }
    let mut y5 = y;
    let mut err = [0.0; 2];
    for s in 0..7 {
        for c in 0..2 {
            y5[c] += h * B5[s] * k[s][c];
            err[c] += h * (B5[s] - B4[s]) * k[s][c];
        }
    }
    let e = (0..2)
        .map(|c| err[c] / (ATOL + RTOL * y[c].abs().max(y5[c].abs())))
        .fold(0.0, |m: f64, v| m.max(v.abs()));
    (y5, e)
}

/// Adaptive integration from `r` to `r_end`. `stop` is checked after every
/// accepted step; integration ends early when it returns true.
fn integrate(
    mut r: f64,
    mut y: State,
    r_end: f64,
    h: &mut f64,
    mut stop: impl FnMut(f64, State) -> bool,
) -> (f64, State) {
    while r < r_end {
        let step = h.min(r_end - r);
        let (next, err) = dp_step(r, y, step);
        if err <= 1.0 {
            r += step;
            y = next;
            if stop(r, y) {
                break;
            }
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        *h = step * factor;
    }
    (r, y)
}

fn series_start(u0: f64, r: f64) -> State {
    let c = (u0 - u0.powf(EXPONENT)) / 6.0;
    [u0 + c * r * r, 2.0 * c * r]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shot {
    /// `u` crosses zero: `u(0)` too large.
    Crosses,
    /// `u′` turns positive before `u` reaches zero: `u(0)` too small.
    TurnsUp,
    /// neither before the outer limit
    Decays,
}

fn shoot(u0: f64) -> Shot {
    let mut h = SERIES_RADIUS;
    let mut outcome = Shot::Decays;
    integrate(SERIES_RADIUS, series_start(u0, SERIES_RADIUS), SHOOT_LIMIT, &mut h, |_, y| {
        if y[0] < 0.0 {
            outcome = Shot::Crosses;
        } else if y[1] > 0.0 {
            outcome = Shot::TurnsUp;
        }
        outcome != Shot::Decays
    });
    outcome
}

/// Bisect `u(0)` in [`SHOOT_BRACKET`] to absolute tolerance `tol`.
/// Returns the bracket `(lo, hi)` with `lo` turning up and `hi` crossing.
pub fn shoot_bracket(tol: f64) -> Result<(f64, f64)> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidInput(format!("shoot tolerance must be positive, got {tol}")));
    }
    let (mut lo, mut hi) = SHOOT_BRACKET;
    if shoot(lo) != Shot::TurnsUp || shoot(hi) != Shot::Crosses {
        return Err(Error::BracketFailed { lo, hi });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match shoot(mid) {
            Shot::Crosses => hi = mid,
            _ => lo = mid,
        }
    }
    Ok((lo, hi))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GNGroundState {
    pub u0: f64,
    pub u: RadialProfile,
    /// `u′` on the grid nodes, from the ODE.
    pub du: Vec<f64>,
    /// `∫|∇u|²`
    pub k: f64,
    /// `∫u²`
    pub m: f64,
    /// `∫u^{8/3}`
    pub p: f64,
    /// `P / (K^{1/2} M^{5/6})`
    pub cgn: f64,
    /// `(8/3)(3/5)^{5/6} K^{−1/3}`
    pub cgn_pohozaev: f64,
}

impl GNGroundState {
    /// `|K + M − P|/P`
    pub fn energy_residual(&self) -> f64 {
        (self.k + self.m - self.p).abs() / self.p
    }

    /// `|3M − 5K|/(3M)`
    pub fn pohozaev_residual(&self) -> f64 {
        (3.0 * self.m - 5.0 * self.k).abs() / (3.0 * self.m)
    }

    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "u0": self.u0,
            "K": self.k,
            "M": self.m,
            "P": self.p,
            "cgn_ratio": self.cgn,
            "cgn_pohozaev": self.cgn_pohozaev,
            "nasibov_bound": nasibov_cgn_bound(),
        })
    }
}

/// `(8/3)(3/5)^{5/6} K^{−1/3}`: the constant from `K` alone, using `M = 5K/3`, `P = 8K/3`.
pub fn cgn_from_kinetic(k: f64) -> f64 {
    8.0 / 3.0 * (0.6f64).powf(5.0 / 6.0) * k.powf(-1.0 / 3.0)
}

/// Ground state with `u(0)` bisected to `shoot_tol`, sampled on a default log grid.
pub fn solve_ground_state(shoot_tol: f64) -> Result<GNGroundState> {
    solve_ground_state_on(shoot_tol, DEFAULT_NODES)
}

pub fn solve_ground_state_on(shoot_tol: f64, nodes: usize) -> Result<GNGroundState> {
    let (lo, hi) = shoot_bracket(shoot_tol)?;
    let u0 = 0.5 * (lo + hi);
    let mut r_max = 40.0;
    for _ in 0..8 {
        let grid = RadialGrid::log(nodes, r_max)?;
        let (values, du) = sample(u0, &grid)?;
        let u = RadialProfile::new(grid, values)?;
        if u.worst_tail() <= TAIL_LIMIT {
            return Ok(integrals(u0, u, du));
        }
        r_max *= 2.0;
    }
    Err(Error::TailNotConverged { fraction: f64::NAN, limit: TAIL_LIMIT })
}

/// Trajectory on the nodes of `grid`, spliced onto `c e^{−r}/r` once `u` is small.
fn sample(u0: f64, grid: &RadialGrid) -> Result<(Vec<f64>, Vec<f64>)> {
    let r = grid.nodes();
    let mut u = Vec::with_capacity(r.len());
    let mut du = Vec::with_capacity(r.len());
    let start = SERIES_RADIUS.min(0.5 * r[0]);
    let mut y = series_start(u0, start);
    let mut at = start;
    let mut h = start;
    let mut splice: Option<f64> = None;
    for &ri in r {
        if let Some(c) = splice {
            let e = (-ri).exp();
            u.push(c * e / ri);
            du.push(-c * e * (1.0 / ri + 1.0 / (ri * ri)));
            continue;
        }
        let (reached, next) = integrate(at, y, ri, &mut h, |_, _| false);
        debug_assert!((reached - ri).abs() <= 1e-12 * ri);
        at = ri;
        y = next;
        if y[0] <= 0.0 || y[1] > 0.0 {
            return Err(Error::NotConverged {
                module: "gn-constant",
                iterations: 0,
                residual: y[0],
                tolerance: SPLICE_FRACTION * u0,
            });
        }
        u.push(y[0]);
        du.push(y[1]);
        if y[0] < SPLICE_FRACTION * u0 {
            splice = Some(y[0] * ri * ri.exp());
        }
    }
    Ok((u, du))
}

fn integrals(u0: f64, u: RadialProfile, du: Vec<f64>) -> GNGroundState {
    let g = u.grid();
    let r = g.nodes();
    let shell = |f: &dyn Fn(usize) -> f64| -> f64 {
        let v: Vec<f64> = (0..r.len()).map(|i| FOUR_PI * r[i] * r[i] * f(i)).collect();
        g.integrate_from_origin(&v, 2.0)
    };
    let vals = u.values();
    let k = shell(&|i| du[i] * du[i]);
    let m = shell(&|i| vals[i] * vals[i]);
    let p = shell(&|i| vals[i].powf(8.0 / 3.0));
    GNGroundState {
        u0,
        cgn: p / (k.sqrt() * m.powf(5.0 / 6.0)),
        cgn_pohozaev: cgn_from_kinetic(k),
        k,
        m,
        p,
        u,
        du,
    }
}

/// `∫|ψ|^{8/3} / (‖∇ψ‖₂ ‖ψ‖₂^{5/3})`
pub fn gn_ratio(p: &RadialProfile) -> Result<f64> {
    if p.is_zero() {
        return Err(Error::ZeroProfile);
    }
    let g = p.grid();
    let f: Vec<f64> = g
        .nodes()
        .iter()
        .zip(p.values())
        .map(|(r, v)| FOUR_PI * r * r * v.abs().powf(8.0 / 3.0))
        .collect();
    let num = g.integrate_from_origin_checked(&f, 2.0)?;
    Ok(num / (kinetic(p)?.sqrt() * moment(p, 0)?.powf(5.0 / 6.0)))
}

fn check_params(rho: f64, d: u32) -> Result<()> {
    if d == 0 {
        return Err(Error::OutOfRange("dimension must be at least 1".into()));
    }
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::OutOfRange(format!("rho must be positive, got {rho}")));
    }
    if d >= 3 {
        let rho0 = 4.0 / (d as f64 - 2.0);
        if rho >= rho0 {
            return Err(Error::OutOfRange(format!("rho = {rho} must be below {rho0} in d = {d}")));
        }
    }
    Ok(())
}

/// `α = (d/2) ρ/(ρ+2)`
pub fn alpha_exponent(rho: f64, d: u32) -> Result<f64> {
    check_params(rho, d)?;
    Ok(d as f64 / 2.0 * rho / (rho + 2.0))
}

/// Sharp Hausdorff–Young constant `[(p/2π)^{1/p} / (p′/2π)^{1/p′}]^{d/2}`.
pub fn babenko_beckner(p: f64, d: u32) -> Result<f64> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::OutOfRange(format!("p must lie in (1, ∞), got {p}")));
    }
    if d == 0 {
        return Err(Error::OutOfRange("dimension must be at least 1".into()));
    }
    let q = p / (p - 1.0);
    let tp = 2.0 * PI;
    Ok(((p / tp).powf(1.0 / p) / (q / tp).powf(1.0 / q)).powf(d as f64 / 2.0))
}

/// Nasibov's bound `k_N(ρ, d) ≥ k(ρ, d)`.
pub fn nasibov_kn(rho: f64, d: u32) -> Result<f64> {
    let alpha = alpha_exponent(rho, d)?;
    let df = d as f64;
    let chi = (alpha.powf(alpha) * (1.0 - alpha).powf(1.0 - alpha)).sqrt();
    let inner = sphere_area(d) * beta(df / 2.0, df * (1.0 - alpha) / (2.0 * alpha)) / 2.0;
    let bb = babenko_beckner((rho + 2.0) / (rho + 1.0), d)?;
    Ok(inner.powf(alpha / df) * bb / chi)
}

/// `k_N(2/3, 3)^{8/3}`, the analytic upper bound on the sharp constant.
pub fn nasibov_cgn_bound() -> f64 {
    nasibov_kn(2.0 / 3.0, 3).map(|k| k.powf(8.0 / 3.0)).unwrap_or(f64::NAN)
}

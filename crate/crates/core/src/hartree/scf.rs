//! Self-consistent field iteration for the mass-constrained Hartree problem
//!
//! ```text
//! −Δψ − (Z/r − Φ_ψ) ψ = −μ ψ,    ∫ψ² = N,
//! ```
//!
//! with linear density mixing, and bisection on the sign of `μ(N)` for the critical mass.

use super::eigen::ground_state;
use crate::bounds::{Certificate, Constants};
use crate::error::{Error, Result};
use crate::functionals::{cup_ratio, newton_potential, EnergyBreakdown};
use crate::grid::{RadialGrid, DEFAULT_NODES, TAIL_LIMIT};
use crate::profile::RadialProfile;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const FOUR_PI: f64 = 4.0 * PI;
/// Default `r_max` for `Z = 1`; scaled by `1/Z`.
const DEFAULT_R_MAX: f64 = 120.0;
const MAX_DOUBLINGS: usize = 12;
/// Consecutive iterations with a nonnegative eigenvalue before giving up.
const UNBOUND_STREAK: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScfConfig {
    /// Linear density mixing parameter in `(0, 1]`.
    pub mixing: f64,
    /// Tolerance on `∫|ρ_out − ρ_in| / N`.
    pub tol_density: f64,
    pub max_iter: usize,
    /// Absolute bisection tolerance on the eigenvalue, in units of `Z²`.
    pub eig_tol: f64,
    pub nodes: usize,
    /// Starting `r_max` for `Z = 1`; the grid uses `r_max/Z` and doubles as needed.
    pub r_max: f64,
}

impl Default for ScfConfig {
    fn default() -> Self {
        Self {
            mixing: 0.5,
            tol_density: 1e-8,
            max_iter: 500,
            eig_tol: 1e-11,
            nodes: DEFAULT_NODES,
            r_max: DEFAULT_R_MAX,
        }
    }
}

impl ScfConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.mixing > 0.0 && self.mixing <= 1.0) {
            return Err(Error::InvalidInput(format!("mixing must be in (0, 1], got {}", self.mixing)));
        }
        if !(self.tol_density > 0.0 && self.eig_tol > 0.0) {
            return Err(Error::InvalidInput("tolerances must be positive".into()));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidInput("max_iter must be at least 1".into()));
        }
        if !(self.r_max > 0.0 && self.r_max.is_finite()) {
            return Err(Error::InvalidInput(format!("r_max must be positive, got {}", self.r_max)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HartreeSolution {
    pub z: f64,
    pub psi: RadialProfile,
    /// Mean-field potential `Z/r − Φ_ψ`.
    pub phi: RadialProfile,
    /// Chemical potential; minus the lowest eigenvalue.
    pub mu: f64,
    pub breakdown: EnergyBreakdown,
    pub iterations: usize,
    pub converged: bool,
}

impl HartreeSolution {
    pub fn mass(&self) -> f64 {
        self.breakdown.mass
    }

    /// `‖−Δψ − φψ + μψ‖₂ / ‖ψ‖₂`
    pub fn residual(&self) -> f64 {
        let g = self.psi.grid();
        let r = g.nodes();
        let psi = self.psi.values();
        let d1 = g.derivative(psi);
        let d2 = g.derivative(&d1);
        let res: Vec<f64> = (0..r.len())
            .map(|i| {
                let lap = d2[i] + 2.0 * d1[i] / r[i];
                let e = -lap - self.phi.values()[i] * psi[i] + self.mu * psi[i];
                FOUR_PI * r[i] * r[i] * e * e
            })
            .collect();
        (g.integrate(&res) / self.breakdown.mass).sqrt()
    }

    /// `∫|ρ_out − ρ|/N` for one more SCF step from the stored state.
    pub fn fixed_point_residual(&self, cfg: &ScfConfig) -> f64 {
        let g = self.psi.grid();
        let v = total_potential(g, self.psi.values(), self.z);
        let e = ground_state(g, &v, self.z / 2.0, Some(-self.mu), cfg.eig_tol * self.z * self.z);
        let n = self.breakdown.mass;
        let out: Vec<f64> = e.psi.iter().map(|p| p * n.sqrt()).collect();
        density_distance(g, self.psi.values(), &out) / n
    }

    pub fn summary_json(&self) -> serde_json::Value {
        let b = &self.breakdown;
        serde_json::json!({
            "Z": self.z,
            "N": b.mass,
            "mu": self.mu,
            "K": b.kinetic,
            "A": b.attraction,
            "R": b.repulsion,
            "E": b.energy,
            "J": b.first_moment,
            "iterations": self.iterations,
            "converged": self.converged,
            "profile": {
                "n": self.psi.len(),
                "r_max": self.psi.grid().r_max(),
                "r": self.psi.grid().nodes(),
                "psi": self.psi.values(),
            },
        })
    }
}

/// `−Z/r + Φ_ψ`
fn total_potential(grid: &RadialGrid, psi: &[f64], z: f64) -> Vec<f64> {
    newton_potential(grid, psi)
        .iter()
        .zip(grid.nodes())
        .map(|(ph, r)| ph - z / r)
        .collect()
}

/// `∫|a² − b²|` over space.
fn density_distance(grid: &RadialGrid, a: &[f64], b: &[f64]) -> f64 {
    let f: Vec<f64> = grid
        .nodes()
        .iter()
        .zip(a.iter().zip(b))
        .map(|(r, (x, y))| FOUR_PI * r * r * (x * x - y * y).abs())
        .collect();
    grid.integrate(&f)
}

fn check_inputs(z: f64, n: f64, cfg: &ScfConfig) -> Result<()> {
    cfg.validate()?;
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::InvalidInput(format!("Z must be positive, got {z}")));
    }
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::InvalidInput(format!("N must be positive, got {n}")));
    }
    Ok(())
}

/// Solve at nuclear charge `z` and mass `n` from a hydrogenic start.
pub fn solve(z: f64, n: f64, cfg: &ScfConfig) -> Result<HartreeSolution> {
    check_inputs(z, n, cfg)?;
    let grid = RadialGrid::log(cfg.nodes, cfg.r_max / z)?;
    // ψ ∝ e^{−Zr/2}, normalized to mass n
    let amp = (n * z * z * z / (8.0 * PI)).sqrt();
    let guess = RadialProfile::from_fn(grid, |r| amp * (-z * r / 2.0).exp())?;
    solve_from(z, n, cfg, guess)
}

/// Solve starting from `guess`, rescaled to mass `n`.
pub fn solve_with_guess(z: f64, n: f64, cfg: &ScfConfig, guess: &RadialProfile) -> Result<HartreeSolution> {
    check_inputs(z, n, cfg)?;
    if guess.is_zero() {
        return Err(Error::ZeroProfile);
    }
    solve_from(z, n, cfg, guess.clone())
}

fn solve_from(z: f64, n: f64, cfg: &ScfConfig, guess: RadialProfile) -> Result<HartreeSolution> {
    let mut start = guess;
    let mut total_iterations = 0;
    for _ in 0..=MAX_DOUBLINGS {
        let budget = cfg.max_iter.saturating_sub(total_iterations).max(1);
        let (psi, mu, iterations) = iterate(z, n, cfg, &start, budget)?;
        total_iterations += iterations;
        let profile = RadialProfile::new(start.grid().clone(), psi)?;
        if profile.worst_tail() <= TAIL_LIMIT {
            return finish(z, profile, mu, total_iterations);
        }
        let grid = profile.grid().with_r_max(2.0 * profile.grid().r_max())?;
        start = profile.resample(&grid);
    }
    Err(Error::TailNotConverged { fraction: start.worst_tail(), limit: TAIL_LIMIT })
}

fn finish(z: f64, psi: RadialProfile, mu: f64, iterations: usize) -> Result<HartreeSolution> {
    let g = psi.grid();
    let phi: Vec<f64> = newton_potential(g, psi.values())
        .iter()
        .zip(g.nodes())
        .map(|(ph, r)| z / r - ph)
        .collect();
    let phi = RadialProfile::new(g.clone(), phi)?;
    let breakdown = EnergyBreakdown::compute(&psi, z)?;
    Ok(HartreeSolution { z, psi, phi, mu, breakdown, iterations, converged: true })
}

/// SCF loop on a fixed grid. Returns `(ψ, μ, iterations)`.
fn iterate(
    z: f64,
    n: f64,
    cfg: &ScfConfig,
    start: &RadialProfile,
    max_iter: usize,
) -> Result<(Vec<f64>, f64, usize)> {
    let g = start.grid();
    let r = g.nodes();
    // density ψ² normalized to mass n
    let mass: f64 = {
        let f: Vec<f64> = r.iter().zip(start.values()).map(|(r, v)| FOUR_PI * r * r * v * v).collect();
        g.integrate(&f)
    };
    let mut rho: Vec<f64> = start.values().iter().map(|v| v * v * n / mass).collect();
    let mut alpha = cfg.mixing;
    let mut hint = None;
    let mut prev_diff = f64::INFINITY;
    let mut unbound_streak = 0;
    let eig_tol = cfg.eig_tol * z * z;
    let mut diff = f64::INFINITY;

    for it in 1..=max_iter {
        let psi_in: Vec<f64> = rho.iter().map(|x| x.sqrt()).collect();
        let v = total_potential(g, &psi_in, z);
        let e = ground_state(g, &v, z / 2.0, hint, eig_tol);
        hint = Some(e.energy);
        let psi_out: Vec<f64> = e.psi.iter().map(|p| p * n.sqrt()).collect();
        diff = density_distance(g, &psi_in, &psi_out) / n;

        if e.energy >= 0.0 {
            unbound_streak += 1;
            if unbound_streak >= UNBOUND_STREAK || diff < 1e-4 {
                return Err(Error::Unbound { eigenvalue: e.energy, mass: n });
            }
        } else {
            unbound_streak = 0;
        }
        if diff < cfg.tol_density {
            return Ok((psi_out, -e.energy, it));
        }
        if diff > prev_diff && diff > 10.0 * cfg.tol_density {
            alpha = (alpha * 0.5).max(1e-3);
        }
        prev_diff = diff;
        for (x, p) in rho.iter_mut().zip(&psi_out) {
            *x = (1.0 - alpha) * *x + alpha * p * p;
        }
    }
    Err(Error::NotConverged {
        module: "hartree-scf",
        iterations: max_iter,
        residual: diff,
        tolerance: cfg.tol_density,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalMass {
    /// Midpoint of the final bracket.
    pub mass: f64,
    pub lower: f64,
    pub upper: f64,
    /// Converged solution at the lower end of the bracket (`μ ≳ 0`).
    pub solution: HartreeSolution,
}

/// Largest mass with a bound self-consistent solution, by bisection on the sign
/// of `μ(N)` over `[Z, 2Z]`. `mass_tol` is relative to `Z`.
///
/// Every trial mass is solved from the hydrogenic start: near the threshold the
/// grids of neighbouring solutions differ by several doublings, and a warm start
/// on an oversized box can stall with a near-zero box eigenvalue.
pub fn critical_mass(z: f64, cfg: &ScfConfig, mass_tol: f64) -> Result<CriticalMass> {
    check_inputs(z, z, cfg)?;
    let mut lower = z;
    let mut upper = 2.0 * z;
    let mut best = solve(z, lower, cfg)?;
    if best.mu <= 0.0 {
        return Err(Error::OutOfRange(format!("no bound state at N = Z = {z}")));
    }
    while upper - lower > mass_tol * z {
        let mid = 0.5 * (lower + upper);
        match solve(z, mid, cfg) {
            Ok(sol) if sol.mu > 0.0 => {
                lower = mid;
                best = sol;
            }
            Ok(_) | Err(Error::Unbound { .. }) => upper = mid,
            Err(e) => return Err(e),
        }
    }
    Ok(CriticalMass { mass: 0.5 * (lower + upper), lower, upper, solution: best })
}

/// `((2K − A + R)/K, (K − A + 2R)/K)`. The first vanishes at every solution;
/// the second equals `−μN/K` and vanishes only at the critical mass.
pub fn virial_residuals(sol: &HartreeSolution) -> (f64, f64) {
    let b = &sol.breakdown;
    (
        (2.0 * b.kinetic - b.attraction + b.repulsion) / b.kinetic,
        (b.kinetic - b.attraction + 2.0 * b.repulsion) / b.kinetic,
    )
}

/// Normalized margins; each is nonnegative when its inequality holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    /// `1 − A/(NZ²/3)`
    pub attraction_margin: f64,
    /// `1 + E/(NZ²/9)`
    pub energy_margin: f64,
    /// `J/(3N/Z) − 1`
    pub distance_margin: f64,
    /// `1 − cup_ratio`
    pub cup_margin: f64,
    /// `J·A/Z − N²`, relative to `N²`
    pub schwarz_margin: f64,
}

pub const LEMMA_SLACK: f64 = 1e-8;

impl LemmaReport {
    pub fn attraction_holds(&self) -> bool {
        self.attraction_margin >= -LEMMA_SLACK
    }

    pub fn energy_holds(&self) -> bool {
        self.energy_margin >= -LEMMA_SLACK
    }

    pub fn distance_holds(&self) -> bool {
        self.distance_margin >= -LEMMA_SLACK
    }

    pub fn all_hold(&self) -> bool {
        self.attraction_holds() && self.energy_holds() && self.distance_holds()
    }
}

pub fn lemma_checks(sol: &HartreeSolution) -> Result<LemmaReport> {
    let b = &sol.breakdown;
    let (n, z) = (b.mass, sol.z);
    Ok(LemmaReport {
        attraction_margin: 1.0 - b.attraction / (n * z * z / 3.0),
        energy_margin: 1.0 + b.energy / (n * z * z / 9.0),
        distance_margin: b.first_moment / (3.0 * n / z) - 1.0,
        cup_margin: 1.0 - cup_ratio(&sol.psi)?,
        schwarz_margin: (b.first_moment * b.attraction / z - n * n) / (n * n),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KineticCertificate {
    /// `K`
    pub lhs: f64,
    /// `NZ²/9 + D K^{1/2} N^{5/6}`
    pub rhs: f64,
    pub certificate: Certificate,
}

impl KineticCertificate {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }
}

pub fn kinetic_certificate(sol: &HartreeSolution, d: f64) -> Result<KineticCertificate> {
    if !(d >= 0.0 && d.is_finite()) {
        return Err(Error::InvalidInput(format!("D must be nonnegative, got {d}")));
    }
    let b = &sol.breakdown;
    let (n, z, k) = (b.mass, sol.z, b.kinetic);
    let c = Constants::default().with_d(d);
    Ok(KineticCertificate {
        lhs: k,
        rhs: n * z * z / 9.0 + d * k.sqrt() * n.powf(5.0 / 6.0),
        certificate: Certificate::new(k, n, z, b.first_moment, &c),
    })
}

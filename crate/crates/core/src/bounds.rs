//! Closed-form upper bounds on the number of particles an atom of charge `Z` can bind.

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

/// Coefficient of `Z` in the main bound, frozen as published (`5/(4·0.8218)` rounded).
pub const MAIN_LINEAR_COEFF: f64 = 1.5211;
/// Frozen `a` valid for `Z ≥ 6`.
pub const FROZEN_A: f64 = 0.29363;
/// Published claim for the last `Z` where the main bound beats Nam's fermionic bound.
pub const CLAIMED_CROSSOVER: u32 = 26;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    /// Lieb–Oxford constant.
    pub c_lo: f64,
    /// Gagliardo–Nirenberg constant for `∫ρ^{4/3}`.
    pub c_gn: f64,
    /// `D = C_LO · C_GN` as used in the bound (default is the rounded published value).
    pub d_const: f64,
    pub beta_lower: f64,
    pub beta_upper: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Self { c_lo: 1.57, c_gn: 0.2793, d_const: 0.4403, beta_lower: 0.8218, beta_upper: 0.8705 }
    }
}

impl Constants {
    /// Replace `C_GN` and recompute `D = C_LO · C_GN`.
    pub fn with_c_gn(mut self, c_gn: f64) -> Self {
        self.c_gn = c_gn;
        self.d_const = self.c_lo * c_gn;
        self
    }

    /// Replace `C_LO` and recompute `D = C_LO · C_GN`.
    pub fn with_c_lo(mut self, c_lo: f64) -> Self {
        self.c_lo = c_lo;
        self.d_const = c_lo * self.c_gn;
        self
    }

    pub fn with_d(mut self, d: f64) -> Self {
        self.d_const = d;
        self
    }

    pub fn with_beta_lower(mut self, beta: f64) -> Self {
        self.beta_lower = beta;
        self
    }
}

/// Lieb: `N < 2Z + 1`.
pub fn lieb_bound(z: f64) -> f64 {
    2.0 * z + 1.0
}

/// Nam (fermions): `N < 1.22 Z + 3 Z^{1/3}`.
pub fn nam_bound(z: f64) -> f64 {
    1.22 * z + 3.0 * z.cbrt()
}

/// Hartree model: `N ≤ 5Z/(4β)` with `β = β_lower`.
pub fn hartree_bound(z: f64, c: &Constants) -> f64 {
    hartree_bound_with_beta(z, c.beta_lower)
}

pub fn hartree_bound_with_beta(z: f64, beta: f64) -> f64 {
    5.0 * z / (4.0 * beta)
}

/// `h(Z) = (3D/8β)(2 + 1/Z)^{1/3} + (9D²/32β)(2/Z + 1/Z²)^{2/3}`, the value of
/// [`a_coeff`] at `N = 2Z + 1`.
pub fn h_of_z(z: f64, c: &Constants) -> f64 {
    let d = c.d_const;
    let b = c.beta_lower;
    3.0 * d / (8.0 * b) * (2.0 + 1.0 / z).cbrt()
        + 9.0 * d * d / (32.0 * b) * (2.0 / z + 1.0 / (z * z)).powf(2.0 / 3.0)
}

/// `a = (3D/8β)(N/Z)^{1/3} + (9D²/32β)(N/Z²)^{2/3}`.
pub fn a_coeff(n: f64, z: f64, c: &Constants) -> f64 {
    let d = c.d_const;
    let b = c.beta_lower;
    3.0 * d / (8.0 * b) * (n / z).cbrt() + 9.0 * d * d / (32.0 * b) * (n / (z * z)).powf(2.0 / 3.0)
}

/// `δ = 3 D N^{1/3} / Z` and the positive root `u₀` of `u² = 1 + δu`.
pub fn delta_u0(n: f64, z: f64, c: &Constants) -> (f64, f64) {
    let delta = 3.0 * c.d_const * n.cbrt() / z;
    (delta, u0_of_delta(delta))
}

pub fn u0_of_delta(delta: f64) -> f64 {
    0.5 * (delta + (delta * delta + 4.0).sqrt())
}

/// `1 + δ/2 + δ²/8`, the upper estimate of `u₀`.
pub fn u0_upper(delta: f64) -> f64 {
    1.0 + delta / 2.0 + delta * delta / 8.0
}

/// `N < 1.5211 Z + 1 + Z^{1/3} h(Z)`.
pub fn main_bound(z: f64, c: &Constants) -> f64 {
    MAIN_LINEAR_COEFF * z + 1.0 + z.cbrt() * h_of_z(z, c)
}

/// Main bound with the linear coefficient recomputed as `5/(4β)` instead of frozen.
pub fn main_bound_recomputed(z: f64, c: &Constants) -> f64 {
    hartree_bound(z, c) + 1.0 + z.cbrt() * h_of_z(z, c)
}

/// Main bound with the published frozen `a = 0.29363`; only meaningful for `Z ≥ 6`.
pub fn main_bound_frozen(z: f64) -> Option<f64> {
    (z >= 6.0).then(|| MAIN_LINEAR_COEFF * z + 1.0 + FROZEN_A * z.cbrt())
}

/// Largest integer strictly below `bound`.
pub fn integer_cap(bound: f64) -> i64 {
    bound.ceil() as i64 - 1
}

/// Quantities that turn the kinetic inequality `K ≤ NZ²/9 + D K^{1/2} N^{5/6}`
/// into a lower bound on the mean distance `I/N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    /// `σ = Z N^{1/2} / 3`
    pub sigma: f64,
    /// `u = K^{1/2} / σ`
    pub u: f64,
    pub delta: f64,
    pub u0: f64,
    /// `I = ∫|x|ρ`
    pub i_moment: f64,
    pub mass: f64,
    pub z: f64,
}

impl Certificate {
    pub fn new(kinetic: f64, mass: f64, z: f64, i_moment: f64, c: &Constants) -> Self {
        let sigma = z * mass.sqrt() / 3.0;
        let (delta, u0) = delta_u0(mass, z, c);
        Self { sigma, u: kinetic.sqrt() / sigma, delta, u0, i_moment, mass, z }
    }

    /// `u ≤ u₀`
    pub fn holds(&self) -> bool {
        self.u <= self.u0
    }

    /// `(3N/(4I), (Z/4)(1 + δ/2 + δ²/8))`; the first must not exceed the second.
    pub fn distance_sides(&self) -> (f64, f64) {
        (3.0 * self.mass / (4.0 * self.i_moment), self.z / 4.0 * u0_upper(self.delta))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub z: u32,
    pub lieb: f64,
    pub nam: f64,
    pub hartree: f64,
    pub main: f64,
    /// `a` evaluated at `N = main`, the self-consistent error coefficient.
    pub a: f64,
    pub h_z: f64,
    pub main_recomputed: f64,
    pub main_frozen: Option<f64>,
    pub cap_lieb: i64,
    pub cap_nam: i64,
    pub cap_main: i64,
    pub best_real: String,
    pub best_integer: String,
}

const CANDIDATES: [&str; 3] = ["main", "nam", "lieb"];

fn winners(values: [f64; 3]) -> String {
    let best = values.iter().copied().fold(f64::INFINITY, f64::min);
    CANDIDATES
        .iter()
        .zip(values)
        .filter(|(_, v)| *v == best)
        .map(|(n, _)| *n)
        .collect::<Vec<_>>()
        .join("+")
}

impl BoundReport {
    pub fn new(z: u32, c: &Constants) -> Self {
        let zf = z as f64;
        let lieb = lieb_bound(zf);
        let nam = nam_bound(zf);
        let main = main_bound(zf, c);
        let (cap_lieb, cap_nam, cap_main) = (integer_cap(lieb), integer_cap(nam), integer_cap(main));
        Self {
            z,
            lieb,
            nam,
            hartree: hartree_bound(zf, c),
            main,
            a: a_coeff(main, zf, c),
            h_z: h_of_z(zf, c),
            main_recomputed: main_bound_recomputed(zf, c),
            main_frozen: main_bound_frozen(zf),
            cap_lieb,
            cap_nam,
            cap_main,
            best_real: winners([main, nam, lieb]),
            best_integer: winners([cap_main as f64, cap_nam as f64, cap_lieb as f64]),
        }
    }
}

pub fn compare_table(z_min: u32, z_max: u32, c: &Constants) -> Vec<BoundReport> {
    (z_min.max(1)..=z_max).map(|z| BoundReport::new(z, c)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossover {
    /// Largest `Z` with `⌊main⌋ ≤ ⌊nam⌋`.
    pub integer_z: Option<u32>,
    /// Largest `Z` with `main ≤ nam`.
    pub real_z: Option<u32>,
    pub claimed_z: u32,
    pub searched_up_to: u32,
}

/// Scan `Z = 1..=cap` for the last charge where the main bound is at least as good
/// as Nam's.
pub fn crossover_vs_nam(c: &Constants, cap: u32) -> Crossover {
    let mut integer_z = None;
    let mut real_z = None;
    for z in 1..=cap {
        let zf = z as f64;
        let (m, n) = (main_bound(zf, c), nam_bound(zf));
        if m <= n {
            real_z = Some(z);
        }
        if m.floor() <= n.floor() {
            integer_z = Some(z);
        }
    }
    Crossover { integer_z, real_z, claimed_z: CLAIMED_CROSSOVER, searched_up_to: cap }
}

/// `%.6g`-style formatting: six significant digits, trailing zeros trimmed.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    let s = if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.5e}")
    };
    trim_zeros(&s)
}

fn trim_zeros(s: &str) -> String {
    let (mantissa, exp) = match s.find('e') {
        Some(i) => (&s[..i], &s[i..]),
        None => (s, ""),
    };
    let mantissa = if mantissa.contains('.') {
        mantissa.trim_end_matches('0').trim_end_matches('.')
    } else {
        mantissa
    };
    format!("{mantissa}{exp}")
}

pub const CSV_HEADER: &str = "Z,lieb,nam,hartree,main,a,hZ,best_real,best_integer";

pub fn table_csv(rows: &[BoundReport]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{}",
            r.z,
            sig6(r.lieb),
            sig6(r.nam),
            sig6(r.hartree),
            sig6(r.main),
            sig6(r.a),
            sig6(r.h_z),
            r.best_real,
            r.best_integer
        );
    }
    s
}

/// JSON mirror of [`table_csv`]: same keys, floats rounded to six significant digits.
pub fn table_json(rows: &[BoundReport]) -> serde_json::Value {
    let round = |x: f64| -> serde_json::Value {
        sig6(x).parse::<f64>().map(serde_json::Value::from).unwrap_or(serde_json::Value::Null)
    };
    serde_json::Value::Array(
        rows.iter()
            .map(|r| {
                serde_json::json!({
                    "Z": r.z,
                    "lieb": round(r.lieb),
                    "nam": round(r.nam),
                    "hartree": round(r.hartree),
                    "main": round(r.main),
                    "a": round(r.a),
                    "hZ": round(r.h_z),
                    "best_real": r.best_real,
                    "best_integer": r.best_integer,
                })
            })
            .collect(),
    )
}

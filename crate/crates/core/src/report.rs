//! Reproduction report: every published number and identity recomputed, with
//! the computed value shown beside the reference.

use crate::beta::{self, Family, PointConfig, TrialDensity, BETA_LOWER, BETA_UPPER};
use crate::bounds::{self, Constants, CLAIMED_CROSSOVER};
use crate::error::Result;
use crate::functionals::{kinetic, moment, nam_form_ratio, weighted_kinetic};
use crate::gn;
use crate::hartree::scf::{self, ScfConfig};
use crate::profile::RadialProfile;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

/// Published `main` values for `Z = 1..5`.
pub const PUBLISHED_MAIN: [f64; 5] = [2.9489, 4.4824, 6.0286, 7.5741, 9.1180];
pub const PUBLISHED_CAPS: [i64; 5] = [2, 4, 6, 7, 9];
pub const PUBLISHED_H6: f64 = 0.29363;
pub const PUBLISHED_CGN: f64 = 0.279271;
pub const PUBLISHED_NASIBOV: f64 = 0.306658;
pub const PUBLISHED_CRITICAL_RATIO: f64 = 1.21;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReproduceOptions {
    pub constants: Constants,
    pub scf: ScfConfig,
    pub shoot_tol: f64,
    pub beta_budget: usize,
    pub alpha_seeds: usize,
    pub property_samples: usize,
    pub rng_seed: u64,
}

impl Default for ReproduceOptions {
    fn default() -> Self {
        Self {
            constants: Constants::default(),
            scf: ScfConfig::default(),
            shoot_tol: 1e-12,
            beta_budget: 80,
            alpha_seeds: 16,
            property_samples: 100,
            rng_seed: 2024,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub name: String,
    pub computed: f64,
    pub reference: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub constants: Constants,
    pub checks: Vec<Check>,
    /// `main(Z)` under the run's constants minus `main(Z)` under the defaults, `Z = 1..5`.
    pub table_deltas: Vec<f64>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let c = &self.constants;
        serde_json::json!({
            "constants": {
                "c_lo": c.c_lo,
                "c_gn": c.c_gn,
                "d_const": bounds::sig6(c.d_const).parse::<f64>().unwrap_or(c.d_const),
                "beta_lower": c.beta_lower,
            },
            "checks": self.checks.iter().map(|k| serde_json::json!({
                "id": k.id,
                "name": k.name,
                "computed": bounds::sig6(k.computed),
                "reference": k.reference,
                "status": if k.passed { "PASS" } else { "FAIL" },
            })).collect::<Vec<_>>(),
            "table_deltas": self.table_deltas.iter().map(|d| bounds::sig6(*d)).collect::<Vec<_>>(),
            "passed": self.all_passed(),
        })
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("id,name,computed,reference,status\n");
        for k in &self.checks {
            let _ = writeln!(
                s,
                "{},{},{},{},{}",
                k.id,
                k.name,
                bounds::sig6(k.computed),
                k.reference,
                if k.passed { "PASS" } else { "FAIL" }
            );
        }
        s
    }
}

struct Builder(Vec<Check>);

impl Builder {
    fn push(&mut self, id: &str, name: &str, computed: f64, reference: impl Into<String>, passed: bool) {
        self.0.push(Check {
            id: id.into(),
            name: name.into(),
            computed,
            reference: reference.into(),
            passed,
        });
    }
}

/// Random radial profile `Σ c_k r^{p_k} e^{−d_k r^{q_k}}` with one to three
/// terms, sampled adaptively. The leading coefficient is positive; the others
/// may change sign.
pub fn random_profile(rng: &mut impl Rng, nodes: usize) -> Result<RadialProfile> {
    let terms = rng.gen_range(1..=3);
    let shape: Vec<(f64, i32, f64, i32)> = (0..terms)
        .map(|k| {
            let c = if k == 0 { rng.gen_range(0.5..1.5) } else { rng.gen_range(-0.5..0.5) };
            (c, rng.gen_range(0..=2), rng.gen_range(0.3..3.0), rng.gen_range(1..=2))
        })
        .collect();
    let slowest = shape.iter().map(|t| t.2).fold(f64::INFINITY, f64::min);
    RadialProfile::sample_adaptive(nodes, 10.0 / slowest, |r| {
        shape.iter().map(|&(c, p, d, q)| c * r.powi(p) * (-d * r.powi(q)).exp()).sum()
    })
}

/// Property margins of one profile; each is nonnegative when the inequality holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropertyMargins {
    /// `nam_form_ratio + 3/4`
    pub nam_form: f64,
    /// `weighted_kinetic + 1e-8 (K + N)`
    pub weighted_kinetic: f64,
    /// `cgn + 1e-4 − gn_ratio`
    pub gn: f64,
    /// `(J·A/Z − N²)/N²` with `A/Z = ∫ψ²/|x|`
    pub schwarz: f64,
}

pub fn property_margins(p: &RadialProfile, cgn: f64) -> Result<PropertyMargins> {
    let n = moment(p, 0)?;
    let k = kinetic(p)?;
    Ok(PropertyMargins {
        nam_form: nam_form_ratio(p)? + 0.75,
        weighted_kinetic: weighted_kinetic(p)? + 1e-8 * (k + n),
        gn: cgn + 1e-4 - gn::gn_ratio(p)?,
        schwarz: (moment(p, 1)? * moment(p, -1)? - n * n) / (n * n),
    })
}

/// Rotate, permute and rescale a configuration; `α_N` must not change.
pub fn transformed_config(cfg: &PointConfig, rng: &mut impl Rng, scale: f64) -> Result<PointConfig> {
    // random rotation from a normalized quaternion
    let q: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let [a, b, c, d] = q.map(|x| x / n);
    let m = [
        [a * a + b * b - c * c - d * d, 2.0 * (b * c - a * d), 2.0 * (b * d + a * c)],
        [2.0 * (b * c + a * d), a * a - b * b + c * c - d * d, 2.0 * (c * d - a * b)],
        [2.0 * (b * d - a * c), 2.0 * (c * d + a * b), a * a - b * b - c * c + d * d],
    ];
    let mut points: Vec<[f64; 3]> = cfg
        .points
        .iter()
        .map(|p| std::array::from_fn(|i| scale * (m[i][0] * p[0] + m[i][1] * p[1] + m[i][2] * p[2])))
        .collect();
    points.reverse();
    points.rotate_left(1);
    PointConfig::new(points)
}

/// Run every check. Numerical failures (non-convergence, tails) are returned
/// as errors; checks whose numbers disagree are reported as failed.
pub fn reproduce(opts: &ReproduceOptions) -> Result<Report> {
    let c = &opts.constants;
    let mut b = Builder(Vec::new());
    let mut rng = ChaCha8Rng::seed_from_u64(opts.rng_seed);

    // 1. small-Z table
    let mains: Vec<f64> = (1..=5).map(|z| bounds::main_bound(z as f64, c)).collect();
    let worst = mains.iter().zip(PUBLISHED_MAIN).map(|(m, p)| (m - p).abs()).fold(0.0, f64::max);
    b.push("1a", "main bound Z=1..5 max deviation", worst, "<= 2e-3", worst <= 2e-3);
    let caps_ok = mains.iter().zip(PUBLISHED_CAPS).all(|(m, cap)| bounds::integer_cap(*m) == cap);
    b.push("1b", "integer caps Z=1..5", caps_ok as u8 as f64, "2 4 6 7 9", caps_ok);

    // 2. h(Z)
    let h6 = bounds::h_of_z(6.0, c);
    b.push("2a", "h(6)", h6, "0.29363 +/- 2e-4", (h6 - PUBLISHED_H6).abs() <= 2e-4);
    let monotone = (1..1000).all(|z| bounds::h_of_z(z as f64 + 1.0, c) < bounds::h_of_z(z as f64, c));
    b.push("2b", "h decreasing on [1,1000]", monotone as u8 as f64, "1", monotone);

    // 3. GN constant
    let g = gn::solve_ground_state(opts.shoot_tol)?;
    b.push("3a", "cgn direct ratio", g.cgn, "0.279271 +/- 1e-3", (g.cgn - PUBLISHED_CGN).abs() <= 1e-3);
    let routes = ((g.cgn - g.cgn_pohozaev) / g.cgn).abs();
    b.push("3b", "cgn ratio vs Pohozaev route", routes, "<= 1e-5", routes <= 1e-5);
    let mk = (g.m / g.k - 5.0 / 3.0).abs() / (5.0 / 3.0);
    b.push("3c", "M/K = 5/3 relative error", mk, "<= 1e-5", mk <= 1e-5);
    let pk = (g.p / g.k - 8.0 / 3.0).abs() / (8.0 / 3.0);
    b.push("3d", "P/K = 8/3 relative error", pk, "<= 1e-5", pk <= 1e-5);

    // 4. Nasibov
    let nas = gn::nasibov_cgn_bound();
    b.push("4a", "nasibov k_N^(8/3)", nas, "0.306658 +/- 1e-5", (nas - PUBLISHED_NASIBOV).abs() <= 1e-5);
    let closed = 96.0 / 125.0 * (5.0 * std::f64::consts::PI).powf(-1.0 / 3.0);
    b.push("4b", "nasibov closed form deviation", (nas - closed).abs(), "<= 1e-10", (nas - closed).abs() <= 1e-10);
    b.push("4c", "nasibov minus computed cgn", nas - g.cgn, "> 0", nas > g.cgn);

    // 5-7. Hartree
    let crit: Vec<scf::CriticalMass> = [1.0, 2.0, 4.0]
        .iter()
        .map(|&z| scf::critical_mass(z, &opts.scf, 1e-5))
        .collect::<Result<_>>()?;
    let nc1 = crit[0].mass;
    b.push("5a", "critical mass Z=1", nc1, "1.21 +/- 0.02", (nc1 - PUBLISHED_CRITICAL_RATIO).abs() <= 0.02);
    let spread = crit
        .iter()
        .zip([1.0, 2.0, 4.0])
        .map(|(cm, z)| (cm.mass / z - nc1).abs())
        .fold(0.0, f64::max);
    b.push("5b", "N_c/Z spread over Z=1,2,4", spread, "<= 1e-3", spread <= 1e-3);

    let unit = scf::solve(1.0, 1.0, &opts.scf)?;
    let (v_unit, _) = scf::virial_residuals(&unit);
    b.push("6a", "|2K-A+R|/K at N=1", v_unit.abs(), "<= 1e-4", v_unit.abs() <= 1e-4);
    let at_c = &crit[0].solution;
    let (v1, v2) = scf::virial_residuals(at_c);
    b.push("6b", "|2K-A+R|/K at N_c", v1.abs(), "<= 1e-4", v1.abs() <= 1e-4);
    b.push("6c", "|K-A+2R|/K at N_c", v2.abs(), "<= 1e-2", v2.abs() <= 1e-2);
    let e = &at_c.breakdown;
    let three = (3.0 * e.kinetic - e.attraction).abs() / e.attraction;
    b.push("6d", "|3K-A|/A at N_c", three, "<= 1e-2", three <= 1e-2);

    let lemmas = scf::lemma_checks(at_c)?;
    b.push("7a", "A <= NZ^2/3 margin at N_c", lemmas.attraction_margin, ">= 0", lemmas.attraction_holds());
    b.push("7b", "E >= -NZ^2/9 margin at N_c", lemmas.energy_margin, ">= 0", lemmas.energy_holds());
    b.push("7c", "J >= 3N/Z margin at N_c", lemmas.distance_margin, ">= 0", lemmas.distance_holds());
    b.push("7d", "1 - cup ratio at N_c", lemmas.cup_margin, ">= -1e-6", lemmas.cup_margin >= -1e-6);
    let cert = scf::kinetic_certificate(at_c, c.d_const)?;
    b.push("7e", "kinetic certificate rhs - K", cert.rhs - cert.lhs, ">= 0", cert.holds());

    // 8. property sweeps
    let mut worst = PropertyMargins { nam_form: f64::INFINITY, weighted_kinetic: f64::INFINITY, gn: f64::INFINITY, schwarz: f64::INFINITY };
    for _ in 0..opts.property_samples {
        let p = random_profile(&mut rng, 2000)?;
        let m = property_margins(&p, g.cgn)?;
        worst.nam_form = worst.nam_form.min(m.nam_form);
        worst.weighted_kinetic = worst.weighted_kinetic.min(m.weighted_kinetic);
        worst.gn = worst.gn.min(m.gn);
        worst.schwarz = worst.schwarz.min(m.schwarz);
    }
    b.push("8a", "min nam_form_ratio + 3/4", worst.nam_form, ">= -1e-6", worst.nam_form >= -1e-6);
    b.push("8b", "min weighted_kinetic margin", worst.weighted_kinetic, ">= 0", worst.weighted_kinetic >= 0.0);
    b.push("8c", "min cgn + 1e-4 - gn_ratio", worst.gn, ">= 0", worst.gn >= 0.0);
    b.push("8d", "min Schwarz margin", worst.schwarz, ">= -1e-8", worst.schwarz >= -1e-8);

    // 9. beta
    let pe = beta::optimize_beta_upper(Family::PowerExp, opts.beta_budget)?;
    let in_range = pe.beta_upper >= BETA_LOWER - 1e-3 && pe.beta_upper <= BETA_UPPER + 1e-3;
    b.push("9a", "beta over r^a e^-r", pe.beta_upper, "[0.8208, 0.8715]", in_range);
    b.push("9b", "min beta evaluated", pe.min_evaluated, ">= 0.8208", pe.min_evaluated >= BETA_LOWER - 1e-3);
    let shell = beta::beta_functional(&TrialDensity::shell(1.0)?)?;
    b.push("9c", "beta of a single shell", shell, "1 +/- 1e-6", (shell - 1.0).abs() <= 1e-6);
    let mix = beta::optimize_beta_upper(Family::ShellMix, 30 * opts.beta_budget)?;
    b.push("9d", "beta over shell mixtures", mix.beta_upper, "[0.8208, 0.8715]", mix.beta_upper >= BETA_LOWER - 1e-3 && mix.beta_upper <= BETA_UPPER + 1e-3);

    // 10. alpha_N
    let a2 = beta::minimize_alpha_n(2, opts.alpha_seeds, opts.rng_seed)?;
    b.push("10a", "min alpha_2", a2.value, "<= 0.5 + 1e-6", a2.value <= 0.5 + 1e-6);
    let p = &a2.config.points;
    let offset = (0..3).map(|i| (p[0][i] + p[1][i]).powi(2)).sum::<f64>().sqrt();
    let size = (0..3).map(|i| p[0][i].powi(2)).sum::<f64>().sqrt();
    b.push("10b", "antipodal offset |x1+x2|/|x1|", offset / size, "<= 1e-3", offset / size <= 1e-3);
    let a5 = beta::minimize_alpha_n(5, opts.alpha_seeds, opts.rng_seed)?;
    let moved = transformed_config(&a5.config, &mut rng, 7.0)?;
    let drift = (beta::alpha_n_value(&moved) - a5.value).abs() / a5.value;
    b.push("10c", "alpha_5 invariance drift", drift, "<= 1e-10", drift <= 1e-10);

    // 11. bosonic dominance
    let dominated = (1..=118).all(|z| bounds::main_bound(z as f64, c) < bounds::lieb_bound(z as f64));
    b.push("11", "main < 2Z+1 for Z=1..118", dominated as u8 as f64, "1", dominated);

    // 12. crossover
    let x = bounds::crossover_vs_nam(c, 10_000);
    let real = x.real_z.map_or(f64::NAN, f64::from);
    b.push("12a", "crossover vs Nam (real)", real, "[21, 24]", (21.0..=24.0).contains(&real));
    let int = x.integer_z.map_or(f64::NAN, f64::from);
    b.push("12b", "crossover vs Nam (integer)", int, format!("published {CLAIMED_CROSSOVER}"), int.is_finite());

    let defaults = Constants::default();
    let table_deltas = (1..=5)
        .map(|z| bounds::main_bound(z as f64, c) - bounds::main_bound(z as f64, &defaults))
        .collect();
    Ok(Report { constants: *c, checks: b.0, table_deltas })
}

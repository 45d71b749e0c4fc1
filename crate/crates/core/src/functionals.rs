//! Single-profile functionals in units where the one-body operator is `−Δ − Z/|x|`.
//!
//! All integrals are full 3D integrals of radial functions, i.e. they carry the
//! `4π r²` volume element.

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::profile::RadialProfile;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const FOUR_PI: f64 = 4.0 * PI;

/// Energy pieces of the Hartree functional for a given profile and nuclear charge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    /// `∫|∇ψ|²`
    pub kinetic: f64,
    /// `Z ∫ψ²/|x|`
    pub attraction: f64,
    /// `½∬ψ²(x)ψ²(y)/|x−y|`
    pub repulsion: f64,
    /// `K − A + R`
    pub energy: f64,
    /// `∫ψ²`
    pub mass: f64,
    /// `∫|x|ψ²`
    pub first_moment: f64,
}

impl EnergyBreakdown {
    pub fn compute(p: &RadialProfile, z: f64) -> Result<Self> {
        let kinetic = kinetic(p)?;
        let attraction = z * moment(p, -1)?;
        let repulsion = coulomb_self(p)?;
        Ok(Self {
            kinetic,
            attraction,
            repulsion,
            energy: kinetic - attraction + repulsion,
            mass: moment(p, 0)?,
            first_moment: moment(p, 1)?,
        })
    }
}

fn check_power(k: i32) -> Result<()> {
    if (-1..=2).contains(&k) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("moment order must be in -1..=2, got {k}")))
    }
}

/// `4π ∫ r^{2+k} ψ² dr` for `k ∈ {−1, 0, 1, 2}`.
pub fn moment(p: &RadialProfile, k: i32) -> Result<f64> {
    check_power(k)?;
    let g = p.grid();
    let f: Vec<f64> = g
        .nodes()
        .iter()
        .zip(p.values())
        .map(|(r, v)| FOUR_PI * r.powi(2 + k) * v * v)
        .collect();
    g.integrate_from_origin_checked(&f, (2 + k) as f64)
}

/// `4π ∫ r² ψ′² dr`.
pub fn kinetic(p: &RadialProfile) -> Result<f64> {
    let g = p.grid();
    let d = g.derivative(p.values());
    let f: Vec<f64> = g
        .nodes()
        .iter()
        .zip(&d)
        .map(|(r, dv)| FOUR_PI * r * r * dv * dv)
        .collect();
    g.integrate_from_origin_checked(&f, 2.0)
}

/// Newton potential `Φ(r) = (1/r)∫_{|y|<r}ψ² + ∫_{|y|>r}ψ²/|y|` of the density `ψ²`.
pub fn hartree_potential(p: &RadialProfile) -> Result<RadialProfile> {
    let g = p.grid();
    let r = g.nodes();
    let v = p.values();
    let shell: Vec<f64> = r.iter().zip(v).map(|(r, v)| FOUR_PI * r * r * v * v).collect();
    let fraction = g.tail_fraction(&shell);
    if fraction > crate::grid::TAIL_LIMIT {
        return Err(Error::TailNotConverged { fraction, limit: crate::grid::TAIL_LIMIT });
    }
    let phi = newton_potential(g, v);
    RadialProfile::new(g.clone(), phi)
}

/// Newton potential of `ψ²` on the nodes of `grid`, without the tail check.
pub(crate) fn newton_potential(grid: &RadialGrid, values: &[f64]) -> Vec<f64> {
    let r = grid.nodes();
    let shell: Vec<f64> = r.iter().zip(values).map(|(r, v)| FOUR_PI * r * r * v * v).collect();
    let over_r: Vec<f64> = shell.iter().zip(r).map(|(s, r)| s / r).collect();
    let inner = grid.cumulative(&shell);
    let outer = grid.cumulative(&over_r);
    // density inside the first node treated as flat
    let core_mass = shell[0] * r[0] / 3.0;
    let outer_total = outer[r.len() - 1];
    (0..r.len())
        .map(|i| (core_mass + inner[i]) / r[i] + (outer_total - outer[i]))
        .collect()
}

/// `R = ½∬ψ²(x)ψ²(y)/|x−y|`, evaluated as `½ ∫ψ² Φ`.
pub fn coulomb_self(p: &RadialProfile) -> Result<f64> {
    if p.is_zero() {
        return Ok(0.0);
    }
    let phi = hartree_potential(p)?;
    let g = p.grid();
    let f: Vec<f64> = g
        .nodes()
        .iter()
        .zip(p.values())
        .zip(phi.values())
        .map(|((r, v), ph)| 0.5 * FOUR_PI * r * r * v * v * ph)
        .collect();
    g.integrate_from_origin_checked(&f, 2.0)
}

fn nonzero(p: &RadialProfile) -> Result<()> {
    if p.is_zero() {
        Err(Error::ZeroProfile)
    } else {
        Ok(())
    }
}

/// `∫ψ²/|x| / (‖∇ψ‖₂‖ψ‖₂)`; at most one, with equality exactly on `B e^{−c r}`.
pub fn cup_ratio(p: &RadialProfile) -> Result<f64> {
    nonzero(p)?;
    let a = moment(p, -1)?;
    let k = kinetic(p)?;
    let n = moment(p, 0)?;
    Ok(a / (k * n).sqrt())
}

/// `(|x|²ψ, −Δψ) / (ψ, ψ)`, computed in the integrated-by-parts form
/// `∫∇(r²ψ)·∇ψ`. Bounded below by `−3/4`.
pub fn nam_form_ratio(p: &RadialProfile) -> Result<f64> {
    nonzero(p)?;
    let g = p.grid();
    let d = g.derivative(p.values());
    let f: Vec<f64> = g
        .nodes()
        .iter()
        .zip(p.values())
        .zip(&d)
        .map(|((r, v), dv)| FOUR_PI * r * r * (2.0 * r * v * dv + r * r * dv * dv))
        .collect();
    Ok(g.integrate_checked(&f)? / moment(p, 0)?)
}

/// `∫(−|x| ψ Δψ) = ∫∇(rψ)·∇ψ`; nonnegative.
pub fn weighted_kinetic(p: &RadialProfile) -> Result<f64> {
    nonzero(p)?;
    let g = p.grid();
    let d = g.derivative(p.values());
    let f: Vec<f64> = g
        .nodes()
        .iter()
        .zip(p.values())
        .zip(&d)
        .map(|((r, v), dv)| FOUR_PI * r * r * (v * dv + r * dv * dv))
        .collect();
    g.integrate_checked(&f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn exp1() -> RadialProfile {
        RadialProfile::exponential(1.0, 4000).unwrap()
    }

    fn gauss() -> RadialProfile {
        RadialProfile::gaussian(1.0, 4000).unwrap()
    }

    #[test]
    fn exponential_moments() {
        let p = exp1();
        assert_relative_eq!(moment(&p, 0).unwrap(), PI, max_relative = 1e-7);
        assert_relative_eq!(moment(&p, -1).unwrap(), PI, max_relative = 1e-7);
        assert_relative_eq!(moment(&p, 1).unwrap(), 1.5 * PI, max_relative = 1e-7);
        assert!(moment(&p, 3).is_err());
    }

    #[test]
    fn kinetic_closed_forms() {
        assert_relative_eq!(kinetic(&exp1()).unwrap(), PI, max_relative = 1e-7);
        assert_relative_eq!(kinetic(&gauss()).unwrap(), 1.5 * PI.powf(1.5), max_relative = 1e-7);
    }

    #[test]
    fn flat_profile_has_no_interior_kinetic_energy() {
        // smoothed plateau: flat out to r≈5, then a steep smooth edge
        let g = RadialGrid::log(4000, 100.0).unwrap();
        let p = RadialProfile::from_fn(g, |r| 0.5 * (1.0 - ((r - 5.0) * 4.0).tanh())).unwrap();
        let d = p.grid().derivative(p.values());
        let interior: f64 = p
            .grid()
            .nodes()
            .iter()
            .zip(&d)
            .filter(|(r, _)| **r < 3.0)
            .map(|(_, dv)| dv.abs())
            .fold(0.0, f64::max);
        assert!(interior < 1e-6);
    }

    #[test]
    fn hydrogenic_potential() {
        let p = exp1();
        let phi = hartree_potential(&p).unwrap();
        for (&r, &v) in p.grid().nodes().iter().zip(phi.values()).step_by(50) {
            let want = PI * (1.0 / r - (-2.0 * r).exp() * (1.0 / r + 1.0));
            assert!((v - want).abs() <= 1e-7 * want.abs().max(1e-3), "r={r}: {v} vs {want}");
        }
        let last = *phi.values().last().unwrap();
        let n = moment(&p, 0).unwrap();
        assert_relative_eq!(last, n / p.grid().r_max(), max_relative = 1e-6);
        assert!(phi.values().windows(2).all(|w| w[1] <= w[0] + 1e-14));
    }

    #[test]
    fn point_like_bump_acts_as_point_charge() {
        let g = RadialGrid::log(4000, 200.0).unwrap();
        let p = RadialProfile::from_fn(g, |r| (-(r / 0.05).powi(2)).exp()).unwrap();
        let m = moment(&p, 0).unwrap();
        let phi = hartree_potential(&p).unwrap();
        for &r in &[2.0, 10.0, 50.0] {
            assert_relative_eq!(phi.at(r), m / r, max_relative = 1e-7);
        }
    }

    #[test]
    fn coulomb_self_energy_cases() {
        assert_relative_eq!(coulomb_self(&exp1()).unwrap(), 5.0 * PI * PI / 16.0, max_relative = 1e-7);
        // Thin shell of unit radius. A Gaussian radial spread σ of the density
        // lowers M²/2 by the mean excess of max(r, s), σ/√π, to first order.
        let g = RadialGrid::log(80000, 20.0).unwrap();
        let width: f64 = 2e-4;
        let p = RadialProfile::from_fn(g, |r| (-((r - 1.0) / width).powi(2) / 2.0).exp()).unwrap();
        let m = moment(&p, 0).unwrap();
        let sigma = width / 2f64.sqrt();
        let want = m * m / 2.0 * (1.0 - sigma / PI.sqrt());
        assert_relative_eq!(coulomb_self(&p).unwrap(), want, max_relative = 5e-6);
        let g0 = RadialGrid::log(200, 1.0).unwrap();
        let zero = RadialProfile::new(g0, vec![0.0; 200]).unwrap();
        assert_eq!(coulomb_self(&zero).unwrap(), 0.0);
    }

    #[test]
    fn coulomb_self_scales_linearly_under_mass_preserving_dilation() {
        let p = gauss();
        let r0 = coulomb_self(&p).unwrap();
        for mu in [0.3, 2.0, 7.0] {
            assert_relative_eq!(coulomb_self(&p.rescaled(1.0, mu)).unwrap(), mu * r0, max_relative = 1e-10);
        }
    }

    #[test]
    fn cup_ratio_cases() {
        assert_relative_eq!(cup_ratio(&exp1()).unwrap(), 1.0, max_relative = 1e-7);
        let e3 = RadialProfile::exponential(3.0, 4000).unwrap();
        assert_relative_eq!(cup_ratio(&e3).unwrap(), 1.0, max_relative = 1e-7);
        let want = 2.0 / (PI.sqrt() * 1.5f64.sqrt());
        assert_relative_eq!(cup_ratio(&gauss()).unwrap(), want, max_relative = 1e-7);
        let g = RadialGrid::log(200, 1.0).unwrap();
        let zero = RadialProfile::new(g, vec![0.0; 200]).unwrap();
        assert_eq!(cup_ratio(&zero), Err(Error::ZeroProfile));
    }

    #[test]
    fn nam_form_cases() {
        assert_relative_eq!(nam_form_ratio(&gauss()).unwrap(), 0.75, max_relative = 1e-7);
        assert!(nam_form_ratio(&exp1()).unwrap().abs() < 1e-7);
        let p = gauss();
        for mu in [0.25, 4.0] {
            assert_relative_eq!(
                nam_form_ratio(&p.rescaled(1.0, mu)).unwrap(),
                0.75,
                max_relative = 1e-7
            );
        }
    }

    #[test]
    fn weighted_kinetic_cases() {
        assert_relative_eq!(weighted_kinetic(&exp1()).unwrap(), PI / 2.0, max_relative = 1e-7);
        // 4π∫(r⁵ − r³)e^{−r²} dr = 4π(1 − 1/2)
        assert_relative_eq!(weighted_kinetic(&gauss()).unwrap(), 2.0 * PI, max_relative = 1e-7);
    }

    #[test]
    fn breakdown_energy_identity() {
        let b = EnergyBreakdown::compute(&exp1(), 2.0).unwrap();
        assert_eq!(b.energy, b.kinetic - b.attraction + b.repulsion);
        assert_relative_eq!(b.attraction, 2.0 * PI, max_relative = 1e-7);
    }
}

use ionbound::beta::{self, PointConfig, TrialDensity};
use ionbound::bounds::{self, sig6, Constants};
use ionbound::functionals::{nam_form_ratio, weighted_kinetic};
use ionbound::grid::RadialGrid;
use ionbound::profile::RadialProfile;
use proptest::prelude::*;

// two-term profile c1 e^{-a r} + c2 r e^{-b r}, cut off well inside r_max
fn two_term(c1: f64, a: f64, c2: f64, b: f64) -> RadialProfile {
    let r_max = 400.0 / a.min(b);
    let grid = RadialGrid::log(3000, r_max).unwrap();
    RadialProfile::from_fn(grid, |r| c1 * (-a * r).exp() + c2 * r * (-b * r).exp()).unwrap()
}

fn point() -> impl Strategy<Value = [f64; 3]> {
    prop::array::uniform3(-5.0..5.0f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernel_at_least_one(x in point(), y in point()) {
        let d = ((x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2) + (x[2] - y[2]).powi(2)).sqrt();
        prop_assume!(d > 1e-9);
        let nx = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        let ny = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt();
        prop_assert!((nx + ny) / d >= 1.0 - 1e-12);
    }

    #[test]
    fn alpha_n_scale_invariant(points in prop::collection::vec(point(), 2..8), s in 0.01..100.0f64) {
        let Ok(cfg) = PointConfig::new(points.clone()) else { return Ok(()) };
        let scaled = PointConfig::new(points.iter().map(|p| p.map(|c| c * s)).collect()).unwrap();
        let a = beta::alpha_n_value(&cfg);
        prop_assert!(((beta::alpha_n_value(&scaled) - a) / a).abs() < 1e-10);
        prop_assert!(a >= 0.5 - 1e-12);
    }

    #[test]
    fn beta_dilation_invariant(a in 0.0..6.0f64, lambda in 0.05..20.0f64) {
        let rho = beta::power_exp(a).unwrap();
        let b0 = beta::beta_functional(&rho).unwrap();
        let b1 = beta::beta_functional(&rho.dilated(lambda)).unwrap();
        prop_assert!((b0 - b1).abs() < 1e-9 * b0);
    }

    #[test]
    fn shells_scale_and_stay_in_range(
        radii in prop::collection::vec(0.01..100.0f64, 1..12),
        lambda in 0.1..10.0f64,
    ) {
        let weights = radii.iter().enumerate().map(|(i, _)| 1.0 + i as f64).collect();
        let rho = TrialDensity::shells(radii, weights).unwrap();
        let b0 = beta::beta_functional(&rho).unwrap();
        let b1 = beta::beta_functional(&rho.dilated(lambda)).unwrap();
        prop_assert!((b0 - b1).abs() < 1e-12 * b0);
        prop_assert!(b0 > 0.5 && b0 <= 1.0 + 1e-12);
    }

    #[test]
    fn nam_form_bounded_below(c1 in 0.1..2.0f64, a in 0.3..3.0f64, c2 in -2.0..2.0f64, b in 0.3..3.0f64) {
        let p = two_term(c1, a, c2, b);
        prop_assume!(!p.is_zero());
        prop_assert!(nam_form_ratio(&p).unwrap() >= -0.75 - 1e-6);
    }

    #[test]
    fn weighted_kinetic_nonnegative(c1 in 0.1..2.0f64, a in 0.3..3.0f64, c2 in -2.0..2.0f64, b in 0.3..3.0f64) {
        let p = two_term(c1, a, c2, b);
        prop_assert!(weighted_kinetic(&p).unwrap() >= -1e-9);
    }

    #[test]
    fn sig6_round_trips(x in -1e9..1e9f64) {
        prop_assume!(x != 0.0);
        let back: f64 = sig6(x).parse().unwrap();
        prop_assert!(((back - x) / x).abs() <= 5e-6);
    }

    #[test]
    fn main_bound_between_nam_slope_and_lieb(z in 1u32..200) {
        let c = Constants::default();
        let z = z as f64;
        let m = bounds::main_bound(z, &c);
        prop_assert!(m < bounds::lieb_bound(z));
        prop_assert!(m > z);
    }
}

//! Lowest `ℓ = 0` eigenpair of `−Δ + V` on a log grid.
//!
//! With `u = rψ` and `u = √r·v(x)`, `x = ln r`, the radial equation becomes
//! `v″ = [r²(V − ε) + 1/4] v`, which Numerov integrates on the uniform `x` nodes.
//! The eigenvalue is bracketed by node counting and bisected; the eigenfunction is
//! assembled from an outward and an inward sweep matched at the outer turning point.

use crate::grid::RadialGrid;

const RESCALE: f64 = 1e150;
/// Largest `h²q/12` Numerov is run at. Beyond it the recursion turns oscillatory
/// and produces spurious nodes, so the grid is cut there with a Dirichlet wall.
/// This only happens deep in the forbidden region, where the solution is
/// negligible.
const NUMEROV_LIMIT: f64 = 0.5;

/// Ground state of a radial Schrödinger operator.
#[derive(Debug, Clone)]
pub struct RadialEigen {
    pub energy: f64,
    /// `ψ` on the nodes, positive, with `4π∫r²ψ² = 1`.
    pub psi: Vec<f64>,
}

/// `q_i = r_i²(V_i − ε) + 1/4`
fn numerov_coefficients(grid: &RadialGrid, potential: &[f64], energy: f64) -> Vec<f64> {
    grid.nodes()
        .iter()
        .zip(potential)
        .map(|(r, v)| r * r * (v - energy) + 0.25)
        .collect()
}

/// Number of nodes Numerov is stable on, at least 4.
fn stable_len(q: &[f64], h2: f64) -> usize {
    q.iter().position(|&x| h2 * x > NUMEROV_LIMIT).unwrap_or(q.len()).max(4)
}

/// Number of sign changes of the regular solution on `(0, r_max]`.
fn count_nodes(grid: &RadialGrid, potential: &[f64], energy: f64, cusp: f64) -> usize {
    let q = numerov_coefficients(grid, potential, energy);
    let h2 = grid.step() * grid.step() / 12.0;
    let r = grid.nodes();
    let (mut a, mut b) = (start_value(r[0], cusp), start_value(r[1], cusp));
    let mut nodes = 0;
    for i in 1..stable_len(&q, h2) - 1 {
        let next = (2.0 * (1.0 + 5.0 * h2 * q[i]) * b - (1.0 - h2 * q[i - 1]) * a)
            / (1.0 - h2 * q[i + 1]);
        if next == 0.0 || next.signum() != b.signum() {
            nodes += 1;
        }
        a = b;
        b = next;
        if b.abs() > RESCALE {
            a /= RESCALE;
            b /= RESCALE;
        }
    }
    nodes
}

/// `v = √r (1 − c r)` from the cusp condition `ψ′(0) = −c ψ(0)`.
fn start_value(r: f64, cusp: f64) -> f64 {
    r.sqrt() * (1.0 - cusp * r)
}

/// Lowest eigenvalue and eigenfunction of `−Δ + V` with Dirichlet walls at `r_max`.
///
/// `cusp` is `Z/2` for a nuclear Coulomb singularity `−Z/r`. `hint` seeds the
/// bracket; `tol` is the absolute bisection tolerance on the energy.
pub fn ground_state(
    grid: &RadialGrid,
    potential: &[f64],
    cusp: f64,
    hint: Option<f64>,
    tol: f64,
) -> RadialEigen {
    let (mut lo, mut hi) = bracket(grid, potential, cusp, hint);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_nodes(grid, potential, mid, cusp) == 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let energy = 0.5 * (lo + hi);
    let psi = eigenfunction(grid, potential, energy, cusp);
    RadialEigen { energy, psi }
}

/// `[lo, hi]` with no node at `lo` and at least one at `hi`.
fn bracket(grid: &RadialGrid, potential: &[f64], cusp: f64, hint: Option<f64>) -> (f64, f64) {
    // −Δ − 2c/r is bounded below by −c²; otherwise the potential minimum is a floor
    let floor = if cusp > 0.0 {
        -cusp * cusp * 1.05 - 1e-12
    } else {
        potential.iter().copied().fold(f64::INFINITY, f64::min)
    };
    let unit = (cusp * cusp).max(1.0 / (grid.r_max() * grid.r_max()));
    let centre = hint.unwrap_or(floor);
    let mut width = if hint.is_some() { 1e-3 * unit } else { unit };
    let mut lo = centre.max(floor);
    while lo > floor && count_nodes(grid, potential, lo, cusp) > 0 {
        width *= 4.0;
        lo = (centre - width).max(floor);
    }
    let mut hi = centre + width;
    while count_nodes(grid, potential, hi, cusp) == 0 {
        lo = hi;
        width *= 4.0;
        hi = centre + width;
    }
    (lo, hi)
}

fn eigenfunction(grid: &RadialGrid, potential: &[f64], energy: f64, cusp: f64) -> Vec<f64> {
    let r = grid.nodes();
    let q = numerov_coefficients(grid, potential, energy);
    let h2 = grid.step() * grid.step() / 12.0;
    // nodes past the wall keep ψ = 0
    let n = stable_len(&q, h2);

    // outer classical turning point: last node where q < 0
    let turn = (2..n - 2).rev().find(|&i| q[i] < 0.0).unwrap_or(n / 2);
    let m = turn.clamp(2, n - 3);

    let mut v = vec![0.0; grid.len()];
    v[0] = start_value(r[0], cusp);
    v[1] = start_value(r[1], cusp);
    for i in 1..m {
        v[i + 1] = (2.0 * (1.0 + 5.0 * h2 * q[i]) * v[i] - (1.0 - h2 * q[i - 1]) * v[i - 1])
            / (1.0 - h2 * q[i + 1]);
        if v[i + 1].abs() > RESCALE {
            for x in v[..=i + 1].iter_mut() {
                *x /= RESCALE;
            }
        }
    }
    let outer_at_m = v[m];

    let mut w = vec![0.0; n];
    w[n - 1] = 0.0;
    w[n - 2] = 1.0;
    for i in (m + 1..n - 1).rev() {
        w[i - 1] = (2.0 * (1.0 + 5.0 * h2 * q[i]) * w[i] - (1.0 - h2 * q[i + 1]) * w[i + 1])
            / (1.0 - h2 * q[i - 1]);
        if w[i - 1].abs() > RESCALE {
            for x in w[i - 1..].iter_mut() {
                *x /= RESCALE;
            }
        }
    }
    let scale = outer_at_m / w[m];
    for i in m + 1..n {
        v[i] = w[i] * scale;
    }

    let mut psi: Vec<f64> = v.iter().zip(r).map(|(v, r)| v / r.sqrt()).collect();
    let shell: Vec<f64> = psi
        .iter()
        .zip(r)
        .map(|(p, r)| 4.0 * std::f64::consts::PI * r * r * p * p)
        .collect();
    let norm = grid.integrate_from_origin(&shell, 2.0).sqrt();
    let sign = if psi[0] < 0.0 { -1.0 } else { 1.0 };
    for p in psi.iter_mut() {
        *p *= sign / norm;
    }
    psi
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn hydrogen_ground_state() {
        for z in [1.0, 3.0] {
            let grid = RadialGrid::log(4000, 200.0 / z).unwrap();
            let v: Vec<f64> = grid.nodes().iter().map(|r| -z / r).collect();
            let e = ground_state(&grid, &v, z / 2.0, None, 1e-12);
            assert_relative_eq!(e.energy, -z * z / 4.0, max_relative = 1e-8);
            // ψ ∝ e^{−zr/2}
            let c = e.psi[0] / (-z * grid.r_min() / 2.0).exp();
            for (i, &r) in grid.nodes().iter().enumerate().step_by(211) {
                if r < 40.0 / z {
                    assert_relative_eq!(e.psi[i], c * (-z * r / 2.0).exp(), max_relative = 1e-7);
                }
            }
            assert!(e.psi.iter().all(|p| *p >= 0.0));
        }
    }

    #[test]
    fn coarse_wide_grid_has_no_spurious_nodes() {
        // h²q/12 reaches ~50 at r_max here
        let grid = RadialGrid::log(200, 480.0).unwrap();
        let v: Vec<f64> = grid.nodes().iter().map(|r| -1.0 / r).collect();
        let e = ground_state(&grid, &v, 0.5, None, 1e-12);
        assert_relative_eq!(e.energy, -0.25, max_relative = 1e-3);
        assert!(e.psi.iter().all(|p| p.is_finite() && *p >= 0.0));
    }

    #[test]
    fn harmonic_well_with_hint() {
        // −Δ + r²: ground energy 3
        let grid = RadialGrid::log(4000, 12.0).unwrap();
        let v: Vec<f64> = grid.nodes().iter().map(|r| r * r).collect();
        let e = ground_state(&grid, &v, 0.0, Some(2.5), 1e-11);
        assert_relative_eq!(e.energy, 3.0, max_relative = 1e-8);
    }

    #[test]
    fn box_state_above_zero() {
        // free particle in a ball of radius R: ε = (π/R)²
        let grid = RadialGrid::log(4000, 5.0).unwrap();
        let v = vec![0.0; grid.len()];
        let e = ground_state(&grid, &v, 0.0, None, 1e-12);
        assert_relative_eq!(e.energy, (std::f64::consts::PI / 5.0).powi(2), max_relative = 1e-7);
    }
}

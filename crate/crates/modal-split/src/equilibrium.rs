//! The best-response map, its day-by-day fixed-point iteration, a bisection
//! oracle for the equilibrium, and contraction diagnostics.
//!
//! Writing `Phi(x) = x(p(x))` for the share of residents who drive tomorrow
//! given that a share `x` drove today, the dynamics is `x^{k+1} = Phi(x^k)`.
//! Under conditions (1)-(4) the map sends [0, 1] into (0, 1); condition (5)
//! makes it a contraction for eta = 1, with modulus `4*gamma/(a - b1)`, so
//! the iteration converges geometrically to the unique fixed point from any
//! starting share.

use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Bisection stops once the bracket is this narrow.
const BISECT_WIDTH: f64 = 1e-12;
/// Hard cap on bisection halvings.
const BISECT_MAX_HALVINGS: usize = 200;
/// Grid size for the eta > 1 contraction-modulus scan.
const DERIVATIVE_GRID: usize = 10_000;

/// Record of one fixed-point iteration run.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTrace {
    /// x^0, x^1, ..., x^K in order.
    pub iterates: Vec<f64>,
    /// |x^{k+1} - x^k| per step; one entry shorter than `iterates`.
    pub residuals: Vec<f64>,
    /// Whether the run stopped by meeting the tolerance (as opposed to
    /// exhausting `max_iter`).
    pub converged: bool,
    /// 1-based index of the first residual at or below the tolerance.
    pub iterations_to_tolerance: Option<usize>,
    /// sup |Phi'| over [0, 1]; the geometric rate when < 1.
    pub contraction_modulus: f64,
    /// The stopping tolerance the run used.
    pub tolerance: f64,
}

impl ConvergenceTrace {
    /// The final iterate.
    pub fn last(&self) -> f64 {
        *self.iterates.last().expect("trace holds at least x0")
    }

    /// 1-based index of the first residual at or below `tol`, if any.
    /// With `tol` = 0.01 this is the "days to converge" readout.
    pub fn steps_to_residual(&self, tol: f64) -> Option<usize> {
        self.residuals.iter().position(|r| *r <= tol).map(|i| i + 1)
    }
}

/// Tomorrow's car share when a share `x` drove today:
/// `Phi(x) = demand_share(indifference_vot(x))`.
///
/// For eta = 1 this reduces to `(b2 - T(x))/(a - b1)`.
pub fn best_response(x: f64, params: &ModelParams) -> Result<f64> {
    params.require_dynamics_feasible()?;
    let threshold = params.indifference_vot(x)?;
    Ok(params.demand_share_raw(threshold))
}

#[inline]
fn best_response_raw(x: f64, params: &ModelParams) -> f64 {
    params.demand_share_raw(params.indifference_vot_raw(x))
}

/// Analytic derivative of the best-response map,
/// `Phi'(x) = -eta * ((b2 - T(x))/(a - b1))^(eta-1) * 4*gamma*x^3 / (a - b1)`.
pub fn best_response_derivative(x: f64, params: &ModelParams) -> Result<f64> {
    params.require_dynamics_feasible()?;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain("x", x, "in [0, 1]"));
    }
    Ok(best_response_derivative_raw(x, params))
}

#[inline]
fn best_response_derivative_raw(x: f64, params: &ModelParams) -> f64 {
    let spread = params.a - params.b1;
    let ratio = (params.b2 - params.travel_time_raw(x)) / spread;
    -params.eta * ratio.powf(params.eta - 1.0) * 4.0 * params.gamma * x.powi(3) / spread
}

/// Applies the best-response map from `x0` until two consecutive shares
/// differ by at most `tolerance`, or `max_iter` steps have been taken.
///
/// Non-convergence (possible for eta > 1, which the contraction theorem does
/// not cover) is reported through `converged = false`, never as an error.
pub fn iterate(
    x0: f64,
    params: &ModelParams,
    tolerance: f64,
    max_iter: usize,
) -> Result<ConvergenceTrace> {
    params.require_dynamics_feasible()?;
    if !(0.0..=1.0).contains(&x0) {
        return Err(Error::domain("x0", x0, "in [0, 1]"));
    }
    if !(tolerance > 0.0) {
        return Err(Error::domain("tolerance", tolerance, "> 0"));
    }
    if max_iter < 1 {
        return Err(Error::domain("max_iter", max_iter as f64, ">= 1"));
    }

    let mut iterates = Vec::with_capacity(max_iter.min(64) + 1);
    let mut residuals = Vec::with_capacity(max_iter.min(64));
    iterates.push(x0);
    let mut x = x0;
    let mut converged = false;
    for _ in 0..max_iter {
        let next = best_response_raw(x, params);
        let residual = (next - x).abs();
        iterates.push(next);
        residuals.push(residual);
        x = next;
        if residual <= tolerance {
            converged = true;
            break;
        }
    }
    let iterations_to_tolerance = converged.then_some(residuals.len());
    Ok(ConvergenceTrace {
        iterates,
        residuals,
        converged,
        iterations_to_tolerance,
        contraction_modulus: contraction_modulus(params)?,
        tolerance,
    })
}

/// Finds the fixed point of the best-response map by bisection on
/// `g(x) = Phi(x) - x` over [0, 1], independent of the iteration above.
///
/// Under conditions (1)-(4) the bracket is guaranteed: condition (4) gives
/// `p(0) > 1` hence `g(0) = Phi(0) > 0`, and condition (3) gives
/// `p(1) < p_max` hence `Phi(1) < 1` so `g(1) < 0`. A failed bracket is
/// reported as infeasibility, signalling violated conditions.
pub fn solve_oracle(params: &ModelParams, tolerance: f64) -> Result<f64> {
    if !(tolerance > 0.0) {
        return Err(Error::domain("tolerance", tolerance, "> 0"));
    }
    // The map must at least be defined on [0, 1] (condition (2) plus b1 < a).
    if !(params.b2 > params.travel_time_raw(1.0)) || !(params.a > params.b1) {
        return Err(Error::infeasible(
            "indifference threshold undefined on [0, 1]: need T(1) < b2 and b1 < a",
        ));
    }
    let g = |x: f64| best_response_raw(x, params) - x;
    let (g0, g1) = (g(0.0), g(1.0));
    if !(g0 > 0.0 && g1 < 0.0) {
        return Err(Error::infeasible(format!(
            "bisection bracket failed: g(0) = {g0}, g(1) = {g1} (conditions (3)-(4) violated)"
        )));
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..BISECT_MAX_HALVINGS {
        if hi - lo <= BISECT_WIDTH {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = 0.5 * (lo + hi);
    if g(root).abs() > tolerance {
        return Err(Error::domain(
            "tolerance",
            tolerance,
            "achievable by bisection to bracket width 1e-12",
        ));
    }
    Ok(root)
}

/// sup over [0, 1] of |Phi'(x)|.
///
/// For eta = 1 this is exactly `4*gamma/(a - b1)` (the quantity condition
/// (5) bounds below 1). For eta > 1 it is read off a dense grid of the
/// analytic derivative; a diagnostic, not a proof.
pub fn contraction_modulus(params: &ModelParams) -> Result<f64> {
    params.require_dynamics_feasible()?;
    if params.eta == 1.0 {
        return Ok(4.0 * params.gamma / (params.a - params.b1));
    }
    let max_abs = (0..DERIVATIVE_GRID)
        .map(|i| i as f64 / (DERIVATIVE_GRID - 1) as f64)
        .map(|x| best_response_derivative_raw(x, params).abs())
        .fold(0.0_f64, f64::max);
    Ok(max_abs)
}

/// The staircase polyline of a trace in the unit square:
/// (x0,x0) -> (x0,x1) -> (x1,x1) -> (x1,x2) -> ...
///
/// Consecutive segments alternate vertical and horizontal moves.
pub fn cobweb_points(trace: &ConvergenceTrace) -> Vec<(f64, f64)> {
    let xs = &trace.iterates;
    let mut points = Vec::with_capacity(xs.len() * 2);
    if xs.is_empty() {
        return points;
    }
    points.push((xs[0], xs[0]));
    for pair in xs.windows(2) {
        points.push((pair[0], pair[1]));
        points.push((pair[1], pair[1]));
    }
    points
}

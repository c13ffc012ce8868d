//! City parameters, generalized trip costs, the indifference value of time,
//! the Zipf-Pareto demand curve, and the feasibility conditions (1)-(5).
//!
//! Cost of a car trip for a resident valuing a minute at `p` rubles is
//! `a + p*T(x)` with the BPR-style congestion law `T(x) = T0 + gamma*x^4`,
//! where `x` is the share of residents driving. The transit alternative
//! costs `b1 + p*b2` independent of `x`. A resident drives iff their value
//! of time exceeds the indifference threshold `p(x) = (a - b1)/(b2 - T(x))`,
//! and the share of residents with value of time at least `p` is `p^-eta`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The seven scalars defining one city instance.
///
/// Units: `a`, `b1` in rubles; `b2`, `t0`, `gamma` in minutes; `p_max` in
/// rubles per minute; `eta` dimensionless.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    /// Fixed monetary cost of a car trip.
    pub a: f64,
    /// Transit fare.
    pub b1: f64,
    /// Comfort-adjusted transit travel time.
    pub b2: f64,
    /// Free-flow car travel time.
    #[serde(rename = "T0")]
    pub t0: f64,
    /// Congestion coefficient of the quartic term in the travel-time law.
    pub gamma: f64,
    /// Pareto exponent of the demand curve, in [1, 2].
    pub eta: f64,
    /// Maximum value of time.
    pub p_max: f64,
}

impl ModelParams {
    /// Builds a parameter set, rejecting values outside the type invariants.
    pub fn new(a: f64, b1: f64, b2: f64, t0: f64, gamma: f64, eta: f64, p_max: f64) -> Result<Self> {
        let params = ModelParams {
            a,
            b1,
            b2,
            t0,
            gamma,
            eta,
            p_max,
        };
        params.validate()?;
        Ok(params)
    }

    /// The instance used throughout the numerical experiment: a=60, b1=50,
    /// b2=75, T0=70, gamma=2, eta=1, p_max=10.
    pub fn reference() -> Self {
        ModelParams {
            a: 60.0,
            b1: 50.0,
            b2: 75.0,
            t0: 70.0,
            gamma: 2.0,
            eta: 1.0,
            p_max: 10.0,
        }
    }

    /// Checks the type invariants (positivity, eta in [1,2], p_max > 1).
    pub fn validate(&self) -> Result<()> {
        let positive: [(&'static str, f64); 4] = [
            ("a", self.a),
            ("b1", self.b1),
            ("b2", self.b2),
            ("T0", self.t0),
        ];
        for (name, value) in positive {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::domain(name, value, "> 0 and finite"));
            }
        }
        if !(self.gamma >= 0.0) || !self.gamma.is_finite() {
            return Err(Error::domain("gamma", self.gamma, ">= 0 and finite"));
        }
        if !(self.p_max > 1.0) || !self.p_max.is_finite() {
            return Err(Error::domain("p_max", self.p_max, "> 1 and finite"));
        }
        if !(1.0..=2.0).contains(&self.eta) {
            return Err(Error::domain("eta", self.eta, "in [1, 2]"));
        }
        Ok(())
    }

    /// Field names accepted by [`ModelParams::with_field`], in spec order.
    pub const FIELD_NAMES: [&'static str; 7] = ["a", "b1", "b2", "T0", "gamma", "eta", "p_max"];

    /// Returns a copy with the named field replaced, re-validated.
    /// Unknown names are a domain error.
    pub fn with_field(&self, name: &str, value: f64) -> Result<Self> {
        let mut params = *self;
        match name {
            "a" => params.a = value,
            "b1" => params.b1 = value,
            "b2" => params.b2 = value,
            "T0" => params.t0 = value,
            "gamma" => params.gamma = value,
            "eta" => params.eta = value,
            "p_max" => params.p_max = value,
            _ => {
                return Err(Error::domain(
                    "parameter",
                    f64::NAN,
                    "one of a, b1, b2, T0, gamma, eta, p_max",
                ))
            }
        }
        params.validate()?;
        Ok(params)
    }

    /// Congestion-dependent car travel time `T(x) = T0 + gamma*x^4`.
    ///
    /// `x` is the share of residents driving and must lie in [0, 1].
    pub fn travel_time(&self, x: f64) -> Result<f64> {
        check_share(x)?;
        Ok(self.travel_time_raw(x))
    }

    #[inline]
    pub(crate) fn travel_time_raw(&self, x: f64) -> f64 {
        self.t0 + self.gamma * x.powi(4)
    }

    /// Generalized cost of a car trip, `a + p*T(x)`, for value of time `p >= 1`.
    pub fn car_cost(&self, p: f64, x: f64) -> Result<f64> {
        check_vot(p)?;
        check_share(x)?;
        Ok(self.a + p * self.travel_time_raw(x))
    }

    /// Generalized cost of a transit trip, `b1 + p*b2`. Independent of the
    /// car share.
    pub fn transit_cost(&self, p: f64) -> Result<f64> {
        check_vot(p)?;
        Ok(self.b1 + p * self.b2)
    }

    /// The value of time at which car and transit costs coincide:
    /// `p(x) = (a - b1)/(b2 - T(x))`.
    ///
    /// Requires condition (2) to hold at `x` (i.e. `T(x) < b2`); otherwise
    /// the two cost curves never cross and the call reports infeasibility.
    pub fn indifference_vot(&self, x: f64) -> Result<f64> {
        check_share(x)?;
        let slack = self.b2 - self.travel_time_raw(x);
        if !(slack > 0.0) {
            return Err(Error::infeasible(format!(
                "condition (2) violated at x = {x}: T(x) = {} >= b2 = {}",
                self.travel_time_raw(x),
                self.b2
            )));
        }
        Ok((self.a - self.b1) / slack)
    }

    #[inline]
    pub(crate) fn indifference_vot_raw(&self, x: f64) -> f64 {
        (self.a - self.b1) / (self.b2 - self.travel_time_raw(x))
    }

    /// Share of residents valuing a minute at `p` rubles or more:
    /// `x(p) = p^-eta`, defined for all `p >= 1`.
    pub fn demand_share(&self, p: f64) -> Result<f64> {
        check_vot(p)?;
        Ok(self.demand_share_raw(p))
    }

    #[inline]
    pub(crate) fn demand_share_raw(&self, p: f64) -> f64 {
        p.powf(-self.eta)
    }

    /// Evaluates the five feasibility conditions. Never fails; the report
    /// carries a signed margin per condition (positive iff satisfied, the
    /// inequalities being strict).
    pub fn check_conditions(&self) -> ConditionReport {
        let t1 = self.travel_time_raw(1.0);
        let t0 = self.travel_time_raw(0.0);
        let margins = [
            self.a - self.b1,
            self.b2 - t1,
            (self.b1 + self.p_max * self.b2) - (self.a + self.p_max * t1),
            (self.a + t0) - (self.b1 + self.b2),
            (self.a - self.b1) - 4.0 * self.gamma,
        ];
        ConditionReport {
            conditions: margins.map(|margin| ConditionCheck {
                satisfied: margin > 0.0,
                margin,
            }),
        }
    }

    /// Errors unless conditions (1)-(4) hold, i.e. unless the indifference
    /// threshold is well defined and interior on all of [0, 1].
    pub(crate) fn require_dynamics_feasible(&self) -> Result<()> {
        let report = self.check_conditions();
        if report.dynamics_feasible() {
            Ok(())
        } else {
            let failed: Vec<String> = report
                .conditions
                .iter()
                .take(4)
                .enumerate()
                .filter(|(_, c)| !c.satisfied)
                .map(|(i, c)| format!("({}) {} [margin {}]", i + 1, ConditionReport::LABELS[i], c.margin))
                .collect();
            Err(Error::infeasible(format!(
                "conditions required by the dynamics fail: {}",
                failed.join(", ")
            )))
        }
    }
}

fn check_share(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::domain("x", x, "in [0, 1]"))
    }
}

fn check_vot(p: f64) -> Result<()> {
    if p >= 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("p", p, ">= 1"))
    }
}

/// One strict inequality: whether it holds and by how much.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionCheck {
    pub satisfied: bool,
    /// Slack of the strict inequality; positive iff satisfied.
    pub margin: f64,
}

/// Pass/fail and numeric margin for each of conditions (1)-(5).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionReport {
    /// Conditions (1)..(5), in order.
    pub conditions: [ConditionCheck; 5],
}

impl ConditionReport {
    /// Human-readable statements of the five inequalities, in order.
    pub const LABELS: [&'static str; 5] = [
        "b1 < a",
        "T(1) < b2",
        "a + p_max*T(1) < b1 + p_max*b2",
        "a + T(0) > b1 + b2",
        "4*gamma < a - b1",
    ];

    /// Conjunction of all five conditions.
    pub fn all_satisfied(&self) -> bool {
        self.conditions.iter().all(|c| c.satisfied)
    }

    /// Conditions (1)-(4): what the day-by-day dynamics and the equilibrium
    /// solver need. Condition (5) only governs the contraction guarantee.
    pub fn dynamics_feasible(&self) -> bool {
        self.conditions[..4].iter().all(|c| c.satisfied)
    }

    /// Margins in condition order.
    pub fn margins(&self) -> [f64; 5] {
        self.conditions.map(|c| c.margin)
    }
}

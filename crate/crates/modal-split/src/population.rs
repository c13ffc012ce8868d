//! Finite-population replication of the day-by-day mode choice: sample
//! residents' values of time from the truncated Pareto law and let each of
//! them best-respond to yesterday's observed car share.

use rand::distributions::OpenClosed01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Identifier of the pseudo-random generator backing every sampled result,
/// recorded alongside outputs so experiments are bit-reproducible.
pub const RNG_ALGORITHM: &str = "ChaCha12";

/// One resident, identified by their value of time in rubles per minute.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Agent {
    pub vot: f64,
}

/// A sampled city: a multiset of residents plus the seed that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    agents: Vec<Agent>,
    seed: u64,
}

impl Population {
    /// Wraps explicit values of time (each must be >= 1 and finite).
    pub fn from_values(vots: Vec<f64>, seed: u64) -> Result<Self> {
        if vots.is_empty() {
            return Err(Error::domain("n", 0.0, ">= 1"));
        }
        for &vot in &vots {
            if !(vot >= 1.0) || !vot.is_finite() {
                return Err(Error::domain("vot", vot, ">= 1 and finite"));
            }
        }
        Ok(Population {
            agents: vots.into_iter().map(|vot| Agent { vot }).collect(),
            seed,
        })
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn n(&self) -> usize {
        self.agents.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Inverse-transform draw: for u uniform on (0, 1],
/// `vot = min(u^(-1/eta), p_max)`.
///
/// This realizes P(vot >= p) = p^-eta exactly on [1, p_max), with the
/// residual mass p_max^-eta sitting as an atom at p_max. Conditions (3)-(4)
/// keep every decision threshold strictly below p_max, so the atom never
/// influences mode choice.
#[inline]
pub(crate) fn vot_from_uniform(u: f64, eta: f64, p_max: f64) -> f64 {
    u.powf(-1.0 / eta).min(p_max)
}

/// Samples `n` residents i.i.d. from the truncated Pareto law of `params`.
/// The generator is ChaCha12 seeded with `seed`; identical inputs reproduce
/// the population bit for bit.
pub fn sample_population(n: usize, params: &ModelParams, seed: u64) -> Result<Population> {
    params.validate()?;
    if n < 1 {
        return Err(Error::domain("n", n as f64, ">= 1"));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let agents = (0..n)
        .map(|_| {
            let u: f64 = rng.sample(OpenClosed01);
            Agent {
                vot: vot_from_uniform(u, params.eta, params.p_max),
            }
        })
        .collect();
    Ok(Population { agents, seed })
}

/// Outcome of one simulated day.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DayRecord {
    /// 1-based day number within a run (1 when produced standalone).
    pub day: usize,
    /// Fraction of residents who drove; an exact multiple of 1/n.
    pub car_share: f64,
    /// The indifference threshold p(x_prev) the day's decisions used.
    pub threshold_vot: f64,
}

/// A day-by-day run: the records plus when (if ever) the choice pattern
/// froze.
#[derive(Debug, Clone, PartialEq)]
pub struct DayTrace {
    pub records: Vec<DayRecord>,
    /// First day d such that day d+1 reproduced exactly the same set of
    /// drivers; None if the pattern was still moving at max_days.
    pub stable_day: Option<usize>,
}

impl DayTrace {
    pub fn final_share(&self) -> f64 {
        self.records.last().map(|r| r.car_share).unwrap_or(0.0)
    }
}

fn drivers_above(pop: &Population, threshold: f64) -> usize {
    // Ties (vot == threshold) ride transit: the car side is the strict
    // interval p(x) < p <= p_max.
    pop.agents.iter().filter(|a| a.vot > threshold).count()
}

/// One day of decisions against yesterday's share `x_prev`.
pub fn step_day(pop: &Population, x_prev: f64, params: &ModelParams) -> Result<DayRecord> {
    params.require_dynamics_feasible()?;
    let threshold = params.indifference_vot(x_prev)?;
    let count = drivers_above(pop, threshold);
    Ok(DayRecord {
        day: 1,
        car_share: count as f64 / pop.n() as f64,
        threshold_vot: threshold,
    })
}

/// Runs the dynamics for up to `max_days`, feeding each day's realized share
/// into the next day's threshold.
///
/// Stops early as soon as two consecutive days produce the identical set of
/// drivers. With a fixed population that set is the suffix of residents
/// above the threshold, so consecutive equal driver counts imply equal sets;
/// a share-residual rule would instead be blind to genuine 2-cycles in the
/// 1/n-quantized dynamics.
pub fn run_days(
    pop: &Population,
    x0: f64,
    params: &ModelParams,
    max_days: usize,
) -> Result<DayTrace> {
    params.require_dynamics_feasible()?;
    if !(0.0..=1.0).contains(&x0) {
        return Err(Error::domain("x0", x0, "in [0, 1]"));
    }
    if max_days < 1 {
        return Err(Error::domain("max_days", max_days as f64, ">= 1"));
    }
    let mut records = Vec::new();
    let mut stable_day = None;
    let mut x_prev = x0;
    let mut prev_count: Option<usize> = None;
    for day in 1..=max_days {
        let threshold = params.indifference_vot(x_prev)?;
        let count = drivers_above(pop, threshold);
        let car_share = count as f64 / pop.n() as f64;
        records.push(DayRecord {
            day,
            car_share,
            threshold_vot: threshold,
        });
        if prev_count == Some(count) {
            stable_day = Some(day - 1);
            break;
        }
        prev_count = Some(count);
        x_prev = car_share;
    }
    Ok(DayTrace {
        records,
        stable_day,
    })
}

/// For each grid value p (each >= 1), the fraction of residents with
/// vot >= p.
pub fn empirical_demand_curve(pop: &Population, grid: &[f64]) -> Result<Vec<f64>> {
    for &p in grid {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(Error::domain("p", p, ">= 1"));
        }
    }
    let n = pop.n() as f64;
    Ok(grid
        .iter()
        .map(|&p| pop.agents.iter().filter(|a| a.vot >= p).count() as f64 / n)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> ModelParams {
        ModelParams::reference()
    }

    #[test]
    fn inverse_transform_boundaries() {
        assert_eq!(vot_from_uniform(1.0, 1.0, 10.0), 1.0);
        assert_eq!(vot_from_uniform(0.5, 1.0, 10.0), 2.0);
        // u^-1 = 20 exceeds the cap.
        assert_eq!(vot_from_uniform(0.05, 1.0, 10.0), 10.0);
        assert_eq!(vot_from_uniform(0.25, 2.0, 10.0), 2.0);
    }

    #[test]
    fn sampling_is_deterministic_and_in_range() {
        let params = reference();
        let a = sample_population(500, &params, 42).unwrap();
        let b = sample_population(500, &params, 42).unwrap();
        assert_eq!(a, b);
        assert!(a
            .agents()
            .iter()
            .all(|ag| (1.0..=params.p_max).contains(&ag.vot)));
        let c = sample_population(500, &params, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn sample_rejects_empty_population() {
        assert!(sample_population(0, &reference(), 1).is_err());
    }

    #[test]
    fn degenerate_population_all_drive() {
        let params = reference();
        let pop = Population::from_values(vec![10.0; 50], 0).unwrap();
        for x_prev in [0.0, 0.5, 1.0] {
            let rec = step_day(&pop, x_prev, &params).unwrap();
            assert_eq!(rec.car_share, 1.0);
        }
    }

    #[test]
    fn degenerate_population_none_drive() {
        let params = reference();
        let pop = Population::from_values(vec![1.0; 50], 0).unwrap();
        for x_prev in [0.0, 0.5, 1.0] {
            let rec = step_day(&pop, x_prev, &params).unwrap();
            assert_eq!(rec.car_share, 0.0);
        }
    }

    #[test]
    fn tie_with_threshold_rides_transit() {
        let params = reference();
        // p(0) = 10/5 = 2 exactly.
        let pop = Population::from_values(vec![2.0, 2.0, 3.0], 0).unwrap();
        let rec = step_day(&pop, 0.0, &params).unwrap();
        assert_eq!(rec.threshold_vot, 2.0);
        assert!((rec.car_share - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn step_day_matches_independent_recount() {
        let params = reference();
        let pop = sample_population(1000, &params, 7).unwrap();
        let rec = step_day(&pop, 0.5, &params).unwrap();
        // Threshold by hand: 10 / (75 - 70.125) = 10 / 4.875.
        let threshold = 10.0 / 4.875;
        assert!((rec.threshold_vot - threshold).abs() < 1e-12);
        let recount = pop.agents().iter().filter(|a| a.vot > threshold).count();
        assert_eq!(rec.car_share, recount as f64 / 1000.0);
    }

    #[test]
    fn monotone_threshold_response() {
        let params = reference();
        let pop = sample_population(2000, &params, 11).unwrap();
        let mut last_threshold = f64::MIN;
        let mut last_share = f64::MAX;
        for x_prev in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let rec = step_day(&pop, x_prev, &params).unwrap();
            assert!(rec.threshold_vot > last_threshold);
            assert!(rec.car_share <= last_share);
            last_threshold = rec.threshold_vot;
            last_share = rec.car_share;
        }
    }

    #[test]
    fn uniform_population_freezes_within_two_days() {
        let params = reference();
        // vot above p(1) = 10/3: everyone keeps driving once they start.
        let pop = Population::from_values(vec![4.0; 20], 0).unwrap();
        let trace = run_days(&pop, 0.9, &params, 30).unwrap();
        assert!(trace.stable_day.unwrap() <= 2);
        assert_eq!(trace.final_share(), 1.0);
        // vot below p(0) = 2: nobody ever drives.
        let pop = Population::from_values(vec![1.5; 20], 0).unwrap();
        let trace = run_days(&pop, 0.9, &params, 30).unwrap();
        assert!(trace.stable_day.unwrap() <= 2);
        assert_eq!(trace.final_share(), 0.0);
    }

    #[test]
    fn uniform_population_inside_threshold_band_two_cycles() {
        // vot strictly between p(0) = 2 and p(1) = 10/3 flips the whole
        // city between all-car and all-transit; the partition never
        // repeats on consecutive days and stability is (correctly) never
        // declared.
        let params = reference();
        let pop = Population::from_values(vec![3.0; 20], 0).unwrap();
        let trace = run_days(&pop, 0.9, &params, 12).unwrap();
        assert_eq!(trace.stable_day, None);
        assert_eq!(trace.records.len(), 12);
        let shares: Vec<f64> = trace.records.iter().map(|r| r.car_share).collect();
        for pair in shares.windows(2) {
            assert_ne!(pair[0], pair[1]);
        }
    }

    #[test]
    fn single_driver_stabilizes_day_one() {
        let params = reference();
        let pop = Population::from_values(vec![10.0], 0).unwrap();
        let trace = run_days(&pop, 0.3, &params, 10).unwrap();
        assert_eq!(trace.stable_day, Some(1));
        assert_eq!(trace.final_share(), 1.0);
    }

    #[test]
    fn run_days_respects_max_days() {
        let params = reference();
        let pop = sample_population(1000, &params, 3).unwrap();
        let trace = run_days(&pop, 1.0, &params, 1).unwrap();
        assert_eq!(trace.records.len(), 1);
        assert_eq!(trace.stable_day, None);
    }

    #[test]
    fn run_days_is_deterministic() {
        let params = reference();
        let pop = sample_population(1000, &params, 21).unwrap();
        let a = run_days(&pop, 0.7, &params, 50).unwrap();
        let b = run_days(&pop, 0.7, &params, 50).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn empirical_curve_endpoints() {
        let params = reference();
        let pop = sample_population(10_000, &params, 5).unwrap();
        let shares = empirical_demand_curve(&pop, &[1.0, 10.5]).unwrap();
        assert_eq!(shares[0], 1.0);
        assert_eq!(shares[1], 0.0);
        assert!(empirical_demand_curve(&pop, &[0.5]).is_err());
    }

    #[test]
    fn empirical_curve_tracks_the_law_at_scale() {
        let params = reference();
        let pop = sample_population(100_000, &params, 17).unwrap();
        let share = empirical_demand_curve(&pop, &[2.0]).unwrap()[0];
        assert!((share - 0.5).abs() < 0.01, "share = {share}");
    }
}

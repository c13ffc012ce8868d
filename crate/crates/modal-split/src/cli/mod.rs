//! Command implementations behind the `modal-split` binary.
//!
//! Exit code contract: 0 success, 1 config/parse error, 2 infeasible model
//! conditions, 3 insufficient data.

mod config;
mod output;

pub use config::{load_config, RunConfig, SimulateConfig, SolveConfig, SweepConfig, YuleConfig};
pub use output::{cobweb_svg, sig6};

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

use crate::equilibrium::{self, ConvergenceTrace};
use crate::error::Error;
use crate::model::{ConditionReport, ModelParams};
use crate::population::{self, RNG_ALGORITHM};
use crate::yule::{self, YuleParams};

/// A command failure carrying the process exit code to report.
#[derive(Debug)]
pub struct CliError {
    pub exit_code: i32,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let exit_code = match err {
            Error::Domain { .. } => 1,
            Error::Infeasible { .. } => 2,
            Error::InsufficientData { .. } | Error::InsufficientVariation { .. } => 3,
        };
        CliError {
            exit_code,
            message: err.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    JsonSummary,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone)]
pub struct CommonOpts {
    pub out_dir: PathBuf,
    pub seed_override: Option<u64>,
    pub format: OutputFormat,
}

impl CommonOpts {
    fn path(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }

    fn ensure_out_dir(&self) -> Result<(), CliError> {
        std::fs::create_dir_all(&self.out_dir).map_err(|e| CliError {
            exit_code: 1,
            message: format!("cannot create {}: {e}", self.out_dir.display()),
        })
    }
}

fn print_summary<T: Serialize>(opts: &CommonOpts, json: &T, human: &str) {
    match opts.format {
        OutputFormat::Csv => println!("{human}"),
        OutputFormat::JsonSummary => {
            println!("{}", serde_json::to_string(json).expect("serializable summary"))
        }
    }
}

// ---------------------------------------------------------------------------
// check

#[derive(Serialize)]
struct CheckSummary {
    command: &'static str,
    all_satisfied: bool,
    conditions: Vec<CheckLine>,
}

#[derive(Serialize)]
struct CheckLine {
    index: usize,
    label: &'static str,
    satisfied: bool,
    margin: f64,
}

/// Evaluates conditions (1)-(5); exit 0 when all hold, 2 otherwise.
pub fn cmd_check(config: &RunConfig, opts: &CommonOpts) -> Result<i32, CliError> {
    let report = config.model.check_conditions();
    let lines: Vec<CheckLine> = report
        .conditions
        .iter()
        .enumerate()
        .map(|(i, c)| CheckLine {
            index: i + 1,
            label: ConditionReport::LABELS[i],
            satisfied: c.satisfied,
            margin: c.margin,
        })
        .collect();
    let mut human = String::new();
    for line in &lines {
        human.push_str(&format!(
            "condition ({}) {}: {} (margin {})\n",
            line.index,
            line.label,
            if line.satisfied { "PASS" } else { "FAIL" },
            sig6(line.margin)
        ));
    }
    human.push_str(if report.all_satisfied() {
        "all conditions satisfied"
    } else {
        "model infeasible"
    });
    let summary = CheckSummary {
        command: "check",
        all_satisfied: report.all_satisfied(),
        conditions: lines,
    };
    print_summary(opts, &summary, &human);
    Ok(if report.all_satisfied() { 0 } else { 2 })
}

// ---------------------------------------------------------------------------
// solve

#[derive(Serialize)]
struct SolveSummary {
    command: &'static str,
    x_star: f64,
    contraction_modulus: f64,
    converged: bool,
    iterations_to_tolerance: Option<usize>,
    days_to_001: Option<usize>,
    final_iterate: f64,
    final_gap_to_oracle: f64,
    tolerance: f64,
    x0: f64,
}

/// Solves for the equilibrium share, runs the day-by-day iteration, and
/// emits trace.csv, cobweb.csv, curves.csv, and cobweb.svg.
pub fn cmd_solve(config: &RunConfig, opts: &CommonOpts) -> Result<i32, CliError> {
    let params = &config.model;
    let solve = config.solve.as_ref().ok_or_else(|| CliError {
        exit_code: 1,
        message: "config has no [solve] section".to_string(),
    })?;
    let x_star = equilibrium::solve_oracle(params, solve.tolerance)?;
    let trace = equilibrium::iterate(solve.x0, params, solve.tolerance, solve.max_iter)?;
    // Coarse day counting mirrors the experiment's narrative: tolerance 0.01.
    let days_to_001 = equilibrium::iterate(solve.x0, params, 0.01, solve.max_iter)?
        .iterations_to_tolerance;

    opts.ensure_out_dir()?;
    write_trace_csv(&opts.path("trace.csv"), &trace)?;
    write_cobweb_csv(&opts.path("cobweb.csv"), &trace)?;
    write_curves_csv(&opts.path("curves.csv"), params)?;
    output::write_file(
        &opts.path("cobweb.svg"),
        cobweb_svg(params, &trace, x_star).as_bytes(),
    )?;

    let summary = SolveSummary {
        command: "solve",
        x_star,
        contraction_modulus: trace.contraction_modulus,
        converged: trace.converged,
        iterations_to_tolerance: trace.iterations_to_tolerance,
        days_to_001,
        final_iterate: trace.last(),
        final_gap_to_oracle: (trace.last() - x_star).abs(),
        tolerance: trace.tolerance,
        x0: solve.x0,
    };
    let human = format!(
        "x_star={} q={} converged={} iterations={} days_to_0.01={} |final-x_star|={}",
        sig6(x_star),
        sig6(summary.contraction_modulus),
        summary.converged,
        opt_count(summary.iterations_to_tolerance),
        opt_count(days_to_001),
        sig6(summary.final_gap_to_oracle),
    );
    print_summary(opts, &summary, &human);
    Ok(0)
}

fn opt_count(v: Option<usize>) -> String {
    v.map(|k| k.to_string()).unwrap_or_else(|| "none".to_string())
}

fn write_trace_csv(path: &Path, trace: &ConvergenceTrace) -> Result<(), CliError> {
    let rows = trace.iterates.iter().enumerate().map(|(k, x)| {
        let residual = if k == 0 {
            String::new()
        } else {
            sig6(trace.residuals[k - 1])
        };
        vec![k.to_string(), sig6(*x), residual]
    });
    output::write_csv(path, &output::no_seed_comment(), &["k", "x", "residual"], rows)
}

fn write_cobweb_csv(path: &Path, trace: &ConvergenceTrace) -> Result<(), CliError> {
    let rows = equilibrium::cobweb_points(trace)
        .into_iter()
        .map(|(px, py)| vec![sig6(px), sig6(py)]);
    output::write_csv(path, &output::no_seed_comment(), &["px", "py"], rows)
}

/// Both curves of the intersection picture on the (p, x) plane: the demand
/// curve x(p) sampled over p in [1, p_max] and the indifference curve p(x)
/// sampled over x in [0, 1].
fn write_curves_csv(path: &Path, params: &ModelParams) -> Result<(), CliError> {
    let samples = 200;
    let mut rows = Vec::with_capacity(2 * (samples + 1));
    for i in 0..=samples {
        let p = 1.0 + (params.p_max - 1.0) * i as f64 / samples as f64;
        rows.push(vec![
            "demand".to_string(),
            sig6(p),
            sig6(params.demand_share_raw(p)),
        ]);
    }
    for i in 0..=samples {
        let x = i as f64 / samples as f64;
        rows.push(vec![
            "indifference".to_string(),
            sig6(params.indifference_vot_raw(x)),
            sig6(x),
        ]);
    }
    output::write_csv(path, &output::no_seed_comment(), &["curve", "p", "x"], rows)
}

// ---------------------------------------------------------------------------
// simulate

#[derive(Serialize)]
struct SimulateSummary {
    command: &'static str,
    n: usize,
    seed: u64,
    rng: &'static str,
    x0: f64,
    days_simulated: usize,
    stable_day: Option<usize>,
    final_car_share: f64,
    x_star: f64,
    final_gap: f64,
}

/// Samples a population, runs the day-by-day dynamics, and emits days.csv.
pub fn cmd_simulate(config: &RunConfig, opts: &CommonOpts) -> Result<i32, CliError> {
    let params = &config.model;
    let sim = config.simulate.as_ref().ok_or_else(|| CliError {
        exit_code: 1,
        message: "config has no [simulate] section".to_string(),
    })?;
    let seed = opts.seed_override.unwrap_or(sim.seed);
    let pop = population::sample_population(sim.n, params, seed)?;
    let x0 = match sim.x0 {
        Some(x0) => x0,
        None => {
            // Auxiliary draws live on stream 1 so the population stream
            // stays untouched.
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            rng.set_stream(1);
            rng.gen::<f64>()
        }
    };
    let trace = population::run_days(&pop, x0, params, sim.max_days)?;
    let x_star = equilibrium::solve_oracle(params, 1e-9)?;

    opts.ensure_out_dir()?;
    let rows = trace.records.iter().map(|r| {
        vec![
            r.day.to_string(),
            sig6(r.car_share),
            sig6(r.threshold_vot),
        ]
    });
    output::write_csv(
        &opts.path("days.csv"),
        &output::seed_comment(seed),
        &["day", "car_share", "threshold_vot"],
        rows,
    )?;

    let summary = SimulateSummary {
        command: "simulate",
        n: sim.n,
        seed,
        rng: RNG_ALGORITHM,
        x0,
        days_simulated: trace.records.len(),
        stable_day: trace.stable_day,
        final_car_share: trace.final_share(),
        x_star,
        final_gap: (trace.final_share() - x_star).abs(),
    };
    let human = format!(
        "n={} seed={} x0={} days_to_stability={} final_share={} |final-x_star|={}",
        sim.n,
        seed,
        sig6(x0),
        opt_count(trace.stable_day),
        sig6(summary.final_car_share),
        sig6(summary.final_gap),
    );
    print_summary(opts, &summary, &human);
    Ok(0)
}

// ---------------------------------------------------------------------------
// yule

#[derive(Serialize)]
struct YuleSummary {
    command: &'static str,
    alpha: f64,
    steps: usize,
    seed: u64,
    rng: &'static str,
    s_min: u64,
    estimated_exponent: f64,
    theoretical_exponent: f64,
    difference: f64,
    tail_size: usize,
    total_residents: u64,
    total_coins: u64,
}

/// Runs the wealth process and emits yule_hist.csv and yule_ccdf.csv plus an
/// exponent report.
pub fn cmd_yule(config: &RunConfig, opts: &CommonOpts) -> Result<i32, CliError> {
    let block = config.yule.as_ref().ok_or_else(|| CliError {
        exit_code: 1,
        message: "config has no [yule] section".to_string(),
    })?;
    let seed = opts.seed_override.unwrap_or(block.seed);
    let params = YuleParams::new(block.alpha, block.steps, seed)?;
    let hist = yule::run_yule(&params);

    opts.ensure_out_dir()?;
    let hist_rows = hist
        .counts()
        .iter()
        .map(|(&s, &n)| vec![s.to_string(), n.to_string()]);
    output::write_csv(
        &opts.path("yule_hist.csv"),
        &output::seed_comment(seed),
        &["s", "count"],
        hist_rows,
    )?;
    let ccdf_rows = yule::ccdf(&hist)
        .into_iter()
        .map(|(s, frac)| vec![s.to_string(), sig6(frac)]);
    output::write_csv(
        &opts.path("yule_ccdf.csv"),
        &output::seed_comment(seed),
        &["s", "ccdf"],
        ccdf_rows,
    )?;

    // Files are useful even if the fit cannot run; estimate last.
    let estimate = yule::estimate_exponent(&hist, block.s_min)?;
    let theoretical = yule::theoretical_exponent(block.alpha)?;
    let summary = YuleSummary {
        command: "yule",
        alpha: block.alpha,
        steps: block.steps,
        seed,
        rng: RNG_ALGORITHM,
        s_min: block.s_min,
        estimated_exponent: estimate.exponent,
        theoretical_exponent: theoretical,
        difference: estimate.exponent - theoretical,
        tail_size: estimate.tail_size,
        total_residents: hist.total_residents(),
        total_coins: hist.total_coins(),
    };
    let human = format!(
        "alpha={} steps={} seed={} estimated={} theoretical={} difference={} tail_size={}",
        sig6(block.alpha),
        block.steps,
        seed,
        sig6(estimate.exponent),
        sig6(theoretical),
        sig6(summary.difference),
        estimate.tail_size,
    );
    print_summary(opts, &summary, &human);
    Ok(0)
}

// ---------------------------------------------------------------------------
// sweep

#[derive(Serialize)]
struct SweepSummary {
    command: &'static str,
    parameter: String,
    points: usize,
    feasible_points: usize,
}

/// Re-checks conditions and re-solves across a one-parameter grid, emitting
/// sweep.csv in grid order.
pub fn cmd_sweep(config: &RunConfig, opts: &CommonOpts) -> Result<i32, CliError> {
    let sweep = config.sweep.as_ref().ok_or_else(|| CliError {
        exit_code: 1,
        message: "config has no [sweep] section".to_string(),
    })?;
    if !ModelParams::FIELD_NAMES.contains(&sweep.parameter.as_str()) {
        return Err(CliError {
            exit_code: 1,
            message: format!(
                "unknown sweep parameter `{}`; expected one of {}",
                sweep.parameter,
                ModelParams::FIELD_NAMES.join(", ")
            ),
        });
    }
    let solve = config.solve.unwrap_or_default();

    let mut rows = Vec::with_capacity(sweep.values.len());
    let mut feasible_points = 0;
    for &value in &sweep.values {
        let empty = || {
            vec![
                sweep.parameter.clone(),
                sig6(value),
                "false".to_string(),
                String::new(),
                String::new(),
                String::new(),
            ]
        };
        let Ok(point) = config.model.with_field(&sweep.parameter, value) else {
            rows.push(empty());
            continue;
        };
        if !point.check_conditions().all_satisfied() {
            rows.push(empty());
            continue;
        }
        feasible_points += 1;
        let x_star = equilibrium::solve_oracle(&point, solve.tolerance)?;
        let q = equilibrium::contraction_modulus(&point)?;
        let days = equilibrium::iterate(solve.x0, &point, 0.01, solve.max_iter)?
            .iterations_to_tolerance;
        rows.push(vec![
            sweep.parameter.clone(),
            sig6(value),
            "true".to_string(),
            sig6(x_star),
            sig6(q),
            days.map(|d| d.to_string()).unwrap_or_default(),
        ]);
    }

    opts.ensure_out_dir()?;
    output::write_csv(
        &opts.path("sweep.csv"),
        &output::no_seed_comment(),
        &["param_name", "param_value", "feasible", "x_star", "q", "days_to_001"],
        rows,
    )?;
    let summary = SweepSummary {
        command: "sweep",
        parameter: sweep.parameter.clone(),
        points: sweep.values.len(),
        feasible_points,
    };
    let human = format!(
        "parameter={} points={} feasible={} -> sweep.csv",
        summary.parameter, summary.points, summary.feasible_points
    );
    print_summary(opts, &summary, &human);
    Ok(0)
}

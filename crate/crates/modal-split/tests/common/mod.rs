//! Shared helpers for the integration suites.

use modal_split::ModelParams;
use rand::Rng;

/// Draws a parameter set satisfying conditions (1)-(5) by construction.
///
/// With spread = a - b1, condition (5) is controlled directly through the
/// contraction modulus q = 4*gamma/spread drawn below `q_cap`, and b2 is
/// placed strictly inside the interval (T0 + gamma + spread/p_max,
/// T0 + spread) that conditions (2)-(4) carve out. eta = 1.
pub fn feasible_params(rng: &mut impl Rng, q_cap: f64) -> ModelParams {
    let spread = rng.gen_range(5.0..50.0);
    let b1 = rng.gen_range(10.0..100.0);
    let a = b1 + spread;
    let q: f64 = rng.gen_range(0.0..q_cap);
    let gamma = q * spread / 4.0;
    let t0 = rng.gen_range(20.0..100.0);
    let p_max = 10.0;
    let lo = t0 + gamma + spread / p_max;
    let hi = t0 + spread;
    let b2 = lo + rng.gen_range(0.05..0.95) * (hi - lo);
    let params = ModelParams::new(a, b1, b2, t0, gamma, 1.0, p_max).unwrap();
    assert!(
        params.check_conditions().all_satisfied(),
        "generator must produce feasible instances: {params:?}"
    );
    params
}

/// Median of an even- or odd-length sample.
pub fn median(mut values: Vec<usize>) -> f64 {
    assert!(!values.is_empty());
    values.sort_unstable();
    let n = values.len();
    if n % 2 == 0 {
        (values[n / 2 - 1] + values[n / 2]) as f64 / 2.0
    } else {
        values[n / 2] as f64
    }
}

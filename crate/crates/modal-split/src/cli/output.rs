//! CSV, SVG, and number formatting for emitted files.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::equilibrium::ConvergenceTrace;
use crate::model::ModelParams;

use super::CliError;

/// Formats with six significant digits in plain decimal notation.
pub fn sig6(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).clamp(0, 17) as usize;
    format!("{x:.decimals$}")
}

/// Seed header for files produced from a seeded generator.
pub fn seed_comment(seed: u64) -> String {
    format!("# seed={seed} rng=ChaCha12")
}

/// Seed header for fully deterministic outputs.
pub fn no_seed_comment() -> String {
    "# seed=none rng=none".to_string()
}

/// Writes one CSV file: a `#` comment line, a header row, then the records.
/// Unix line endings; fields never need quoting (plain numbers and bare
/// words only), so the output stays RFC-4180 clean.
pub fn write_csv(
    path: &Path,
    comment: &str,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<(), CliError> {
    let mut buf = String::new();
    buf.push_str(comment);
    buf.push('\n');
    buf.push_str(&header.join(","));
    buf.push('\n');
    for row in rows {
        buf.push_str(&row.join(","));
        buf.push('\n');
    }
    write_file(path, buf.as_bytes())
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let mut file = fs::File::create(path).map_err(|e| CliError {
        exit_code: 1,
        message: format!("cannot write {}: {e}", path.display()),
    })?;
    file.write_all(bytes).map_err(|e| CliError {
        exit_code: 1,
        message: format!("cannot write {}: {e}", path.display()),
    })?;
    Ok(())
}

const SVG_SIZE: f64 = 560.0;
const SVG_MARGIN: f64 = 40.0;

fn svg_x(x: f64) -> String {
    sig6(SVG_MARGIN + (SVG_SIZE - 2.0 * SVG_MARGIN) * x)
}

fn svg_y(y: f64) -> String {
    sig6(SVG_MARGIN + (SVG_SIZE - 2.0 * SVG_MARGIN) * (1.0 - y))
}

fn polyline(points: &[(f64, f64)], style: &str) -> String {
    let coords: Vec<String> = points
        .iter()
        .map(|(x, y)| format!("{},{}", svg_x(*x), svg_y(*y)))
        .collect();
    format!(
        "  <polyline fill=\"none\" {} points=\"{}\"/>\n",
        style,
        coords.join(" ")
    )
}

/// Self-contained vector image of the staircase together with the curves
/// y = Phi(x) and y = x over the unit square.
pub fn cobweb_svg(params: &ModelParams, trace: &ConvergenceTrace, x_star: f64) -> String {
    let staircase = crate::equilibrium::cobweb_points(trace);
    let samples = 256;
    let curve: Vec<(f64, f64)> = (0..=samples)
        .map(|i| {
            let x = i as f64 / samples as f64;
            let y = params.demand_share_raw(params.indifference_vot_raw(x));
            (x, y)
        })
        .collect();
    let diagonal = [(0.0, 0.0), (1.0, 1.0)];

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{s}\" height=\"{s}\" viewBox=\"0 0 {s} {s}\">\n",
        s = SVG_SIZE
    ));
    svg.push_str("  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "  <rect x=\"{m}\" y=\"{m}\" width=\"{w}\" height=\"{w}\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n",
        m = SVG_MARGIN,
        w = SVG_SIZE - 2.0 * SVG_MARGIN
    ));
    svg.push_str(&polyline(&diagonal, "stroke=\"#999999\" stroke-width=\"1\""));
    svg.push_str(&polyline(&curve, "stroke=\"#1f77b4\" stroke-width=\"1.5\""));
    svg.push_str(&polyline(
        &staircase,
        "stroke=\"#d62728\" stroke-width=\"1.2\"",
    ));
    svg.push_str(&format!(
        "  <circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"#d62728\"/>\n",
        svg_x(x_star),
        svg_y(x_star)
    ));
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"{}\" font-size=\"12\" font-family=\"sans-serif\">x_k</text>\n",
        svg_x(0.93),
        sig6(SVG_SIZE - SVG_MARGIN + 24.0)
    ));
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"{}\" font-size=\"12\" font-family=\"sans-serif\">Phi(x)</text>\n",
        sig6(4.0),
        svg_y(0.97)
    ));
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig6_spans_magnitudes() {
        assert_eq!(sig6(0.3), "0.300000");
        assert_eq!(sig6(70.125), "70.1250");
        assert_eq!(sig6(800.0), "800.000");
        assert_eq!(sig6(0.0), "0");
        assert_eq!(sig6(-2.0513), "-2.05130");
        assert_eq!(sig6(1e-7), "0.000000100000");
    }

    #[test]
    fn svg_is_self_contained() {
        let params = ModelParams::reference();
        let trace = crate::equilibrium::iterate(1.0, &params, 1e-6, 50).unwrap();
        let svg = cobweb_svg(&params, &trace, 0.4886014645727963);
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        assert!(svg.contains("polyline"));
        assert!(!svg.contains("http://")  || svg.contains("http://www.w3.org/2000/svg"));
    }
}

//! The report-producing commands behind each subcommand.

use std::f64::consts::TAU;

use serde_json::json;

use super::descriptor::{FunctionDescriptor, RealData};
use super::{num, probe_points, Csv};
use crate::a_integral::{herglotz_a_integral, TruncationLadder};
use crate::boundary::{default_thresholds, weak_decay_test};
use crate::disk::C64;
use crate::error::{Error, Result};
use crate::factorization::{
    boundary_values, helson_decompose, koebe_boundary_check, koebe_factor, sum_of_squares, RealSmirnovFn,
};
use crate::hp::membership_trend;
use crate::products::{partial_product_trace, unilateral_verdict, GeneratorSpec, InnerSequence};

/// Where `eval` samples the function.
#[derive(Debug, Clone, PartialEq)]
pub enum EvalTarget {
    Points(Vec<C64>),
    /// The origin plus `n` rings of radius `r·k/n`, each with `n` angles.
    Image { radius: f64, n: usize },
}

impl EvalTarget {
    pub fn points(&self) -> Vec<C64> {
        match *self {
            EvalTarget::Points(ref p) => p.clone(),
            EvalTarget::Image { radius, n } => {
                let mut pts = vec![C64::new(0.0, 0.0)];
                for k in 1..=n {
                    let r = radius * k as f64 / n as f64;
                    pts.extend((0..n).map(|j| C64::from_polar(r, TAU * j as f64 / n as f64)));
                }
                pts
            }
        }
    }
}

fn pole_like(e: &Error) -> bool {
    matches!(
        e,
        Error::PoleProximity { .. } | Error::AtAtom { .. } | Error::AtArcEndpoint { .. }
    )
}

/// Columns `x, y, re, im, flag`; failed points are `NaN` rows flagged
/// `pole` or `error`.
pub fn cmd_eval(desc: &FunctionDescriptor, target: &EvalTarget, grid_n: usize, seed: u64) -> Result<String> {
    let f = desc.expr(grid_n)?;
    let mut csv = Csv::new(seed, &[("kind", f.kind().to_string())], &["x", "y", "re", "im", "flag"]);
    for z in target.points() {
        let (v, flag) = match f.value(z) {
            Ok(v) => (v, "ok"),
            Err(e) if pole_like(&e) => (C64::new(f64::NAN, f64::NAN), "pole"),
            Err(_) => (C64::new(f64::NAN, f64::NAN), "error"),
        };
        csv.row(&[num(z.re), num(z.im), num(v.re), num(v.im), flag.into()]);
    }
    Ok(csv.finish())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorMode {
    Helson,
    Koebe,
    Squares,
}

impl std::str::FromStr for FactorMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "helson" => Ok(FactorMode::Helson),
            "koebe" => Ok(FactorMode::Koebe),
            "squares" => Ok(FactorMode::Squares),
            _ => Err(format!("unknown factor mode {s:?} (helson, koebe, squares)")),
        }
    }
}

/// Number of seeded interior probes used for factorization residuals.
const FACTOR_PROBES: usize = 64;
const FACTOR_PROBE_RADIUS: f64 = 0.9;

/// Largest `|g(z) - f(z)| / max(1, |f(z)|)` over the probes where both
/// sides evaluate.
fn max_residual(f: &RealSmirnovFn, g: impl Fn(C64) -> Result<C64>, probes: &[C64]) -> f64 {
    probes
        .iter()
        .filter_map(|&z| Some((f.eval(z).ok()?, g(z).ok()?)))
        .map(|(a, b)| (a - b).norm() / a.norm().max(1.0))
        .fold(0.0, f64::max)
}

/// The requested factorization as JSON, with residuals at seeded probes.
pub fn cmd_factor(desc: &FunctionDescriptor, mode: FactorMode, grid_n: usize, seed: u64) -> Result<String> {
    let f = desc.real_smirnov(grid_n)?;
    let probes = probe_points(seed, FACTOR_PROBES, FACTOR_PROBE_RADIUS);
    let report = match mode {
        FactorMode::Helson => {
            let pair = helson_decompose(&f)?;
            let rec = pair.reconstruct();
            json!({
                "mode": "helson",
                "psi1": pair.psi1,
                "psi2": pair.psi2,
                "merged": pair.merged,
                "difference_winding": pair.difference_winding()?,
                "residual": max_residual(&f, |z| rec.value(z), &probes),
            })
        }
        FactorMode::Koebe => {
            let kf = koebe_factor(&f);
            let product = |z: C64| Ok(kf.k_part.value(z)? * kf.r_part.eval(z)?);
            json!({
                "mode": "koebe",
                "residual": max_residual(&f, product, &probes),
                "boundary": koebe_boundary_check(&f, &kf, grid_n),
            })
        }
        FactorMode::Squares => {
            let sq = sum_of_squares(&f, grid_n)?;
            let squares = |z: C64| Ok(sq.g1.eval(z)?.powi(2) + sq.g2.eval(z)?.powi(2));
            let imag = |g: &RealSmirnovFn| {
                boundary_values(g.expr(), grid_n)
                    .iter()
                    .map(|(_, v)| v.im.abs() / v.norm().max(1.0))
                    .fold(0.0, f64::max)
            };
            json!({
                "mode": "squares",
                "residual": max_residual(&f, squares, &probes),
                "g1_boundary_imag": imag(&sq.g1),
                "g2_boundary_imag": imag(&sq.g2),
            })
        }
    };
    let mut out = serde_json::to_value(report).map_err(|e| Error::Schema(e.to_string()))?;
    out["seed"] = json!(seed);
    out["version"] = json!(super::VERSION);
    Ok(serde_json::to_string_pretty(&out).expect("serializable") + "\n")
}

fn kebab<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

/// The convergence verdict (as comments) and the partial-product trace
/// at each point.
pub fn cmd_product(spec: &GeneratorSpec, truncation: usize, points: &[C64], seed: u64) -> Result<String> {
    let seq = InnerSequence::family(*spec).map_err(|e| Error::Schema(e.to_string()))?;
    let verdict = unilateral_verdict(&seq, truncation);
    let mut csv = Csv::new(
        seed,
        &[
            ("verdict", verdict.status.to_string()),
            ("failing", kebab(&verdict.failing)),
            ("tail_estimate", num(verdict.tail_estimate)),
            ("truncation", truncation.to_string()),
        ],
        &[
            "z_re", "z_im", "n", "re", "im", "unwrapped_arg", "tail_bound", "theta_sum", "powers_sum", "blaschke_sum",
            "singular_mass_sum", "phi0_sum",
        ],
    );
    for &z in points {
        for row in partial_product_trace(&seq, z, truncation)? {
            csv.row(&[
                num(z.re),
                num(z.im),
                row.n.to_string(),
                num(row.value.re),
                num(row.value.im),
                num(row.unwrapped_arg),
                row.tail_bound.map_or("NaN".into(), num),
                num(row.sums.theta),
                num(row.sums.powers),
                num(row.sums.blaschke),
                num(row.sums.singular_mass),
                num(row.sums.phi0),
            ]);
        }
    }
    Ok(csv.finish())
}

/// Herglotz A-integral traces of `i·H[v_A]` at each point.
pub fn cmd_aintegral(
    v: &RealData,
    points: &[C64],
    ladder: &TruncationLadder,
    grid_n: usize,
    seed: u64,
) -> Result<String> {
    let grid = v.grid(grid_n).map_err(|e| Error::Schema(e.to_string()))?;
    let membership = weak_decay_test(&grid.distribution(&default_thresholds())?);
    let mut csv = Csv::new(
        seed,
        &[("weak_decay", kebab(&membership)), ("grid_n", grid.n().to_string())],
        &["z_re", "z_im", "a", "re", "im", "increment", "error_bar", "increasing_trend"],
    );
    for &z in points {
        let r = herglotz_a_integral(&grid, z, ladder)?;
        for rung in &r.trace {
            csv.row(&[
                num(z.re),
                num(z.im),
                num(rung.a),
                num(rung.value.re),
                num(rung.value.im),
                num(rung.increment),
                num(r.error_bar),
                r.increasing_trend.to_string(),
            ]);
        }
    }
    Ok(csv.finish())
}

/// Radial means and the trend verdict for each exponent.
pub fn cmd_hp(desc: &FunctionDescriptor, exponents: &[f64], grid_n: usize, seed: u64) -> Result<String> {
    let f = desc.expr(grid_n)?;
    let mut csv = Csv::new(seed, &[], &["p", "r", "n", "mean", "verdict", "ratio"]);
    for &p in exponents {
        let t = membership_trend(&f, p)?;
        for row in &t.rows {
            csv.row(&[num(p), num(row.r), row.n.to_string(), num(row.mean), t.verdict.to_string(), num(t.ratio)]);
        }
    }
    Ok(csv.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn desc(s: &str) -> FunctionDescriptor {
        FunctionDescriptor::parse(s, 256).unwrap()
    }

    #[test]
    fn eval_constant_and_poles() {
        let c = desc(r#"{"kind":"expr","op":"constant","value":[2,-1]}"#);
        let out = cmd_eval(&c, &EvalTarget::Image { radius: 0.5, n: 4 }, 256, 1).unwrap();
        let rows: Vec<&str> = out.lines().skip(3).collect();
        assert_eq!(rows.len(), 17);
        assert!(rows.iter().all(|r| r.ends_with("2.0000000000000000e0,-1.0000000000000000e0,ok")));
        let h = desc(r#"{"kind":"named-example","name":"halfplane"}"#);
        let out = cmd_eval(&h, &EvalTarget::Points(vec![C64::new(1.0, 0.0)]), 256, 1).unwrap();
        assert!(out.lines().last().unwrap().ends_with("NaN,NaN,pole"));
    }

    #[test]
    fn deterministic_reports() {
        let j = desc(r#"{"kind":"named-example","name":"javad"}"#);
        let a = cmd_factor(&j, FactorMode::Helson, 256, 5).unwrap();
        assert_eq!(a, cmd_factor(&j, FactorMode::Helson, 256, 5).unwrap());
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert!(v["residual"].as_f64().unwrap() < 1e-9);
        let k = cmd_factor(&j, FactorMode::Koebe, 256, 5).unwrap();
        let v: serde_json::Value = serde_json::from_str(&k).unwrap();
        assert!(v["residual"].as_f64().unwrap() < 1e-9);
        assert_eq!(v["boundary"]["sign_mismatches"], 0);
    }

    #[test]
    fn product_and_aintegral_reports() {
        let spec: GeneratorSpec = serde_json::from_str(r#"{"family":"geometric-arcs","first":0.5,"ratio":0.5}"#).unwrap();
        let out = cmd_product(&spec, 16, &[C64::new(0.0, 0.0)], 1).unwrap();
        assert!(out.contains("# verdict=converges"));
        assert_eq!(out.lines().count(), 6 + 16);
        let v: RealData = serde_json::from_str(r#"{"form":"step","pieces":[{"arcs":[[0,1]],"weight":3.14}]}"#).unwrap();
        let out = cmd_aintegral(&v, &[C64::new(0.1, 0.0)], &TruncationLadder::default(), 256, 1).unwrap();
        assert!(out.contains("# weak_decay=member"));
    }
}

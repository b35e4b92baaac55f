//! Radial H^p means `∫ |e(rζ)|^p dm(ζ)` and a trend test for whether they
//! stay bounded as `r → 1`.

use std::f64::consts::TAU;

use serde::Serialize;

use crate::disk::{CompensatedSum, C64};
use crate::error::{Error, Result};
use crate::expr::FunctionExpr;

/// Radii `1 - 10^{-k}`, `k = 1..=5`, used by [`membership_trend`].
pub const TREND_RADII: [f64; 5] = [0.9, 0.99, 0.999, 0.9999, 0.99999];

/// Ratio of the last two mean increments below which means are bounded.
pub const BOUNDED_RATIO: f64 = 0.9;
/// Ratio at or above which monotone means are divergent.
pub const DIVERGENT_RATIO: f64 = 0.97;

/// Circle size resolving the scale `1 - r`: at least 4096 and 16 points
/// per `1 - r` of arc length.
pub fn circle_points(r: f64) -> usize {
    let need = (16.0 / (1.0 - r)).ceil().min(2f64.powi(40)) as usize;
    need.max(4096).next_power_of_two()
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 0.0 && p <= 4.0) {
        return Err(Error::InvalidParameter(format!("p = {p} outside (0, 4]")));
    }
    Ok(())
}

/// Mean of `|e(rζ)|^p` over `n` equally spaced midpoints of the circle.
pub fn hp_mean_n(e: &FunctionExpr, p: f64, r: f64, n: usize) -> Result<f64> {
    check_p(p)?;
    if !(r > 0.0 && r < 1.0) || n == 0 {
        return Err(Error::InvalidParameter(format!("radius {r} outside (0, 1)")));
    }
    let mut acc = CompensatedSum::default();
    for j in 0..n {
        let z = C64::from_polar(r, TAU * (j as f64 + 0.5) / n as f64);
        acc.add(C64::new(e.value(z)?.norm().powf(p), 0.0));
    }
    Ok(acc.value().re / n as f64)
}

/// [`hp_mean_n`] on [`circle_points`]`(r)` points.
pub fn hp_mean(e: &FunctionExpr, p: f64, r: f64) -> Result<f64> {
    hp_mean_n(e, p, r, circle_points(r))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrendVerdict {
    Bounded,
    Divergent,
    Inconclusive,
}

impl std::fmt::Display for TrendVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TrendVerdict::Bounded => "bounded",
            TrendVerdict::Divergent => "divergent",
            TrendVerdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HpRow {
    pub p: f64,
    pub r: f64,
    pub n: usize,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HpTrend {
    pub p: f64,
    pub verdict: TrendVerdict,
    /// Last mean increment over the one before it.
    pub ratio: f64,
    pub rows: Vec<HpRow>,
}

/// Classifies means taken at [`TREND_RADII`] by how their increments
/// shrink: geometrically shrinking increments mean a finite limit, constant
/// or growing ones mean logarithmic or power growth.
pub fn classify(means: &[f64]) -> (TrendVerdict, f64) {
    let k = means.len();
    assert!(k >= 3, "need at least three radii");
    let last = means[k - 1] - means[k - 2];
    let prev = means[k - 2] - means[k - 3];
    let scale = means.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE);
    if last.abs() <= 1e-12 * scale {
        return (TrendVerdict::Bounded, 0.0);
    }
    let ratio = if prev.abs() <= 1e-12 * scale { f64::INFINITY } else { last / prev };
    let monotone = means.windows(2).all(|w| w[1] >= w[0] - 1e-10 * scale);
    let verdict = if ratio.abs() < BOUNDED_RATIO && monotone {
        TrendVerdict::Bounded
    } else if ratio >= DIVERGENT_RATIO && monotone {
        TrendVerdict::Divergent
    } else {
        TrendVerdict::Inconclusive
    };
    (verdict, ratio)
}

/// Means at [`TREND_RADII`], computed in parallel, and their verdict.
pub fn membership_trend(e: &FunctionExpr, p: f64) -> Result<HpTrend> {
    check_p(p)?;
    let means: Vec<Result<f64>> = std::thread::scope(|s| {
        let handles: Vec<_> = TREND_RADII
            .iter()
            .map(|&r| s.spawn(move || hp_mean(e, p, r)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("hp worker panicked")).collect()
    });
    let means = means.into_iter().collect::<Result<Vec<f64>>>()?;
    let (verdict, ratio) = classify(&means);
    let rows = TREND_RADII
        .iter()
        .zip(&means)
        .map(|(&r, &mean)| HpRow { p, r, n: circle_points(r), mean })
        .collect();
    Ok(HpTrend { p, verdict, ratio, rows })
}

//! Truncated A-integrals `∫_{|h|≤A} h dm`, the Herglotz A-integral with
//! clamped truncations `v_A`, and the distribution-function bound on
//! truncated integrals of analytic boundary functions.

use serde::Serialize;

use crate::boundary::{default_thresholds, weak_decay_test, BoundaryGrid, DistributionStats, ExactForm, WeakDecayVerdict};
use crate::disk::{C64, I};
use crate::error::{Error, Result};

/// Increasing truncation levels `A`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncationLadder(Vec<f64>);

impl Default for TruncationLadder {
    /// `2^k`, `k = 0..=14`.
    fn default() -> Self {
        TruncationLadder((0..=14).map(|k| 2f64.powi(k)).collect())
    }
}

impl TruncationLadder {
    pub fn new(levels: Vec<f64>) -> Result<Self> {
        if levels.is_empty()
            || levels.iter().any(|&a| !(a > 0.0) || !a.is_finite())
            || levels.windows(2).any(|w| w[1] <= w[0])
        {
            return Err(Error::InvalidParameter("ladder levels must be positive and strictly increasing".into()));
        }
        Ok(TruncationLadder(levels))
    }

    pub fn levels(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rung {
    pub a: f64,
    pub value: C64,
    /// `|value - previous value|` (0 on the first rung).
    pub increment: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AIntegral {
    /// Value on the last rung.
    pub estimate: C64,
    /// Largest of the last three increments.
    pub error_bar: f64,
    pub trace: Vec<Rung>,
    pub membership: WeakDecayVerdict,
}

fn build_trace(ladder: &TruncationLadder, mut f: impl FnMut(f64) -> Result<C64>) -> Result<Vec<Rung>> {
    let mut trace: Vec<Rung> = Vec::with_capacity(ladder.levels().len());
    for &a in ladder.levels() {
        let value = f(a)?;
        let increment = trace.last().map_or(0.0, |p| (value - p.value).norm());
        trace.push(Rung { a, value, increment });
    }
    Ok(trace)
}

fn error_bar(trace: &[Rung]) -> f64 {
    trace
        .iter()
        .skip(1)
        .rev()
        .take(3)
        .map(|r| r.increment)
        .fold(0.0, f64::max)
}

/// `lim_A ∫_{|h|≤A} h dm` estimated along the ladder. Grids failing the
/// weak decay test are rejected.
pub fn a_integral(h: &BoundaryGrid, ladder: &TruncationLadder) -> Result<AIntegral> {
    let membership = weak_decay_test(&h.distribution(&default_thresholds())?);
    if membership == WeakDecayVerdict::NonMember {
        return Err(Error::NonMember);
    }
    let n = h.n() as f64;
    let trace = build_trace(ladder, |a| {
        Ok(h.values().iter().filter(|v| v.norm() <= a).sum::<C64>() / n)
    })?;
    Ok(AIntegral {
        estimate: trace.last().expect("nonempty ladder").value,
        error_bar: error_bar(&trace),
        trace,
        membership,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HerglotzAIntegral {
    /// `i ∫ (ζ+z)/(ζ-z) v_A dm + i v(0)` on the last rung.
    pub value: C64,
    /// Largest of the last three increments.
    pub error_bar: f64,
    pub trace: Vec<Rung>,
    /// Set when the last increments fail to decrease.
    pub increasing_trend: bool,
}

/// The clamp `v_A = max(-A, min(A, v))`, kept exact for step grids.
pub fn clamp(v: &BoundaryGrid, a: f64) -> Result<BoundaryGrid> {
    match v.exact() {
        Some(e) if e.is_pure_step() => BoundaryGrid::from_exact(v.n(), ExactForm::step(e.step.map(|l| l.clamp(-a, a)))),
        _ => BoundaryGrid::from_real(v.real_values().iter().map(|x| x.clamp(-a, a)).collect()),
    }
}

/// `h(z) = lim_A i ∫ (ζ+z)/(ζ-z) v_A dm` for real boundary data `v`, after
/// shifting `v` to mean zero; the mean is restored as `i v(0)`.
pub fn herglotz_a_integral(v: &BoundaryGrid, z: C64, ladder: &TruncationLadder) -> Result<HerglotzAIntegral> {
    if !v.is_real() {
        return Err(Error::NonReal {
            max_imag: v.values().iter().map(|x| x.im.abs()).fold(0.0, f64::max),
        });
    }
    let v0 = v.mean().re;
    let w = v.remove_mean();
    let trace = build_trace(ladder, |a| Ok(I * clamp(&w, a)?.herglotz(z)? + I * v0))?;
    let tail: Vec<f64> = trace.iter().skip(1).rev().take(3).map(|r| r.increment).collect();
    let increasing_trend = tail.windows(2).any(|p| p[0] > p[1] && p[0] > 1e-14);
    Ok(HerglotzAIntegral {
        value: trace.last().expect("nonempty ladder").value,
        error_bar: error_bar(&trace),
        trace,
        increasing_trend,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Hfs1Certificate {
    pub a: f64,
    /// `|∫_{|h|≤A} h dm|`.
    pub lhs: f64,
    /// `ρ(A) + 2√(σ(0) σ(A))`.
    pub rhs: f64,
    pub passes: bool,
    /// The grid mean removed before comparing.
    pub removed_mean: C64,
}

/// Compares `|∫_{|h|≤A} h dm|` with `ρ_h(A) + 2√(σ_h(0) σ_h(A))` for
/// boundary samples of an analytic function vanishing at 0.
pub fn hfs1_certificate(h: &BoundaryGrid, a: f64) -> Result<Hfs1Certificate> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::InvalidParameter(format!("A = {a} must be positive")));
    }
    let n = h.n() as f64;
    let mean = h.mean();
    let mean_abs = h.values().iter().map(|v| v.norm()).sum::<f64>() / n;
    if mean.norm() > 1e-2 * mean_abs.max(1.0) {
        return Err(Error::MeanNotZero(mean));
    }
    let vals: Vec<C64> = h.values().iter().map(|v| v - mean).collect();
    let lhs = (vals.iter().filter(|v| v.norm() <= a).sum::<C64>() / n).norm();
    let stats = DistributionStats::new(vals.iter().map(|v| v.norm()).collect());
    let rhs = a * stats.lambda(a) + 2.0 * (stats.sigma(0.0) * stats.sigma(a)).sqrt();
    Ok(Hfs1Certificate {
        a,
        lhs,
        rhs,
        passes: lhs <= rhs + 1e-8,
        removed_mean: mean,
    })
}

/// Certificates along a whole ladder.
pub fn hfs1_ladder(h: &BoundaryGrid, ladder: &TruncationLadder) -> Result<Vec<Hfs1Certificate>> {
    ladder.levels().iter().map(|&a| hfs1_certificate(h, a)).collect()
}

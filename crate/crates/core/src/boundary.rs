//! Uniform boundary grids on the circle: Fourier coefficients, harmonic
//! conjugation, Poisson / conjugate-Poisson / Herglotz extension, and
//! distribution functions.
//!
//! A grid holds `n` samples at `ζ_j = e^{2πij/n}`. Grids built from
//! piecewise-constant data (arc indicators, staircases) additionally carry an
//! exact description `s₁ + conj(s₂)` with `s₁`, `s₂` real step functions.
//! Conjugation, extension into the disk and Fourier coefficients are then
//! computed in closed form instead of from the samples; this is what makes
//! log-singular conjugates of indicator functions accurate at the grid
//! points.

use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use rustfft::FftPlanner;

use crate::arcset::ArcSet;
use crate::disk::{C64, I};
use crate::error::{Error, Result};

pub const DEFAULT_GRID_N: usize = 4096;

/// Largest radius at which kernel quadrature over a sampled grid of `n`
/// points is trusted.
pub fn r_max(n: usize) -> f64 {
    (1.0 - 4.0 / n as f64).min(0.999)
}

fn check_grid_size(n: usize) -> Result<()> {
    if n < 64 || !n.is_power_of_two() {
        return Err(Error::GridSize(n));
    }
    Ok(())
}

/// Grid angle `2πj/n`.
pub fn grid_theta(j: usize, n: usize) -> f64 {
    TAU * j as f64 / n as f64
}

/// `log|2 sin(x/2)|`, the kernel of conjugation against jumps.
fn log_chord(x: f64) -> f64 {
    (2.0 * (0.5 * x).sin()).abs().ln()
}

/// Circular distance between two angles.
fn circ_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Samples closer than this to a singularity take its regularized value.
const SINGULAR_TOL: f64 = 1e-12;

/// Herglotz integral of the indicator of the arc `[β, α)`:
/// `∫_β^α (e^{it} + z)/(e^{it} - z) dt/2π` for `|z| < 1`.
pub fn herglotz_arc(beta: f64, alpha: f64, z: C64) -> C64 {
    let len = alpha - beta;
    if len >= TAU {
        return C64::new(1.0, 0.0);
    }
    let ea = C64::from_polar(1.0, alpha);
    let eb = C64::from_polar(1.0, beta);
    let ratio = (ea - z) / (eb - z);
    let mut darg = ratio.arg();
    if darg < 0.0 {
        if len < 1e-6 && darg > -1e-9 {
            darg = 0.0;
        } else {
            darg += TAU;
        }
    }
    C64::new(-len / TAU + darg / PI, -ratio.norm().ln() / PI)
}

/// A real piecewise-constant function on the circle. `levels[k]` holds on
/// `[breaks[k], breaks[k+1])`, the last level wrapping around to
/// `breaks[0] + 2π`. With no breaks the function is the constant
/// `levels[0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    breaks: Vec<f64>,
    levels: Vec<f64>,
}

impl StepFunction {
    pub fn constant(c: f64) -> Self {
        StepFunction {
            breaks: Vec::new(),
            levels: vec![c],
        }
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn indicator(set: &ArcSet) -> Self {
        Self::weighted(0.0, &[(set.clone(), 1.0)])
    }

    /// `base + Σ weight·χ_E` over the given arc sets.
    pub fn weighted(base: f64, pieces: &[(ArcSet, f64)]) -> Self {
        let mut cuts: Vec<f64> = pieces
            .iter()
            .flat_map(|(set, _)| set.endpoints())
            .collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
        if cuts.is_empty() {
            let c = base
                + pieces
                    .iter()
                    .filter(|(set, _)| set.is_full())
                    .map(|(_, w)| w)
                    .sum::<f64>();
            return Self::constant(c);
        }
        let m = cuts.len();
        let levels: Vec<f64> = (0..m)
            .map(|k| {
                let lo = cuts[k];
                let hi = if k + 1 < m { cuts[k + 1] } else { cuts[0] + TAU };
                let mid = 0.5 * (lo + hi);
                base + pieces
                    .iter()
                    .filter(|(set, _)| set.contains(mid))
                    .map(|(_, w)| w)
                    .sum::<f64>()
            })
            .collect();
        Self::from_parts(cuts, levels)
    }

    /// Builds from sorted breaks in `[0, 2π)` and matching levels, merging
    /// equal neighbouring levels.
    pub fn from_parts(breaks: Vec<f64>, levels: Vec<f64>) -> Self {
        assert!(
            breaks.len() == levels.len() || (breaks.is_empty() && levels.len() == 1),
            "one level per break"
        );
        if breaks.is_empty() {
            return Self::constant(levels.first().copied().unwrap_or(0.0));
        }
        let m = breaks.len();
        let mut b = Vec::with_capacity(m);
        let mut l = Vec::with_capacity(m);
        for k in 0..m {
            let prev = levels[(k + m - 1) % m];
            if levels[k] != prev {
                b.push(breaks[k]);
                l.push(levels[k]);
            }
        }
        if b.is_empty() {
            return Self::constant(levels[0]);
        }
        StepFunction { breaks: b, levels: l }
    }

    /// Piecewise-constant interpolation of grid samples: sample `j` holds on
    /// `[θ_j - π/n, θ_j + π/n)` with `θ_j = 2πj/n`.
    pub fn from_samples(values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return Self::zero();
        }
        let half = PI / n as f64;
        let mut parts: Vec<(f64, f64)> = (0..n)
            .map(|j| ((grid_theta(j, n) - half).rem_euclid(TAU), values[j]))
            .collect();
        parts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (breaks, levels) = parts.into_iter().unzip();
        Self::from_parts(breaks, levels)
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn is_constant(&self) -> bool {
        self.breaks.is_empty()
    }

    /// Constant runs `(β, α, level)` covering the circle.
    pub fn runs(&self) -> Vec<(f64, f64, f64)> {
        let m = self.breaks.len();
        if m == 0 {
            return vec![(0.0, TAU, self.levels[0])];
        }
        (0..m)
            .map(|k| {
                let hi = if k + 1 < m {
                    self.breaks[k + 1]
                } else {
                    self.breaks[0] + TAU
                };
                (self.breaks[k], hi, self.levels[k])
            })
            .collect()
    }

    /// Jumps `(θ_k, level_k - level_{k-1})`.
    pub fn jumps(&self) -> Vec<(f64, f64)> {
        let m = self.breaks.len();
        (0..m)
            .map(|k| (self.breaks[k], self.levels[k] - self.levels[(k + m - 1) % m]))
            .collect()
    }

    /// Value with the half-open convention (a break belongs to the run it
    /// starts).
    pub fn value_at(&self, theta: f64) -> f64 {
        let m = self.breaks.len();
        if m == 0 {
            return self.levels[0];
        }
        let t = theta.rem_euclid(TAU);
        let idx = self.breaks.partition_point(|&b| b <= t + SINGULAR_TOL);
        if idx == 0 {
            self.levels[m - 1]
        } else {
            self.levels[idx - 1]
        }
    }

    pub fn mean(&self) -> f64 {
        self.runs().iter().map(|&(b, a, l)| l * (a - b)).sum::<f64>() / TAU
    }

    pub fn max_abs(&self) -> f64 {
        self.levels.iter().map(|l| l.abs()).fold(0.0, f64::max)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_parts(self.breaks.clone(), self.levels.iter().map(|&l| f(l)).collect())
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|l| s * l)
    }

    pub fn add(&self, other: &StepFunction) -> Self {
        let mut cuts: Vec<f64> = self.breaks.iter().chain(&other.breaks).copied().collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
        if cuts.is_empty() {
            return Self::constant(self.levels[0] + other.levels[0]);
        }
        let levels = cuts
            .iter()
            .map(|&c| self.value_at(c) + other.value_at(c))
            .collect();
        Self::from_parts(cuts, levels)
    }

    /// `{θ : s(θ) ≥ t}` as an arc set.
    pub fn level_set_ge(&self, t: f64) -> ArcSet {
        let pairs: Vec<(f64, f64)> = self
            .runs()
            .into_iter()
            .filter(|&(_, _, l)| l >= t)
            .map(|(b, a, _)| (b, a))
            .collect();
        ArcSet::from_pairs(&pairs).expect("runs are valid arcs")
    }

    /// `{θ : s(θ) ≤ t}` as an arc set.
    pub fn level_set_le(&self, t: f64) -> ArcSet {
        self.scale(-1.0).level_set_ge(-t)
    }

    pub fn herglotz(&self, z: C64) -> C64 {
        if self.breaks.is_empty() {
            return C64::new(self.levels[0], 0.0);
        }
        self.runs()
            .into_iter()
            .filter(|&(_, _, l)| l != 0.0)
            .map(|(b, a, l)| l * herglotz_arc(b, a, z))
            .sum()
    }

    /// Exact Fourier coefficient `ŝ(k)`.
    pub fn fourier(&self, k: i64) -> C64 {
        if k == 0 {
            return C64::new(self.mean(), 0.0);
        }
        let kf = k as f64;
        self.runs()
            .into_iter()
            .map(|(b, a, l)| {
                l * (C64::from_polar(1.0, -kf * b) - C64::from_polar(1.0, -kf * a))
                    / (TAU * kf * I)
            })
            .sum()
    }

    /// Conjugate function `(1/π) Σ Δ_k log|2 sin((θ - θ_k)/2)|` at `theta`;
    /// at a jump the regularized value `-log n` replaces the logarithm.
    pub fn conjugate_at(&self, theta: f64, n: usize) -> f64 {
        let reg = -(n as f64).ln();
        self.jumps()
            .into_iter()
            .map(|(tk, d)| {
                let l = if circ_dist(theta, tk) < SINGULAR_TOL {
                    reg
                } else {
                    log_chord(theta - tk)
                };
                d * l
            })
            .sum::<f64>()
            / PI
    }
}

/// Exact description `s₁ + conj(s₂)` of a real grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactForm {
    pub step: StepFunction,
    pub conj: StepFunction,
}

impl ExactForm {
    pub fn step(s: StepFunction) -> Self {
        ExactForm {
            step: s,
            conj: StepFunction::zero(),
        }
    }

    pub fn is_pure_step(&self) -> bool {
        self.conj.is_constant()
    }

    fn sample(&self, theta: f64, n: usize) -> f64 {
        self.step.value_at(theta) + self.conj.conjugate_at(theta, n)
    }

    fn conjugate(&self) -> ExactForm {
        let m2 = self.conj.mean();
        ExactForm {
            step: self.conj.scale(-1.0).map(|l| l + m2),
            conj: self.step.clone(),
        }
    }

    fn herglotz(&self, z: C64) -> C64 {
        let h1 = self.step.herglotz(z);
        if self.conj.is_constant() {
            return h1;
        }
        let h2 = self.conj.herglotz(z) - self.conj.mean();
        h1 - I * h2
    }

    fn fourier(&self, k: i64) -> C64 {
        let sgn = k.signum() as f64;
        self.step.fourier(k) - I * sgn * self.conj.fourier(k)
    }

    fn scale(&self, s: f64) -> ExactForm {
        ExactForm {
            step: self.step.scale(s),
            conj: self.conj.scale(s),
        }
    }

    fn add(&self, other: &ExactForm) -> ExactForm {
        ExactForm {
            step: self.step.add(&other.step),
            conj: self.conj.add(&other.conj),
        }
    }
}

/// `n` samples of a function on the circle.
#[derive(Debug, Clone)]
pub struct BoundaryGrid {
    values: Vec<C64>,
    exact: Option<ExactForm>,
    mean_removed: bool,
    spectrum: OnceLock<Vec<C64>>,
}

impl PartialEq for BoundaryGrid {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values
            && self.exact == other.exact
            && self.mean_removed == other.mean_removed
    }
}

impl BoundaryGrid {
    pub fn new(values: Vec<C64>) -> Result<Self> {
        check_grid_size(values.len())?;
        Ok(BoundaryGrid {
            values,
            exact: None,
            mean_removed: false,
            spectrum: OnceLock::new(),
        })
    }

    pub fn from_real(values: Vec<f64>) -> Result<Self> {
        Self::new(values.into_iter().map(|v| C64::new(v, 0.0)).collect())
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> C64) -> Result<Self> {
        check_grid_size(n)?;
        Self::new((0..n).map(|j| f(grid_theta(j, n))).collect())
    }

    pub fn from_real_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_fn(n, |t| C64::new(f(t), 0.0))
    }

    /// Samples `smooth(θ) + Σ c·log|2 sin((θ - θ₀)/2)|`. A sample landing on
    /// a singularity `θ₀` takes the regularized value `-c·log n`, which makes
    /// the grid quadrature of the logarithm exact to all orders.
    pub fn with_log_singularities(
        n: usize,
        smooth: impl Fn(f64) -> f64,
        singularities: &[(f64, f64)],
    ) -> Result<Self> {
        let reg = -(n as f64).ln();
        Self::from_real_fn(n, |t| {
            smooth(t)
                + singularities
                    .iter()
                    .map(|&(t0, c)| {
                        if circ_dist(t, t0) < SINGULAR_TOL {
                            c * reg
                        } else {
                            c * log_chord(t - t0)
                        }
                    })
                    .sum::<f64>()
        })
    }

    /// `log|1 - ζ|`, the log-modulus of the outer function `1 - z`.
    pub fn log_abs_one_minus_zeta(n: usize) -> Result<Self> {
        Self::with_log_singularities(n, |_| 0.0, &[(0.0, 1.0)])
    }

    pub fn from_exact(n: usize, exact: ExactForm) -> Result<Self> {
        check_grid_size(n)?;
        let values = (0..n)
            .map(|j| C64::new(exact.sample(grid_theta(j, n), n), 0.0))
            .collect();
        Ok(BoundaryGrid {
            values,
            exact: Some(exact),
            mean_removed: false,
            spectrum: OnceLock::new(),
        })
    }

    pub fn from_step(n: usize, step: StepFunction) -> Result<Self> {
        Self::from_exact(n, ExactForm::step(step))
    }

    /// Indicator `χ_E` with the half-open sampling convention.
    pub fn indicator(n: usize, set: &ArcSet) -> Result<Self> {
        Self::from_step(n, StepFunction::indicator(set))
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// The step function behind the grid: the exact form when it has no
    /// conjugate part, otherwise the sample interpolation of a real grid.
    pub fn step_function(&self) -> Option<StepFunction> {
        match &self.exact {
            Some(e) if e.is_pure_step() => Some(e.step.clone()),
            Some(_) => None,
            None if self.is_real() => Some(StepFunction::from_samples(&self.real_values())),
            None => None,
        }
    }


    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn real_values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn theta(&self, j: usize) -> f64 {
        grid_theta(j, self.n())
    }

    pub fn exact(&self) -> Option<&ExactForm> {
        self.exact.as_ref()
    }

    pub fn mean_removed(&self) -> bool {
        self.mean_removed
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    fn max_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    pub fn is_real(&self) -> bool {
        self.max_imag() <= 1e-12 * self.max_abs().max(1.0)
    }

    fn require_real(&self) -> Result<()> {
        if self.is_real() {
            Ok(())
        } else {
            Err(Error::NonReal {
                max_imag: self.max_imag(),
            })
        }
    }

    /// Mean over the circle: exact for grids with an exact form, the sample
    /// mean otherwise.
    pub fn mean(&self) -> C64 {
        match &self.exact {
            Some(e) => C64::new(e.step.mean(), 0.0),
            None => self.spectrum()[0],
        }
    }

    /// The grid minus its mean, flagged as mean-removed.
    pub fn remove_mean(&self) -> Self {
        let m = self.mean();
        let exact = self.exact.as_ref().map(|e| ExactForm {
            step: e.step.map(|l| l - m.re),
            conj: e.conj.clone(),
        });
        BoundaryGrid {
            values: self.values.iter().map(|v| v - m).collect(),
            exact,
            mean_removed: true,
            spectrum: OnceLock::new(),
        }
    }

    /// Real multiple `s·g` (keeps the exact form).
    pub fn scale(&self, s: f64) -> Self {
        BoundaryGrid {
            values: self.values.iter().map(|v| v * s).collect(),
            exact: self.exact.as_ref().map(|e| e.scale(s)),
            mean_removed: self.mean_removed,
            spectrum: OnceLock::new(),
        }
    }

    pub fn add(&self, other: &BoundaryGrid) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::GridMismatch(self.n(), other.n()));
        }
        let exact = match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => Some(a.add(b)),
            _ => None,
        };
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + b)
            .collect();
        Ok(BoundaryGrid {
            values,
            exact,
            mean_removed: false,
            spectrum: OnceLock::new(),
        })
    }

    /// Pointwise map of the samples; the exact form is dropped.
    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        BoundaryGrid {
            values: self.values.iter().map(|&v| f(v)).collect(),
            exact: None,
            mean_removed: false,
            spectrum: OnceLock::new(),
        }
    }

    /// DFT coefficients `ĝ(k)` for `k = 0..n` (negative `k` at `n + k`).
    fn spectrum(&self) -> &[C64] {
        self.spectrum.get_or_init(|| {
            let n = self.n();
            let mut buf = self.values.clone();
            FftPlanner::<f64>::new().plan_fft_forward(n).process(&mut buf);
            let inv = 1.0 / n as f64;
            buf.iter_mut().for_each(|c| *c *= inv);
            buf
        })
    }

    /// Fourier coefficients `ĝ(k)`, `|k| ≤ max_n`. Sampled grids use the
    /// discrete transform `(1/n) Σ g(ζ_j) ζ_j^{-k}`; grids with an exact
    /// form return the coefficients of the exact function.
    pub fn fourier_coeffs(&self, max_n: usize) -> Result<FourierCoeffs> {
        let n = self.n();
        if max_n >= n / 2 {
            return Err(Error::FrequencyTooLarge { max_n, n });
        }
        let m = max_n as i64;
        let coeffs = match &self.exact {
            Some(e) => (-m..=m).map(|k| e.fourier(k)).collect(),
            None => {
                let s = self.spectrum();
                (-m..=m)
                    .map(|k| s[k.rem_euclid(n as i64) as usize])
                    .collect()
            }
        };
        Ok(FourierCoeffs { max_n, coeffs })
    }

    /// Harmonic conjugate (multiplier `-i·sgn(k)`), normalized to mean zero.
    pub fn conjugate(&self) -> Result<Self> {
        self.require_real()?;
        let n = self.n();
        if let Some(e) = &self.exact {
            return Self::from_exact(n, e.conjugate());
        }
        let s = self.spectrum();
        let mut buf = vec![C64::new(0.0, 0.0); n];
        for k in 1..n / 2 {
            buf[k] = -I * s[k];
            buf[n - k] = I * s[n - k];
        }
        FftPlanner::<f64>::new().plan_fft_inverse(n).process(&mut buf);
        Self::new(buf.into_iter().map(|c| C64::new(c.re, 0.0)).collect())
    }

    fn check_radius(&self, z: C64) -> Result<()> {
        let r = z.norm();
        if !r.is_finite() {
            return Err(Error::OutsideDisk(z));
        }
        if self.exact.is_some() {
            if r >= 1.0 {
                return Err(Error::OutsideDisk(z));
            }
            return Ok(());
        }
        let limit = r_max(self.n());
        if r > limit + 1e-15 {
            return Err(Error::UnderResolved {
                radius: r,
                limit,
                n: self.n(),
            });
        }
        Ok(())
    }

    /// `(ĝ(0), Σ_{0<k<n/2} ĝ(k) z^k, Σ_{0<k<n/2} ĝ(-k) z̄^k, ĝ(n/2) Re z^{n/2})`.
    fn spectral_parts(&self, z: C64) -> (C64, C64, C64, C64) {
        let n = self.n();
        let s = self.spectrum();
        let half = n / 2;
        let zc = z.conj();
        let mut pos = C64::new(0.0, 0.0);
        let mut neg = C64::new(0.0, 0.0);
        for k in (1..half).rev() {
            pos = (pos + s[k]) * z;
            neg = (neg + s[n - k]) * zc;
        }
        let nyq = s[half] * z.powu(half as u32).re;
        (s[0], pos, neg, nyq)
    }

    /// Poisson extension `∫ g P_z dm`.
    pub fn poisson_extend(&self, z: C64) -> Result<C64> {
        self.check_radius(z)?;
        if let Some(e) = &self.exact {
            return Ok(C64::new(e.herglotz(z).re, 0.0));
        }
        let (c0, pos, neg, nyq) = self.spectral_parts(z);
        Ok(c0 + pos + neg + nyq)
    }

    /// Conjugate Poisson extension `∫ g Q_z dm` (vanishes at 0).
    pub fn conj_poisson_extend(&self, z: C64) -> Result<C64> {
        self.check_radius(z)?;
        if let Some(e) = &self.exact {
            return Ok(C64::new(e.herglotz(z).im, 0.0));
        }
        let (_, pos, neg, _) = self.spectral_parts(z);
        Ok(-I * pos + I * neg)
    }

    /// Herglotz integral `∫ (ζ + z)/(ζ - z) g(ζ) dm(ζ)`.
    pub fn herglotz(&self, z: C64) -> Result<C64> {
        self.check_radius(z)?;
        if let Some(e) = &self.exact {
            return Ok(e.herglotz(z));
        }
        let (c0, pos, _, nyq) = self.spectral_parts(z);
        Ok(c0 + 2.0 * pos + nyq)
    }

    pub fn distribution_stats(&self) -> DistributionStats {
        DistributionStats::new(self.values.iter().map(|v| v.norm()).collect())
    }

    /// Distribution profile on the given thresholds.
    pub fn distribution(&self, thresholds: &[f64]) -> Result<DistributionProfile> {
        if thresholds.is_empty()
            || thresholds.iter().any(|&t| !(t > 0.0) || !t.is_finite())
            || thresholds.windows(2).any(|w| w[1] <= w[0])
        {
            return Err(Error::InvalidParameter(
                "thresholds must be positive and strictly increasing".into(),
            ));
        }
        let stats = self.distribution_stats();
        let n = self.n() as f64;
        let counts: Vec<usize> = thresholds.iter().map(|&t| stats.count_above(t)).collect();
        let lambda: Vec<f64> = counts.iter().map(|&c| c as f64 / n).collect();
        let rho = thresholds.iter().zip(&lambda).map(|(t, l)| t * l).collect();
        let sigma = thresholds.iter().map(|&t| stats.sigma(t)).collect();
        Ok(DistributionProfile {
            thresholds: thresholds.to_vec(),
            lambda,
            rho,
            sigma,
            counts,
            n_samples: self.n(),
            max_abs: stats.max(),
            sigma_zero: stats.sigma(0.0),
        })
    }
}

/// Default dyadic threshold ladder `2^k`, `k = -4..=16`.
pub fn default_thresholds() -> Vec<f64> {
    (-4..=16).map(|k| 2f64.powi(k)).collect()
}

/// Coefficients `ĝ(-max_n..=max_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoeffs {
    max_n: usize,
    coeffs: Vec<C64>,
}

impl FourierCoeffs {
    pub fn get(&self, k: i64) -> Option<C64> {
        if k.unsigned_abs() as usize > self.max_n {
            return None;
        }
        Some(self.coeffs[(k + self.max_n as i64) as usize])
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    /// `(k, ĝ(k))` pairs in increasing `k`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, C64)> + '_ {
        let m = self.max_n as i64;
        self.coeffs.iter().enumerate().map(move |(i, &c)| (i as i64 - m, c))
    }
}

/// Sorted sample magnitudes with suffix maxima for exact empirical
/// `λ(t) = #{|h| > t}/n` and `σ(A) = sup_{t ≥ A} t λ(t)`.
#[derive(Debug, Clone)]
pub struct DistributionStats {
    sorted: Vec<f64>,
    suffix_max: Vec<f64>,
}

impl DistributionStats {
    pub fn new(mut mags: Vec<f64>) -> Self {
        mags.sort_by(f64::total_cmp);
        let n = mags.len();
        let nf = n as f64;
        // g_i = s_i · #{s ≥ s_i} / n, the supremum of tλ(t) on the step
        // ending at s_i.
        let mut g = vec![0.0f64; n];
        let mut i = 0;
        while i < n {
            let mut j = i;
            while j < n && mags[j] == mags[i] {
                j += 1;
            }
            let val = mags[i] * (n - i) as f64 / nf;
            g[i..j].iter_mut().for_each(|x| *x = val);
            i = j;
        }
        let mut suffix_max = vec![0.0f64; n + 1];
        for k in (0..n).rev() {
            suffix_max[k] = suffix_max[k + 1].max(g[k]);
        }
        DistributionStats {
            sorted: mags,
            suffix_max,
        }
    }

    pub fn count_above(&self, t: f64) -> usize {
        self.sorted.len() - self.sorted.partition_point(|&s| s <= t)
    }

    pub fn lambda(&self, t: f64) -> f64 {
        self.count_above(t) as f64 / self.sorted.len() as f64
    }

    pub fn sigma(&self, a: f64) -> f64 {
        let idx = self.sorted.partition_point(|&s| s <= a);
        let at_a = a * (self.sorted.len() - idx) as f64 / self.sorted.len() as f64;
        at_a.max(self.suffix_max[idx])
    }

    pub fn max(&self) -> f64 {
        self.sorted.last().copied().unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistributionProfile {
    pub thresholds: Vec<f64>,
    pub lambda: Vec<f64>,
    pub rho: Vec<f64>,
    pub sigma: Vec<f64>,
    pub counts: Vec<usize>,
    pub n_samples: usize,
    pub max_abs: f64,
    /// `σ(0) = sup_{t > 0} t λ(t)`, exact for the empirical distribution.
    pub sigma_zero: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeakDecayVerdict {
    Member,
    NonMember,
    Inconclusive,
}

/// Thresholds exceeded by fewer samples than this are not resolved.
const RESOLVED_COUNT: usize = 16;
/// `ρ` values below this are indistinguishable from decay at grid scale.
const RHO_FLOOR: f64 = 1e-3;

/// Decides whether `t λ(t) → 0` from the resolved top of the ladder.
///
/// A ladder whose counts drop from resolved straight to zero is cut off at
/// grid scale (bounded data): member. Otherwise `ρ` is compared across the
/// top decade of resolved thresholds: a decay factor of at least 2 per decade
/// means member, a factor below 1.25 with `ρ` above a floor means
/// non-member, anything else is inconclusive.
pub fn weak_decay_test(p: &DistributionProfile) -> WeakDecayVerdict {
    let resolved: Vec<usize> = (0..p.thresholds.len())
        .filter(|&k| p.counts[k] >= RESOLVED_COUNT)
        .collect();
    let Some(&top) = resolved.last() else {
        return if p.counts[0] == 0 {
            WeakDecayVerdict::Member
        } else {
            WeakDecayVerdict::Inconclusive
        };
    };
    // Counts that vanish within one doubling past the resolved top mean the
    // data is cut off at grid scale.
    let cut_off = |k: usize| k >= p.thresholds.len() || p.counts[k] == 0;
    if cut_off(top + 1) || cut_off(top + 2) {
        return WeakDecayVerdict::Member;
    }
    let t_hi = p.thresholds[top];
    let Some(&lo) = resolved
        .iter()
        .find(|&&k| p.thresholds[k] >= t_hi / 10.0 - 1e-12)
    else {
        return WeakDecayVerdict::Inconclusive;
    };
    if lo == top {
        return WeakDecayVerdict::Inconclusive;
    }
    let (rho_lo, rho_hi) = (p.rho[lo], p.rho[top]);
    if rho_hi == 0.0 {
        return WeakDecayVerdict::Member;
    }
    let decades = (t_hi / p.thresholds[lo]).log10();
    let d = (rho_lo / rho_hi).powf(1.0 / decades);
    if d >= 2.0 {
        WeakDecayVerdict::Member
    } else if d < 1.25 && rho_hi > RHO_FLOOR {
        WeakDecayVerdict::NonMember
    } else {
        WeakDecayVerdict::Inconclusive
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn grid_size_validation() {
        assert!(BoundaryGrid::new(vec![c(0.0, 0.0); 100]).is_err());
        assert!(BoundaryGrid::new(vec![c(0.0, 0.0); 32]).is_err());
        assert!(BoundaryGrid::new(vec![c(0.0, 0.0); 64]).is_ok());
    }

    #[test]
    fn fourier_of_monomial_and_constant() {
        let g = BoundaryGrid::from_fn(256, |t| C64::from_polar(1.0, 2.0 * t)).unwrap();
        let f = g.fourier_coeffs(10).unwrap();
        for (k, v) in f.iter() {
            let expect = if k == 2 { 1.0 } else { 0.0 };
            assert!((v - expect).norm() < 1e-14, "k={k}");
        }
        let g = BoundaryGrid::from_fn(64, |_| c(2.0, -1.0)).unwrap();
        assert!((g.fourier_coeffs(0).unwrap().get(0).unwrap() - c(2.0, -1.0)).norm() < 1e-15);
        assert!(g.fourier_coeffs(32).is_err());
    }

    #[test]
    fn indicator_coefficients_match_analytic() {
        let set = ArcSet::from_pairs(&[(0.0, PI)]).unwrap();
        let g = BoundaryGrid::indicator(4096, &set).unwrap();
        let f = g.fourier_coeffs(5).unwrap();
        assert!((f.get(0).unwrap() - 0.5).norm() < 1e-15);
        for k in 1..=5i64 {
            let kf = k as f64;
            let expect = (C64::from_polar(1.0, -kf * PI) - 1.0) / (-TAU * I * kf);
            assert!((f.get(k).unwrap() - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn conjugate_of_cosine() {
        let g = BoundaryGrid::from_real_fn(128, f64::cos).unwrap();
        let h = g.conjugate().unwrap();
        for (j, v) in h.values().iter().enumerate() {
            assert!((v.re - g.theta(j).sin()).abs() < 1e-13);
        }
        let k = BoundaryGrid::from_real_fn(128, |_| 3.0).unwrap().conjugate().unwrap();
        assert!(k.max_abs() < 1e-15);
    }

    #[test]
    fn conjugate_rejects_complex_data() {
        let g = BoundaryGrid::from_fn(64, |t| C64::from_polar(1.0, t)).unwrap();
        assert!(matches!(g.conjugate(), Err(Error::NonReal { .. })));
    }

    #[test]
    fn conjugate_of_indicator_matches_log_formula() {
        let (beta, alpha) = (0.7, 2.1);
        let set = ArcSet::from_pairs(&[(beta, alpha)]).unwrap();
        let n = 4096;
        let g = BoundaryGrid::indicator(n, &set).unwrap().conjugate().unwrap();
        for j in 0..n {
            let t = grid_theta(j, n);
            if circ_dist(t, beta) < 10.5 * TAU / n as f64 || circ_dist(t, alpha) < 10.5 * TAU / n as f64 {
                continue;
            }
            let expect = -(((t - alpha) / 2.0).sin() / ((t - beta) / 2.0).sin()).abs().ln() / PI;
            assert!((g.values()[j].re - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn poisson_of_real_part() {
        let g = BoundaryGrid::from_real_fn(256, f64::cos).unwrap();
        assert!((g.poisson_extend(c(0.5, 0.0)).unwrap() - 0.5).norm() < 1e-14);
        let z = c(0.3, -0.4);
        assert!((g.conj_poisson_extend(z).unwrap() - z.im).norm() < 1e-14);
    }

    #[test]
    fn indicator_poisson_at_origin_is_measure() {
        let set = ArcSet::from_pairs(&[(1.0, 2.5), (4.0, 4.2)]).unwrap();
        let g = BoundaryGrid::indicator(1024, &set).unwrap();
        assert!((g.poisson_extend(c(0.0, 0.0)).unwrap().re - set.measure()).abs() < 1e-15);
        assert!(g.conj_poisson_extend(c(0.0, 0.0)).unwrap().norm() < 1e-15);
    }

    #[test]
    fn under_resolved_radius_is_an_error() {
        let g = BoundaryGrid::from_real_fn(4096, f64::cos).unwrap();
        assert!(g.poisson_extend(c(0.999, 0.0)).is_ok());
        assert!(matches!(
            g.poisson_extend(c(0.9995, 0.0)),
            Err(Error::UnderResolved { .. })
        ));
    }

    #[test]
    fn log_singular_herglotz_is_accurate() {
        let w = BoundaryGrid::log_abs_one_minus_zeta(4096).unwrap();
        for &z in &[c(0.0, 0.0), c(0.9, 0.0), c(-0.5, 0.6), c(0.0, 0.9)] {
            let f = w.herglotz(z).unwrap().exp();
            assert!((f - (1.0 - z)).norm() < 1e-8, "z={z}");
        }
    }

    #[test]
    fn herglotz_arc_matches_quadrature() {
        let (beta, alpha) = (0.4, 1.9);
        let z = c(0.2, 0.5);
        let m = 20000;
        let h = (alpha - beta) / m as f64;
        let mut s = C64::new(0.0, 0.0);
        for k in 0..m {
            let t = beta + (k as f64 + 0.5) * h;
            let e = C64::from_polar(1.0, t);
            s += (e + z) / (e - z);
        }
        s *= h / TAU;
        assert!((herglotz_arc(beta, alpha, z) - s).norm() < 1e-8);
    }

    #[test]
    fn constant_distribution() {
        let g = BoundaryGrid::from_real_fn(64, |_| 2.0).unwrap();
        let p = g.distribution(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(p.lambda, vec![1.0, 0.0, 0.0]);
        assert!((p.sigma_zero - 2.0).abs() < 1e-15);
        assert_eq!(weak_decay_test(&g.distribution(&default_thresholds()).unwrap()), WeakDecayVerdict::Member);
    }

    #[test]
    fn sigma_is_exact_supremum() {
        let stats = DistributionStats::new(vec![1.0, 2.0, 3.0, 4.0]);
        // tλ(t) approaches 2·3/4 just below t = 2 and 3·2/4 just below 3.
        assert!((stats.sigma(0.0) - 1.5).abs() < 1e-15);
        // Beyond 3.5 the supremum is approached as t → 4 from below.
        assert!((stats.sigma(3.5) - 1.0).abs() < 1e-15);
        assert_eq!(stats.sigma(5.0), 0.0);
    }

    #[test]
    fn cot_is_not_weak_decay() {
        let g = BoundaryGrid::from_real_fn(4096, |t| if t == 0.0 { 0.0 } else { 1.0 / (t / 2.0).tan() }).unwrap();
        let p = g.distribution(&default_thresholds()).unwrap();
        assert_eq!(weak_decay_test(&p), WeakDecayVerdict::NonMember);
    }

    #[test]
    fn exact_double_conjugate() {
        let set = ArcSet::from_pairs(&[(0.2, 1.0), (3.0, 5.0)]).unwrap();
        let g = BoundaryGrid::indicator(256, &set).unwrap();
        let gg = g.conjugate().unwrap().conjugate().unwrap();
        let m = g.mean().re;
        for (a, b) in g.values().iter().zip(gg.values()) {
            assert!((b.re + (a.re - m)).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn parseval_and_double_conjugate(coef in prop::collection::vec(-1.0..1.0f64, 10)) {
            let g = BoundaryGrid::from_real_fn(128, |t| {
                coef.iter().enumerate().map(|(k, a)| {
                    let kk = (k / 2 + 1) as f64;
                    if k % 2 == 0 { a * (kk * t).cos() } else { a * (kk * t).sin() }
                }).sum::<f64>() + 0.3
            }).unwrap();
            let f = g.fourier_coeffs(63).unwrap();
            let energy: f64 = f.iter().map(|(_, c)| c.norm_sqr()).sum();
            let mean_sq: f64 = g.values().iter().map(|v| v.norm_sqr()).sum::<f64>() / 128.0;
            prop_assert!((energy - mean_sq).abs() < 1e-10);
            let h = g.conjugate().unwrap();
            let hh = h.conjugate().unwrap();
            let m = g.mean().re;
            for (a, b) in g.values().iter().zip(hh.values()) {
                prop_assert!((b.re + (a.re - m)).abs() < 1e-10);
            }
            let l2 = |x: &BoundaryGrid| x.values().iter().map(|v| v.norm_sqr()).sum::<f64>();
            prop_assert!(l2(&h) <= l2(&g) + 1e-10);
            prop_assert!((g.poisson_extend(C64::new(0.0, 0.0)).unwrap() - g.mean()).norm() < 1e-14);
        }

        #[test]
        fn distribution_monotone(vals in prop::collection::vec(-10.0..10.0f64, 64)) {
            let g = BoundaryGrid::from_real(vals).unwrap();
            let p = g.distribution(&default_thresholds()).unwrap();
            for w in p.lambda.windows(2) { prop_assert!(w[1] <= w[0]); }
            for w in p.sigma.windows(2) { prop_assert!(w[1] <= w[0] + 1e-15); }
            prop_assert!(p.lambda.iter().all(|&l| (0.0..=1.0).contains(&l)));
        }
    }
}

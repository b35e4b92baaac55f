//! Unilateral products `∏ T(φ_n)` and bilateral products
//! `∏ f_{E_n⁺}/f_{E_n⁻}` of Cayley inner functions.

use std::f64::consts::{PI, SQRT_2, TAU};

use serde::{Deserialize, Serialize};

use crate::arcset::ArcSet;
use crate::boundary::BoundaryGrid;
use crate::cayley::{arc_zero, cayley_eval, one_minus_phi_at_zero, phi_at_zero, CayleyInnerFn};
use crate::disk::{mobius_t, wrap_angle, C64, I};
use crate::error::{Error, Result};
use crate::expr::{product_tail_bound, winding_number, FunctionExpr};
use crate::factorization::integer_step;
use crate::inner::{rational_inner_from_bounded, Atom, InnerFunction};

/// Default number of factors kept in truncated products.
pub const DEFAULT_TRUNCATION: usize = 256;

/// The golden angle, used to spread generated arcs around the circle.
const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653;

/// One inner function `φ_n` of a sequence, either given directly or as the
/// `φ_E = T⁻¹(f_E)` of an arc set (evaluated through `f_E` in closed form).
#[derive(Debug, Clone, PartialEq)]
pub enum Term {
    Inner(InnerFunction),
    Arcs(ArcSet),
}

/// The four summands of the convergence criteria for one term.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct CriterionSums {
    /// `|θ_n|` with `θ_n` the argument of the unimodular constant in `[-π, π)`.
    pub theta: f64,
    /// Powers `m_n` of `z`.
    pub powers: f64,
    /// Blaschke sums `Σ_k (1 - |z_k^{(n)}|)`.
    pub blaschke: f64,
    /// Singular masses `μ_n(𝕋)`.
    pub singular_mass: f64,
    /// `|1 - φ_n(0)|`.
    pub phi0: f64,
}

impl CriterionSums {
    fn add(&mut self, o: &CriterionSums) {
        self.theta += o.theta;
        self.powers += o.powers;
        self.blaschke += o.blaschke;
        self.singular_mass += o.singular_mass;
        self.phi0 += o.phi0;
    }
}

impl Term {
    pub fn criteria(&self) -> CriterionSums {
        match self {
            Term::Inner(f) => CriterionSums {
                theta: wrap_angle(f.theta()).abs(),
                powers: f.power() as f64,
                blaschke: f.blaschke_sum(),
                singular_mass: f.singular_mass(),
                phi0: (1.0 - f.value_at_zero()).norm(),
            },
            Term::Arcs(set) => {
                let m = set.measure();
                if set.len() == 1 && m <= 0.5 {
                    let z = arc_zero(&set.arcs()[0]).norm();
                    CriterionSums {
                        theta: 0.0,
                        powers: if z < 1e-15 { 1.0 } else { 0.0 },
                        blaschke: if z < 1e-15 { 0.0 } else { 1.0 - z },
                        singular_mass: 0.0,
                        phi0: one_minus_phi_at_zero(m),
                    }
                } else {
                    let phi = crate::cayley::phi_from_arcset(set)
                        .map(|p| p.inner)
                        .unwrap_or_else(|_| InnerFunction::one());
                    let mut c = Term::Inner(phi).criteria();
                    c.phi0 = (1.0 - phi_at_zero(m)).abs();
                    c
                }
            }
        }
    }

    /// `T(φ_n(z))`.
    pub fn eval_t(&self, z: C64) -> Result<C64> {
        match self {
            Term::Inner(f) => mobius_t(f.eval(z)?),
            Term::Arcs(set) => cayley_eval(set, z),
        }
    }

    pub fn to_expr(&self) -> FunctionExpr {
        match self {
            Term::Inner(f) => FunctionExpr::apply_t(FunctionExpr::inner(f.clone())),
            Term::Arcs(set) => FunctionExpr::cayley(CayleyInnerFn::new(set.clone(), 1.0).expect("unit scale")),
        }
    }
}

/// Named sequence families with known asymptotics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum GeneratorSpec {
    /// Nested arcs `[0, 2π·first·ratio^{n-1})` anchored at 1 (anchoring
    /// keeps arbitrarily short arcs exactly representable).
    GeometricArcs { first: f64, ratio: f64 },
    /// Arcs of measure `scale/n` starting at `n·(golden angle)`.
    HarmonicArcs { scale: f64 },
    /// Single zeros `a_n = 1 - ratio^n`.
    BlaschkeZeros { ratio: f64 },
    /// Unimodular constants `e^{iθ_n}` with `θ_n = (-1)^n scale/n`.
    AlternatingRotations { scale: f64 },
    /// `φ_n = z` for every `n`.
    Monomials,
    /// Single zeros `a_n = 1 - scale/n`.
    HarmonicZeros { scale: f64 },
    /// Atoms at 1 of mass `scale/n`.
    AtomMasses { scale: f64 },
}

/// Which convergence criterion fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    Theta,
    Powers,
    Blaschke,
    SingularMass,
    None,
}

impl GeneratorSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match *self {
            GeneratorSpec::GeometricArcs { first, ratio } => {
                if !(first > 0.0 && first <= 0.5) || !(ratio > 0.0 && ratio < 1.0) {
                    return bad(format!("geometric arcs need 0 < first ≤ 1/2 and 0 < ratio < 1 (got {first}, {ratio})"));
                }
            }
            GeneratorSpec::HarmonicArcs { scale } => {
                if !(scale > 0.0 && scale <= 0.5) {
                    return bad(format!("harmonic arcs need 0 < scale ≤ 1/2 (got {scale})"));
                }
            }
            GeneratorSpec::BlaschkeZeros { ratio } => {
                if !(ratio > 0.0 && ratio < 1.0) {
                    return bad(format!("Blaschke zeros need 0 < ratio < 1 (got {ratio})"));
                }
            }
            GeneratorSpec::AlternatingRotations { scale } => {
                if !(scale > 0.0 && scale <= PI) {
                    return bad(format!("rotations need 0 < scale ≤ π (got {scale})"));
                }
            }
            GeneratorSpec::Monomials => {}
            GeneratorSpec::HarmonicZeros { scale } | GeneratorSpec::AtomMasses { scale } => {
                if !(scale > 0.0 && scale <= 1.0) {
                    return bad(format!("scale must lie in (0, 1] (got {scale})"));
                }
            }
        }
        Ok(())
    }

    /// The term with index `n ≥ 1`.
    pub fn term(&self, n: usize) -> Term {
        let nf = n as f64;
        let one = C64::new(1.0, 0.0);
        match *self {
            GeneratorSpec::GeometricArcs { first, ratio } => {
                let m = first * ratio.powi(n as i32 - 1);
                if TAU * m < f64::MIN_POSITIVE {
                    return Term::Arcs(ArcSet::empty());
                }
                Term::Arcs(ArcSet::single(0.0, m).expect("valid arc"))
            }
            GeneratorSpec::HarmonicArcs { scale } => {
                Term::Arcs(ArcSet::single((nf * GOLDEN_ANGLE).rem_euclid(TAU), scale / nf).expect("valid arc"))
            }
            GeneratorSpec::BlaschkeZeros { ratio } => {
                let gap = ratio.powi(n as i32);
                if gap < 1e-15 {
                    // B_a → 1 locally uniformly as a → 1; the gap is below
                    // double resolution of the zero.
                    return Term::Inner(InnerFunction::one());
                }
                Term::Inner(InnerFunction::blaschke(C64::new(1.0 - gap, 0.0)).expect("zero in disk"))
            }
            GeneratorSpec::AlternatingRotations { scale } => {
                let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
                Term::Inner(InnerFunction::constant(C64::from_polar(1.0, sign * scale / nf)).expect("unimodular"))
            }
            GeneratorSpec::Monomials => Term::Inner(InnerFunction::monomial(1)),
            GeneratorSpec::HarmonicZeros { scale } => {
                Term::Inner(InnerFunction::blaschke_product(one, &[C64::new(1.0 - scale / nf, 0.0)]).expect("zero in disk"))
            }
            GeneratorSpec::AtomMasses { scale } => Term::Inner(
                InnerFunction::new(one, 0, Vec::new(), vec![Atom { at: one, mass: scale / nf }]).expect("valid atom"),
            ),
        }
    }

    /// The criterion whose series diverges, from the family's asymptotics.
    pub fn failing_criterion(&self) -> Criterion {
        match self {
            GeneratorSpec::GeometricArcs { .. } | GeneratorSpec::BlaschkeZeros { .. } => Criterion::None,
            // 1 - |z_E| ~ π m(E) for short arcs
            GeneratorSpec::HarmonicArcs { .. } | GeneratorSpec::HarmonicZeros { .. } => Criterion::Blaschke,
            GeneratorSpec::AlternatingRotations { .. } => Criterion::Theta,
            GeneratorSpec::Monomials => Criterion::Powers,
            GeneratorSpec::AtomMasses { .. } => Criterion::SingularMass,
        }
    }

    /// Upper bound on `Σ_{n>from} |1 - φ_n(0)|`, `None` when infinite.
    pub fn phi0_remainder(&self, from: usize) -> Option<f64> {
        match *self {
            // 1 - φ_E(0) = 2t/(1 + t) ≤ 2t ≤ 4m for t = tan(πm/2), m ≤ 1/2
            GeneratorSpec::GeometricArcs { first, ratio } => Some(4.0 * first * ratio.powi(from as i32) / (1.0 - ratio)),
            // φ_n(0) = a_n = 1 - ratio^n
            GeneratorSpec::BlaschkeZeros { ratio } => Some(ratio.powi(from as i32 + 1) / (1.0 - ratio)),
            _ => None,
        }
    }
}

/// A sequence of inner functions: a named family or an explicit list.
#[derive(Debug, Clone, PartialEq)]
pub enum InnerSequence {
    Family(GeneratorSpec),
    Explicit(Vec<Term>),
}

impl InnerSequence {
    pub fn family(spec: GeneratorSpec) -> Result<Self> {
        spec.validate()?;
        Ok(InnerSequence::Family(spec))
    }

    /// The first `k` terms (fewer for a short explicit list).
    pub fn terms(&self, k: usize) -> Vec<Term> {
        match self {
            InnerSequence::Family(spec) => (1..=k).map(|n| spec.term(n)).collect(),
            InnerSequence::Explicit(list) => list.iter().take(k).cloned().collect(),
        }
    }

    /// Bound on `Σ_{n>k} |1 - φ_n(0)|` from the family's asymptotics.
    /// Zero for an exhausted explicit list; `None` when no finite bound is
    /// known.
    pub fn phi0_tail(&self, k: usize) -> Option<f64> {
        match self {
            InnerSequence::Family(spec) => spec.phi0_remainder(k),
            InnerSequence::Explicit(list) if list.len() <= k => Some(0.0),
            InnerSequence::Explicit(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictStatus {
    Converges,
    Diverges,
    Inconclusive,
}

impl std::fmt::Display for VerdictStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            VerdictStatus::Converges => "converges",
            VerdictStatus::Diverges => "diverges",
            VerdictStatus::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceVerdict {
    pub status: VerdictStatus,
    pub failing: Criterion,
    /// Bound on `Σ_{n>K} |1 - φ_n(0)|` (infinite when unknown).
    pub tail_estimate: f64,
    /// Partial sums of the criteria over the first `K` terms.
    pub partial: CriterionSums,
    pub truncation: usize,
}

/// Relative increment of partial sums over the last quarter of terms.
fn last_quarter_increment(sums: &[f64]) -> f64 {
    let k = sums.len();
    if k < 4 {
        return f64::INFINITY;
    }
    let last = sums[k - 1];
    let start = sums[k - 1 - k / 4];
    let inc = (last - start).abs();
    if inc == 0.0 {
        0.0
    } else {
        inc / last.abs().max(f64::MIN_POSITIVE)
    }
}

/// Convergence verdict from the criteria on absolute convergence of
/// `Σθ_n`, `Σm_n`, the joint Blaschke sum and `Σμ_n(𝕋)`.
pub fn unilateral_verdict(seq: &InnerSequence, k: usize) -> ConvergenceVerdict {
    let terms = seq.terms(k);
    let mut partial = CriterionSums::default();
    let mut traces: [Vec<f64>; 4] = Default::default();
    for t in &terms {
        partial.add(&t.criteria());
        traces[0].push(partial.theta);
        traces[1].push(partial.powers);
        traces[2].push(partial.blaschke);
        traces[3].push(partial.singular_mass);
    }
    let tail_estimate = seq.phi0_tail(terms.len()).unwrap_or(f64::INFINITY);
    let (status, failing) = match seq {
        InnerSequence::Family(spec) => match spec.failing_criterion() {
            Criterion::None => (VerdictStatus::Converges, Criterion::None),
            c => (VerdictStatus::Diverges, c),
        },
        InnerSequence::Explicit(list) if list.len() <= k => (VerdictStatus::Converges, Criterion::None),
        InnerSequence::Explicit(_) => {
            let tags = [Criterion::Theta, Criterion::Powers, Criterion::Blaschke, Criterion::SingularMass];
            let suspect = traces
                .iter()
                .zip(tags)
                .find(|(tr, _)| last_quarter_increment(tr) >= 1e-10)
                .map(|(_, c)| c)
                .unwrap_or(Criterion::None);
            (VerdictStatus::Inconclusive, suspect)
        }
    };
    ConvergenceVerdict {
        status,
        failing,
        tail_estimate,
        partial,
        truncation: terms.len(),
    }
}

/// A truncated product value with its tail bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProductValue {
    pub value: C64,
    pub tail_bound: f64,
}

/// `∏_{n≤K} T(φ_n)(z)`, requiring a convergent verdict.
pub fn unilateral_eval(seq: &InnerSequence, z: C64, k: usize) -> Result<ProductValue> {
    let verdict = unilateral_verdict(seq, k);
    if verdict.status != VerdictStatus::Converges {
        return Err(Error::NotConverged(verdict.status.to_string()));
    }
    let mut value = C64::new(1.0, 0.0);
    for t in seq.terms(k) {
        value *= t.eval_t(z)?;
    }
    let tail_bound = product_tail_bound(value.norm(), verdict.tail_estimate, z.norm()).unwrap_or(f64::INFINITY);
    Ok(ProductValue { value, tail_bound })
}

/// The truncated product as an expression carrying its tail.
pub fn unilateral_expr(seq: &InnerSequence, k: usize) -> FunctionExpr {
    let factors = seq.terms(k).iter().map(Term::to_expr).collect();
    FunctionExpr::truncated_product(factors, seq.phi0_tail(k))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceRow {
    pub n: usize,
    pub value: C64,
    /// Continuous argument `Σ_{j≤n} arg T(φ_j)(z)`.
    pub unwrapped_arg: f64,
    /// Bound on the distance to the full product, when known.
    pub tail_bound: Option<f64>,
    /// Partial sums of the criteria.
    pub sums: CriterionSums,
}

/// Partial products `P_1, …, P_K` at `z` with tail bounds and the partial
/// criterion sums; no convergence precondition.
pub fn partial_product_trace(seq: &InnerSequence, z: C64, k: usize) -> Result<Vec<TraceRow>> {
    let terms = seq.terms(k);
    let mut rows = Vec::with_capacity(terms.len());
    let mut value = C64::new(1.0, 0.0);
    let mut arg = 0.0;
    let mut sums = CriterionSums::default();
    for (idx, t) in terms.iter().enumerate() {
        let f = t.eval_t(z)?;
        value *= f;
        arg += f.arg();
        sums.add(&t.criteria());
        let n = idx + 1;
        let tail_bound = seq
            .phi0_tail(n)
            .and_then(|s| product_tail_bound(value.norm(), s, z.norm()));
        rows.push(TraceRow {
            n,
            value,
            unwrapped_arg: arg,
            tail_bound,
            sums,
        });
    }
    Ok(rows)
}

/// Level sets `E_n⁺ = {v ≥ n}` and `E_n⁻ = {v ≤ -n}` of an integer `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct BilateralSplit {
    pub plus: Vec<ArcSet>,
    pub minus: Vec<ArcSet>,
}

pub fn bilateral_split(v: &BoundaryGrid) -> Result<BilateralSplit> {
    let step = integer_step(v, true)?;
    let top = step.levels().iter().fold(0.0f64, |a, &b| a.max(b)) as i64;
    let bottom = step.levels().iter().fold(0.0f64, |a, &b| a.min(b)) as i64;
    Ok(BilateralSplit {
        plus: (1..=top).map(|n| step.level_set_ge(n as f64 - 0.5)).collect(),
        minus: (1..=-bottom).map(|n| step.level_set_le(-(n as f64) + 0.5)).collect(),
    })
}

/// Pairs `E_n⁺ = [0, α_n)`, `E_n⁻ = (-α_n, 0]` with `α_n = c·n^{-3/2}`,
/// an odd decreasing staircase whose bilateral product converges
/// absolutely.
pub fn odd_decreasing_split(c: f64, count: usize) -> Result<BilateralSplit> {
    if !(c > 0.0 && c < PI) {
        return Err(Error::InvalidParameter(format!("c = {c} must lie in (0, π)")));
    }
    let plus: Vec<ArcSet> = (1..=count)
        .map(|n| ArcSet::from_pairs(&[(0.0, c / (n as f64).powf(1.5))]))
        .collect::<Result<_>>()?;
    let minus = plus.iter().map(ArcSet::conjugate).collect();
    Ok(BilateralSplit { plus, minus })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BilateralValue {
    pub value: C64,
    /// Partial sums `Σ_{n≤k} |m(E_n⁺) - m(E_n⁻)|` for `k = 1..K`.
    pub diagnostic: Vec<f64>,
    /// Last increment of the diagnostic relative to its value.
    pub trend: f64,
}

/// `∏_{n≤K} f_{E_n⁺}(z)/f_{E_n⁻}(z)`, truncated symmetrically in `n`.
pub fn bilateral_eval(split: &BilateralSplit, z: C64, k: usize) -> Result<BilateralValue> {
    let count = split.plus.len().max(split.minus.len()).min(k);
    let mut value = C64::new(1.0, 0.0);
    let mut diagnostic = Vec::with_capacity(count);
    let mut acc = 0.0;
    for n in 0..count {
        let (mp, mm) = (
            split.plus.get(n).map_or(0.0, ArcSet::measure),
            split.minus.get(n).map_or(0.0, ArcSet::measure),
        );
        if let Some(e) = split.plus.get(n) {
            value *= cayley_eval(e, z)?;
        }
        if let Some(e) = split.minus.get(n) {
            value /= cayley_eval(e, z)?;
        }
        acc += (mp - mm).abs();
        diagnostic.push(acc);
    }
    let trend = match diagnostic.len() {
        0 | 1 => 0.0,
        l if diagnostic[l - 1] == 0.0 => 0.0,
        l => (diagnostic[l - 1] - diagnostic[l - 2]) / diagnostic[l - 1],
    };
    Ok(BilateralValue {
        value,
        diagnostic,
        trend,
    })
}

/// Per-term deviations `|f_{E_n⁺}(z)/f_{E_n⁻}(z) - 1|` with `m(E_n⁺)`.
pub fn term_deviations(split: &BilateralSplit, z: C64) -> Result<Vec<(f64, f64)>> {
    split
        .plus
        .iter()
        .zip(&split.minus)
        .map(|(p, m)| Ok((p.measure(), (cayley_eval(p, z)? / cayley_eval(m, z)? - 1.0).norm())))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuotientDeviation {
    /// `1 - T(φ⁺)/T(φ⁻)`.
    pub direct: C64,
    /// `2i(φ⁺ - φ⁻)/((1 + iφ⁺)(1 - iφ⁻))`.
    pub identity: C64,
    /// `(2/δ²)|φ⁺ - φ⁻|` with `δ = min(|1 + iφ⁺|, |1 - iφ⁻|)`.
    pub bound: f64,
}

pub fn quotient_deviation(phi_plus: &InnerFunction, phi_minus: &InnerFunction, z: C64) -> Result<QuotientDeviation> {
    let a = phi_plus.eval(z)?;
    let b = phi_minus.eval(z)?;
    let direct = 1.0 - mobius_t(a)? / mobius_t(b)?;
    let (da, db) = (1.0 + I * a, 1.0 - I * b);
    let identity = 2.0 * I * (a - b) / (da * db);
    let delta = da.norm().min(db.norm());
    Ok(QuotientDeviation {
        direct,
        identity,
        bound: 2.0 / (delta * delta) * (a - b).norm(),
    })
}

/// The inner function `φ` with `T(φ) = T(φ₁) + T(φ₂)`:
/// `φ = (3iφ₁φ₂ + φ₁ + φ₂ + i)/(3 + iφ₁ + iφ₂ + φ₁φ₂)`.
pub fn cayley_sum_inner(phi1: &InnerFunction, phi2: &InnerFunction) -> Result<InnerFunction> {
    let non_rational = || Error::NonRational("Cayley sums need finite Blaschke products".into());
    let r1 = phi1.to_rational().ok_or_else(non_rational)?;
    let r2 = phi2.to_rational().ok_or_else(non_rational)?;
    let (n1, d1, n2, d2) = (&r1.num, &r1.den, &r2.num, &r2.den);
    let num = n1
        .mul(n2)
        .scale(3.0 * I)
        .add(&n1.mul(d2))
        .add(&n2.mul(d1))
        .add(&d1.mul(d2).scale(I));
    let den = d1
        .mul(d2)
        .scale(C64::new(3.0, 0.0))
        .add(&n1.mul(d2).scale(I))
        .add(&n2.mul(d1).scale(I))
        .add(&n1.mul(n2));
    rational_inner_from_bounded(&num, &den)
}

/// Winding number of `3 + iφ₁ + iφ₂ + φ₁φ₂` on `|z| = r`.
pub fn cayley_sum_denominator_winding(phi1: &InnerFunction, phi2: &InnerFunction, r: f64) -> Result<i64> {
    winding_number(
        |z| {
            let (a, b) = (phi1.eval(z)?, phi2.eval(z)?);
            Ok(3.0 + I * a + I * b + a * b)
        },
        r,
        4096,
    )
}

/// `|1 - T(w)| = √2 |1 - w|/|1 + iw|`.
pub fn t_deviation_ratio(w: C64) -> f64 {
    SQRT_2 / (1.0 + I * w).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::outer::OuterFunction;
    use crate::boundary::StepFunction;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn geometric() -> InnerSequence {
        InnerSequence::family(GeneratorSpec::GeometricArcs { first: 0.5, ratio: 0.5 }).unwrap()
    }

    #[test]
    fn verdicts_of_families() {
        assert_eq!(unilateral_verdict(&geometric(), 64).status, VerdictStatus::Converges);
        let bz = InnerSequence::family(GeneratorSpec::BlaschkeZeros { ratio: 0.5 }).unwrap();
        assert_eq!(unilateral_verdict(&bz, 64).status, VerdictStatus::Converges);
        let cases = [
            (GeneratorSpec::AlternatingRotations { scale: 1.0 }, Criterion::Theta),
            (GeneratorSpec::Monomials, Criterion::Powers),
            (GeneratorSpec::HarmonicZeros { scale: 1.0 }, Criterion::Blaschke),
            (GeneratorSpec::AtomMasses { scale: 1.0 }, Criterion::SingularMass),
            (GeneratorSpec::HarmonicArcs { scale: 0.5 }, Criterion::Blaschke),
        ];
        for (spec, tag) in cases {
            let v = unilateral_verdict(&InnerSequence::family(spec).unwrap(), 64);
            assert_eq!(v.status, VerdictStatus::Diverges);
            assert_eq!(v.failing, tag);
        }
    }

    #[test]
    fn invalid_generators() {
        assert!(InnerSequence::family(GeneratorSpec::GeometricArcs { first: 0.7, ratio: 0.5 }).is_err());
        assert!(InnerSequence::family(GeneratorSpec::BlaschkeZeros { ratio: 1.0 }).is_err());
    }

    #[test]
    fn explicit_sequences_capped() {
        let long: Vec<Term> = (1..=40).map(|n| Term::Inner(InnerFunction::blaschke(c(1.0 - 0.5f64.powi(n), 0.0)).unwrap())).collect();
        let v = unilateral_verdict(&InnerSequence::Explicit(long.clone()), 20);
        assert_eq!(v.status, VerdictStatus::Inconclusive);
        let short = InnerSequence::Explicit(long[..3].to_vec());
        assert_eq!(unilateral_verdict(&short, 64).status, VerdictStatus::Converges);
        let z = c(0.3, 0.1);
        let direct: C64 = long[..3].iter().map(|t| t.eval_t(z).unwrap()).product();
        assert!((unilateral_eval(&short, z, 64).unwrap().value - direct).norm() < 1e-15);
    }

    #[test]
    fn single_term_eval() {
        let b = InnerFunction::blaschke(c(0.2, 0.5)).unwrap();
        let seq = InnerSequence::Explicit(vec![Term::Inner(b.clone())]);
        let z = c(-0.3, 0.4);
        let v = unilateral_eval(&seq, z, 10).unwrap();
        assert!((v.value - mobius_t(b.eval(z).unwrap()).unwrap()).norm() < 1e-15);
        assert_eq!(v.tail_bound, 0.0);
    }

    #[test]
    fn divergent_eval_rejected() {
        let seq = InnerSequence::family(GeneratorSpec::Monomials).unwrap();
        assert!(matches!(unilateral_eval(&seq, c(0.1, 0.0), 16), Err(Error::NotConverged(_))));
        assert_eq!(partial_product_trace(&seq, c(0.1, 0.0), 16).unwrap().len(), 16);
    }

    #[test]
    fn geometric_argument_and_tail() {
        let trace = partial_product_trace(&geometric(), c(0.0, 0.0), 64).unwrap();
        let last = trace.last().unwrap();
        assert!((last.unwrapped_arg - PI).abs() < 1e-6);
        let mut prev = f64::INFINITY;
        for row in &trace[4..] {
            let b = row.tail_bound.unwrap();
            assert!(b <= prev);
            prev = b;
        }
    }

    #[test]
    fn tail_bound_dominates_measured_tail() {
        let z = c(0.5, 0.3);
        for seq in [geometric(), InnerSequence::family(GeneratorSpec::BlaschkeZeros { ratio: 0.7 }).unwrap()] {
            let reference = unilateral_eval(&seq, z, 400).unwrap().value;
            for k in [4, 8, 16, 32] {
                let v = unilateral_eval(&seq, z, k).unwrap();
                assert!((v.value - reference).norm() <= v.tail_bound + 1e-12, "k = {k}");
            }
        }
    }

    #[test]
    fn bilateral_two_arcs() {
        let a = ArcSet::from_pairs(&[(0.3, 1.0)]).unwrap();
        let b = ArcSet::from_pairs(&[(2.0, 3.5)]).unwrap();
        let step = StepFunction::weighted(0.0, &[(a.clone(), 1.0), (b.clone(), -1.0)]);
        let v = BoundaryGrid::from_step(512, step).unwrap();
        let split = bilateral_split(&v).unwrap();
        assert_eq!(split.plus, vec![a.clone()]);
        assert_eq!(split.minus, vec![b.clone()]);
        let z = c(0.2, -0.6);
        let val = bilateral_eval(&split, z, DEFAULT_TRUNCATION).unwrap();
        let expect = cayley_eval(&a, z).unwrap() / cayley_eval(&b, z).unwrap();
        assert!((val.value - expect).norm() < 1e-10);
        let outer = OuterFunction::from_argument(&v.scale(PI)).unwrap();
        assert!((val.value - outer.eval(z).unwrap()).norm() < 1e-9);
    }

    #[test]
    fn bilateral_zero_and_symmetric() {
        let v = BoundaryGrid::from_real_fn(64, |_| 0.0).unwrap();
        let split = bilateral_split(&v).unwrap();
        assert!(split.plus.is_empty() && split.minus.is_empty());
        assert_eq!(bilateral_eval(&split, c(0.4, 0.0), 10).unwrap().value, c(1.0, 0.0));
        let odd = odd_decreasing_split(1.0, 40).unwrap();
        let val = bilateral_eval(&odd, c(0.3, 0.2), 40).unwrap();
        assert!(val.diagnostic.iter().all(|&d| d < 1e-14));
    }

    #[test]
    fn quotient_identity_and_bound() {
        let p = InnerFunction::blaschke_product(c(1.0, 0.0), &[c(0.3, 0.4), c(-0.5, 0.1)]).unwrap();
        let m = InnerFunction::blaschke(c(0.1, -0.7)).unwrap();
        let q = quotient_deviation(&p, &m, c(0.4, 0.0)).unwrap();
        assert!((q.direct - q.identity).norm() < 1e-12);
        assert!(q.direct.norm() <= q.bound + 1e-15);
        let same = quotient_deviation(&p, &p, c(0.4, 0.0)).unwrap();
        assert!(same.direct.norm() < 1e-15);
    }

    #[test]
    fn cayley_sums() {
        let one = InnerFunction::one();
        let s = cayley_sum_inner(&one, &one).unwrap();
        assert!((s.value_at_zero() - c(0.8, 0.6)).norm() < 1e-12);
        let z1 = InnerFunction::monomial(1);
        let s = cayley_sum_inner(&z1, &z1).unwrap();
        for k in 0..50 {
            let z = C64::from_polar(0.9 * (k as f64 + 1.0) / 50.0, 0.7 * k as f64);
            let lhs = mobius_t(s.eval(z).unwrap()).unwrap();
            let rhs = 2.0 * mobius_t(z).unwrap();
            assert!((lhs - rhs).norm() < 1e-10 * rhs.norm().max(1.0));
        }
        assert_eq!(cayley_sum_denominator_winding(&z1, &z1, 0.95).unwrap(), 0);
        let atom = InnerFunction::phi_rho(1.0).unwrap();
        assert!(matches!(cayley_sum_inner(&atom, &z1), Err(Error::NonRational(_))));
    }

    proptest! {
        #[test]
        fn cayley_sum_of_blaschke(a in 0.0..0.9f64, ta in 0.0..TAU, b in 0.0..0.9f64, tb in 0.0..TAU, r in 0.0..0.9f64, t in 0.0..TAU) {
            let p1 = InnerFunction::blaschke(C64::from_polar(a, ta)).unwrap();
            let p2 = InnerFunction::blaschke(C64::from_polar(b, tb)).unwrap();
            let s = cayley_sum_inner(&p1, &p2).unwrap();
            let z = C64::from_polar(r, t);
            let lhs = mobius_t(s.eval(z).unwrap()).unwrap();
            let rhs = mobius_t(p1.eval(z).unwrap()).unwrap() + mobius_t(p2.eval(z).unwrap()).unwrap();
            prop_assert!((lhs - rhs).norm() < 1e-8 * rhs.norm().max(1.0));
        }

        #[test]
        fn product_preservation(s in 0.1..2.0f64, t in -1.0..1.0f64) {
            // w_n → 1 along a ray: Σ|1 - w_n| and Σ|1 - T(w_n)| converge together
            let ws: Vec<C64> = (4..200).map(|n| 1.0 - s * C64::from_polar(1.0, t) / (n as f64).powi(2)).collect();
            for w in ws {
                let lhs = (1.0 - mobius_t(w).unwrap()).norm();
                prop_assert!((lhs - t_deviation_ratio(w) * (1.0 - w).norm()).abs() < 1e-9 * lhs);
                prop_assert!(t_deviation_ratio(w) < 2.0);
            }
        }
    }
}

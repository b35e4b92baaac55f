//! Structural decompositions of real Smirnov functions `f = I·F`: the
//! Helson representation, the Koebe inner factorization, sums of two
//! squares, and level-set expansions of bounded integer arguments.

use std::f64::consts::TAU;

use crate::arcset::ArcSet;
use crate::boundary::{BoundaryGrid, StepFunction};
use crate::cayley::CayleyInnerFn;
use crate::disk::{C64, I};
use crate::error::{Error, Result};
use crate::expr::{helson_expr, winding_number, FunctionExpr};
use crate::inner::{boundary_probes, InnerFunction};
use crate::poly::{Polynomial, RationalFn};

/// A function `f = I·F` with inner factor `I` and outer factor `F`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSmirnovFn {
    inner: InnerFunction,
    outer: FunctionExpr,
    expr: FunctionExpr,
}

impl RealSmirnovFn {
    pub fn new(inner: InnerFunction, outer: FunctionExpr) -> Self {
        let expr = FunctionExpr::product(vec![FunctionExpr::inner(inner.clone()), outer.clone()]);
        RealSmirnovFn { inner, outer, expr }
    }

    /// An outer function (trivial inner factor).
    pub fn from_outer(outer: FunctionExpr) -> Self {
        Self::new(InnerFunction::one(), outer)
    }

    /// `K(φ) = φ · (-4/(1 - φ)²)`.
    pub fn koebe_of(phi: InnerFunction) -> Self {
        let one_minus = FunctionExpr::real(1.0).sub(FunctionExpr::inner(phi.clone()));
        let outer = FunctionExpr::product(vec![FunctionExpr::real(-4.0), FunctionExpr::power(one_minus, -2)]);
        Self::new(phi, outer)
    }

    /// `3iz/(2 - 2z²) = z · 3i/(2 - 2z²)`.
    pub fn javad() -> Self {
        let z = FunctionExpr::inner(InnerFunction::monomial(1));
        let den = FunctionExpr::real(2.0).sub(FunctionExpr::product(vec![FunctionExpr::real(2.0), FunctionExpr::power(z, 2)]));
        Self::new(
            InnerFunction::monomial(1),
            FunctionExpr::quotient(FunctionExpr::constant(3.0 * I), den),
        )
    }

    pub fn inner(&self) -> &InnerFunction {
        &self.inner
    }

    pub fn outer(&self) -> &FunctionExpr {
        &self.outer
    }

    pub fn expr(&self) -> &FunctionExpr {
        &self.expr
    }

    pub fn eval(&self, z: C64) -> Result<C64> {
        self.expr.value(z)
    }
}

/// Boundary values `(θ, f(e^{iθ}))` at the midpoints `2π(j + ½)/n`.
/// Closed-form expressions are evaluated on the circle itself; sampled
/// leaves fall back to their resolvable radius. Atoms, poles and arc
/// endpoints are skipped.
pub fn boundary_values(f: &FunctionExpr, n: usize) -> Vec<(f64, C64)> {
    (0..n)
        .filter_map(|j| {
            let theta = TAU * (j as f64 + 0.5) / n as f64;
            let zeta = C64::from_polar(1.0, theta);
            match f.value(zeta) {
                Ok(v) => Some((theta, v)),
                Err(Error::UnderResolved { limit, .. }) => f.value(zeta * limit).ok().map(|v| (theta, v)),
                Err(_) => None,
            }
            .filter(|(_, v)| v.re.is_finite() && v.im.is_finite())
        })
        .collect()
}

/// Largest relative imaginary part `|Im f|/max(1, |f|)` on the boundary.
pub fn boundary_realness(f: &FunctionExpr, n: usize) -> f64 {
    boundary_values(f, n)
        .iter()
        .map(|(_, v)| v.im.abs() / v.norm().max(1.0))
        .fold(0.0, f64::max)
}

/// Relatively prime inner functions with `(f - i)/(f + i) = ψ₂/ψ₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct HelsonPair {
    pub psi1: InnerFunction,
    pub psi2: InnerFunction,
    /// Zeros common to both within `1e-8`, removed from both factors.
    pub merged: Vec<C64>,
}

impl HelsonPair {
    /// `i(ψ₁ + ψ₂)/(ψ₁ - ψ₂)`.
    pub fn reconstruct(&self) -> FunctionExpr {
        helson_expr(&self.psi1, &self.psi2)
    }

    /// Winding numbers of `ψ₁ - ψ₂` on `|z| = 0.5` and `|z| = 0.9`; zero
    /// means no zeros inside, consistent with `ψ₁ - ψ₂` being outer.
    pub fn difference_winding(&self) -> Result<[i64; 2]> {
        let d = |z: C64| Ok(self.psi1.eval(z)? - self.psi2.eval(z)?);
        Ok([winding_number(d, 0.5, 4096)?, winding_number(d, 0.9, 4096)?])
    }
}

const HELSON_MERGE_TOL: f64 = 1e-8;

/// Helson representation of a rational real Smirnov function.
pub fn helson_decompose(f: &RealSmirnovFn) -> Result<HelsonPair> {
    let r = f
        .expr()
        .to_rational()
        .ok_or_else(|| Error::NonRational("the Helson representation needs rational data".into()))?;
    helson_decompose_rational(&r)
}

pub fn helson_decompose_rational(f: &RationalFn) -> Result<HelsonPair> {
    let (p, q) = (&f.num, &f.den);
    let mut max_imag: f64 = 0.0;
    for z in boundary_probes(64) {
        let d = q.eval(z);
        if d.norm() < 1e-8 * p.eval(z).norm().max(1.0) {
            continue;
        }
        let v = p.eval(z) / d;
        max_imag = max_imag.max(v.im.abs() / v.norm().max(1.0));
    }
    if max_imag > 1e-8 {
        return Err(Error::NonReal { max_imag });
    }
    let plus = p.add(&q.scale(I));
    let minus = p.add(&q.scale(-I));
    if plus.is_zero() || minus.is_zero() {
        return Err(Error::NonReal { max_imag: 1.0 });
    }
    let inside = |poly: &Polynomial| -> Result<Vec<C64>> {
        Ok(poly.roots()?.into_iter().filter(|z| z.norm() < 1.0).collect())
    };
    let mut z1 = inside(&plus)?;
    let mut z2 = inside(&minus)?;
    let mut merged = Vec::new();
    z1.retain(|a| {
        if let Some(k) = z2.iter().position(|b| (a - b).norm() < HELSON_MERGE_TOL) {
            merged.push(*a);
            z2.remove(k);
            false
        } else {
            true
        }
    });
    let one = C64::new(1.0, 0.0);
    let psi1 = InnerFunction::blaschke_product(one, &z1)?;
    let base2 = InnerFunction::blaschke_product(one, &z2)?;
    let mut acc = C64::new(0.0, 0.0);
    for z in boundary_probes(16) {
        let target = minus.eval(z) / plus.eval(z);
        let q = target * psi1.eval(z)? / base2.eval(z)?;
        acc += q / q.norm();
    }
    let psi2 = base2.multiply(&InnerFunction::constant(acc / acc.norm())?);
    Ok(HelsonPair { psi1, psi2, merged })
}

/// `f = K_f · R_f` with `K_f = K(I_f)` Koebe inner and `R_f` outer.
#[derive(Debug, Clone, PartialEq)]
pub struct KoebeFactorization {
    pub k_part: FunctionExpr,
    pub r_part: RealSmirnovFn,
}

/// Koebe factorization: `K_f = K(I_f)` and `R_f = -¼(1 - I_f)² F`. A
/// constant inner factor `c` is replaced by `i`, moving `c/i` into `F`.
pub fn koebe_factor(f: &RealSmirnovFn) -> KoebeFactorization {
    let (inner, outer) = if f.inner().is_constant() {
        let c = f.inner().xi();
        let moved = FunctionExpr::product(vec![FunctionExpr::constant(c / I), f.outer().clone()]);
        (InnerFunction::constant(I).expect("unimodular"), moved)
    } else {
        (f.inner().clone(), f.outer().clone())
    };
    let i_expr = FunctionExpr::inner(inner);
    let k_part = FunctionExpr::apply_k(i_expr.clone());
    let one_minus = FunctionExpr::real(1.0).sub(i_expr);
    let r = FunctionExpr::product(vec![FunctionExpr::real(-0.25), FunctionExpr::power(one_minus, 2), outer]);
    KoebeFactorization {
        k_part,
        r_part: RealSmirnovFn::from_outer(r),
    }
}

/// Boundary comparison of a Koebe factorization against `f`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct KoebeBoundaryReport {
    /// Samples where both sides could be evaluated.
    pub checked: usize,
    /// Samples where `f` is real (relative `|Im| < 1e-6`).
    pub real_samples: usize,
    /// `max(|R_f| - |f|)` relative to `max(1, |f|)`, over all samples.
    pub modulus_excess: f64,
    /// Real samples where `R_f` and `f` have different signs.
    pub sign_mismatches: usize,
    /// Smallest `K_f` value at real samples (`K ≥ 1` expected).
    pub min_k: f64,
}

pub fn koebe_boundary_check(f: &RealSmirnovFn, kf: &KoebeFactorization, n: usize) -> KoebeBoundaryReport {
    let mut rep = KoebeBoundaryReport {
        checked: 0,
        real_samples: 0,
        modulus_excess: f64::NEG_INFINITY,
        sign_mismatches: 0,
        min_k: f64::INFINITY,
    };
    for (theta, fv) in boundary_values(f.expr(), n) {
        let zeta = C64::from_polar(1.0, theta);
        let (Ok(rv), Ok(kv)) = (kf.r_part.eval(zeta), kf.k_part.value(zeta)) else {
            continue;
        };
        rep.checked += 1;
        let scale = fv.norm().max(1.0);
        rep.modulus_excess = rep.modulus_excess.max((rv.norm() - fv.norm()) / scale);
        if fv.im.abs() < 1e-6 * scale && fv.re.abs() > 1e-9 * scale {
            rep.real_samples += 1;
            if rv.re.signum() != fv.re.signum() {
                rep.sign_mismatches += 1;
            }
            rep.min_k = rep.min_k.min(kv.re);
        }
    }
    rep
}

/// `f = g₁² + g₂²` with `g₁, g₂` real on the boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct SumOfSquares {
    pub g1: RealSmirnovFn,
    pub g2: RealSmirnovFn,
}

/// `g₁ = ½(1 + I_f)√F`, `g₂ = (i/2)(1 - I_f)√F` for `f ≥ 0` on the
/// circle; nonnegativity is checked at `n` boundary samples.
pub fn sum_of_squares(f: &RealSmirnovFn, n: usize) -> Result<SumOfSquares> {
    for (theta, v) in boundary_values(f.expr(), n) {
        let scale = v.norm().max(1.0);
        if v.im.abs() < 1e-6 * scale && v.re < -1e-9 * scale {
            return Err(Error::Negativity { theta, value: v });
        }
    }
    let i_expr = FunctionExpr::inner(f.inner().clone());
    let root = FunctionExpr::sqrt_outer(f.outer().clone());
    let one = FunctionExpr::real(1.0);
    let g1 = FunctionExpr::product(vec![
        FunctionExpr::real(0.5),
        FunctionExpr::sum(vec![one.clone(), i_expr.clone()]),
        root.clone(),
    ]);
    let g2 = FunctionExpr::product(vec![FunctionExpr::constant(0.5 * I), one.sub(i_expr), root]);
    Ok(SumOfSquares {
        g1: RealSmirnovFn::from_outer(g1),
        g2: RealSmirnovFn::from_outer(g2),
    })
}

fn integer_levels(v: &BoundaryGrid, allow_negative: bool) -> Result<StepFunction> {
    let step = v.step_function().ok_or(Error::NonReal {
        max_imag: v.values().iter().map(|x| x.im.abs()).fold(0.0, f64::max),
    })?;
    for (index, &value) in step.levels().iter().enumerate() {
        if (value - value.round()).abs() > 1e-9 {
            return Err(Error::NonInteger { index, value });
        }
        if !allow_negative && value.round() < 0.0 {
            return Err(Error::NegativeLevel { index, value });
        }
    }
    Ok(step.map(f64::round))
}

/// Integer step function behind a grid, for level-set decompositions.
pub(crate) fn integer_step(v: &BoundaryGrid, allow_negative: bool) -> Result<StepFunction> {
    integer_levels(v, allow_negative)
}

/// Level sets `E_n = {v ≥ n}`, `n = 1..max v`, of a nonnegative
/// integer-valued boundary function.
pub fn bounded_arg_expand(v: &BoundaryGrid) -> Result<Vec<ArcSet>> {
    let step = integer_levels(v, false)?;
    let top = step.levels().iter().fold(0.0f64, |a, &b| a.max(b)) as i64;
    Ok((1..=top).map(|n| step.level_set_ge(n as f64 - 0.5)).collect())
}

/// `∏ f_{E_n}` as an expression.
pub fn level_set_product(sets: &[ArcSet]) -> FunctionExpr {
    FunctionExpr::product(
        sets.iter()
            .map(|s| FunctionExpr::cayley(CayleyInnerFn::new(s.clone(), 1.0).expect("unit scale")))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disk::koebe_k;
    use crate::outer::OuterFunction;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn probes(count: usize, r: f64) -> Vec<C64> {
        (0..count)
            .map(|k| C64::from_polar(r * ((k % 7) as f64 + 1.0) / 7.0, 2.39996 * k as f64))
            .collect()
    }

    #[test]
    fn helson_halfplane() {
        let f = RealSmirnovFn::from_outer(crate::expr::halfplane());
        let pair = helson_decompose(&f).unwrap();
        assert!(pair.psi1.is_constant());
        assert!((pair.psi1.value_at_zero() - 1.0).norm() < 1e-12);
        assert_eq!(pair.psi2.power(), 1);
        let rec = pair.reconstruct();
        for z in probes(50, 0.9) {
            assert!((rec.value(z).unwrap() - f.eval(z).unwrap()).norm() < 1e-9 * f.eval(z).unwrap().norm().max(1.0));
        }
    }

    #[test]
    fn helson_javad_factors() {
        let pair = helson_decompose(&RealSmirnovFn::javad()).unwrap();
        assert!(pair.merged.is_empty());
        for z in probes(30, 0.95) {
            assert!((pair.psi1.eval(z).unwrap() - (z + 0.5) / (1.0 + 0.5 * z)).norm() < 1e-12);
            assert!((pair.psi2.eval(z).unwrap() - (z - 0.5) / (1.0 - 0.5 * z)).norm() < 1e-12);
        }
        assert_eq!(pair.difference_winding().unwrap(), [0, 0]);
    }

    #[test]
    fn helson_constant() {
        let f = RealSmirnovFn::from_outer(FunctionExpr::real(2.5));
        let pair = helson_decompose(&f).unwrap();
        assert!(pair.psi1.is_constant() && pair.psi2.is_constant());
        let expect = c(2.5, -1.0) / c(2.5, 1.0);
        assert!((pair.psi2.value_at_zero() / pair.psi1.value_at_zero() - expect).norm() < 1e-12);
    }

    #[test]
    fn helson_rejects_non_real() {
        let f = RealSmirnovFn::from_outer(FunctionExpr::constant(I));
        assert!(helson_decompose(&f).is_err());
        let g = RealSmirnovFn::new(InnerFunction::monomial(1), FunctionExpr::real(1.0));
        assert!(matches!(helson_decompose(&g), Err(Error::NonReal { .. })));
        let h = RealSmirnovFn::from_outer(FunctionExpr::outer(OuterFunction::unit(64).unwrap()));
        assert!(matches!(helson_decompose(&h), Err(Error::NonRational(_))));
    }

    #[test]
    fn koebe_of_z() {
        let f = RealSmirnovFn::new(InnerFunction::monomial(1), FunctionExpr::real(1.0));
        let kf = koebe_factor(&f);
        for z in probes(50, 0.95) {
            let k = kf.k_part.value(z).unwrap();
            assert!((k - koebe_k(z).unwrap()).norm() < 1e-12 * k.norm().max(1.0));
            let r = kf.r_part.eval(z).unwrap();
            assert!((r + 0.25 * (1.0 - z) * (1.0 - z)).norm() < 1e-14);
            assert!((k * r - z).norm() < 1e-12);
        }
    }

    #[test]
    fn koebe_constant_inner() {
        let f = RealSmirnovFn::new(InnerFunction::constant(c(-1.0, 0.0)).unwrap(), FunctionExpr::real(3.0));
        let kf = koebe_factor(&f);
        let z = c(0.1, 0.2);
        assert!((kf.k_part.value(z).unwrap() - 2.0).norm() < 1e-14);
        assert!((kf.r_part.eval(z).unwrap() + 1.5).norm() < 1e-14);
    }

    #[test]
    fn koebe_boundary_order() {
        let f = RealSmirnovFn::javad();
        let kf = koebe_factor(&f);
        let rep = koebe_boundary_check(&f, &kf, 512);
        assert!(rep.real_samples > 400);
        assert!(rep.modulus_excess <= 1e-12);
        assert_eq!(rep.sign_mismatches, 0);
        assert!(rep.min_k >= 1.0 - 1e-9);
    }

    #[test]
    fn squares_of_koebe() {
        let f = RealSmirnovFn::koebe_of(InnerFunction::monomial(1));
        let s = sum_of_squares(&f, 256).unwrap();
        for z in probes(50, 0.9) {
            let g1 = s.g1.eval(z).unwrap();
            let g2 = s.g2.eval(z).unwrap();
            assert!((g1 - I * (1.0 + z) / (1.0 - z)).norm() < 1e-10 * g1.norm().max(1.0));
            assert!((g2 + 1.0).norm() < 1e-12);
            assert!((g1 * g1 + g2 * g2 - f.eval(z).unwrap()).norm() < 1e-8 * f.eval(z).unwrap().norm().max(1.0));
        }
    }

    #[test]
    fn squares_of_constant_and_negativity() {
        let f = RealSmirnovFn::from_outer(FunctionExpr::real(9.0));
        let s = sum_of_squares(&f, 64).unwrap();
        let z = c(0.3, 0.1);
        assert!((s.g1.eval(z).unwrap() - 3.0).norm() < 1e-14);
        assert!(s.g2.eval(z).unwrap().norm() < 1e-14);
        assert!(matches!(sum_of_squares(&RealSmirnovFn::javad(), 64), Err(Error::Negativity { .. })));
    }

    #[test]
    fn level_sets_of_staircase() {
        let a = ArcSet::from_pairs(&[(0.2, 2.8)]).unwrap();
        let b = ArcSet::from_pairs(&[(0.5, 2.0)]).unwrap();
        let cc = ArcSet::from_pairs(&[(1.0, 1.5)]).unwrap();
        let step = StepFunction::weighted(0.0, &[(a.clone(), 1.0), (b.clone(), 1.0), (cc.clone(), 1.0)]);
        let v = BoundaryGrid::from_step(1024, step).unwrap();
        let sets = bounded_arg_expand(&v).unwrap();
        assert_eq!(sets.len(), 3);
        for (s, e) in sets.iter().zip([&a, &b, &cc]) {
            assert!((s.measure() - e.measure()).abs() < 1e-14);
        }
        let prod = level_set_product(&sets);
        let outer = OuterFunction::from_argument(&v.scale(PI)).unwrap();
        for z in probes(40, 0.95) {
            assert!((prod.value(z).unwrap() - outer.eval(z).unwrap()).norm() < 1e-8);
        }
    }

    #[test]
    fn level_sets_from_samples_and_errors() {
        let set = ArcSet::from_pairs(&[(1.0, 2.0)]).unwrap();
        let ind = BoundaryGrid::indicator(256, &set).unwrap();
        let twice = BoundaryGrid::from_real(ind.real_values().iter().map(|x| 2.0 * x).collect()).unwrap();
        let sets = bounded_arg_expand(&twice).unwrap();
        assert_eq!(sets.len(), 2);
        assert_eq!(sets[0], sets[1]);
        assert!((sets[0].measure() - set.measure()).abs() < 2.0 / 256.0);
        let half = BoundaryGrid::from_real_fn(64, |_| 0.5).unwrap();
        assert!(matches!(bounded_arg_expand(&half), Err(Error::NonInteger { .. })));
        let neg = BoundaryGrid::from_real_fn(64, |_| -1.0).unwrap();
        assert!(matches!(bounded_arg_expand(&neg), Err(Error::NegativeLevel { .. })));
    }
}

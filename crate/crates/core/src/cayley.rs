//! Cayley inner functions `f_E = exp[π(-ṽ_E + i v_E)]` of finite arc unions
//! and their inner counterparts `φ_E = T⁻¹(f_E)`.
//!
//! For a single arc `E = [β, α)` the function has the closed form
//! `f_E(z) = e^{-i(α-β)/2} (e^{iα} - z)/(e^{iβ} - z)`, and a finite union is
//! the product over its arcs.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::arcset::ArcSet;
use crate::boundary::herglotz_arc;
use crate::disk::{mobius_t, C64, I, TAU_POLE};
use crate::error::{Error, Result};
use crate::inner::{rational_inner_from_bounded, InnerFunction};
use crate::poly::Polynomial;

pub use crate::arcset::Arc;

fn check_point(set: &ArcSet, z: C64) -> Result<()> {
    if !z.re.is_finite() || !z.im.is_finite() || z.norm() > 1.0 + 1e-12 {
        return Err(Error::OutsideDisk(z));
    }
    if z.norm() > 1.0 - 2.0 * TAU_POLE {
        for t in set.endpoints() {
            let e = C64::from_polar(1.0, t);
            if (z - e).norm() < TAU_POLE {
                return Err(Error::AtArcEndpoint { endpoint: e });
            }
        }
    }
    Ok(())
}

/// `f_E(z)` as the product of per-arc closed forms; valid on the closed disk
/// away from arc endpoints.
pub fn cayley_eval(set: &ArcSet, z: C64) -> Result<C64> {
    check_point(set, z)?;
    let mut v = C64::new(1.0, 0.0);
    for arc in set.arcs() {
        if arc.is_full() {
            v = -v;
            continue;
        }
        let ea = C64::from_polar(1.0, arc.alpha);
        let eb = C64::from_polar(1.0, arc.beta);
        v *= C64::from_polar(1.0, -0.5 * arc.length()) * (ea - z) / (eb - z);
    }
    Ok(v)
}

/// `f_E(z) = exp(iπ ∫ (ζ + z)/(ζ - z) χ_E dm)` computed from the Herglotz
/// integral of each arc; agrees with [`cayley_eval`] in the open disk.
pub fn cayley_eval_herglotz(set: &ArcSet, z: C64) -> Result<C64> {
    if z.norm() >= 1.0 {
        return Err(Error::OutsideDisk(z));
    }
    let h: C64 = set
        .arcs()
        .iter()
        .map(|a| herglotz_arc(a.beta, a.alpha, z))
        .sum();
    Ok((I * PI * h).exp())
}

/// Numerator and denominator polynomials of `f_E`.
pub fn cayley_rational(set: &ArcSet) -> (Polynomial, Polynomial) {
    let mut num = Polynomial::constant(C64::new(1.0, 0.0));
    let mut den = Polynomial::constant(C64::new(1.0, 0.0));
    for arc in set.arcs() {
        if arc.is_full() {
            num = num.scale(C64::new(-1.0, 0.0));
            continue;
        }
        let rot = C64::from_polar(1.0, -0.5 * arc.length());
        num = num.mul(&Polynomial::new(vec![rot * C64::from_polar(1.0, arc.alpha), -rot]));
        den = den.mul(&Polynomial::new(vec![C64::from_polar(1.0, arc.beta), C64::new(-1.0, 0.0)]));
    }
    (num, den)
}

/// A Cayley inner function with an optional positive scale.
#[derive(Debug, Clone, PartialEq)]
pub struct CayleyInnerFn {
    set: ArcSet,
    scale: f64,
}

impl CayleyInnerFn {
    pub fn new(set: ArcSet, scale: f64) -> Result<Self> {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::InvalidParameter(format!("Cayley scale {scale} must be positive")));
        }
        Ok(CayleyInnerFn { set, scale })
    }

    pub fn set(&self) -> &ArcSet {
        &self.set
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn eval(&self, z: C64) -> Result<C64> {
        Ok(self.scale * cayley_eval(&self.set, z)?)
    }
}

/// How [`phi_from_arcset`] obtained its result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhiRoute {
    /// Single arc of measure at most 1/2: the closed-form zero.
    ClosedForm,
    /// `T⁻¹(f_E)` recovered as a rational inner function (several arcs, or
    /// one arc of measure above 1/2).
    Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhiE {
    pub inner: InnerFunction,
    pub route: PhiRoute,
}

/// Zero `z_E = e^{i(α+β)/2} tan((π - (α - β))/4)` of `φ_E` for one arc.
pub fn arc_zero(arc: &Arc) -> C64 {
    C64::from_polar(((PI - arc.length()) / 4.0).tan(), arc.midpoint())
}

/// `φ_E(0) = tan(π/2 (1/2 - m(E)))`.
pub fn phi_at_zero(measure: f64) -> f64 {
    (FRAC_PI_2 * (0.5 - measure)).tan()
}

/// `1 - φ_E(0)` for a set of measure `m`, without cancellation:
/// `2 tan(πm/2)/(1 + tan(πm/2))`.
pub fn one_minus_phi_at_zero(measure: f64) -> f64 {
    let t = (FRAC_PI_2 * measure).tan();
    2.0 * t / (1.0 + t)
}

/// The finite Blaschke product `φ_E = T⁻¹(f_E)`.
pub fn phi_from_arcset(set: &ArcSet) -> Result<PhiE> {
    if set.is_empty() {
        return Ok(PhiE {
            inner: InnerFunction::one(),
            route: PhiRoute::ClosedForm,
        });
    }
    if set.is_full() {
        return Ok(PhiE {
            inner: InnerFunction::constant(C64::new(-1.0, 0.0))?,
            route: PhiRoute::ClosedForm,
        });
    }
    if set.len() == 1 && set.measure() <= 0.5 + 1e-15 {
        let arc = set.arcs()[0];
        let zero = arc_zero(&arc);
        if zero.norm() < 1e-15 {
            // m(E) = 1/2: φ_E = ξ z with ξ fixed by T(φ_E) = f_E.
            let z0 = C64::from_polar(0.5, arc.midpoint());
            let phi = crate::disk::mobius_t_inv(cayley_eval(set, z0)?)?;
            let xi = phi / z0;
            let inner = InnerFunction::new(xi / xi.norm(), 1, Vec::new(), Vec::new())?;
            return Ok(PhiE {
                inner,
                route: PhiRoute::ClosedForm,
            });
        }
        return Ok(PhiE {
            inner: InnerFunction::blaschke(zero)?,
            route: PhiRoute::ClosedForm,
        });
    }
    let (n, d) = cayley_rational(set);
    // φ = i(f - i)/(f + i) = i(N - iD)/(N + iD)
    let num = n.add(&d.scale(-I)).scale(I);
    let den = n.add(&d.scale(I));
    let inner = rational_inner_from_bounded(&num, &den)?;
    for k in 0..16 {
        let z = C64::from_polar(0.5, TAU * k as f64 / 16.0 + 0.1);
        let f = cayley_eval(set, z)?;
        let tf = mobius_t(inner.eval(z)?)?;
        if (tf - f).norm() > 1e-8 * f.norm().max(1.0) {
            return Err(Error::NotInner {
                deviation: (tf - f).norm(),
            });
        }
    }
    Ok(PhiE {
        inner,
        route: PhiRoute::Rational,
    })
}

/// The quantities linking an inner function to a set through `I(0)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ImpliedMeasure {
    /// `I(0)`, real.
    pub value_at_zero: f64,
    /// `|I(0)| = e^{-μ(𝕋)} ∏|z_n|`.
    pub modulus: f64,
    /// `m(E)` solving `tan(π/2 (1/2 - m)) = I(0)`.
    pub measure: f64,
}

pub fn arcset_from_inner_check(inner: &InnerFunction) -> Result<ImpliedMeasure> {
    let v = inner.value_at_zero();
    if v.norm() == 0.0 {
        return Err(Error::ZeroAtOrigin);
    }
    if v.im.abs() > 1e-12 * v.norm().max(1.0) {
        return Err(Error::NotRealAtOrigin(v));
    }
    let modulus = (-inner.singular_mass()).exp()
        * inner.zeros().iter().map(|z| z.at.norm().powi(z.multiplicity as i32)).product::<f64>();
    Ok(ImpliedMeasure {
        value_at_zero: v.re,
        modulus,
        measure: 0.5 - v.re.atan() / FRAC_PI_2,
    })
}

/// `m(E(ρ)) = 1/2 - (2/π) arctan(e^{-ρ})` for `E(ρ) = {Re φ_ρ < 0}`.
pub fn atomic_level_measure(rho: f64) -> f64 {
    0.5 - (-rho).exp().atan() / FRAC_PI_2
}

/// The boundary point `(mπ - 2ρi)/(mπ + 2ρi)` where `ρ cot(θ/2) = -mπ/2`.
pub fn atomic_level_endpoint(rho: f64, m: i64) -> C64 {
    let x = m as f64 * PI;
    C64::new(x, -2.0 * rho) / C64::new(x, 2.0 * rho)
}

/// Angle in `(0, 2π)` of the endpoint with index `m`.
fn atomic_level_angle(rho: f64, m: i64) -> f64 {
    let x = -(m as f64) * PI / (2.0 * rho);
    2.0 * 1f64.atan2(x)
}

/// The arcs `I_n(ρ)` between the endpoints of index `4n + 1` and `4n + 3`,
/// for `n_lo ≤ n ≤ n_hi`.
pub fn atomic_level_arcs(rho: f64, n_lo: i64, n_hi: i64) -> Result<ArcSet> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::InvalidParameter(format!("rho = {rho} must be positive")));
    }
    if n_lo > n_hi {
        return Ok(ArcSet::empty());
    }
    let pairs: Vec<(f64, f64)> = (n_lo..=n_hi)
        .map(|n| (atomic_level_angle(rho, 4 * n + 1), atomic_level_angle(rho, 4 * n + 3)))
        .collect();
    ArcSet::from_pairs(&pairs)
}

/// Upper bound on the measure of the arcs `I_n(ρ)` with `n` outside
/// `[n_lo, n_hi]`: those with `n > n_hi` lie above the endpoint of index
/// `4 n_hi + 5`, those with `n < n_lo` below the one of index `4 n_lo - 1`.
pub fn atomic_level_tail_bound(rho: f64, n_lo: i64, n_hi: i64) -> f64 {
    let upper = (TAU - atomic_level_angle(rho, 4 * n_hi + 5)) / TAU;
    let lower = atomic_level_angle(rho, 4 * n_lo - 1) / TAU;
    upper + lower
}

/// Stage `depth` of the fat Cantor construction on the circle: starting
/// from `[0, 1)` (angle `2πx`), stage `k` removes from each remaining
/// interval its centred open middle piece of length `fatness · 4^{-(k+1)}`.
pub fn cantor_stage(depth: u32, fatness: f64) -> Result<ArcSet> {
    if depth > 20 {
        return Err(Error::InvalidParameter(format!("Cantor depth {depth} exceeds 20")));
    }
    if !(fatness > 0.0 && fatness <= 1.0) {
        return Err(Error::InvalidParameter(format!("fatness {fatness} not in (0, 1]")));
    }
    let mut intervals = vec![(0.0f64, 1.0f64)];
    for k in 0..depth {
        let gap = fatness * 4f64.powi(-(k as i32 + 1));
        let mut next = Vec::with_capacity(intervals.len() * 2);
        for (a, b) in intervals {
            let mid = 0.5 * (a + b);
            next.push((a, mid - 0.5 * gap));
            next.push((mid + 0.5 * gap, b));
        }
        intervals = next;
    }
    let pairs: Vec<(f64, f64)> = intervals.iter().map(|&(a, b)| (TAU * a, TAU * b)).collect();
    ArcSet::from_pairs(&pairs)
}

/// Measure of [`cantor_stage`]: `1 - (c/2)(1 - 2^{-depth})`.
pub fn cantor_measure(depth: u32, fatness: f64) -> f64 {
    1.0 - 0.5 * fatness * (1.0 - 2f64.powi(-(depth as i32)))
}

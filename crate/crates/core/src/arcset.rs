//! Finite unions of half-open circular arcs.
//!
//! An arc `(β, α)` stands for the angles `β ≤ θ < α` (mod 2π) with
//! `0 ≤ β < 2π` and `β < α ≤ β + 2π`. Sets are kept normalized: arcs are
//! disjoint, sorted by `β`, and never touch (touching arcs are merged, also
//! across the angle 0).

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gaps or overlaps smaller than this are treated as touching.
const MERGE_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub beta: f64,
    pub alpha: f64,
}

impl Arc {
    pub fn length(&self) -> f64 {
        self.alpha - self.beta
    }

    pub fn measure(&self) -> f64 {
        self.length() / TAU
    }

    pub fn is_full(&self) -> bool {
        self.length() >= TAU - MERGE_TOL
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.alpha + self.beta)
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ArcSet {
    arcs: Vec<Arc>,
}

impl ArcSet {
    pub fn empty() -> Self {
        ArcSet { arcs: Vec::new() }
    }

    pub fn full() -> Self {
        ArcSet {
            arcs: vec![Arc { beta: 0.0, alpha: TAU }],
        }
    }

    /// Builds a set from `(β, α)` pairs with `β < α ≤ β + 2π`; overlapping
    /// input arcs are merged.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        let mut pieces = Vec::with_capacity(pairs.len() + 1);
        for &(beta, alpha) in pairs {
            if !beta.is_finite() || !alpha.is_finite() {
                return Err(Error::InvalidArc(format!("non-finite endpoint ({beta}, {alpha})")));
            }
            let len = alpha - beta;
            if len <= 0.0 {
                return Err(Error::InvalidArc(format!("empty or reversed arc ({beta}, {alpha})")));
            }
            if len > TAU + MERGE_TOL {
                return Err(Error::InvalidArc(format!("arc ({beta}, {alpha}) exceeds the circle")));
            }
            push_linear(&mut pieces, beta.rem_euclid(TAU), len.min(TAU));
        }
        Ok(Self::from_linear(pieces))
    }

    /// A single arc of angular length `2π·measure` starting at `beta`.
    pub fn single(beta: f64, measure: f64) -> Result<Self> {
        Self::from_pairs(&[(beta, beta + TAU * measure)])
    }

    fn from_linear(mut pieces: Vec<(f64, f64)>) -> Self {
        pieces.retain(|&(a, b)| b - a > 0.0);
        pieces.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(pieces.len());
        for (a, b) in pieces {
            match merged.last_mut() {
                Some(last) if a <= last.1 + MERGE_TOL => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        if merged.len() == 1 && merged[0].0 <= MERGE_TOL && merged[0].1 >= TAU - MERGE_TOL {
            return Self::full();
        }
        let mut arcs: Vec<Arc> = merged
            .iter()
            .map(|&(a, b)| Arc { beta: a, alpha: b.min(TAU) })
            .collect();
        if arcs.len() >= 2 {
            let wraps = arcs[0].beta <= MERGE_TOL && arcs[arcs.len() - 1].alpha >= TAU - MERGE_TOL;
            if wraps {
                let first = arcs.remove(0);
                let last = arcs.last_mut().expect("at least one arc remains");
                last.alpha = first.alpha + TAU;
            }
        }
        ArcSet { arcs }
    }

    /// The set as sorted disjoint intervals of `[0, 2π)`; an arc crossing
    /// the angle 0 is split in two.
    pub fn linear_pieces(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(self.arcs.len() + 1);
        for arc in &self.arcs {
            push_linear(&mut out, arc.beta, arc.length());
        }
        out.sort_by(|x, y| x.0.total_cmp(&y.0));
        out
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.arcs.len() == 1 && self.arcs[0].is_full()
    }

    /// Normalized Lebesgue measure `m(E)`.
    pub fn measure(&self) -> f64 {
        self.arcs.iter().map(Arc::measure).sum()
    }

    /// Membership with the half-open convention.
    pub fn contains(&self, theta: f64) -> bool {
        let t = theta.rem_euclid(TAU);
        self.linear_pieces().iter().any(|&(a, b)| a <= t && t < b)
    }

    /// Arc endpoints (each `β` and `α` reduced to `[0, 2π)`), excluding the
    /// full circle which has none.
    pub fn endpoints(&self) -> Vec<f64> {
        if self.is_full() {
            return Vec::new();
        }
        self.arcs
            .iter()
            .flat_map(|a| [a.beta, a.alpha.rem_euclid(TAU)])
            .collect()
    }

    pub fn union(&self, other: &ArcSet) -> ArcSet {
        let mut pieces = self.linear_pieces();
        pieces.extend(other.linear_pieces());
        Self::from_linear(pieces)
    }

    pub fn intersect(&self, other: &ArcSet) -> ArcSet {
        let a = self.linear_pieces();
        let b = other.linear_pieces();
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let lo = a[i].0.max(b[j].0);
            let hi = a[i].1.min(b[j].1);
            if hi - lo > MERGE_TOL {
                out.push((lo, hi));
            }
            if a[i].1 < b[j].1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self::from_linear(out)
    }

    pub fn complement(&self) -> ArcSet {
        let mut out = Vec::new();
        let mut cursor = 0.0;
        for (a, b) in self.linear_pieces() {
            if a - cursor > MERGE_TOL {
                out.push((cursor, a));
            }
            cursor = cursor.max(b);
        }
        if TAU - cursor > MERGE_TOL {
            out.push((cursor, TAU));
        }
        Self::from_linear(out)
    }

    pub fn difference(&self, other: &ArcSet) -> ArcSet {
        self.intersect(&other.complement())
    }

    /// Rotation by `phi` radians.
    pub fn rotate(&self, phi: f64) -> ArcSet {
        let pairs: Vec<(f64, f64)> = self
            .arcs
            .iter()
            .map(|a| (a.beta + phi, a.alpha + phi))
            .collect();
        Self::from_pairs(&pairs).expect("rotation preserves validity")
    }

    /// Reflection `θ ↦ -θ` (complex conjugation on the circle).
    pub fn conjugate(&self) -> ArcSet {
        let pairs: Vec<(f64, f64)> = self
            .arcs
            .iter()
            .map(|a| (-a.alpha, -a.beta))
            .collect();
        Self::from_pairs(&pairs).expect("reflection preserves validity")
    }
}

fn push_linear(out: &mut Vec<(f64, f64)>, beta: f64, len: f64) {
    let end = beta + len;
    if end <= TAU {
        out.push((beta, end));
    } else {
        out.push((beta, TAU));
        out.push((0.0, end - TAU));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn union_with_empty_is_identity() {
        let e = ArcSet::from_pairs(&[(0.3, 1.2), (2.0, 2.5)]).unwrap();
        assert_eq!(e.union(&ArcSet::empty()), e);
    }

    #[test]
    fn complement_of_upper_half() {
        let e = ArcSet::from_pairs(&[(0.0, PI)]).unwrap();
        let c = e.complement();
        assert_eq!(c.len(), 1);
        assert!((c.arcs()[0].beta - PI).abs() < 1e-15);
        assert!((c.arcs()[0].alpha - TAU).abs() < 1e-15);
    }

    #[test]
    fn wrap_around_arcs_merge() {
        let e = ArcSet::from_pairs(&[(5.5, TAU), (0.0, 0.5)]).unwrap();
        assert_eq!(e.len(), 1);
        assert!((e.arcs()[0].beta - 5.5).abs() < 1e-15);
        assert!((e.arcs()[0].alpha - (0.5 + TAU)).abs() < 1e-15);
        assert!(e.contains(0.1));
        assert!(e.contains(6.0));
        assert!(!e.contains(3.0));
    }

    #[test]
    fn full_circle_and_complement() {
        assert!(ArcSet::full().complement().is_empty());
        assert!(ArcSet::empty().complement().is_full());
        assert!(ArcSet::from_pairs(&[(1.0, 1.0 + TAU)]).unwrap().is_full());
    }

    #[test]
    fn half_open_membership() {
        let e = ArcSet::from_pairs(&[(1.0, 2.0)]).unwrap();
        assert!(e.contains(1.0));
        assert!(!e.contains(2.0));
    }

    #[test]
    fn invalid_arcs_rejected() {
        assert!(ArcSet::from_pairs(&[(1.0, 0.5)]).is_err());
        assert!(ArcSet::from_pairs(&[(0.0, 7.0)]).is_err());
        assert!(ArcSet::from_pairs(&[(f64::NAN, 1.0)]).is_err());
    }

    fn arc_pairs() -> impl Strategy<Value = Vec<(f64, f64)>> {
        prop::collection::vec((0.0..TAU, 0.01..3.0f64), 1..5)
            .prop_map(|v| v.into_iter().map(|(b, l)| (b, b + l)).collect())
    }

    proptest! {
        #[test]
        fn inclusion_exclusion(a in arc_pairs(), b in arc_pairs()) {
            let e = ArcSet::from_pairs(&a).unwrap();
            let f = ArcSet::from_pairs(&b).unwrap();
            let lhs = e.union(&f).measure() + e.intersect(&f).measure();
            let rhs = e.measure() + f.measure();
            prop_assert!((lhs - rhs).abs() < 1e-12);
        }

        #[test]
        fn complement_partitions_circle(a in arc_pairs(), t in 0.0..TAU) {
            let e = ArcSet::from_pairs(&a).unwrap();
            let c = e.complement();
            prop_assert!((e.measure() + c.measure() - 1.0).abs() < 1e-12);
            prop_assert!(e.contains(t) != c.contains(t));
        }

        #[test]
        fn measure_in_unit_interval(a in arc_pairs()) {
            let m = ArcSet::from_pairs(&a).unwrap().measure();
            prop_assert!((0.0..=1.0 + 1e-12).contains(&m));
        }
    }
}

//! Immutable expression trees over inner, outer and Cayley leaves with a
//! uniform point evaluator.

use std::f64::consts::{FRAC_PI_4, SQRT_2, TAU};
use std::sync::Arc;

use crate::cayley::{cayley_rational, CayleyInnerFn};
use crate::disk::{chordal, koebe_k, mobius_t, mobius_t_inv, EvalConfig, C64, I, TAU_POLE};
use crate::error::{Error, Result};
use crate::inner::InnerFunction;
use crate::outer::OuterFunction;
use crate::poly::{Polynomial, RationalFn};

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Constant(C64),
    Inner(InnerFunction),
    Outer(OuterFunction),
    Cayley(CayleyInnerFn),
    Sum(Vec<FunctionExpr>),
    Product(Vec<FunctionExpr>),
    Quotient(FunctionExpr, FunctionExpr),
    Power(FunctionExpr, i32),
    SqrtOuter(FunctionExpr),
    ApplyT(FunctionExpr),
    ApplyTInv(FunctionExpr),
    ApplyK(FunctionExpr),
    TruncatedProduct {
        factors: Vec<FunctionExpr>,
        tail_phi0_sum: Option<f64>,
    },
}

/// A function on the disk built from leaves and algebraic nodes. Poles in
/// the open disk that can be located from rational leaf data are computed
/// at construction; all singular operations are also checked at evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionExpr {
    node: Arc<Node>,
    poles: Arc<Vec<C64>>,
}

/// Result of a point evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: C64,
    /// Bound on the distance to the untruncated value, when a truncated
    /// product with a known tail is involved.
    pub tail_bound: Option<f64>,
    /// Set when a truncated product's tail could not be bounded.
    pub not_converged: bool,
}

impl Evaluation {
    fn exact(value: C64) -> Self {
        Evaluation {
            value,
            tail_bound: None,
            not_converged: false,
        }
    }

    fn merge(&mut self, other: &Evaluation) {
        self.not_converged |= other.not_converged;
        self.tail_bound = match (self.tail_bound, other.tail_bound) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
    }
}

fn zeros_in_disk(p: &Polynomial) -> Vec<C64> {
    if p.is_zero() {
        return Vec::new();
    }
    p.roots()
        .map(|r| r.into_iter().filter(|z| z.norm() < 1.0).collect())
        .unwrap_or_default()
}

fn compute_poles(node: &Node) -> Vec<C64> {
    let mut poles: Vec<C64> = Vec::new();
    let children: Vec<&FunctionExpr> = match node {
        Node::Sum(c) | Node::Product(c) => c.iter().collect(),
        Node::TruncatedProduct { factors, .. } => factors.iter().collect(),
        Node::Quotient(a, b) => vec![a, b],
        Node::Power(a, _) | Node::SqrtOuter(a) | Node::ApplyT(a) | Node::ApplyTInv(a) | Node::ApplyK(a) => vec![a],
        _ => Vec::new(),
    };
    for c in &children {
        poles.extend(c.poles.iter().copied());
    }
    let extra = match node {
        Node::Quotient(_, b) => b.to_rational().map(|r| zeros_in_disk(&r.num)),
        Node::Power(a, k) if *k < 0 => a.to_rational().map(|r| zeros_in_disk(&r.num)),
        // T(g) = ∞ where g = i: N - iD = 0
        Node::ApplyT(a) => a.to_rational().map(|r| zeros_in_disk(&r.num.add(&r.den.scale(-I)))),
        Node::ApplyTInv(a) => a.to_rational().map(|r| zeros_in_disk(&r.num.add(&r.den.scale(I)))),
        Node::ApplyK(a) => a.to_rational().map(|r| zeros_in_disk(&r.den.add(&r.num.scale(C64::new(-1.0, 0.0))))),
        _ => None,
    };
    poles.extend(extra.unwrap_or_default());
    poles
}

fn check_finite_pole(denominator: C64, z: C64) -> Result<()> {
    if chordal(denominator, C64::new(0.0, 0.0)) < TAU_POLE {
        return Err(Error::PoleProximity {
            point: z,
            pole: z,
        });
    }
    Ok(())
}

impl FunctionExpr {
    fn from_node(node: Node) -> Self {
        let poles = compute_poles(&node);
        FunctionExpr {
            node: Arc::new(node),
            poles: Arc::new(poles),
        }
    }

    pub fn constant(c: C64) -> Self {
        Self::from_node(Node::Constant(c))
    }

    pub fn real(c: f64) -> Self {
        Self::constant(C64::new(c, 0.0))
    }

    pub fn inner(f: InnerFunction) -> Self {
        Self::from_node(Node::Inner(f))
    }

    pub fn outer(f: OuterFunction) -> Self {
        Self::from_node(Node::Outer(f))
    }

    pub fn cayley(f: CayleyInnerFn) -> Self {
        Self::from_node(Node::Cayley(f))
    }

    pub fn sum(terms: Vec<FunctionExpr>) -> Self {
        Self::from_node(Node::Sum(terms))
    }

    pub fn product(factors: Vec<FunctionExpr>) -> Self {
        Self::from_node(Node::Product(factors))
    }

    pub fn quotient(num: FunctionExpr, den: FunctionExpr) -> Self {
        Self::from_node(Node::Quotient(num, den))
    }

    pub fn power(base: FunctionExpr, k: i32) -> Self {
        Self::from_node(Node::Power(base, k))
    }

    /// A square root of a zero-free function: halves an outer leaf
    /// directly, otherwise continues the principal root at 0 radially.
    pub fn sqrt_outer(base: FunctionExpr) -> Self {
        Self::from_node(Node::SqrtOuter(base))
    }

    pub fn apply_t(base: FunctionExpr) -> Self {
        Self::from_node(Node::ApplyT(base))
    }

    pub fn apply_t_inv(base: FunctionExpr) -> Self {
        Self::from_node(Node::ApplyTInv(base))
    }

    pub fn apply_k(base: FunctionExpr) -> Self {
        Self::from_node(Node::ApplyK(base))
    }

    /// The first factors of an infinite product; `tail_phi0_sum` bounds
    /// `Σ_{n>K} |1 - φ_n(0)|` for the inner functions behind the omitted
    /// factors `T(φ_n)`.
    pub fn truncated_product(factors: Vec<FunctionExpr>, tail_phi0_sum: Option<f64>) -> Self {
        Self::from_node(Node::TruncatedProduct {
            factors,
            tail_phi0_sum,
        })
    }

    pub fn neg(self) -> Self {
        Self::product(vec![Self::real(-1.0), self])
    }

    pub fn sub(self, other: FunctionExpr) -> Self {
        Self::sum(vec![self, other.neg()])
    }

    /// Poles in the open disk located from rational data.
    pub fn declared_poles(&self) -> &[C64] {
        &self.poles
    }

    /// The inner leaf, if this expression is one.
    pub fn as_inner(&self) -> Option<&InnerFunction> {
        match &*self.node {
            Node::Inner(f) => Some(f),
            _ => None,
        }
    }

    pub fn as_outer(&self) -> Option<&OuterFunction> {
        match &*self.node {
            Node::Outer(f) => Some(f),
            _ => None,
        }
    }

    pub fn as_constant(&self) -> Option<C64> {
        match &*self.node {
            Node::Constant(c) => Some(*c),
            _ => None,
        }
    }

    /// Short node name, for reports.
    pub fn kind(&self) -> &'static str {
        match &*self.node {
            Node::Constant(_) => "constant",
            Node::Inner(_) => "inner",
            Node::Outer(_) => "outer",
            Node::Cayley(_) => "cayley",
            Node::Sum(_) => "sum",
            Node::Product(_) => "product",
            Node::Quotient(..) => "quotient",
            Node::Power(..) => "power",
            Node::SqrtOuter(_) => "sqrt-outer",
            Node::ApplyT(_) => "apply-t",
            Node::ApplyTInv(_) => "apply-t-inv",
            Node::ApplyK(_) => "apply-k",
            Node::TruncatedProduct { .. } => "truncated-product",
        }
    }

    /// Polynomial quotient form when every leaf is rational.
    pub fn to_rational(&self) -> Option<RationalFn> {
        let one = Polynomial::constant(C64::new(1.0, 0.0));
        let rf = |n: Polynomial, d: Polynomial| RationalFn::new(n, d).ok();
        match &*self.node {
            Node::Constant(c) => rf(Polynomial::constant(*c), one),
            Node::Inner(f) => f.to_rational(),
            Node::Cayley(f) => {
                let (n, d) = cayley_rational(f.set());
                rf(n.scale(C64::new(f.scale(), 0.0)), d)
            }
            Node::Outer(_) | Node::SqrtOuter(_) | Node::TruncatedProduct { .. } => None,
            Node::Sum(terms) => {
                let mut acc = RationalFn::new(Polynomial::constant(C64::new(0.0, 0.0)), one).ok()?;
                for t in terms {
                    let r = t.to_rational()?;
                    acc = RationalFn::new(acc.num.mul(&r.den).add(&r.num.mul(&acc.den)), acc.den.mul(&r.den)).ok()?;
                }
                Some(acc)
            }
            Node::Product(terms) => {
                let mut acc = RationalFn::new(one.clone(), one).ok()?;
                for t in terms {
                    let r = t.to_rational()?;
                    acc = RationalFn::new(acc.num.mul(&r.num), acc.den.mul(&r.den)).ok()?;
                }
                Some(acc)
            }
            Node::Quotient(a, b) => {
                let (ra, rb) = (a.to_rational()?, b.to_rational()?);
                rf(ra.num.mul(&rb.den), ra.den.mul(&rb.num))
            }
            Node::Power(a, k) => {
                let r = a.to_rational()?;
                let (base_n, base_d) = if *k >= 0 { (r.num, r.den) } else { (r.den, r.num) };
                let (mut n, mut d) = (one.clone(), one);
                for _ in 0..k.unsigned_abs() {
                    n = n.mul(&base_n);
                    d = d.mul(&base_d);
                }
                rf(n, d)
            }
            Node::ApplyT(a) => {
                // T(N/D) = i(D - iN)/(D + iN)
                let r = a.to_rational()?;
                rf(r.den.add(&r.num.scale(-I)).scale(I), r.den.add(&r.num.scale(I)))
            }
            Node::ApplyTInv(a) => {
                let r = a.to_rational()?;
                rf(r.num.add(&r.den.scale(-I)).scale(I), r.num.add(&r.den.scale(I)))
            }
            Node::ApplyK(a) => {
                let r = a.to_rational()?;
                let diff = r.den.add(&r.num.scale(C64::new(-1.0, 0.0)));
                rf(r.num.mul(&r.den).scale(C64::new(-4.0, 0.0)), diff.mul(&diff))
            }
        }
    }

    pub fn eval(&self, z: C64) -> Result<Evaluation> {
        self.eval_with(z, EvalConfig::default())
    }

    pub fn value(&self, z: C64) -> Result<C64> {
        Ok(self.eval(z)?.value)
    }

    pub fn eval_with(&self, z: C64, cfg: EvalConfig) -> Result<Evaluation> {
        if !z.re.is_finite() || !z.im.is_finite() || z.norm() > 1.0 + 1e-12 {
            return Err(Error::OutsideDisk(z));
        }
        if let Some(&pole) = self.poles.iter().find(|&&p| chordal(p, z) < TAU_POLE) {
            return Err(Error::PoleProximity { point: z, pole });
        }
        match &*self.node {
            Node::Constant(c) => Ok(Evaluation::exact(*c)),
            Node::Inner(f) => Ok(Evaluation::exact(f.eval_with(z, cfg)?)),
            Node::Outer(f) => Ok(Evaluation::exact(f.eval(z)?)),
            Node::Cayley(f) => Ok(Evaluation::exact(f.eval(z)?)),
            Node::Sum(terms) => {
                let mut out = Evaluation::exact(C64::new(0.0, 0.0));
                for t in terms {
                    let e = t.eval_with(z, cfg)?;
                    out.value += e.value;
                    out.merge(&e);
                }
                Ok(out)
            }
            Node::Product(terms) => {
                let mut out = Evaluation::exact(C64::new(1.0, 0.0));
                for t in terms {
                    let e = t.eval_with(z, cfg)?;
                    out.value *= e.value;
                    out.merge(&e);
                }
                Ok(out)
            }
            Node::Quotient(a, b) => {
                let ea = a.eval_with(z, cfg)?;
                let eb = b.eval_with(z, cfg)?;
                check_finite_pole(eb.value, z)?;
                let mut out = Evaluation::exact(ea.value / eb.value);
                out.merge(&ea);
                out.merge(&eb);
                Ok(out)
            }
            Node::Power(a, k) => {
                let e = a.eval_with(z, cfg)?;
                if *k < 0 {
                    check_finite_pole(e.value, z)?;
                }
                Ok(Evaluation {
                    value: e.value.powi(*k),
                    ..e
                })
            }
            Node::SqrtOuter(a) => {
                if let Some(f) = a.as_outer() {
                    return Ok(Evaluation::exact(f.sqrt().eval(z)?));
                }
                let e = a.eval_with(z, cfg)?;
                Ok(Evaluation {
                    value: radial_sqrt(a, z, cfg)?,
                    ..e
                })
            }
            Node::ApplyT(a) => {
                let e = a.eval_with(z, cfg)?;
                Ok(Evaluation {
                    value: mobius_t(e.value)?,
                    ..e
                })
            }
            Node::ApplyTInv(a) => {
                let e = a.eval_with(z, cfg)?;
                Ok(Evaluation {
                    value: mobius_t_inv(e.value)?,
                    ..e
                })
            }
            Node::ApplyK(a) => {
                let e = a.eval_with(z, cfg)?;
                Ok(Evaluation {
                    value: koebe_k(e.value)?,
                    ..e
                })
            }
            Node::TruncatedProduct {
                factors,
                tail_phi0_sum,
            } => {
                let mut out = Evaluation::exact(C64::new(1.0, 0.0));
                for t in factors {
                    let e = t.eval_with(z, cfg)?;
                    out.value *= e.value;
                    out.merge(&e);
                }
                if let Some(s) = tail_phi0_sum {
                    match product_tail_bound(out.value.norm(), *s, z.norm()) {
                        Some(b) => out.tail_bound = Some(out.tail_bound.unwrap_or(0.0).max(b)),
                        None => out.not_converged = true,
                    }
                }
                Ok(out)
            }
        }
    }
}

/// Bound on `|P - P_K|` for `P = P_K ∏_{n>K} T(φ_n)` at `|z| = r` given
/// `s ≥ Σ_{n>K} |1 - φ_n(0)|`. Uses `|1 - φ(z)| ≤ (1+r)/(1-r) |1 - φ(0)|`
/// and `|1 - T(w)| = √2 |1 - w|/|1 + iw| ≤ √2 t/(√2 - t)` for `t = |1 - w|`.
/// `None` when the tail is too large for the estimate.
pub fn product_tail_bound(partial_abs: f64, s: f64, r: f64) -> Option<f64> {
    if r >= 1.0 {
        return None;
    }
    let sp = (1.0 + r) / (1.0 - r) * s;
    if !(sp < SQRT_2) {
        return None;
    }
    Some(partial_abs * ((SQRT_2 * sp / (SQRT_2 - sp)).exp() - 1.0))
}

/// Principal square root with the convention `√(-x) = i√x` for `x > 0`.
fn principal_sqrt(w: C64) -> C64 {
    if w.im == 0.0 && w.re < 0.0 {
        return C64::new(0.0, (-w.re).sqrt());
    }
    w.sqrt()
}

/// Square root of a zero-free `g` along the segment `[0, z]`, starting from
/// the principal root of `g(0)`; steps are bisected until consecutive
/// arguments of `g` differ by at most `π/4`.
fn radial_sqrt(g: &FunctionExpr, z: C64, cfg: EvalConfig) -> Result<C64> {
    let g0 = g.eval_with(C64::new(0.0, 0.0), cfg)?.value;
    if g0.norm() == 0.0 {
        return Err(Error::InvalidParameter("square root of a function vanishing at 0".into()));
    }
    let mut root = principal_sqrt(g0);
    let mut prev = g0;
    let steps = 32;
    for k in 1..=steps {
        let (t0, t1) = ((k - 1) as f64 / steps as f64, k as f64 / steps as f64);
        root = continue_root(g, z, t0, t1, prev, root, cfg, 0)?;
        prev = g.eval_with(z * t1, cfg)?.value;
    }
    Ok(root)
}

#[allow(clippy::too_many_arguments)]
fn continue_root(
    g: &FunctionExpr,
    z: C64,
    t0: f64,
    t1: f64,
    g_prev: C64,
    root_prev: C64,
    cfg: EvalConfig,
    depth: u32,
) -> Result<C64> {
    let g1 = g.eval_with(z * t1, cfg)?.value;
    if g1.norm() == 0.0 {
        return Err(Error::InvalidParameter("square root path meets a zero".into()));
    }
    let jump = (g1 / g_prev).arg().abs();
    if jump > FRAC_PI_4 && depth < 40 {
        let tm = 0.5 * (t0 + t1);
        let gm = g.eval_with(z * tm, cfg)?.value;
        let rm = continue_root(g, z, t0, tm, g_prev, root_prev, cfg, depth + 1)?;
        return continue_root(g, z, tm, t1, gm, rm, cfg, depth + 1);
    }
    let cand = g1.sqrt();
    Ok(if (cand - root_prev).norm() <= (cand + root_prev).norm() {
        cand
    } else {
        -cand
    })
}

/// Winding number of `f` around 0 on the circle `|z| = r`, from `n`
/// samples with argument unwrapping.
pub fn winding_number(f: impl Fn(C64) -> Result<C64>, r: f64, n: usize) -> Result<i64> {
    let mut total = 0.0;
    let mut prev = f(C64::new(r, 0.0))?;
    for k in 1..=n {
        let cur = f(C64::from_polar(r, TAU * k as f64 / n as f64))?;
        if cur.norm() == 0.0 || prev.norm() == 0.0 {
            return Err(Error::InvalidParameter(format!("function vanishes on |z| = {r}")));
        }
        total += (cur / prev).arg();
        prev = cur;
    }
    Ok((total / TAU).round() as i64)
}

/// The rational function `3iz/(2 - 2z²)`, written as `i(ψ₁ + ψ₂)/(ψ₁ - ψ₂)`
/// with `ψ₁ = (z + 1/2)/(1 + z/2)` and `ψ₂ = (z - 1/2)/(1 - z/2)`.
pub fn javad() -> FunctionExpr {
    let psi1 = InnerFunction::blaschke(C64::new(-0.5, 0.0)).expect("valid zero");
    let psi2 = InnerFunction::blaschke(C64::new(0.5, 0.0))
        .expect("valid zero")
        .multiply(&InnerFunction::constant(C64::new(-1.0, 0.0)).expect("unimodular"));
    helson_expr(&psi1, &psi2)
}

/// `i(ψ₁ + ψ₂)/(ψ₁ - ψ₂)`.
pub fn helson_expr(psi1: &InnerFunction, psi2: &InnerFunction) -> FunctionExpr {
    let a = FunctionExpr::inner(psi1.clone());
    let b = FunctionExpr::inner(psi2.clone());
    FunctionExpr::product(vec![
        FunctionExpr::constant(I),
        FunctionExpr::quotient(FunctionExpr::sum(vec![a.clone(), b.clone()]), a.sub(b)),
    ])
}

/// `K(φ_ρ)` for the atomic inner function `φ_ρ = exp(ρ(z + 1)/(z - 1))`.
pub fn koebe_singular(rho: f64) -> Result<FunctionExpr> {
    Ok(FunctionExpr::apply_k(FunctionExpr::inner(InnerFunction::phi_rho(rho)?)))
}

/// `i(1 + z)/(1 - z)`, the image of the inner function `iz` under `T`.
pub fn halfplane() -> FunctionExpr {
    let iz = InnerFunction::new(I, 1, Vec::new(), Vec::new()).expect("unimodular constant");
    FunctionExpr::apply_t(FunctionExpr::inner(iz))
}

/// `1/(1 - z)`.
pub fn one_over_one_minus_z() -> FunctionExpr {
    FunctionExpr::quotient(
        FunctionExpr::real(1.0),
        FunctionExpr::real(1.0).sub(FunctionExpr::inner(InnerFunction::monomial(1))),
    )
}

/// Image of the boundary angle used in closed-form checks:
/// `3iζ/(2 - 2ζ²) = -(3/4) csc θ` for `ζ = e^{iθ}`.
pub fn javad_boundary(theta: f64) -> f64 {
    -0.75 / theta.sin()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arcset::ArcSet;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn leaves_and_products() {
        assert_eq!(FunctionExpr::constant(c(2.0, 1.0)).value(c(0.3, 0.0)).unwrap(), c(2.0, 1.0));
        let e = FunctionExpr::product(vec![
            FunctionExpr::inner(InnerFunction::monomial(1)),
            FunctionExpr::outer(OuterFunction::unit(64).unwrap()),
        ]);
        assert!((e.value(c(0.5, 0.0)).unwrap() - 0.5).norm() < 1e-15);
    }

    #[test]
    fn javad_closed_form() {
        let f = javad();
        let v = f.value(I).unwrap();
        assert!((v - c(-0.75, 0.0)).norm() < 1e-12);
        for k in 0..50 {
            let z = C64::from_polar(0.9 * k as f64 / 50.0, 1.3 * k as f64);
            let direct = 3.0 * I * z / (2.0 - 2.0 * z * z);
            assert!((f.value(z).unwrap() - direct).norm() < 1e-12);
        }
        assert!(f.declared_poles().is_empty());
        assert!(matches!(f.value(c(1.0, 0.0)), Err(Error::PoleProximity { .. })));
    }

    #[test]
    fn quotient_declares_interior_poles() {
        let q = FunctionExpr::quotient(
            FunctionExpr::real(1.0),
            FunctionExpr::inner(InnerFunction::blaschke(c(0.3, 0.2)).unwrap()),
        );
        assert_eq!(q.declared_poles().len(), 1);
        assert!((q.declared_poles()[0] - c(0.3, 0.2)).norm() < 1e-12);
        assert!(matches!(q.value(c(0.3, 0.2)), Err(Error::PoleProximity { .. })));
        assert!(q.value(c(0.0, 0.0)).is_ok());
    }

    #[test]
    fn apply_maps() {
        let h = halfplane();
        let z = c(0.2, -0.3);
        assert!((h.value(z).unwrap() - I * (1.0 + z) / (1.0 - z)).norm() < 1e-14);
        let k = FunctionExpr::apply_k(FunctionExpr::inner(InnerFunction::monomial(1)));
        assert!((k.value(z).unwrap() - (-4.0 * z / ((1.0 - z) * (1.0 - z)))).norm() < 1e-13);
        let round = FunctionExpr::apply_t_inv(h.clone());
        assert!((round.value(z).unwrap() - I * z).norm() < 1e-14);
        let t = FunctionExpr::apply_t(FunctionExpr::inner(InnerFunction::monomial(1)));
        assert!((t.value(z).unwrap() - I * (1.0 - I * z) / (1.0 + I * z)).norm() < 1e-14);
    }

    #[test]
    fn rational_forms_agree() {
        let set = ArcSet::from_pairs(&[(0.2, 1.1), (3.0, 4.0)]).unwrap();
        let exprs = vec![
            javad(),
            halfplane(),
            FunctionExpr::apply_k(FunctionExpr::inner(InnerFunction::blaschke(c(0.1, 0.4)).unwrap())),
            FunctionExpr::power(FunctionExpr::cayley(CayleyInnerFn::new(set, 2.0).unwrap()), -2),
            one_over_one_minus_z(),
        ];
        for e in exprs {
            let r = e.to_rational().unwrap();
            for k in 0..20 {
                let z = C64::from_polar(0.8 * k as f64 / 20.0, 0.77 * k as f64);
                let a = e.value(z).unwrap();
                assert!((r.eval(z) - a).norm() < 1e-10 * a.norm().max(1.0));
            }
        }
        assert!(FunctionExpr::outer(OuterFunction::unit(64).unwrap()).to_rational().is_none());
    }

    #[test]
    fn sqrt_follows_branch() {
        // √(K(z)) is not zero free; use 1/(1 - z)² whose root is 1/(1 - z).
        let g = FunctionExpr::power(one_over_one_minus_z(), 2);
        let s = FunctionExpr::sqrt_outer(g);
        for k in 0..30 {
            let z = C64::from_polar(0.95, TAU * k as f64 / 30.0);
            assert!((s.value(z).unwrap() - 1.0 / (1.0 - z)).norm() < 1e-10);
        }
        // root of a negative constant
        let n = FunctionExpr::sqrt_outer(FunctionExpr::real(-4.0));
        assert!((n.value(c(0.1, 0.1)).unwrap() - c(0.0, 2.0)).norm() < 1e-15);
    }

    #[test]
    fn truncated_product_tail() {
        let f = FunctionExpr::truncated_product(vec![FunctionExpr::real(2.0)], Some(0.01));
        let e = f.eval(c(0.5, 0.0)).unwrap();
        assert!(e.tail_bound.unwrap() > 0.0);
        assert!(!e.not_converged);
        let g = FunctionExpr::truncated_product(vec![FunctionExpr::real(2.0)], Some(10.0));
        assert!(g.eval(c(0.5, 0.0)).unwrap().not_converged);
    }

    #[test]
    fn winding_numbers() {
        let z2 = |z: C64| Ok(z * z);
        assert_eq!(winding_number(z2, 0.5, 4096).unwrap(), 2);
        let k = |z: C64| Ok(3.0 + z);
        assert_eq!(winding_number(k, 0.9, 4096).unwrap(), 0);
    }

    proptest! {
        #[test]
        fn compensated_mode_agrees(r in 0.0..0.95f64, t in 0.0..TAU) {
            let zs: Vec<C64> = (0..30).map(|k| C64::from_polar(1.0 - 0.5f64.powi(k % 10 + 1), k as f64)).collect();
            let b = InnerFunction::blaschke_product(C64::new(1.0, 0.0), &zs).unwrap();
            let e = FunctionExpr::apply_t(FunctionExpr::inner(b));
            let z = C64::from_polar(r, t);
            let a = e.eval(z);
            let cmp = e.eval_with(z, EvalConfig { compensated: true });
            if let (Ok(a), Ok(cmp)) = (a, cmp) {
                prop_assert!((a.value - cmp.value).norm() < 1e-8 * a.value.norm().max(1.0));
            }
        }
    }
}

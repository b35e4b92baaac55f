//! Named self-check suites with per-check residuals.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::probe_points;
use crate::a_integral::{a_integral, herglotz_a_integral, hfs1_ladder, TruncationLadder};
use crate::arcset::ArcSet;
use crate::boundary::{BoundaryGrid, StepFunction};
use crate::cayley::{arc_zero, cayley_eval, cayley_eval_herglotz, phi_from_arcset};
use crate::disk::{mobius_t, mobius_t_inv, C64, I};
use crate::error::{Error, Result};
use crate::expr::{self, javad_boundary, FunctionExpr};
use crate::factorization::{
    boundary_values, helson_decompose, koebe_boundary_check, koebe_factor, sum_of_squares, RealSmirnovFn,
};
use crate::hp::{membership_trend, TrendVerdict};
use crate::inner::InnerFunction;
use crate::products::{
    bilateral_eval, bilateral_split, partial_product_trace, unilateral_verdict, Criterion, GeneratorSpec,
    InnerSequence, VerdictStatus,
};

pub const SUITES: [&str; 6] = [
    "t-identities",
    "cayley-identities",
    "factor-identities",
    "product-convergence",
    "a-integral",
    "hp-growth",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tol: f64,
}

impl Check {
    fn new(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            residual,
            tol,
        }
    }

    /// A yes/no check: residual 0 when `ok`, 1 otherwise.
    fn flag(name: impl Into<String>, ok: bool) -> Self {
        Check::new(name, if ok { 0.0 } else { 1.0 }, 0.0)
    }

    pub fn passes(&self) -> bool {
        self.residual <= self.tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(Check::passes)
    }

    pub fn render(&self) -> String {
        let mut out = format!("# smirnov {} seed={}\nsuite {}\n", super::VERSION, self.seed, self.suite);
        for c in &self.checks {
            out.push_str(&format!(
                "{} {} residual={:.3e} tol={:.0e}\n",
                if c.passes() { "PASS" } else { "FAIL" },
                c.name,
                c.residual,
                c.tol
            ));
        }
        out.push_str(if self.ok() { "result PASS\n" } else { "result FAIL\n" });
        out
    }
}

pub fn run_suite(name: &str, seed: u64) -> Result<Report> {
    let checks = match name {
        "t-identities" => t_identities(seed),
        "cayley-identities" => cayley_identities(seed)?,
        "factor-identities" => factor_identities(seed)?,
        "product-convergence" => product_convergence()?,
        "a-integral" => a_integral_suite(seed)?,
        "hp-growth" => hp_growth()?,
        _ => {
            return Err(Error::Schema(format!(
                "unknown suite {name:?} (expected one of {})",
                SUITES.join(", ")
            )))
        }
    };
    Ok(Report {
        suite: name.to_string(),
        seed,
        checks,
    })
}

fn rel(a: Result<C64>, b: Result<C64>) -> f64 {
    match (a, b) {
        (Ok(a), Ok(b)) => (a - b).norm() / a.norm().max(1.0),
        _ => f64::INFINITY,
    }
}

/// Largest residual of a family of pointwise comparisons.
fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m, x| if x.is_nan() { f64::INFINITY } else { m.max(x) })
}

fn t_identities(seed: u64) -> Vec<Check> {
    let pts = probe_points(seed, 1000, 0.95);
    let t = mobius_t;
    let one = C64::new(1.0, 0.0);
    let mut c = vec![Check::new("inverse=T(1/z)", worst(pts.iter().map(|&z| rel(mobius_t_inv(z), t(one / z)))), 1e-10)];
    c.push(Check::new("inverse=1/T(z)", worst(pts.iter().map(|&z| rel(mobius_t_inv(z), t(z).map(|w| one / w)))), 1e-10));
    c.push(Check::new("inverse=-T(-z)", worst(pts.iter().map(|&z| rel(mobius_t_inv(z), t(-z).map(|w| -w)))), 1e-10));
    c.push(Check::new(
        "inverse=conj T(conj z)",
        worst(pts.iter().map(|&z| rel(mobius_t_inv(z), t(z.conj()).map(|w| w.conj())))),
        1e-10,
    ));
    c.push(Check::new("T(T(z))=1/z", worst(pts.iter().map(|&z| rel(Ok(one / z), t(z).and_then(t)))), 1e-10));
    c.push(Check::new(
        "T^4(z)=z",
        worst(pts.iter().map(|&z| rel(Ok(z), t(z).and_then(t).and_then(t).and_then(t)))),
        1e-10,
    ));
    let pairs: Vec<(C64, C64)> = pts.chunks(2).map(|p| (p[0], p[1])).collect();
    c.push(Check::new(
        "quotient",
        worst(pairs.iter().map(|&(z1, z2)| {
            let rhs = t(z1).and_then(|a| {
                let b = t(z2)?;
                Ok((a * b - a + b + 1.0) / (a * b + a - b + 1.0))
            });
            rel(t(z2 / z1), rhs)
        })),
        1e-10,
    ));
    c.push(Check::new(
        "addition",
        worst(pairs.iter().map(|&(z1, z2)| {
            let rhs = t(z1).and_then(|a| {
                let b = t(z2)?;
                Ok((3.0 * a * b + I * a + I * b + 1.0) / (3.0 * I + a + b + I * a * b))
            });
            rel(t(z1 + z2), rhs)
        })),
        1e-10,
    ));
    c
}

/// A union of one to three random arcs.
pub fn random_arcset(rng: &mut ChaCha8Rng) -> ArcSet {
    let k = rng.gen_range(1..=3);
    let pairs: Vec<(f64, f64)> = (0..k)
        .map(|_| {
            let b = rng.gen_range(0.0..TAU);
            (b, b + rng.gen_range(0.05..1.5))
        })
        .collect();
    ArcSet::from_pairs(&pairs).expect("valid arcs")
}

fn cayley_identities(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = probe_points(seed ^ 0x5eed, 20, 0.9);
    let (mut origin, mut herglotz, mut meet_join, mut complement, mut zero_to_i, mut phi) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..50 {
        let e = random_arcset(&mut rng);
        let f = random_arcset(&mut rng);
        let fe = |s: &ArcSet, z: C64| cayley_eval(s, z);
        origin = origin.max(rel(fe(&e, C64::new(0.0, 0.0)), Ok(C64::from_polar(1.0, PI * e.measure()))));
        let (meet, join, comp) = (e.intersect(&f), e.union(&f), e.complement());
        let phi_e = phi_from_arcset(&e)?.inner;
        for &z in &pts {
            herglotz = herglotz.max(rel(fe(&e, z), cayley_eval_herglotz(&e, z)));
            meet_join = meet_join.max(rel(
                fe(&e, z).and_then(|a| Ok(a * fe(&f, z)?)),
                fe(&meet, z).and_then(|a| Ok(a * fe(&join, z)?)),
            ));
            complement = complement.max(rel(fe(&e, z).and_then(|a| Ok(a * fe(&comp, z)?)), Ok(C64::new(-1.0, 0.0))));
            phi = phi.max(rel(fe(&e, z), phi_e.eval(z).and_then(mobius_t)));
        }
        if e.len() == 1 && e.measure() < 0.5 {
            zero_to_i = zero_to_i.max(rel(fe(&e, arc_zero(&e.arcs()[0])), Ok(I)));
        }
    }
    Ok(vec![
        Check::new("f_E(0)=exp(i pi m(E))", origin, 1e-12),
        Check::new("closed form=Herglotz", herglotz, 1e-8),
        Check::new("f_E f_F=f_(E meet F) f_(E join F)", meet_join, 1e-9),
        Check::new("f_E f_(complement)=-1", complement, 1e-9),
        Check::new("f_E(z_E)=i", zero_to_i, 1e-9),
        Check::new("T(phi_E)=f_E", phi, 1e-8),
    ])
}

fn factor_identities(seed: u64) -> Result<Vec<Check>> {
    let pts = probe_points(seed, 64, 0.9);
    let javad = RealSmirnovFn::javad();
    let mut c = Vec::new();
    let boundary = worst((0..512).map(|j| {
        let theta = TAU * (j as f64 + 0.5) / 512.0;
        let b = javad_boundary(theta);
        rel(javad.eval(C64::from_polar(1.0, theta)), Ok(C64::new(b, 0.0)))
    }));
    c.push(Check::new("javad boundary=-(3/4)csc", boundary, 1e-10));
    let pair = helson_decompose(&javad)?;
    let rec = pair.reconstruct();
    c.push(Check::new("javad helson reconstruction", worst(pts.iter().map(|&z| rel(javad.eval(z), rec.value(z)))), 1e-9));
    let koebe_z = RealSmirnovFn::koebe_of(InnerFunction::monomial(1));
    let koebe_phi = RealSmirnovFn::koebe_of(InnerFunction::phi_rho(1.0)?);
    for (name, f) in [("javad", &javad), ("K(z)", &koebe_z), ("K(phi)", &koebe_phi)] {
        let kf = koebe_factor(f);
        let res = worst(pts.iter().map(|&z| rel(f.eval(z), kf.k_part.value(z).and_then(|k| Ok(k * kf.r_part.eval(z)?)))));
        c.push(Check::new(format!("{name} koebe reconstruction"), res, 1e-9));
        let rep = koebe_boundary_check(f, &kf, 1024);
        c.push(Check::new(format!("{name} koebe |R|<=|f|"), rep.modulus_excess.max(0.0), 1e-9));
        c.push(Check::flag(format!("{name} koebe sign agreement"), rep.sign_mismatches == 0 && rep.real_samples > 0));
    }
    for (name, f) in [("K(z)", &koebe_z), ("K(phi)", &koebe_phi)] {
        let sq = sum_of_squares(f, 1024)?;
        let res = worst(pts.iter().map(|&z| {
            rel(f.eval(z), sq.g1.eval(z).and_then(|a| Ok(a * a + sq.g2.eval(z)?.powi(2))))
        }));
        c.push(Check::new(format!("{name} g1^2+g2^2=f"), res, 1e-8));
        let imag = |g: &FunctionExpr| worst(boundary_values(g, 1024).iter().map(|(_, v)| v.im.abs() / v.norm().max(1.0)));
        c.push(Check::new(format!("{name} g1, g2 real on the circle"), imag(sq.g1.expr()).max(imag(sq.g2.expr())), 1e-6));
    }
    Ok(c)
}

fn product_convergence() -> Result<Vec<Check>> {
    let mut c = Vec::new();
    let geometric = InnerSequence::family(GeneratorSpec::GeometricArcs { first: 0.5, ratio: 0.5 })?;
    c.push(Check::flag(
        "geometric arcs converge",
        unilateral_verdict(&geometric, 64).status == VerdictStatus::Converges,
    ));
    let trace = partial_product_trace(&geometric, C64::new(0.0, 0.0), 64)?;
    let last = trace[63].value;
    c.push(Check::new("geometric Cauchy at K=64", (last - trace[62].value).norm(), 1e-8));
    c.push(Check::new("geometric arg P(0)=pi", (trace[63].unwrapped_arg - PI).abs(), 1e-6));
    let harmonic = InnerSequence::family(GeneratorSpec::HarmonicArcs { scale: 0.5 })?;
    c.push(Check::flag(
        "harmonic arcs diverge",
        unilateral_verdict(&harmonic, 256).status == VerdictStatus::Diverges,
    ));
    let h = partial_product_trace(&harmonic, C64::new(0.0, 0.0), 256)?;
    c.push(Check::flag(
        "harmonic partial sums grow",
        h[255].sums.phi0 > 2.0 * h[15].sums.phi0,
    ));
    for (spec, want) in [
        (GeneratorSpec::AlternatingRotations { scale: 1.0 }, Criterion::Theta),
        (GeneratorSpec::Monomials, Criterion::Powers),
        (GeneratorSpec::HarmonicZeros { scale: 0.5 }, Criterion::Blaschke),
        (GeneratorSpec::AtomMasses { scale: 0.5 }, Criterion::SingularMass),
    ] {
        let v = unilateral_verdict(&InnerSequence::family(spec)?, 256);
        c.push(Check::flag(
            format!("{want:?} counterexample tagged"),
            v.status == VerdictStatus::Diverges && v.failing == want,
        ));
    }
    Ok(c)
}

fn a_integral_suite(seed: u64) -> Result<Vec<Check>> {
    let ladder = TruncationLadder::default();
    let pts = probe_points(seed, 5, 0.8);
    let mut c = Vec::new();
    let smooth = BoundaryGrid::from_real_fn(1024, |t| 0.5 + t.cos() - 0.3 * (2.0 * t).sin())?;
    let classical = worst(pts.iter().map(|&z| {
        rel(
            smooth.herglotz(z).map(|h| I * h),
            herglotz_a_integral(&smooth, z, &ladder).map(|r| r.value),
        )
    }));
    c.push(Check::new("bounded v: classical Herglotz", classical, 1e-10));
    let outer = ArcSet::from_pairs(&[(0.5, 3.5)])?;
    let inner = ArcSet::from_pairs(&[(1.0, 2.0)])?;
    let levels = StepFunction::weighted(0.0, &[(outer, 1.0), (inner, 1.0)]);
    let v = BoundaryGrid::from_step(1024, levels.scale(PI))?;
    let split = bilateral_split(&BoundaryGrid::from_step(1024, levels)?)?;
    let (mut oracle, mut monotone) = (0.0f64, true);
    for &z in &pts {
        let r = herglotz_a_integral(&v, z, &ladder)?;
        let errs: Vec<f64> = r.trace.iter().map(|t| (t.value - r.value).norm()).collect();
        monotone &= errs.windows(2).all(|w| w[1] <= w[0] + 1e-14);
        oracle = oracle.max(rel(bilateral_eval(&split, z, 64).map(|b| b.value), Ok(r.value.exp())));
    }
    c.push(Check::flag("staircase errors decrease along the ladder", monotone));
    c.push(Check::new("staircase matches bilateral product", oracle, 1e-5));
    let cot = BoundaryGrid::from_real_fn(4096, |t| if t == 0.0 { 0.0 } else { 1.0 / (0.5 * t).tan() })?;
    c.push(Check::flag("cot rejected", matches!(a_integral(&cot, &ladder), Err(Error::NonMember))));
    let arc = ArcSet::from_pairs(&[(0.3, 1.6)])?;
    let chi = BoundaryGrid::indicator(4096, &arc)?;
    let conj = chi.conjugate()?;
    let h = BoundaryGrid::new(
        chi.values()
            .iter()
            .zip(conj.values())
            .map(|(x, y)| PI * (-y.re + I * (x.re - arc.measure())))
            .collect(),
    )?;
    let certs = hfs1_ladder(&h, &ladder)?;
    c.push(Check::new(
        "hfs1 on the arc example",
        worst(certs.iter().map(|k| (k.lhs - k.rhs).max(0.0))),
        1e-8,
    ));
    Ok(c)
}

fn hp_growth() -> Result<Vec<Check>> {
    let phi = FunctionExpr::inner(InnerFunction::phi_rho(1.0)?);
    let t_phi = FunctionExpr::apply_t(phi);
    let k_phi = expr::koebe_singular(1.0)?;
    let cases = [
        ("1/(1-z) p=0.5", expr::one_over_one_minus_z(), 0.5, TrendVerdict::Bounded),
        ("T(phi) p=0.3", t_phi.clone(), 0.3, TrendVerdict::Bounded),
        ("T(phi) p=0.9", t_phi, 0.9, TrendVerdict::Bounded),
        ("K(phi) p=0.4", k_phi.clone(), 0.4, TrendVerdict::Bounded),
        ("1/(1-z) p=1", expr::one_over_one_minus_z(), 1.0, TrendVerdict::Divergent),
        ("K(phi) p=0.6", k_phi, 0.6, TrendVerdict::Divergent),
        ("i(1+z)/(1-z) p=1", expr::halfplane(), 1.0, TrendVerdict::Divergent),
    ];
    let mut c = Vec::new();
    for (name, e, p, want) in cases {
        let t = membership_trend(&e, p)?;
        c.push(Check::flag(format!("{name} {want}"), t.verdict == want));
        let drop = worst(t.rows.windows(2).map(|w| (w[0].mean - w[1].mean) / w[0].mean.max(1.0)));
        c.push(Check::new(format!("{name} means nondecreasing"), drop.max(0.0), 1e-10));
    }
    Ok(c)
}

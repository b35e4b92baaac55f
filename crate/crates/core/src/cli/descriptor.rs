//! JSON descriptors for functions and real boundary data.

use serde::{Deserialize, Serialize};

use crate::arcset::ArcSet;
use crate::boundary::{BoundaryGrid, StepFunction};
use crate::cayley::CayleyInnerFn;
use crate::disk::C64;
use crate::error::{Error, Result};
use crate::expr::{self, FunctionExpr};
use crate::factorization::RealSmirnovFn;
use crate::inner::{Atom, BlaschkeZero, InnerFunction};
use crate::outer::OuterFunction;

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

fn unit_multiplicity() -> u32 {
    1
}

fn unit_scale() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZeroSpec {
    pub at: C64,
    #[serde(default = "unit_multiplicity")]
    pub multiplicity: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    /// Angle of the atom on the circle.
    pub angle: f64,
    pub mass: f64,
}

/// `ξ z^power · (Blaschke zeros) · (atomic singular factor)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InnerSpec {
    #[serde(default = "one")]
    pub xi: C64,
    #[serde(default)]
    pub power: u32,
    #[serde(default)]
    pub zeros: Vec<ZeroSpec>,
    #[serde(default)]
    pub atoms: Vec<AtomSpec>,
}

impl InnerSpec {
    pub fn build(&self) -> Result<InnerFunction> {
        InnerFunction::new(
            self.xi,
            self.power,
            self.zeros
                .iter()
                .map(|z| BlaschkeZero {
                    at: z.at,
                    multiplicity: z.multiplicity,
                })
                .collect(),
            self.atoms
                .iter()
                .map(|a| Atom {
                    at: C64::from_polar(1.0, a.angle),
                    mass: a.mass,
                })
                .collect(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NamedExample {
    /// `3iz/(2 - 2z²)`.
    Javad,
    /// `K(φ_ρ)`.
    KoebeSingular,
    /// `i(1 + z)/(1 - z)`.
    Halfplane,
    /// `φ_ρ = exp(ρ(z + 1)/(z - 1))`.
    PhiRho,
}

/// Weighted arc set inside a step function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepPiece {
    pub arcs: Vec<(f64, f64)>,
    pub weight: f64,
}

/// Real boundary data on the circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RealData {
    /// `base + Σ weight·χ_arcs`, carried exactly.
    Step {
        #[serde(default)]
        base: f64,
        pieces: Vec<StepPiece>,
    },
    /// Grid samples at `2πj/n`; `n` must be a power of two ≥ 64.
    Samples { values: Vec<f64> },
    /// `scale · cot(θ/2)` (0 at θ = 0).
    CotHalf {
        #[serde(default = "unit_scale")]
        scale: f64,
    },
    /// `log|1 - e^{iθ}|`.
    LogOneMinusZeta,
}

impl RealData {
    pub fn grid(&self, n: usize) -> Result<BoundaryGrid> {
        match self {
            RealData::Step { base, pieces } => {
                let pieces = pieces
                    .iter()
                    .map(|p| Ok((ArcSet::from_pairs(&p.arcs)?, p.weight)))
                    .collect::<Result<Vec<_>>>()?;
                BoundaryGrid::from_step(n, StepFunction::weighted(*base, &pieces))
            }
            RealData::Samples { values } => BoundaryGrid::from_real(values.clone()),
            RealData::CotHalf { scale } => {
                BoundaryGrid::from_real_fn(n, |t| if t == 0.0 { 0.0 } else { scale / (0.5 * t).tan() })
            }
            RealData::LogOneMinusZeta => BoundaryGrid::log_abs_one_minus_zeta(n),
        }
    }
}

/// Expression nodes combining other descriptors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum ExprSpec {
    Constant { value: C64 },
    Sum { args: Vec<FunctionDescriptor> },
    Product { args: Vec<FunctionDescriptor> },
    Quotient { num: Box<FunctionDescriptor>, den: Box<FunctionDescriptor> },
    Power { base: Box<FunctionDescriptor>, exponent: i32 },
    SqrtOuter { base: Box<FunctionDescriptor> },
    ApplyT { base: Box<FunctionDescriptor> },
    ApplyTInv { base: Box<FunctionDescriptor> },
    ApplyK { base: Box<FunctionDescriptor> },
}

fn default_rho() -> f64 {
    1.0
}

/// A function on the disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FunctionDescriptor {
    Inner(InnerSpec),
    /// `exp(iγ + ∫ (ζ+z)/(ζ-z) log|F| dm)`.
    Outer {
        #[serde(default)]
        gamma: f64,
        logmod: RealData,
    },
    /// `exp(π·scale·∫ (ζ+z)/(ζ-z) χ_E dm)` for the union of arcs `E`.
    Cayley {
        arcs: Vec<(f64, f64)>,
        #[serde(default = "unit_scale")]
        scale: f64,
    },
    Expr(ExprSpec),
    /// Polynomial coefficients in increasing degree.
    Rational { num: Vec<C64>, den: Vec<C64> },
    /// `I·F` with inner `I` and the outer part given by another descriptor.
    RealSmirnov { inner: InnerSpec, outer: Box<FunctionDescriptor> },
    NamedExample {
        name: NamedExample,
        #[serde(default = "default_rho")]
        rho: f64,
    },
}

/// `Σ c_k z^k` as an expression.
fn polynomial_expr(coeffs: &[C64]) -> FunctionExpr {
    let z = FunctionExpr::inner(InnerFunction::monomial(1));
    let terms: Vec<FunctionExpr> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != C64::new(0.0, 0.0))
        .map(|(k, &c)| match k {
            0 => FunctionExpr::constant(c),
            _ => FunctionExpr::product(vec![FunctionExpr::constant(c), FunctionExpr::power(z.clone(), k as i32)]),
        })
        .collect();
    match terms.len() {
        0 => FunctionExpr::real(0.0),
        1 => terms.into_iter().next().expect("one term"),
        _ => FunctionExpr::sum(terms),
    }
}

impl FunctionDescriptor {
    /// Parses and validates a JSON descriptor; any problem with the
    /// document or its parameter ranges is a schema error.
    pub fn parse(json: &str, grid_n: usize) -> Result<Self> {
        let d: FunctionDescriptor = serde_json::from_str(json).map_err(|e| Error::Schema(e.to_string()))?;
        d.expr(grid_n).map_err(|e| match e {
            Error::Schema(_) => e,
            other => Error::Schema(other.to_string()),
        })?;
        Ok(d)
    }

    pub fn expr(&self, grid_n: usize) -> Result<FunctionExpr> {
        Ok(match self {
            FunctionDescriptor::Inner(spec) => FunctionExpr::inner(spec.build()?),
            FunctionDescriptor::Outer { gamma, logmod } => {
                FunctionExpr::outer(OuterFunction::new(*gamma, logmod.grid(grid_n)?)?)
            }
            FunctionDescriptor::Cayley { arcs, scale } => {
                FunctionExpr::cayley(CayleyInnerFn::new(ArcSet::from_pairs(arcs)?, *scale)?)
            }
            FunctionDescriptor::Expr(spec) => {
                let sub = |d: &FunctionDescriptor| d.expr(grid_n);
                let all = |ds: &[FunctionDescriptor]| ds.iter().map(sub).collect::<Result<Vec<_>>>();
                match spec {
                    ExprSpec::Constant { value } => FunctionExpr::constant(*value),
                    ExprSpec::Sum { args } => FunctionExpr::sum(all(args)?),
                    ExprSpec::Product { args } => FunctionExpr::product(all(args)?),
                    ExprSpec::Quotient { num, den } => FunctionExpr::quotient(sub(num)?, sub(den)?),
                    ExprSpec::Power { base, exponent } => FunctionExpr::power(sub(base)?, *exponent),
                    ExprSpec::SqrtOuter { base } => FunctionExpr::sqrt_outer(sub(base)?),
                    ExprSpec::ApplyT { base } => FunctionExpr::apply_t(sub(base)?),
                    ExprSpec::ApplyTInv { base } => FunctionExpr::apply_t_inv(sub(base)?),
                    ExprSpec::ApplyK { base } => FunctionExpr::apply_k(sub(base)?),
                }
            }
            FunctionDescriptor::Rational { num, den } => {
                if den.iter().all(|c| *c == C64::new(0.0, 0.0)) {
                    return Err(Error::Schema("zero denominator polynomial".into()));
                }
                FunctionExpr::quotient(polynomial_expr(num), polynomial_expr(den))
            }
            FunctionDescriptor::RealSmirnov { .. } | FunctionDescriptor::NamedExample { .. } => {
                return Ok(match self.named_or_smirnov(grid_n)? {
                    Named::Function(f) => f.expr().clone(),
                    Named::Expr(e) => e,
                });
            }
        })
    }

    /// The function as `I·F`; descriptors without an explicit inner factor
    /// are taken as outer.
    pub fn real_smirnov(&self, grid_n: usize) -> Result<RealSmirnovFn> {
        match self {
            FunctionDescriptor::RealSmirnov { .. } | FunctionDescriptor::NamedExample { .. } => {
                match self.named_or_smirnov(grid_n)? {
                    Named::Function(f) => Ok(f),
                    Named::Expr(e) => Ok(RealSmirnovFn::from_outer(e)),
                }
            }
            _ => Ok(RealSmirnovFn::from_outer(self.expr(grid_n)?)),
        }
    }

    fn named_or_smirnov(&self, grid_n: usize) -> Result<Named> {
        match self {
            FunctionDescriptor::RealSmirnov { inner, outer } => {
                Ok(Named::Function(RealSmirnovFn::new(inner.build()?, outer.expr(grid_n)?)))
            }
            FunctionDescriptor::NamedExample { name, rho } => {
                if !(*rho > 0.0 && rho.is_finite()) {
                    return Err(Error::Schema(format!("rho = {rho} must be positive")));
                }
                Ok(match name {
                    NamedExample::Javad => Named::Function(RealSmirnovFn::javad()),
                    NamedExample::KoebeSingular => Named::Function(RealSmirnovFn::koebe_of(InnerFunction::phi_rho(*rho)?)),
                    NamedExample::Halfplane => Named::Expr(expr::halfplane()),
                    NamedExample::PhiRho => Named::Expr(FunctionExpr::inner(InnerFunction::phi_rho(*rho)?)),
                })
            }
            _ => unreachable!("only named examples and explicit factorizations"),
        }
    }
}

enum Named {
    Function(RealSmirnovFn),
    Expr(FunctionExpr),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_kinds() {
        let docs = [
            r#"{"kind":"inner","zeros":[{"at":[0.5,0.0]}]}"#,
            r#"{"kind":"outer","logmod":{"form":"log-one-minus-zeta"}}"#,
            r#"{"kind":"cayley","arcs":[[0.0,1.0]]}"#,
            r#"{"kind":"expr","op":"apply-k","base":{"kind":"inner","power":1}}"#,
            r#"{"kind":"rational","num":[[0,0],[0,3]],"den":[[2,0],[0,0],[-2,0]]}"#,
            r#"{"kind":"named-example","name":"koebe-singular","rho":2.0}"#,
            r#"{"kind":"real-smirnov","inner":{"power":1},"outer":{"kind":"expr","op":"constant","value":[1,0]}}"#,
        ];
        for d in docs {
            let f = FunctionDescriptor::parse(d, 256).unwrap();
            assert!(f.expr(256).unwrap().value(C64::new(0.1, 0.2)).is_ok(), "{d}");
        }
    }

    #[test]
    fn rational_matches_named_javad() {
        let r = FunctionDescriptor::parse(r#"{"kind":"rational","num":[[0,0],[0,3]],"den":[[2,0],[0,0],[-2,0]]}"#, 256)
            .unwrap()
            .expr(256)
            .unwrap();
        let j = FunctionDescriptor::parse(r#"{"kind":"named-example","name":"javad"}"#, 256)
            .unwrap()
            .expr(256)
            .unwrap();
        let z = C64::new(0.3, -0.4);
        assert!((r.value(z).unwrap() - j.value(z).unwrap()).norm() < 1e-14);
    }

    #[test]
    fn schema_errors() {
        for d in [
            r#"{"kind":"inner","zeros":[{"at":[1.5,0.0]}]}"#,
            r#"{"kind":"inner","xi":[2,0]}"#,
            r#"{"kind":"bogus"}"#,
            r#"{"kind":"inner","zeroes":[]}"#,
            r#"{"kind":"cayley","arcs":[[0.0,9.0]]}"#,
            r#"{"kind":"named-example","name":"koebe-singular","rho":-1}"#,
        ] {
            assert!(matches!(FunctionDescriptor::parse(d, 256), Err(Error::Schema(_))), "{d}");
        }
    }

    #[test]
    fn real_data_forms() {
        let step: RealData = serde_json::from_str(r#"{"form":"step","pieces":[{"arcs":[[0,1]],"weight":2}]}"#).unwrap();
        let g = step.grid(256).unwrap();
        assert!(g.exact().is_some());
        let cot: RealData = serde_json::from_str(r#"{"form":"cot-half"}"#).unwrap();
        assert_eq!(cot.grid(256).unwrap().n(), 256);
        let s: RealData = serde_json::from_str(r#"{"form":"samples","values":[1,2]}"#).unwrap();
        assert!(s.grid(256).is_err());
    }
}

//! Inner functions with finitely many Blaschke zeros and a finite atomic
//! singular part:
//!
//! `I(z) = ξ z^N ∏ ((|a|/a)(a - z)/(1 - ā z))^{m} · exp(-Σ μ (ζ + z)/(ζ - z))`.

use serde::{Deserialize, Serialize};

use crate::disk::{chordal, wrap_angle, CompensatedSum, EvalConfig, C64, TAU_POLE};
use crate::error::{Error, Result};
use crate::poly::{Polynomial, RationalFn};

/// Tolerance for unimodularity of `ξ` and of atom locations.
const UNIT_TOL: f64 = 1e-12;
/// Probe count and tolerance of the boundary unimodularity check.
pub const UNIMODULAR_PROBES: usize = 256;
pub const UNIMODULAR_TOL: f64 = 1e-8;
/// Subdivision cap per cell in `boundary_sublevel_measure`.
pub const MAX_REFINE: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeZero {
    pub at: C64,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub at: C64,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InnerFunction {
    xi: C64,
    power: u32,
    zeros: Vec<BlaschkeZero>,
    atoms: Vec<Atom>,
}

/// The normalized Blaschke factor `(|a|/a)(a - z)/(1 - ā z)`.
pub fn blaschke_factor(a: C64, z: C64) -> C64 {
    (a.norm() / a) * (a - z) / (1.0 - a.conj() * z)
}

impl InnerFunction {
    /// Validates and normalizes the data. Zeros at the origin are folded
    /// into the monomial power.
    pub fn new(xi: C64, power: u32, zeros: Vec<BlaschkeZero>, atoms: Vec<Atom>) -> Result<Self> {
        if !xi.re.is_finite() || !xi.im.is_finite() || (xi.norm() - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidInner(format!("|xi| = {} is not 1", xi.norm())));
        }
        let mut power = power;
        let mut kept = Vec::with_capacity(zeros.len());
        for zr in zeros {
            let r = zr.at.norm();
            if !r.is_finite() || r >= 1.0 {
                return Err(Error::InvalidInner(format!(
                    "zero {} does not lie in the open disk",
                    zr.at
                )));
            }
            if zr.multiplicity == 0 {
                continue;
            }
            if r == 0.0 {
                power += zr.multiplicity;
            } else {
                kept.push(zr);
            }
        }
        let mut norm_atoms = Vec::with_capacity(atoms.len());
        for at in atoms {
            if !at.at.re.is_finite() || !at.at.im.is_finite() || (at.at.norm() - 1.0).abs() > UNIT_TOL {
                return Err(Error::InvalidInner(format!("atom {} is not on the circle", at.at)));
            }
            if !(at.mass > 0.0) || !at.mass.is_finite() {
                return Err(Error::InvalidInner(format!("atom mass {} is not positive", at.mass)));
            }
            norm_atoms.push(Atom {
                at: at.at / at.at.norm(),
                mass: at.mass,
            });
        }
        Ok(InnerFunction {
            xi: xi / xi.norm(),
            power,
            zeros: kept,
            atoms: norm_atoms,
        })
    }

    pub fn constant(xi: C64) -> Result<Self> {
        Self::new(xi, 0, Vec::new(), Vec::new())
    }

    pub fn one() -> Self {
        Self::constant(C64::new(1.0, 0.0)).expect("1 is unimodular")
    }

    pub fn monomial(power: u32) -> Self {
        InnerFunction {
            xi: C64::new(1.0, 0.0),
            power,
            zeros: Vec::new(),
            atoms: Vec::new(),
        }
    }

    /// Single normalized Blaschke factor with zero `a`.
    pub fn blaschke(a: C64) -> Result<Self> {
        Self::new(
            C64::new(1.0, 0.0),
            0,
            vec![BlaschkeZero { at: a, multiplicity: 1 }],
            Vec::new(),
        )
    }

    /// Finite Blaschke product over the given zeros (with repetition).
    pub fn blaschke_product(xi: C64, zeros: &[C64]) -> Result<Self> {
        Self::new(
            xi,
            0,
            zeros
                .iter()
                .map(|&at| BlaschkeZero { at, multiplicity: 1 })
                .collect(),
            Vec::new(),
        )
    }

    /// `exp(-μ (ζ + z)/(ζ - z))`.
    pub fn atomic(zeta: C64, mass: f64) -> Result<Self> {
        Self::new(C64::new(1.0, 0.0), 0, Vec::new(), vec![Atom { at: zeta, mass }])
    }

    /// The atomic inner function `φ_ρ(z) = exp(ρ(z + 1)/(z - 1))`.
    pub fn phi_rho(rho: f64) -> Result<Self> {
        Self::atomic(C64::new(1.0, 0.0), rho)
    }

    pub fn xi(&self) -> C64 {
        self.xi
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn zeros(&self) -> &[BlaschkeZero] {
        &self.zeros
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Rotation angle `θ = arg ξ` in `[-π, π)`.
    pub fn theta(&self) -> f64 {
        wrap_angle(self.xi.arg())
    }

    /// `Σ m (1 - |a|)`.
    pub fn blaschke_sum(&self) -> f64 {
        self.zeros
            .iter()
            .map(|z| z.multiplicity as f64 * (1.0 - z.at.norm()))
            .sum()
    }

    /// `μ(𝕋)`.
    pub fn singular_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }

    pub fn is_constant(&self) -> bool {
        self.power == 0 && self.zeros.is_empty() && self.atoms.is_empty()
    }

    /// Zero locations repeated by multiplicity (origin included).
    pub fn zero_list(&self) -> Vec<C64> {
        let mut v = vec![C64::new(0.0, 0.0); self.power as usize];
        for z in &self.zeros {
            v.extend(std::iter::repeat_n(z.at, z.multiplicity as usize));
        }
        v
    }

    pub fn eval(&self, z: C64) -> Result<C64> {
        self.eval_with(z, EvalConfig::default())
    }

    pub fn eval_with(&self, z: C64, cfg: EvalConfig) -> Result<C64> {
        if !z.re.is_finite() || !z.im.is_finite() || z.norm() > 1.0 + UNIT_TOL {
            return Err(Error::OutsideDisk(z));
        }
        for a in &self.atoms {
            if chordal(z, a.at) < TAU_POLE {
                return Err(Error::AtAtom { atom: a.at });
            }
        }
        let singular: C64 = self
            .atoms
            .iter()
            .map(|a| -a.mass * (a.at + z) / (a.at - z))
            .sum();
        if cfg.compensated {
            let mut acc = CompensatedSum::default();
            acc.add(C64::new(0.0, self.xi.arg()));
            if self.power > 0 {
                if z.norm() == 0.0 {
                    return Ok(C64::new(0.0, 0.0));
                }
                acc.add(self.power as f64 * z.ln());
            }
            for zr in &self.zeros {
                let b = blaschke_factor(zr.at, z);
                if b.norm() == 0.0 {
                    return Ok(C64::new(0.0, 0.0));
                }
                acc.add(zr.multiplicity as f64 * b.ln());
            }
            acc.add(singular);
            return Ok(acc.value().exp());
        }
        let mut v = self.xi * z.powu(self.power);
        for zr in &self.zeros {
            v *= blaschke_factor(zr.at, z).powu(zr.multiplicity);
        }
        Ok(v * singular.exp())
    }

    /// `I(0)`.
    pub fn value_at_zero(&self) -> C64 {
        self.eval(C64::new(0.0, 0.0)).expect("the origin is a regular point")
    }

    /// Product of two inner functions (data merge).
    pub fn multiply(&self, other: &InnerFunction) -> InnerFunction {
        let mut zeros = self.zeros.clone();
        zeros.extend_from_slice(&other.zeros);
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&other.atoms);
        let xi = self.xi * other.xi;
        InnerFunction {
            xi: xi / xi.norm(),
            power: self.power + other.power,
            zeros,
            atoms,
        }
    }

    /// `d/dθ arg I(e^{iθ}) = N + Σ m(1 - |a|²)/|ζ - a|² + Σ 2μ/|ζ - ζ_k|²`;
    /// infinite at an atom.
    pub fn boundary_phase_rate(&self, theta: f64) -> f64 {
        let zeta = C64::from_polar(1.0, theta);
        let zeros: f64 = self
            .zeros
            .iter()
            .map(|z| z.multiplicity as f64 * (1.0 - z.at.norm_sqr()) / (zeta - z.at).norm_sqr())
            .sum();
        let atoms: f64 = self.atoms.iter().map(|a| 2.0 * a.mass / (zeta - a.at).norm_sqr()).sum();
        self.power as f64 + zeros + atoms
    }

    /// Normalized measure of `{θ : g(I(e^{iθ})) < 0}` on an `n`-cell
    /// grid. Each cell is split into enough subcells to keep the phase
    /// change per subcell below `π/8` (at most `MAX_REFINE`), and sign
    /// changes of `g` inside a subcell are located by linear interpolation,
    /// so oscillation near atoms is resolved down to a neighbourhood of
    /// about one cell. Subcells touching an atom are dropped.
    pub fn boundary_sublevel_measure(&self, n: usize, g: impl Fn(C64) -> f64) -> Result<f64> {
        if n == 0 {
            return Err(Error::InvalidParameter("empty boundary grid".into()));
        }
        let h = std::f64::consts::TAU / n as f64;
        let sample = |t: f64| self.eval(C64::from_polar(1.0, t)).ok().map(&g);
        let mut total = CompensatedSum::default();
        for j in 0..n {
            let a = h * j as f64;
            let rate = [a, a + 0.5 * h, a + h]
                .iter()
                .map(|&t| self.boundary_phase_rate(t))
                .fold(0.0, f64::max);
            let k = ((rate * h / (std::f64::consts::PI / 8.0)).ceil().max(1.0)).min(MAX_REFINE as f64) as usize;
            let (mut inside, mut valid) = (0.0, 0usize);
            let mut left = sample(a);
            for s in 1..=k {
                let right = sample(a + h * s as f64 / k as f64);
                if let (Some(l), Some(r)) = (left, right) {
                    valid += 1;
                    inside += match (l < 0.0, r < 0.0) {
                        (true, true) => 1.0,
                        (false, false) => 0.0,
                        (true, false) => l / (l - r),
                        (false, true) => r / (r - l),
                    };
                }
                left = right;
            }
            if valid > 0 {
                total.add(C64::new(inside / valid as f64, 0.0));
            }
        }
        Ok(total.value().re / n as f64)
    }

    /// `num/den` polynomials of a finite Blaschke product; `None` when a
    /// singular part is present.
    pub fn to_rational(&self) -> Option<RationalFn> {
        if !self.atoms.is_empty() {
            return None;
        }
        let one = C64::new(1.0, 0.0);
        let mut num = Polynomial::constant(self.xi);
        let mut den = Polynomial::constant(one);
        if self.power > 0 {
            let mut c = vec![C64::new(0.0, 0.0); self.power as usize + 1];
            c[self.power as usize] = one;
            num = num.mul(&Polynomial::new(c));
        }
        for zr in &self.zeros {
            let a = zr.at;
            let unit = a.norm() / a;
            // (|a|/a)(a - z) and (1 - ā z)
            let f_num = Polynomial::new(vec![unit * a, -unit]);
            let f_den = Polynomial::new(vec![one, -a.conj()]);
            for _ in 0..zr.multiplicity {
                num = num.mul(&f_num);
                den = den.mul(&f_den);
            }
        }
        Some(RationalFn::new(num, den).expect("nonzero denominator"))
    }
}

/// Boundary probe points `e^{2πi(k + 1/2)/K}`.
pub fn boundary_probes(count: usize) -> Vec<C64> {
    (0..count)
        .map(|k| C64::from_polar(1.0, std::f64::consts::TAU * (k as f64 + 0.5) / count as f64))
        .collect()
}

/// Recovers the finite Blaschke product equal to `num/den`, which must be
/// analytic on the closed disk and unimodular on the circle.
pub fn rational_inner_from_bounded(num: &Polynomial, den: &Polynomial) -> Result<InnerFunction> {
    let r = RationalFn::new(num.clone(), den.clone())?;
    if num.is_zero() {
        return Err(Error::NotInner { deviation: 1.0 });
    }
    let factored = r.factor(1e-8)?;
    if let Some(&p) = factored.poles.iter().find(|p| p.norm() <= 1.0 + 1e-10) {
        return Err(Error::PoleInsideDisk(p));
    }
    let probes = boundary_probes(UNIMODULAR_PROBES);
    let deviation = probes
        .iter()
        .map(|&z| (factored.eval(z).norm() - 1.0).abs())
        .fold(0.0, f64::max);
    if !(deviation <= UNIMODULAR_TOL) {
        return Err(Error::NotInner { deviation });
    }
    let zeros: Vec<C64> = factored
        .zeros
        .iter()
        .copied()
        .filter(|a| a.norm() < 1.0)
        .map(|a| if a.norm() < 1e-14 { C64::new(0.0, 0.0) } else { a })
        .collect();
    let base = InnerFunction::blaschke_product(C64::new(1.0, 0.0), &zeros)?;
    let mut acc = C64::new(0.0, 0.0);
    for &z in probes.iter().step_by(UNIMODULAR_PROBES / 8) {
        let q = factored.eval(z) / base.eval(z)?;
        acc += q / q.norm();
    }
    let result = InnerFunction::new(acc / acc.norm(), base.power, base.zeros, Vec::new())?;
    let mismatch = probes
        .iter()
        .map(|&z| Ok((factored.eval(z) - result.eval(z)?).norm()))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    if !(mismatch <= UNIMODULAR_TOL) {
        return Err(Error::NotInner { deviation: mismatch });
    }
    Ok(result)
}

//! Outer functions `F = e^{iγ} exp(∫ (ζ + z)/(ζ - z) w(ζ) dm(ζ))` from
//! boundary log-modulus samples `w = log|F|`.

use std::f64::consts::{PI, TAU};

use crate::boundary::BoundaryGrid;
use crate::disk::{C64, I};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct OuterFunction {
    gamma: f64,
    logmod: BoundaryGrid,
}

impl OuterFunction {
    pub fn new(gamma: f64, logmod: BoundaryGrid) -> Result<Self> {
        if !gamma.is_finite() {
            return Err(Error::InvalidParameter(format!("gamma = {gamma}")));
        }
        if !logmod.is_real() {
            return Err(Error::NonReal {
                max_imag: logmod.values().iter().map(|v| v.im.abs()).fold(0.0, f64::max),
            });
        }
        if logmod.values().iter().any(|v| !v.re.is_finite()) {
            return Err(Error::InvalidParameter("log-modulus samples must be finite".into()));
        }
        Ok(OuterFunction { gamma, logmod })
    }

    /// The constant function 1.
    pub fn unit(n: usize) -> Result<Self> {
        Self::new(0.0, BoundaryGrid::from_real_fn(n, |_| 0.0)?)
    }

    /// A nonzero constant `c`.
    pub fn constant(c: C64, n: usize) -> Result<Self> {
        if c.norm() == 0.0 || !c.norm().is_finite() {
            return Err(Error::InvalidParameter(format!("outer constant {c}")));
        }
        let w = c.norm().ln();
        Self::new(c.arg(), BoundaryGrid::from_real_fn(n, |_| w)?)
    }

    /// The outer function `1 - z`, from the regularized samples of
    /// `log|1 - ζ|`.
    pub fn one_minus_z(n: usize) -> Result<Self> {
        Self::new(0.0, BoundaryGrid::log_abs_one_minus_zeta(n)?)
    }

    /// The outer function whose boundary argument is `arg` (real) and whose
    /// value at 0 has modulus 1: `w = -conj(arg)`, `γ = mean(arg)`.
    pub fn from_argument(arg: &BoundaryGrid) -> Result<Self> {
        let w = arg.conjugate()?.scale(-1.0);
        Self::new(arg.mean().re, w)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn logmod(&self) -> &BoundaryGrid {
        &self.logmod
    }

    pub fn n(&self) -> usize {
        self.logmod.n()
    }

    /// `e^{iγ} exp(H[w](z))`.
    pub fn eval(&self, z: C64) -> Result<C64> {
        Ok((I * self.gamma + self.logmod.herglotz(z)?).exp())
    }

    /// `log|F(z)|`, the Poisson extension of `w`.
    pub fn log_modulus(&self, z: C64) -> Result<f64> {
        Ok(self.logmod.poisson_extend(z)?.re)
    }

    /// Boundary function `exp(w + i·conj(w) + iγ)` on the grid.
    pub fn boundary(&self) -> Result<BoundaryGrid> {
        let conj = self.logmod.conjugate()?;
        let vals = self
            .logmod
            .values()
            .iter()
            .zip(conj.values())
            .map(|(w, c)| C64::new(w.re, c.re + self.gamma).exp())
            .collect();
        BoundaryGrid::new(vals)
    }

    /// Square root: `γ` reduced to `(-π, π]` and halved, `w` halved.
    pub fn sqrt(&self) -> OuterFunction {
        let mut g = self.gamma.rem_euclid(TAU);
        if g > PI {
            g -= TAU;
        }
        OuterFunction {
            gamma: 0.5 * g,
            logmod: self.logmod.scale(0.5),
        }
    }

    /// Pointwise product.
    pub fn multiply(&self, other: &OuterFunction) -> Result<OuterFunction> {
        Ok(OuterFunction {
            gamma: self.gamma + other.gamma,
            logmod: self.logmod.add(&other.logmod)?,
        })
    }
}

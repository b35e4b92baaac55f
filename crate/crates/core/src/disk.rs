//! Plane and disk primitives: the chordal metric, the linear fractional
//! transformation `T`, its inverse, and the Koebe map `K`.
//!
//! `T(z) = i(1 - iz)/(1 + iz)` maps the disk onto the upper half plane and the
//! circle (minus `±i`) onto the extended real line. `T` has order four under
//! composition, `T∘T(z) = 1/z`, which is what makes it compatible with
//! infinite products of inner functions.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const I: C64 = C64::new(0.0, 1.0);

/// Distance (chordal metric) below which a point counts as sitting on a pole.
pub const TAU_POLE: f64 = 1e-9;

/// Slack used when deciding whether a point lies in the closed disk.
const DISK_SLACK: f64 = 1e-12;

/// Chordal distance on the Riemann sphere.
pub fn chordal(a: C64, b: C64) -> f64 {
    2.0 * (a - b).norm() / ((1.0 + a.norm_sqr()) * (1.0 + b.norm_sqr())).sqrt()
}

/// Chordal distance from `a` to the point at infinity.
pub fn chordal_to_infinity(a: C64) -> f64 {
    2.0 / (1.0 + a.norm_sqr()).sqrt()
}

/// A point of the extended complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extended {
    Finite(C64),
    Infinity,
}

impl Extended {
    pub fn finite(self) -> Option<C64> {
        match self {
            Extended::Finite(z) => Some(z),
            Extended::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Extended::Infinity)
    }
}

impl From<C64> for Extended {
    fn from(z: C64) -> Self {
        Extended::Finite(z)
    }
}

/// A point of the closed unit disk. Boundary points carry `|z| = 1` exactly
/// up to rounding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint(C64);

impl DiskPoint {
    pub fn new(z: C64) -> Result<Self> {
        if !z.re.is_finite() || !z.im.is_finite() || z.norm() > 1.0 + DISK_SLACK {
            return Err(Error::OutsideDisk(z));
        }
        Ok(DiskPoint(z))
    }

    /// The boundary point `e^{iθ}`.
    pub fn on_circle(theta: f64) -> Self {
        DiskPoint(C64::from_polar(1.0, theta))
    }

    pub fn polar(r: f64, theta: f64) -> Result<Self> {
        Self::new(C64::from_polar(r, theta))
    }

    pub fn z(self) -> C64 {
        self.0
    }

    pub fn radius(self) -> f64 {
        self.0.norm()
    }

    pub fn is_boundary(self) -> bool {
        (self.0.norm() - 1.0).abs() <= DISK_SLACK
    }
}

impl From<DiskPoint> for C64 {
    fn from(p: DiskPoint) -> Self {
        p.0
    }
}

/// `T(z) = i(1 - iz)/(1 + iz)`.
pub fn mobius_t(z: C64) -> Result<C64> {
    if chordal(z, I) < TAU_POLE {
        return Err(Error::PoleProximity { point: z, pole: I });
    }
    Ok(I * (1.0 - I * z) / (1.0 + I * z))
}

/// `T⁻¹(z) = i(z - i)/(z + i)`.
pub fn mobius_t_inv(z: C64) -> Result<C64> {
    if chordal(z, -I) < TAU_POLE {
        return Err(Error::PoleProximity { point: z, pole: -I });
    }
    Ok(I * (z - I) / (z + I))
}

/// `T` on the extended plane: `T(i) = ∞` and `T(∞) = -i`.
pub fn mobius_t_ext(z: Extended) -> Extended {
    match z {
        Extended::Infinity => Extended::Finite(-I),
        Extended::Finite(w) if chordal(w, I) < TAU_POLE => Extended::Infinity,
        Extended::Finite(w) => Extended::Finite(I * (1.0 - I * w) / (1.0 + I * w)),
    }
}

/// `T⁻¹` on the extended plane: `T⁻¹(-i) = ∞` and `T⁻¹(∞) = i`.
pub fn mobius_t_inv_ext(z: Extended) -> Extended {
    match z {
        Extended::Infinity => Extended::Finite(I),
        Extended::Finite(w) if chordal(w, -I) < TAU_POLE => Extended::Infinity,
        Extended::Finite(w) => Extended::Finite(I * (w - I) / (w + I)),
    }
}

/// The normalized Koebe map `K(z) = -4z/(1 - z)²`, a univalent map of the
/// disk onto the plane slit along `[1, ∞)`.
pub fn koebe_k(z: C64) -> Result<C64> {
    let one = C64::new(1.0, 0.0);
    if chordal(z, one) < TAU_POLE {
        return Err(Error::PoleProximity { point: z, pole: one });
    }
    let d = one - z;
    Ok(-4.0 * z / (d * d))
}

/// Evaluation options shared by all evaluators.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EvalConfig {
    /// Accumulate long products as compensated sums of logarithms.
    pub compensated: bool,
}

/// Canonical representative of an angle in `[-π, π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let t = (theta + PI).rem_euclid(TAU) - PI;
    if t >= PI {
        t - TAU
    } else {
        t
    }
}

/// Neumaier-compensated accumulator for complex sums.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: C64,
    comp: C64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: C64) {
        let (re, cre) = two_sum(self.sum.re, x.re);
        let (im, cim) = two_sum(self.sum.im, x.im);
        self.sum = C64::new(re, im);
        self.comp += C64::new(cre, cim);
    }

    pub fn value(&self) -> C64 {
        self.sum + self.comp
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let c = if a.abs() >= b.abs() {
        (a - s) + b
    } else {
        (b - s) + a
    };
    (s, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn table_values() {
        let one = C64::new(1.0, 0.0);
        assert!(close(mobius_t(C64::new(0.0, 0.0)).unwrap(), I, 1e-15));
        assert!(close(mobius_t(one).unwrap(), one, 1e-15));
        assert!(close(mobius_t(-one).unwrap(), -one, 1e-15));
        assert!(close(mobius_t(-I).unwrap(), C64::new(0.0, 0.0), 1e-15));
        assert!(close(mobius_t_inv(I).unwrap(), C64::new(0.0, 0.0), 1e-15));
        assert!(close(mobius_t_inv(C64::new(0.0, 0.0)).unwrap(), -I, 1e-15));
        assert!(close(mobius_t_inv(one).unwrap(), one, 1e-15));
        assert_eq!(mobius_t_ext(Extended::Finite(I)), Extended::Infinity);
        assert_eq!(mobius_t_ext(Extended::Infinity), Extended::Finite(-I));
        assert_eq!(mobius_t_inv_ext(Extended::Finite(-I)), Extended::Infinity);
        assert_eq!(mobius_t_inv_ext(Extended::Infinity), Extended::Finite(I));
    }

    #[test]
    fn poles_are_errors() {
        assert!(matches!(mobius_t(I), Err(Error::PoleProximity { .. })));
        assert!(matches!(mobius_t_inv(-I), Err(Error::PoleProximity { .. })));
        assert!(matches!(
            koebe_k(C64::new(1.0, 0.0)),
            Err(Error::PoleProximity { .. })
        ));
        assert!(mobius_t(I + C64::new(1e-6, 0.0)).is_ok());
    }

    #[test]
    fn double_t_is_reciprocal() {
        let z = C64::new(0.3, 0.1);
        let tt = mobius_t(mobius_t(z).unwrap()).unwrap();
        assert!(close(tt, 1.0 / z, 1e-12));
    }

    #[test]
    fn inverse_matches_triple_composition() {
        for z in [C64::new(0.1, 0.05), C64::new(0.2, -0.7), C64::new(-0.5, 0.4)] {
            let t3 = mobius_t(mobius_t(mobius_t(z).unwrap()).unwrap()).unwrap();
            assert!(close(mobius_t_inv(z).unwrap(), t3, 1e-12));
            assert!(close(mobius_t_inv(mobius_t(z).unwrap()).unwrap(), z, 1e-14));
        }
    }

    #[test]
    fn koebe_values() {
        assert_eq!(koebe_k(C64::new(0.0, 0.0)).unwrap().norm(), 0.0);
        assert!(close(koebe_k(C64::new(-1.0, 0.0)).unwrap(), C64::new(1.0, 0.0), 1e-15));
        let k = koebe_k(C64::from_polar(1.0, PI / 3.0)).unwrap();
        assert!(k.im.abs() < 1e-12);
        assert!((k.re - 4.0).abs() < 1e-12);
    }

    #[test]
    fn disk_points() {
        assert!(DiskPoint::new(C64::new(0.6, 0.8)).unwrap().is_boundary());
        assert!(DiskPoint::new(C64::new(1.0, 0.1)).is_err());
        assert!(!DiskPoint::new(C64::new(0.5, 0.0)).unwrap().is_boundary());
    }

    #[test]
    fn wrap_angle_range() {
        assert!((wrap_angle(PI) + PI).abs() < 1e-15);
        assert!((wrap_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert!((wrap_angle(-PI) + PI).abs() < 1e-15);
        assert!((wrap_angle(0.25) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::default();
        s.add(C64::new(1e16, 0.0));
        for _ in 0..10 {
            s.add(C64::new(1.0, 0.0));
        }
        s.add(C64::new(-1e16, 0.0));
        assert_eq!(s.value().re, 10.0);
    }
}

//! Dense complex polynomials, companion-matrix root finding, and rational
//! functions in factored form.

use nalgebra::DMatrix;

use crate::disk::C64;
use crate::error::{Error, Result};

/// Polynomial with coefficients in ascending order, `c[0] + c[1] z + ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<C64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<C64>) -> Self {
        let mut p = Polynomial { coeffs };
        p.trim();
        p
    }

    pub fn constant(c: C64) -> Self {
        Polynomial::new(vec![c])
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    /// `lead · ∏ (z - r)`.
    pub fn from_roots(lead: C64, roots: &[C64]) -> Self {
        let mut c = vec![lead];
        for &r in roots {
            let mut next = vec![C64::new(0.0, 0.0); c.len() + 1];
            for (k, &a) in c.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * r;
            }
            c = next;
        }
        Polynomial::new(c)
    }

    fn trim(&mut self) {
        while self.coeffs.len() > 1 && self.coeffs.last().is_some_and(|c| c.norm() == 0.0) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.coeffs.push(C64::new(0.0, 0.0));
        }
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm() == 0.0)
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    fn derivative(&self) -> Polynomial {
        if self.coeffs.len() == 1 {
            return Polynomial::constant(C64::new(0.0, 0.0));
        }
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = C64::new(0.0, 0.0);
        Polynomial::new(
            (0..n)
                .map(|k| {
                    self.coeffs.get(k).copied().unwrap_or(zero)
                        + other.coeffs.get(k).copied().unwrap_or(zero)
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut c = vec![C64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Polynomial::new(c)
    }

    pub fn scale(&self, s: C64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// All finite roots, found as eigenvalues of the companion matrix and
    /// polished with Newton steps. Coefficients negligible relative to the
    /// largest one are dropped from the top (roots at infinity).
    pub fn roots(&self) -> Result<Vec<C64>> {
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return Err(Error::RootFinding("zero polynomial".into()));
        }
        let mut coeffs = self.coeffs.clone();
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.norm() <= 1e-14 * scale) {
            coeffs.pop();
        }
        let mut roots = Vec::new();
        let lead_zeros = coeffs.iter().take_while(|c| c.norm() == 0.0).count();
        roots.extend(std::iter::repeat_n(C64::new(0.0, 0.0), lead_zeros));
        let core: Vec<C64> = coeffs[lead_zeros..].to_vec();
        let d = core.len() - 1;
        if d == 0 {
            return Ok(roots);
        }
        let lead = core[d];
        let mut companion = DMatrix::<C64>::zeros(d, d);
        for i in 1..d {
            companion[(i, i - 1)] = C64::new(1.0, 0.0);
        }
        for i in 0..d {
            companion[(i, d - 1)] = -core[i] / lead;
        }
        let eig = companion
            .schur()
            .eigenvalues()
            .ok_or_else(|| Error::RootFinding("Schur decomposition did not converge".into()))?;
        let p = Polynomial::new(core);
        let dp = p.derivative();
        for &r0 in eig.iter() {
            roots.push(polish(&p, &dp, r0));
        }
        Ok(roots)
    }
}

fn polish(p: &Polynomial, dp: &Polynomial, mut r: C64) -> C64 {
    let mut val = p.eval(r).norm();
    for _ in 0..8 {
        let d = dp.eval(r);
        if d.norm() == 0.0 || val == 0.0 {
            break;
        }
        let cand = r - p.eval(r) / d;
        let cv = p.eval(cand).norm();
        if cv < val {
            r = cand;
            val = cv;
        } else {
            break;
        }
    }
    r
}

/// Rational function `num/den`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFn {
    pub num: Polynomial,
    pub den: Polynomial,
}

impl RationalFn {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidParameter("zero denominator polynomial".into()));
        }
        Ok(RationalFn { num, den })
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.num.eval(z) / self.den.eval(z)
    }

    /// Factored form with common roots (closer than `tol`) cancelled.
    pub fn factor(&self, tol: f64) -> Result<FactoredRational> {
        let num_roots = if self.num.is_zero() {
            Vec::new()
        } else {
            self.num.roots()?
        };
        let den_roots = self.den.roots()?;
        let num_lead = leading(&self.num);
        let den_lead = leading(&self.den);
        let (zeros, poles, merged) = cancel_common(num_roots, den_roots, tol);
        Ok(FactoredRational {
            gain: if self.num.is_zero() {
                C64::new(0.0, 0.0)
            } else {
                num_lead / den_lead
            },
            zeros,
            poles,
            cancelled: merged,
        })
    }
}

fn leading(p: &Polynomial) -> C64 {
    let scale = p.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    p.coeffs
        .iter()
        .rev()
        .find(|c| c.norm() > 1e-14 * scale)
        .copied()
        .unwrap_or(C64::new(0.0, 0.0))
}

/// `gain · ∏(z - zeros) / ∏(z - poles)` after cancellation.
#[derive(Debug, Clone, PartialEq)]
pub struct FactoredRational {
    pub gain: C64,
    pub zeros: Vec<C64>,
    pub poles: Vec<C64>,
    /// Zero/pole pairs removed as common factors.
    pub cancelled: Vec<C64>,
}

impl FactoredRational {
    pub fn eval(&self, z: C64) -> C64 {
        let n: C64 = self.zeros.iter().map(|&a| z - a).product();
        let d: C64 = self.poles.iter().map(|&b| z - b).product();
        self.gain * n / d
    }
}

/// Removes pairs of (zero, pole) closer than `tol`, nearest pairs first.
pub fn cancel_common(
    mut zeros: Vec<C64>,
    mut poles: Vec<C64>,
    tol: f64,
) -> (Vec<C64>, Vec<C64>, Vec<C64>) {
    let mut cancelled = Vec::new();
    loop {
        let mut best: Option<(usize, usize, f64)> = None;
        for (i, &a) in zeros.iter().enumerate() {
            for (j, &b) in poles.iter().enumerate() {
                let d = (a - b).norm();
                if d < tol && best.is_none_or(|(_, _, bd)| d < bd) {
                    best = Some((i, j, d));
                }
            }
        }
        match best {
            Some((i, j, _)) => {
                let a = zeros.swap_remove(i);
                let b = poles.swap_remove(j);
                cancelled.push((a + b) * 0.5);
            }
            None => break,
        }
    }
    (zeros, poles, cancelled)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_by_re(mut v: Vec<C64>) -> Vec<C64> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        v
    }

    #[test]
    fn roots_of_quadratic() {
        // 2z^2 + 3z - 2 = (2z - 1)(z + 2)
        let p = Polynomial::from_real(&[-2.0, 3.0, 2.0]);
        let r = sorted_by_re(p.roots().unwrap());
        assert!((r[0] - C64::new(-2.0, 0.0)).norm() < 1e-12);
        assert!((r[1] - C64::new(0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn from_roots_round_trip() {
        let roots = vec![C64::new(0.3, 0.2), C64::new(-0.7, 0.1), C64::new(0.0, -0.5)];
        let p = Polynomial::from_roots(C64::new(2.0, -1.0), &roots);
        for &r in &roots {
            assert!(p.eval(r).norm() < 1e-14);
        }
        let found = p.roots().unwrap();
        for &r in &roots {
            assert!(found.iter().any(|&f| (f - r).norm() < 1e-12));
        }
    }

    #[test]
    fn roots_degree_64_relative_accuracy() {
        let roots: Vec<C64> = (0..64)
            .map(|k| C64::from_polar(0.5 + 0.4 * ((k * 7 % 64) as f64) / 64.0, 0.37 * k as f64))
            .collect();
        let p = Polynomial::from_roots(C64::new(1.0, 0.0), &roots);
        let found = p.roots().unwrap();
        assert_eq!(found.len(), 64);
        for &f in &found {
            let nearest = roots
                .iter()
                .map(|&r| (f - r).norm() / r.norm())
                .fold(f64::INFINITY, f64::min);
            assert!(nearest < 1e-10, "relative error {nearest}");
        }
    }

    #[test]
    fn zero_roots_are_exact() {
        let p = Polynomial::from_real(&[0.0, 0.0, 1.0, 1.0]);
        let r = p.roots().unwrap();
        assert_eq!(r.iter().filter(|z| z.norm() == 0.0).count(), 2);
        assert!(r.iter().any(|z| (z + 1.0).norm() < 1e-14));
    }

    #[test]
    fn rational_cancellation() {
        let num = Polynomial::from_roots(C64::new(1.0, 0.0), &[C64::new(0.5, 0.0), C64::new(0.2, 0.0)]);
        let den = Polynomial::from_roots(C64::new(2.0, 0.0), &[C64::new(0.5, 0.0), C64::new(3.0, 0.0)]);
        let f = RationalFn::new(num, den).unwrap();
        let fr = f.factor(1e-8).unwrap();
        assert_eq!(fr.zeros.len(), 1);
        assert_eq!(fr.poles.len(), 1);
        assert_eq!(fr.cancelled.len(), 1);
        let z = C64::new(0.1, 0.3);
        assert!((fr.eval(z) - f.eval(z)).norm() < 1e-13);
    }
}

//! Univariate polynomials over the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{PolyError, Q};

/// A univariate polynomial with exact rational coefficients, stored by
/// ascending degree. The leading coefficient is nonzero unless the
/// polynomial is identically zero (then the coefficient vector is empty).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Q>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UniPoly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        if c.is_zero() {
            UniPoly::zero()
        } else {
            UniPoly { coeffs: vec![c] }
        }
    }

    /// `t` itself.
    pub fn t() -> Self {
        UniPoly::from_coeffs(vec![Q::zero(), Q::one()])
    }

    /// `c * t^e`.
    pub fn monomial(c: Q, e: usize) -> Self {
        if c.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![Q::zero(); e + 1];
        coeffs[e] = c;
        UniPoly { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        UniPoly::from_coeffs(
            coeffs
                .iter()
                .map(|&c| Q::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.coeffs.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn leading_coeff(&self) -> Option<&Q> {
        self.coeffs.last()
    }

    pub fn add(&self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        UniPoly::from_coeffs(coeffs)
    }

    pub fn sub(&self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect();
        UniPoly::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn mul(&self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![Q::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        UniPoly::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &Q) -> UniPoly {
        if c.is_zero() {
            return UniPoly::zero();
        }
        UniPoly {
            coeffs: self.coeffs.iter().map(|k| k * c).collect(),
        }
    }

    pub fn pow(&self, e: usize) -> UniPoly {
        let mut acc = UniPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitutes `t := t^k`.
    pub fn stretch(&self, k: usize) -> UniPoly {
        assert!(k >= 1);
        if self.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![Q::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        UniPoly::from_coeffs(coeffs)
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Q::from_integer(BigInt::from(i)))
            .collect();
        UniPoly::from_coeffs(coeffs)
    }

    pub fn eval_q(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    pub fn eval_c64(&self, x: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
        }
        acc
    }

    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    /// Quotient and remainder of exact division.
    pub fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.coeffs.len() - 1;
        let lead = divisor.coeffs.last().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let mut quot = vec![Q::zero(); rem.len() - dd];
        while rem.len() > dd {
            let r_lead = rem.last().unwrap();
            if r_lead.is_zero() {
                rem.pop();
                continue;
            }
            let k = rem.len() - 1 - dd;
            let factor = r_lead / lead;
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                let sub = dc * &factor;
                rem[k + i] -= sub;
            }
            debug_assert!(rem.last().unwrap().is_zero());
            rem.pop();
            quot[k] = factor;
        }
        (UniPoly::from_coeffs(quot), UniPoly::from_coeffs(rem))
    }

    pub fn rem(&self, divisor: &UniPoly) -> UniPoly {
        self.div_rem(divisor).1
    }

    /// Attempts exact division; None if the remainder is nonzero.
    pub fn exact_div(&self, divisor: &UniPoly) -> Option<UniPoly> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    /// Monic gcd of two polynomials (1 for coprime inputs).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Scales the polynomial so the leading coefficient is one.
    pub fn monic(&self) -> UniPoly {
        match self.leading_coeff() {
            None => UniPoly::zero(),
            Some(lc) => {
                let inv = lc.recip();
                self.scale(&inv)
            }
        }
    }

    /// Product of the distinct irreducible factors, made monic.
    pub fn squarefree_part(&self) -> Result<UniPoly, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        if self.degree() == Some(0) {
            return Ok(UniPoly::one());
        }
        let g = self.gcd(&self.derivative());
        let sf = self
            .exact_div(&g)
            .expect("gcd divides the polynomial");
        Ok(sf.monic())
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero()
            && self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Clears denominators and the integer content, preserving the sign of
    /// the leading coefficient: returns the primitive integer cousin.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let denom_lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&denom_lcm / c.denom()))
            .collect();
        let content = ints
            .iter()
            .fold(BigInt::zero(), |acc, c| num_integer::gcd(acc, c.clone()));
        let sign = if ints.last().unwrap().is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        let div = content * sign;
        ints.iter().map(|c| c / &div).collect()
    }

    /// A bound B such that all complex roots have modulus < B (Cauchy bound).
    pub fn cauchy_root_bound(&self) -> Q {
        match self.leading_coeff() {
            None => Q::one(),
            Some(lc) => {
                let max_ratio = self.coeffs[..self.coeffs.len() - 1]
                    .iter()
                    .map(|c| (c / lc).abs())
                    .max()
                    .unwrap_or_else(Q::zero);
                max_ratio + Q::one()
            }
        }
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if i == 0 || !mag.is_one() {
                write!(f, "{mag}")?;
                if i > 0 {
                    write!(f, "*")?;
                }
            }
            if i == 1 {
                write!(f, "t")?;
            } else if i > 1 {
                write!(f, "t^{i}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::{q, qr};
    use super::*;

    #[test]
    fn div_rem_reconstructs() {
        let a = UniPoly::from_i64(&[2, -3, 0, 1, 5]);
        let b = UniPoly::from_i64(&[1, 2, 1]);
        let (quot, rem) = a.div_rem(&b);
        assert_eq!(quot.mul(&b).add(&rem), a);
        assert!(rem.degree() < b.degree());
    }

    #[test]
    fn gcd_of_shared_factor() {
        // (t-1)^2 (t+2) and (t-1)(t-3) share (t-1).
        let a = UniPoly::from_i64(&[-1, 1]).pow(2).mul(&UniPoly::from_i64(&[2, 1]));
        let b = UniPoly::from_i64(&[-1, 1]).mul(&UniPoly::from_i64(&[-3, 1]));
        assert_eq!(a.gcd(&b), UniPoly::from_i64(&[-1, 1]));
    }

    #[test]
    fn squarefree_part_examples() {
        // t^2 -> t
        assert_eq!(
            UniPoly::from_i64(&[0, 0, 1]).squarefree_part().unwrap(),
            UniPoly::t()
        );
        // (t-1)^2 (t+2) -> (t-1)(t+2) up to scalar (monic here)
        let g = UniPoly::from_i64(&[-1, 1]).pow(2).mul(&UniPoly::from_i64(&[2, 1]));
        let sf = g.squarefree_part().unwrap();
        assert_eq!(sf, UniPoly::from_i64(&[-1, 1]).mul(&UniPoly::from_i64(&[2, 1])));
        // t^2 - r^3 is already square-free for r = 1/4
        let r3 = qr(1, 64);
        let h = UniPoly::from_coeffs(vec![-r3, q(0), q(1)]);
        assert_eq!(h.squarefree_part().unwrap(), h);
    }

    #[test]
    fn primitive_integer_normalizes() {
        let p = UniPoly::from_coeffs(vec![qr(-2, 3), q(0), qr(4, 3)]);
        assert_eq!(
            p.primitive_integer(),
            vec![BigInt::from(-1), BigInt::from(0), BigInt::from(2)]
        );
    }

    #[test]
    fn stretch_substitutes_power() {
        let p = UniPoly::from_i64(&[1, 2, 3]);
        let s = p.stretch(2);
        assert_eq!(s.coeffs(), UniPoly::from_i64(&[1, 0, 2, 0, 3]).coeffs());
    }
}

//! Multivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{PolyError, Q, UniPoly};

/// A multivariate polynomial over the rationals.
///
/// Terms map exponent vectors (one entry per variable) to nonzero rational
/// coefficients; a zero polynomial has no terms. The exponent map is ordered
/// so iteration, display and serialization are deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Q>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn variable(nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable index out of range");
        let mut exps = vec![0; nvars];
        exps[index] = 1;
        let mut p = Poly::zero(nvars);
        p.terms.insert(exps, Q::one());
        p
    }

    /// Builds a polynomial from raw terms, merging duplicates and dropping zeros.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Q)>) -> Self {
        let mut p = Poly::zero(nvars);
        for (exps, coeff) in terms {
            assert_eq!(exps.len(), nvars, "exponent vector length mismatch");
            p.add_term(exps, coeff);
        }
        p
    }

    fn add_term(&mut self, exps: Vec<u32>, coeff: Q) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Q)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn constant_term(&self) -> Q {
        self.terms
            .get(&vec![0; self.nvars])
            .cloned()
            .unwrap_or_else(Q::zero)
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Poly {
        let mut acc = Poly::constant(self.nvars, Q::one());
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Order of vanishing at the origin: the minimum total degree over terms.
    pub fn ord(&self) -> Result<u32, PolyError> {
        self.terms
            .keys()
            .map(|e| e.iter().sum())
            .min()
            .ok_or(PolyError::ZeroPolynomial)
    }

    /// The lowest-degree homogeneous part.
    pub fn initial_form(&self) -> Result<HomogPoly, PolyError> {
        let d = self.ord()?;
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e.iter().sum::<u32>() == d)
            .map(|(e, c)| (e.clone(), c.clone()));
        Ok(HomogPoly {
            poly: Poly::from_terms(self.nvars, terms),
            degree: d,
        })
    }

    pub fn partial(&self, var: usize) -> Poly {
        assert!(var < self.nvars);
        let mut out = Poly::zero(self.nvars);
        for (exps, coeff) in &self.terms {
            let e = exps[var];
            if e == 0 {
                continue;
            }
            let mut lowered = exps.clone();
            lowered[var] = e - 1;
            out.add_term(lowered, coeff * Q::from_integer(e.into()));
        }
        out
    }

    pub fn eval_q(&self, point: &[Q]) -> Q {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Q::zero();
        for (exps, coeff) in &self.terms {
            let mut term = coeff.clone();
            for (x, &e) in point.iter().zip(exps.iter()) {
                for _ in 0..e {
                    term *= x;
                }
            }
            acc += term;
        }
        acc
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.nvars);
        self.terms
            .iter()
            .map(|(exps, coeff)| {
                let mut term = coeff.to_f64().unwrap_or(f64::NAN);
                for (x, &e) in point.iter().zip(exps.iter()) {
                    term *= x.powi(e as i32);
                }
                term
            })
            .sum()
    }

    pub fn eval_c64(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.nvars);
        self.terms
            .iter()
            .map(|(exps, coeff)| {
                let mut term = Complex64::new(coeff.to_f64().unwrap_or(f64::NAN), 0.0);
                for (x, &e) in point.iter().zip(exps.iter()) {
                    term *= x.powu(e);
                }
                term
            })
            .sum()
    }

    /// Exact restriction to the affine line `base + t * dir`.
    pub fn restrict_line(&self, base: &[Q], dir: &[Q]) -> Result<UniPoly, PolyError> {
        if base.len() != self.nvars {
            return Err(PolyError::DimensionMismatch {
                expected: self.nvars,
                got: base.len(),
            });
        }
        if dir.len() != self.nvars {
            return Err(PolyError::DimensionMismatch {
                expected: self.nvars,
                got: dir.len(),
            });
        }
        if dir.iter().all(|d| d.is_zero()) {
            return Err(PolyError::ZeroDirection);
        }
        // Per-variable powers (base_i + t dir_i)^e are memoized: exponent
        // vectors repeat the same small powers across terms.
        let lines: Vec<UniPoly> = base
            .iter()
            .zip(dir.iter())
            .map(|(b, d)| UniPoly::from_coeffs(vec![b.clone(), d.clone()]))
            .collect();
        let mut power_cache: Vec<Vec<UniPoly>> = (0..self.nvars)
            .map(|i| vec![UniPoly::one(), lines[i].clone()])
            .collect();
        let mut acc = UniPoly::zero();
        for (exps, coeff) in &self.terms {
            let mut term = UniPoly::constant(coeff.clone());
            for (i, &e) in exps.iter().enumerate() {
                let cache = &mut power_cache[i];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap().mul(&lines[i]);
                    cache.push(next);
                }
                term = term.mul(&cache[e as usize]);
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Substitutes `x_i := sum_j m[i][j] y_j` (an exact linear change of coordinates).
    pub fn compose_linear(&self, m: &[Vec<Q>]) -> Poly {
        assert_eq!(m.len(), self.nvars);
        let images: Vec<Poly> = m
            .iter()
            .map(|row| {
                assert_eq!(row.len(), self.nvars);
                Poly::from_terms(
                    self.nvars,
                    row.iter().enumerate().map(|(j, c)| {
                        let mut e = vec![0; self.nvars];
                        e[j] = 1;
                        (e, c.clone())
                    }),
                )
            })
            .collect();
        let mut acc = Poly::zero(self.nvars);
        for (exps, coeff) in &self.terms {
            let mut term = Poly::constant(self.nvars, coeff.clone());
            for (i, &e) in exps.iter().enumerate() {
                term = &term * &images[i].pow(e);
            }
            acc = &acc + &term;
        }
        acc
    }

    /// Substitutes univariate polynomials for every variable, yielding the
    /// exact composition `f(c_1(t), ..., c_n(t))`.
    pub fn compose_unipolys(&self, comps: &[UniPoly]) -> UniPoly {
        assert_eq!(comps.len(), self.nvars);
        let mut acc = UniPoly::zero();
        for (exps, coeff) in &self.terms {
            let mut term = UniPoly::constant(coeff.clone());
            for (i, &e) in exps.iter().enumerate() {
                for _ in 0..e {
                    term = term.mul(&comps[i]);
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Euclidean norm of the coefficient vector, in floating point.
    pub fn coeff_norm_f64(&self) -> f64 {
        self.terms
            .values()
            .map(|c| {
                let v = c.to_f64().unwrap_or(0.0);
                v * v
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Renders with variable names supplied by the caller.
    pub fn display_with<'a>(&'a self, vars: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, vars }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = Poly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let exps: Vec<u32> = ea.iter().zip(eb.iter()).map(|(a, b)| a + b).collect();
                out.add_term(exps, ca * cb);
            }
        }
        out
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    vars: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        // Highest total degree first, then exponent order, so output is stable.
        let mut entries: Vec<(&Vec<u32>, &Q)> = self.poly.terms.iter().collect();
        entries.sort_by(|(ea, _), (eb, _)| {
            let da: u32 = ea.iter().sum();
            let db: u32 = eb.iter().sum();
            db.cmp(&da).then_with(|| eb.cmp(ea).reverse())
        });
        for (i, (exps, coeff)) in entries.iter().enumerate() {
            let neg = coeff.is_negative();
            let mag = coeff.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_const = exps.iter().all(|&e| e == 0);
            let show_coeff = is_const || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            let mut first_var = !show_coeff;
            for (j, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first_var || show_coeff {
                    write!(f, "*")?;
                }
                first_var = false;
                write!(f, "{}", self.vars[j])?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// A polynomial all of whose terms share one total degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogPoly {
    poly: Poly,
    degree: u32,
}

impl HomogPoly {
    /// Wraps a polynomial after checking every exponent vector sums to one degree.
    pub fn try_new(poly: Poly) -> Result<Self, PolyError> {
        let degree = poly.ord()?;
        if poly
            .terms()
            .any(|(e, _)| e.iter().sum::<u32>() != degree)
        {
            return Err(PolyError::ZeroPolynomial);
        }
        Ok(HomogPoly { poly, degree })
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.poly.nvars()
    }

    pub fn eval_q(&self, point: &[Q]) -> Q {
        self.poly.eval_q(point)
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.poly.eval_f64(point)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{poly_parse, q, qr};
    use super::*;

    fn vars2() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    #[test]
    fn ord_reads_minimal_degree() {
        let f = poly_parse("y^3 - x^2", &["x", "y"]).unwrap();
        assert_eq!(f.ord().unwrap(), 2);
        let g = poly_parse("z^3 - x^5*y - x*y^5", &["x", "y", "z"]).unwrap();
        assert_eq!(g.ord().unwrap(), 3);
    }

    #[test]
    fn ord_of_zero_polynomial_errors() {
        assert_eq!(Poly::zero(2).ord(), Err(PolyError::ZeroPolynomial));
    }

    #[test]
    fn initial_form_keeps_lowest_terms() {
        let f = poly_parse("y^3 - x^2", &["x", "y"]).unwrap();
        let inf = f.initial_form().unwrap();
        assert_eq!(inf.degree(), 2);
        assert_eq!(
            format!("{}", inf.poly().display_with(&vars2())),
            "-x^2"
        );

        let g = poly_parse("z^3 - x^5*y - x*y^5", &["x", "y", "z"]).unwrap();
        let inz = g.initial_form().unwrap();
        assert_eq!(inz.degree(), 3);
        assert_eq!(inz.poly().num_terms(), 1);
    }

    #[test]
    fn initial_form_of_homogeneous_is_identity() {
        let f = poly_parse("x^2 + y^2", &["x", "y"]).unwrap();
        assert_eq!(f.initial_form().unwrap().poly(), &f);
    }

    #[test]
    fn initial_form_is_multiplicative() {
        let f = poly_parse("y^3 - x^2", &["x", "y"]).unwrap();
        let g = poly_parse("y + x^2 - 3*x*y^2", &["x", "y"]).unwrap();
        let prod = (&f * &g).initial_form().unwrap();
        let sep = f.initial_form().unwrap().poly() * g.initial_form().unwrap().poly();
        assert_eq!(prod.poly(), &sep);
    }

    #[test]
    fn restrict_line_matches_symbolic_substitution() {
        // f = y^2 - x^3 along base (r, 0), dir (0, 1): t^2 - r^3.
        let f = poly_parse("y^2 - x^3", &["x", "y"]).unwrap();
        let r = qr(1, 4);
        let g = f
            .restrict_line(&[r.clone(), q(0)], &[q(0), q(1)])
            .unwrap();
        assert_eq!(g.degree(), Some(2));
        assert_eq!(g.coeff(0), -(&r * &r * &r));
        assert_eq!(g.coeff(1), q(0));
        assert_eq!(g.coeff(2), q(1));
    }

    #[test]
    fn restrict_line_trivial_cases() {
        let f = poly_parse("y", &["x", "y"]).unwrap();
        let g = f.restrict_line(&[q(1), q(0)], &[q(0), q(1)]).unwrap();
        assert_eq!(g.coeffs(), &[q(0), q(1)]);

        let s = poly_parse("z^3 - x^5*y - x*y^5", &["x", "y", "z"]).unwrap();
        let a = qr(2, 3);
        let b = qr(-1, 2);
        let g = s
            .restrict_line(&[a.clone(), b.clone(), q(0)], &[q(0), q(0), q(1)])
            .unwrap();
        let c5 = &a * &a * &a * &a * &a * &b + &a * (&b * &b * &b * &b * &b);
        assert_eq!(g.coeff(0), -c5);
        assert_eq!(g.coeff(3), q(1));
    }

    #[test]
    fn restrict_line_rejects_zero_direction() {
        let f = poly_parse("y", &["x", "y"]).unwrap();
        assert_eq!(
            f.restrict_line(&[q(0), q(0)], &[q(0), q(0)]),
            Err(PolyError::ZeroDirection)
        );
    }

    #[test]
    fn eval_agrees_with_restriction() {
        let f = poly_parse("3*x^2*y - 1/2*y^3 + x", &["x", "y"]).unwrap();
        let base = [qr(1, 3), qr(-2, 5)];
        let dir = [qr(4, 7), qr(1, 2)];
        let g = f.restrict_line(&base, &dir).unwrap();
        for t in [q(0), qr(3, 2), qr(-7, 5)] {
            let pt: Vec<Q> = base
                .iter()
                .zip(dir.iter())
                .map(|(b, d)| b + &(d * &t))
                .collect();
            assert_eq!(g.eval_q(&t), f.eval_q(&pt));
        }
    }

    #[test]
    fn compose_linear_round_trip() {
        let f = poly_parse("y^3 - x^2", &["x", "y"]).unwrap();
        let a = vec![vec![q(2), q(1)], vec![q(1), q(1)]];
        let ainv = vec![vec![q(1), q(-1)], vec![q(-1), q(2)]];
        let g = f.compose_linear(&a).compose_linear(&ainv);
        assert_eq!(g, f);
    }
}

//! Exact gcd of bivariate rational polynomials, used for the square-free
//! check of plane-germ defining polynomials.
//!
//! Polynomials in two variables are treated as univariate in `y` with
//! coefficients in `Q[x]`; the gcd is a primitive polynomial remainder
//! sequence with content bookkeeping.

use num_traits::Zero;

use super::{Poly, Q, UniPoly};

/// `Q[x][y]` representation: coefficient of `y^i` is `coeffs[i]` in `Q[x]`.
#[derive(Debug, Clone, PartialEq)]
struct YPoly {
    coeffs: Vec<UniPoly>,
}

impl YPoly {
    fn from_poly(p: &Poly) -> Self {
        assert_eq!(p.nvars(), 2);
        let ydeg = p.terms().map(|(e, _)| e[1]).max().unwrap_or(0) as usize;
        let mut coeffs = vec![UniPoly::zero(); ydeg + 1];
        for (e, c) in p.terms() {
            let x = e[0] as usize;
            let y = e[1] as usize;
            coeffs[y] = coeffs[y].add(&UniPoly::monomial(c.clone(), x));
        }
        let mut out = YPoly { coeffs };
        out.normalize();
        out
    }

    fn to_poly(&self) -> Poly {
        let mut terms = Vec::new();
        for (ydeg, c) in self.coeffs.iter().enumerate() {
            for (xdeg, coeff) in c.coeffs().iter().enumerate() {
                if !coeff.is_zero() {
                    terms.push((vec![xdeg as u32, ydeg as u32], coeff.clone()));
                }
            }
        }
        Poly::from_terms(2, terms)
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn content(&self) -> UniPoly {
        let mut g = UniPoly::zero();
        for c in &self.coeffs {
            if c.is_zero() {
                continue;
            }
            g = if g.is_zero() { c.monic() } else { g.gcd(c) };
        }
        g
    }

    fn divide_content(&self, content: &UniPoly) -> YPoly {
        YPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.exact_div(content).expect("content divides"))
                .collect(),
        }
    }

    fn primitive(&self) -> YPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.divide_content(&self.content())
    }

    fn mul_scalar(&self, s: &UniPoly) -> YPoly {
        let mut out = YPoly {
            coeffs: self.coeffs.iter().map(|c| c.mul(s)).collect(),
        };
        out.normalize();
        out
    }

    fn sub(&self, rhs: &YPoly) -> YPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = UniPoly::zero();
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).unwrap_or(&zero);
                let b = rhs.coeffs.get(i).unwrap_or(&zero);
                a.sub(b)
            })
            .collect();
        let mut out = YPoly { coeffs };
        out.normalize();
        out
    }

    fn shift_y(&self, k: usize) -> YPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![UniPoly::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        YPoly { coeffs }
    }

    /// Pseudo-remainder of self by rhs in `(Q[x])[y]`.
    fn pseudo_rem(&self, rhs: &YPoly) -> YPoly {
        let d = rhs.degree().expect("nonzero divisor");
        let lead = rhs.coeffs.last().unwrap().clone();
        let mut rem = self.clone();
        while let Some(rd) = rem.degree() {
            if rd < d {
                break;
            }
            let rlead = rem.coeffs.last().unwrap().clone();
            rem = rem
                .mul_scalar(&lead)
                .sub(&rhs.mul_scalar(&rlead).shift_y(rd - d));
        }
        rem
    }
}

/// Exact gcd in `Q[x, y]`, primitive with respect to `y` and with monic
/// content, so the result is deterministic up to nothing.
pub fn bivariate_gcd(a: &Poly, b: &Poly) -> Poly {
    assert_eq!(a.nvars(), 2);
    assert_eq!(b.nvars(), 2);
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let ya = YPoly::from_poly(a);
    let yb = YPoly::from_poly(b);
    let content_gcd = ya.content().gcd(&yb.content());
    let mut p = ya.primitive();
    let mut r = yb.primitive();
    if p.degree() < r.degree() {
        std::mem::swap(&mut p, &mut r);
    }
    while !r.is_zero() {
        let rem = p.pseudo_rem(&r).primitive();
        p = r;
        r = rem;
    }
    // Normalize: make the leading y-coefficient monic in x.
    let lead = p.coeffs.last().unwrap();
    let scale = lead.leading_coeff().unwrap().recip();
    let p = p.mul_scalar(&UniPoly::constant(Q::from(scale)));
    let g = p.mul_scalar(&content_gcd);
    g.to_poly()
}

/// Exact square-free test for a bivariate polynomial: true when
/// `gcd(f, f_x, f_y)` is constant.
pub fn bivariate_squarefree(f: &Poly) -> bool {
    assert_eq!(f.nvars(), 2);
    if f.is_zero() {
        return false;
    }
    let g1 = bivariate_gcd(f, &f.partial(0));
    if g1.total_degree() == Some(0) {
        return true;
    }
    let g2 = bivariate_gcd(&g1, &f.partial(1));
    g2.total_degree() == Some(0)
}

#[cfg(test)]
mod tests {
    use super::super::poly_parse;
    use super::*;
    use crate::polyring::factor::proportionality;

    fn p2(s: &str) -> Poly {
        poly_parse(s, &["x", "y"]).unwrap()
    }

    #[test]
    fn gcd_of_shared_factor() {
        let a = p2("(y - x^2)*(y + x)");
        let b = p2("(y - x^2)*(x - y^3)");
        let g = bivariate_gcd(&a, &b);
        assert!(proportionality(&g, &p2("y - x^2")).is_some());
    }

    #[test]
    fn coprime_gcd_is_constant() {
        let g = bivariate_gcd(&p2("y^3 - x^2"), &p2("y"));
        assert_eq!(g.total_degree(), Some(0));
    }

    #[test]
    fn squarefree_detects_squares() {
        assert!(bivariate_squarefree(&p2("y^3 - x^2")));
        assert!(bivariate_squarefree(&p2("y^2 - x^2")));
        assert!(!bivariate_squarefree(&p2("(y - x^2)^2")));
        assert!(!bivariate_squarefree(&p2("x^2*y + x^2")));
        assert!(bivariate_squarefree(&p2("x^2 + y^2")));
    }

    #[test]
    fn gcd_catches_pure_x_factor() {
        let a = p2("x^2*y");
        let b = p2("x^3");
        let g = bivariate_gcd(&a, &b);
        assert!(proportionality(&g, &p2("x^2")).is_some());
    }
}

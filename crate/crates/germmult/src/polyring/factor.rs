//! Exact factorization over the rationals: univariate (rational roots,
//! Yun split, Kronecker search) and homogeneous bivariate.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{HomogPoly, Poly, PolyError, Q, UniPoly};

/// Factorization of a univariate rational polynomial: a scalar content and
/// pairwise non-associate irreducible primitive integer factors with
/// multiplicities. The product reassembles the input exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct UniFactorization {
    pub content: Q,
    pub factors: Vec<(UniPoly, u32)>,
}

impl UniFactorization {
    pub fn reassemble(&self) -> UniPoly {
        let mut acc = UniPoly::constant(self.content.clone());
        for (f, m) in &self.factors {
            acc = acc.mul(&f.pow(*m as usize));
        }
        acc
    }
}

pub fn factor_unipoly(g: &UniPoly) -> Result<UniFactorization, PolyError> {
    if g.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let mut factors: Vec<(UniPoly, u32)> = Vec::new();

    // Power of t.
    let t_mult = g.coeffs().iter().take_while(|c| c.is_zero()).count() as u32;
    let mut body = UniPoly::from_coeffs(g.coeffs()[t_mult as usize..].to_vec());
    if t_mult > 0 {
        factors.push((UniPoly::t(), t_mult));
    }

    let mut content = body.leading_coeff().cloned().unwrap();
    body = body.monic();

    for (part, mult) in yun_squarefree_split(&body) {
        for irr in factor_squarefree(&part) {
            factors.push((irr, mult));
        }
    }

    // Primitive-integer normalization moved scalars around; recover the
    // exact content by one division of leading coefficients.
    let lead_prod = factors.iter().fold(Q::one(), |acc, (f, m)| {
        let lc = f.leading_coeff().cloned().unwrap();
        let mut p = acc;
        for _ in 0..*m {
            p *= &lc;
        }
        p
    });
    content /= lead_prod;

    factors.sort_by(|(a, _), (b, _)| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| format!("{a}").cmp(&format!("{b}")))
    });
    Ok(UniFactorization { content, factors })
}

/// Yun's algorithm: splits a monic polynomial into square-free parts with
/// multiplicities.
fn yun_squarefree_split(f: &UniPoly) -> Vec<(UniPoly, u32)> {
    if f.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let df = f.derivative();
    let g = f.gcd(&df);
    let mut c = f.exact_div(&g).unwrap();
    let mut d = df.exact_div(&g).unwrap().sub(&c.derivative());
    let mut out = Vec::new();
    let mut mult = 1u32;
    loop {
        let p = c.gcd(&d);
        if p.degree().unwrap_or(0) > 0 {
            out.push((p.clone(), mult));
        }
        c = c.exact_div(&p).unwrap();
        if c.degree().unwrap_or(0) == 0 {
            break;
        }
        d = d.exact_div(&p).unwrap().sub(&c.derivative());
        mult += 1;
    }
    out
}

/// Factors a square-free polynomial with nonzero constant term into
/// irreducible primitive integer polynomials.
fn factor_squarefree(g: &UniPoly) -> Vec<UniPoly> {
    let ints = g.primitive_integer();
    let mut out = Vec::new();
    let mut rest = UniPoly::from_coeffs(ints.iter().map(|c| Q::from_integer(c.clone())).collect());

    // Rational roots p/q with p | constant, q | leading give linear factors.
    loop {
        let deg = rest.degree().unwrap_or(0);
        if deg <= 1 {
            break;
        }
        let ci = rest.primitive_integer();
        let a0 = ci[0].clone();
        let an = ci.last().unwrap().clone();
        let mut found = None;
        'search: for p in divisors(&a0.abs()) {
            for qq in divisors(&an.abs()) {
                for sign in [1i32, -1] {
                    let root = Q::new(p.clone() * BigInt::from(sign), qq.clone());
                    if rest.eval_q(&root).is_zero() {
                        found = Some((p.clone() * BigInt::from(sign), qq.clone()));
                        break 'search;
                    }
                }
            }
        }
        match found {
            Some((p, qq)) => {
                // Factor q*t - p, primitive by construction of the root search.
                let lin = UniPoly::from_coeffs(vec![
                    Q::from_integer(-p),
                    Q::from_integer(qq),
                ]);
                rest = rest.exact_div(&lin).unwrap();
                out.push(lin);
            }
            None => break,
        }
    }

    let deg = rest.degree().unwrap_or(0);
    if deg == 1 {
        out.push(normalize_primitive(&rest));
    } else if (2..=3).contains(&deg) {
        // No rational root: quadratics and cubics are irreducible.
        out.push(normalize_primitive(&rest));
    } else if deg >= 4 {
        out.extend(kronecker_factor(&normalize_primitive(&rest)));
    }
    out.sort_by_key(|f| (f.degree(), format!("{f}")));
    out
}

fn normalize_primitive(g: &UniPoly) -> UniPoly {
    UniPoly::from_coeffs(
        g.primitive_integer()
            .into_iter()
            .map(Q::from_integer)
            .collect(),
    )
}

/// Kronecker's method: exhaustive search for a factor of degree 2..deg/2 by
/// interpolating through divisor tuples of sampled values. Exponential, but
/// the polynomials here are small (tangent cones of low-degree germs).
fn kronecker_factor(g: &UniPoly) -> Vec<UniPoly> {
    let deg = g.degree().unwrap();
    let max_k = deg / 2;
    for k in 2..=max_k {
        // Sample points with the smallest values keep divisor counts down.
        let mut points: Vec<(BigInt, BigInt)> = Vec::new();
        let mut candidates: Vec<BigInt> = vec![BigInt::zero()];
        for m in 1..=(k as i64 + 3) {
            candidates.push(BigInt::from(m));
            candidates.push(BigInt::from(-m));
        }
        for x in candidates {
            let v = g.eval_q(&Q::from_integer(x.clone()));
            debug_assert!(!v.is_zero(), "rational roots were already removed");
            points.push((x, v.to_integer()));
        }
        points.sort_by_key(|(_, v)| v.abs());
        points.truncate(k + 1);

        let divisor_lists: Vec<Vec<BigInt>> = points
            .iter()
            .enumerate()
            .map(|(i, (_, v))| {
                let mut ds = Vec::new();
                for d in divisors(&v.abs()) {
                    if i == 0 {
                        // Sign symmetry: fixing the first value positive halves the search.
                        ds.push(d);
                    } else {
                        ds.push(d.clone());
                        ds.push(-d);
                    }
                }
                ds
            })
            .collect();

        let mut index = vec![0usize; k + 1];
        'tuples: loop {
            let values: Vec<Q> = index
                .iter()
                .enumerate()
                .map(|(i, &j)| Q::from_integer(divisor_lists[i][j].clone()))
                .collect();
            let xs: Vec<Q> = points
                .iter()
                .map(|(x, _)| Q::from_integer(x.clone()))
                .collect();
            if let Some(cand) = lagrange_integer(&xs, &values) {
                if cand.degree() == Some(k) {
                    if let Some(quot) = g.exact_div(&cand) {
                        let mut result = vec![normalize_primitive(&cand)];
                        result.extend(kronecker_factor(&normalize_primitive(&quot)));
                        return result;
                    }
                }
            }
            // Advance the mixed-radix tuple counter.
            for i in 0..=k {
                index[i] += 1;
                if index[i] < divisor_lists[i].len() {
                    continue 'tuples;
                }
                index[i] = 0;
            }
            break;
        }
    }
    vec![g.clone()]
}

/// Interpolates through `(xs[i], values[i])` and returns the polynomial only
/// when every coefficient is an integer.
fn lagrange_integer(xs: &[Q], values: &[Q]) -> Option<UniPoly> {
    let mut acc = UniPoly::zero();
    for (i, v) in values.iter().enumerate() {
        let mut basis = UniPoly::one();
        let mut denom = Q::one();
        for (j, xj) in xs.iter().enumerate() {
            if i == j {
                continue;
            }
            basis = basis.mul(&UniPoly::from_coeffs(vec![-xj.clone(), Q::one()]));
            denom *= &xs[i] - xj;
        }
        acc = acc.add(&basis.scale(&(v / denom)));
    }
    if acc.coeffs().iter().all(|c| c.is_integer()) {
        Some(acc)
    } else {
        None
    }
}

/// Positive divisors by trial division.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    if n.is_zero() {
        return vec![];
    }
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    loop {
        let dsq = &d * &d;
        if dsq > n {
            break;
        }
        if (&n % &d).is_zero() {
            small.push(d.clone());
            let other = &n / &d;
            if other != d {
                large.push(other);
            }
        }
        d += 1;
        // Trial division needs a cap for adversarial inputs; values here are
        // evaluations of small polynomials at small integers.
        if d.to_u64().is_some_and(|v| v > 10_000_000) {
            small.push(n.clone());
            break;
        }
    }
    large.reverse();
    small.extend(large);
    small
}

/// Decomposes a nonzero homogeneous bivariate polynomial into irreducible
/// homogeneous factors over the rationals with algebraic multiplicities.
/// The product of `factor^mult` equals the input up to a rational scalar.
pub fn factor_homog_bivariate(h: &HomogPoly) -> Result<Vec<(HomogPoly, u32)>, PolyError> {
    assert_eq!(h.nvars(), 2, "bivariate factorization needs two variables");
    let poly = h.poly();
    if poly.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let x_mult = poly.terms().map(|(e, _)| e[0]).min().unwrap();
    let y_mult = poly.terms().map(|(e, _)| e[1]).min().unwrap();

    let mut out: Vec<(HomogPoly, u32)> = Vec::new();
    if x_mult > 0 {
        out.push((HomogPoly::try_new(Poly::variable(2, 0))?, x_mult));
    }
    if y_mult > 0 {
        out.push((HomogPoly::try_new(Poly::variable(2, 1))?, y_mult));
    }

    // Dehomogenize the stripped part: u = x / y.
    let reduced_deg = h.degree() - x_mult - y_mult;
    if reduced_deg > 0 {
        let coeffs: Vec<Q> = {
            let mut c = vec![Q::zero(); reduced_deg as usize + 1];
            for (e, coeff) in poly.terms() {
                let ex = e[0] - x_mult;
                c[ex as usize] = coeff.clone();
            }
            c
        };
        let dehom = UniPoly::from_coeffs(coeffs);
        let fac = factor_unipoly(&dehom)?;
        for (f, m) in fac.factors {
            let e = f.degree().unwrap() as u32;
            let homog = Poly::from_terms(
                2,
                f.coeffs()
                    .iter()
                    .enumerate()
                    .map(|(i, c)| (vec![i as u32, e - i as u32], c.clone())),
            );
            out.push((HomogPoly::try_new(homog)?, m));
        }
    }
    out.sort_by(|(a, _), (b, _)| {
        a.degree().cmp(&b.degree()).then_with(|| {
            let va = vec!["x".to_string(), "y".to_string()];
            format!("{}", a.poly().display_with(&va)).cmp(&format!("{}", b.poly().display_with(&va)))
        })
    });
    Ok(out)
}

/// The scalar c with `a = c * b`, when the two polynomials are proportional.
pub fn proportionality(a: &Poly, b: &Poly) -> Option<Q> {
    if a.is_zero() && b.is_zero() {
        return Some(Q::one());
    }
    if a.num_terms() != b.num_terms() {
        return None;
    }
    let mut ratio: Option<Q> = None;
    for ((ea, ca), (eb, cb)) in a.terms().zip(b.terms()) {
        if ea != eb {
            return None;
        }
        let r = ca / cb;
        match &ratio {
            None => ratio = Some(r),
            Some(prev) if *prev == r => {}
            _ => return None,
        }
    }
    ratio
}

#[cfg(test)]
mod tests {
    use super::super::{poly_parse, q};
    use super::*;

    fn homog(text: &str) -> HomogPoly {
        HomogPoly::try_new(poly_parse(text, &["x", "y"]).unwrap()).unwrap()
    }

    #[test]
    fn pure_power() {
        let f = factor_homog_bivariate(&homog("x^2")).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].1, 2);
        assert_eq!(f[0].0.poly(), &Poly::variable(2, 0));
    }

    #[test]
    fn sum_of_squares_stays_irreducible() {
        let f = factor_homog_bivariate(&homog("x^2 + y^2")).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].1, 1);
        assert_eq!(f[0].0.degree(), 2);
    }

    #[test]
    fn difference_of_squares_splits() {
        let f = factor_homog_bivariate(&homog("y^2 - x^2")).unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.iter().all(|(h, m)| h.degree() == 1 && *m == 1));
        let prod = f
            .iter()
            .fold(Poly::constant(2, q(1)), |acc, (h, m)| {
                &acc * &h.poly().pow(*m)
            });
        assert!(proportionality(&prod, homog("y^2 - x^2").poly()).is_some());
    }

    #[test]
    fn mixed_monomial_and_quadratic() {
        // x*y^2*(x^2+y^2) of degree 5
        let f = factor_homog_bivariate(&homog("x^3*y^2 + x*y^4")).unwrap();
        let total: u32 = f.iter().map(|(h, m)| h.degree() * m).sum();
        assert_eq!(total, 5);
        assert_eq!(f.len(), 3);
    }

    #[test]
    fn kronecker_splits_biquadratic() {
        // (u^2+1)(u^2+2) = u^4 + 3u^2 + 2 as a homogeneous quartic
        let f = factor_homog_bivariate(&homog("x^4 + 3*x^2*y^2 + 2*y^4")).unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.iter().all(|(h, m)| h.degree() == 2 && *m == 1));
    }

    #[test]
    fn factorization_reassembles_exactly() {
        let g = UniPoly::from_i64(&[6, -5, 1]) // (t-2)(t-3)
            .mul(&UniPoly::from_i64(&[1, 0, 1]).pow(2)) // (t^2+1)^2
            .scale(&crate::polyring::qr(3, 7));
        let fac = factor_unipoly(&g).unwrap();
        assert_eq!(fac.reassemble(), g);
        assert_eq!(fac.factors.iter().map(|(_, m)| m).sum::<u32>(), 4);
    }

    #[test]
    fn factor_with_t_power_and_content() {
        let g = UniPoly::from_i64(&[0, 0, -4, 0, 4]); // 4t^2(t-1)(t+1)... actually 4t^2(t^2-1)
        let fac = factor_unipoly(&g).unwrap();
        assert_eq!(fac.reassemble(), g);
    }
}

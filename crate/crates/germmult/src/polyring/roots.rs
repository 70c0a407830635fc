//! Univariate complex root approximation with certified inclusion radii.
//!
//! The Aberth-Ehrlich iteration runs in floating point; each returned root
//! carries a radius from the classical bound `min_i |z - r_i| <= n|p(z)/p'(z)|`,
//! widened by a Horner running-error term so the certificate survives f64
//! rounding. Root counts inside a disc are exact as long as the disc boundary
//! keeps a two-radius margin from every returned root.

use num_complex::Complex64;
use num_traits::Zero;

use super::{PolyError, UniPoly};

/// An approximate root with a certified inclusion radius: the disc
/// `|z - value| <= radius` contains a true root of the polynomial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifiedRoot {
    pub value: Complex64,
    pub radius: f64,
}

const MAX_ITERS: usize = 400;

/// All distinct complex roots of `g`, certified to radius at most `tol`.
pub fn complex_roots(g: &UniPoly, tol: f64) -> Result<Vec<CertifiedRoot>, PolyError> {
    if g.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    assert!(tol > 0.0, "tolerance must be positive");
    let sf = g.squarefree_part()?;
    let mut coeffs = sf.coeffs_f64();
    let mut roots = Vec::new();
    // An exact root at the origin stays exact.
    while coeffs.len() > 1 && sf.coeff(roots.len()).is_zero() {
        roots.push(CertifiedRoot {
            value: Complex64::zero(),
            radius: 0.0,
        });
        coeffs.remove(0);
    }
    let complex: Vec<Complex64> = coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect();
    roots.extend(aberth(&complex, tol)?);
    roots.sort_by(|a, b| {
        a.value
            .re
            .partial_cmp(&b.value.re)
            .unwrap()
            .then(a.value.im.partial_cmp(&b.value.im).unwrap())
    });
    Ok(roots)
}

/// Root finding for float-coefficient polynomials (fibers restricted at
/// non-rational base points). No square-free reduction is attempted; nearly
/// coincident roots come back as clusters of certified discs.
pub fn complex_roots_f64(coeffs: &[Complex64], tol: f64) -> Result<Vec<CertifiedRoot>, PolyError> {
    let mut c = coeffs.to_vec();
    while c.last().is_some_and(|z| z.norm() == 0.0) {
        c.pop();
    }
    if c.is_empty() {
        return Err(PolyError::ZeroPolynomial);
    }
    let mut roots = aberth(&c, tol)?;
    roots.sort_by(|a, b| {
        a.value
            .re
            .partial_cmp(&b.value.re)
            .unwrap()
            .then(a.value.im.partial_cmp(&b.value.im).unwrap())
    });
    Ok(roots)
}

fn horner_with_error(coeffs: &[Complex64], z: Complex64) -> (Complex64, f64) {
    let mut acc = Complex64::zero();
    let mut err = 0.0f64;
    let zn = z.norm();
    for c in coeffs.iter().rev() {
        acc = acc * z + c;
        err = err * zn + acc.norm();
    }
    // Standard running error bound for complex Horner, with safety factor.
    let u = f64::EPSILON;
    (acc, 8.0 * u * err * coeffs.len() as f64)
}

fn derivative_coeffs(coeffs: &[Complex64]) -> Vec<Complex64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * i as f64)
        .collect()
}

fn aberth(coeffs: &[Complex64], tol: f64) -> Result<Vec<CertifiedRoot>, PolyError> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[n];
    if lead.norm() == 0.0 {
        return Err(PolyError::ZeroPolynomial);
    }
    if n == 1 {
        let value = -coeffs[0] / coeffs[1];
        return Ok(vec![CertifiedRoot { value, radius: 0.0 }]);
    }
    // Variable scaling t = lambda*tau keeps the iteration conditioned when
    // coefficients span many orders of magnitude (scheduled radii do that).
    let mut lambda = 0.0f64;
    for k in 1..=n {
        let c = coeffs[n - k].norm() / lead.norm();
        if c > 0.0 {
            lambda = lambda.max(c.powf(1.0 / k as f64));
        }
    }
    if lambda == 0.0 {
        // Only the leading term: all roots at the origin.
        return Ok(vec![
            CertifiedRoot {
                value: Complex64::zero(),
                radius: 0.0,
            };
            n
        ]);
    }
    lambda *= 2.0;
    let scaled: Vec<Complex64> = coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| c * lambda.powi(i as i32) / lead / lambda.powi(n as i32))
        .collect();
    let dscaled = derivative_coeffs(&scaled);

    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.45;
            0.7 * Complex64::new(angle.cos(), angle.sin())
        })
        .collect();

    let deriv = derivative_coeffs(coeffs);
    let mut certified: Option<Vec<CertifiedRoot>> = None;
    for _ in 0..MAX_ITERS {
        let mut max_step = 0.0f64;
        for k in 0..n {
            let (p, _) = horner_with_error(&scaled, z[k]);
            let (dp, _) = horner_with_error(&dscaled, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let w = if dp.norm() == 0.0 {
                Complex64::new(1e-3, 1e-3)
            } else {
                p / dp
            };
            let mut sum = Complex64::zero();
            for j in 0..n {
                if j != k {
                    let d = z[k] - z[j];
                    if d.norm() > 0.0 {
                        sum += Complex64::new(1.0, 0.0) / d;
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - w * sum;
            let step = if denom.norm() == 0.0 { w } else { w / denom };
            z[k] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[k].norm()));
        }
        if max_step < 1e-15 {
            // Certify on the original-scale polynomial.
            let mut out = Vec::with_capacity(n);
            let mut ok = true;
            for zk in &z {
                let value = zk * lambda;
                let (p, perr) = horner_with_error(coeffs, value);
                let (dp, dperr) = horner_with_error(&deriv, value);
                let denom = dp.norm() - dperr;
                let radius = if denom > 0.0 {
                    n as f64 * (p.norm() + perr) / denom
                } else {
                    f64::INFINITY
                };
                if !(radius <= tol) {
                    ok = false;
                }
                out.push(CertifiedRoot { value, radius });
            }
            if ok {
                return Ok(out);
            }
            certified = Some(out);
            break;
        }
    }
    // The iteration settled without meeting the requested radius (clustered
    // roots or a caller tolerance below what f64 supports at this scale).
    match certified {
        Some(out)
            if out
                .iter()
                .all(|r| r.radius.is_finite()) =>
        {
            Err(PolyError::NonConvergence)
        }
        _ => Err(PolyError::NonConvergence),
    }
}

#[cfg(test)]
mod tests {
    use super::super::{q, qr, UniPoly};
    use super::*;

    #[test]
    fn quadratic_with_tiny_roots() {
        // t^2 - r^3 with r = 1/4: roots +-1/8.
        let g = UniPoly::from_coeffs(vec![-qr(1, 64), q(0), q(1)]);
        let roots = complex_roots(&g, 1e-12).unwrap();
        assert_eq!(roots.len(), 2);
        assert!((roots[0].value.re + 0.125).abs() < 1e-12);
        assert!((roots[1].value.re - 0.125).abs() < 1e-12);
        for r in &roots {
            assert!(r.radius <= 1e-12);
        }
    }

    #[test]
    fn cube_roots_of_unity() {
        let g = UniPoly::from_i64(&[-1, 0, 0, 1]);
        let roots = complex_roots(&g, 1e-10).unwrap();
        assert_eq!(roots.len(), 3);
        for r in &roots {
            assert!((r.value.norm() - 1.0).abs() < 1e-10);
            assert!((r.value.powu(3) - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn quartic_with_scheduled_scale() {
        // t^4 - s^6 at s = 1/64: four roots of modulus s^(3/2) = 2^-9.
        let s6 = qr(1, 64i64.pow(6));
        let g = UniPoly::from_coeffs(vec![-s6, q(0), q(0), q(0), q(1)]);
        let expect = (1.0f64 / 64.0).powf(1.5);
        let roots = complex_roots(&g, expect * 1e-8).unwrap();
        assert_eq!(roots.len(), 4);
        for r in &roots {
            assert!((r.value.norm() - expect).abs() < expect * 1e-8);
        }
    }

    #[test]
    fn exact_zero_root_preserved() {
        let g = UniPoly::from_i64(&[0, 2, 0, 1]); // t(t^2 + 2)
        let roots = complex_roots(&g, 1e-10).unwrap();
        assert_eq!(roots.len(), 3);
        assert!(roots.iter().any(|r| r.value.norm() == 0.0 && r.radius == 0.0));
    }

    #[test]
    fn multiplicities_collapse_to_squarefree() {
        let g = UniPoly::from_i64(&[-1, 1]).pow(3); // (t-1)^3
        let roots = complex_roots(&g, 1e-9).unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0].value.re - 1.0).abs() < 1e-9);
    }
}

//! Exact real root counting via Sturm sequences.

use num_traits::Zero;

use super::{PolyError, Q, UniPoly};

fn sturm_chain(g: &UniPoly) -> Vec<UniPoly> {
    let mut chain = vec![g.clone(), g.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            return chain;
        }
        let r = chain[n - 2].rem(&chain[n - 1]).neg();
        if r.is_zero() {
            return chain;
        }
        chain.push(r);
    }
}

fn sign_variations(chain: &[UniPoly], x: &Q) -> usize {
    let mut last = 0i8;
    let mut vars = 0;
    for p in chain {
        let v = p.eval_q(x);
        let s = if v.is_zero() {
            0
        } else if v > Q::zero() {
            1
        } else {
            -1
        };
        if s != 0 {
            if last != 0 && s != last {
                vars += 1;
            }
            last = s;
        }
    }
    vars
}

/// Exact number of distinct real roots of a square-free `g` in the open
/// interval `(lo, hi)`.
///
/// The endpoints must not be roots; callers own the perturbation schedule
/// when they are, so counts stay reproducible.
pub fn sturm_count(g: &UniPoly, lo: &Q, hi: &Q) -> Result<usize, PolyError> {
    if g.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if !g.is_squarefree() {
        return Err(PolyError::NotSquareFree);
    }
    assert!(lo < hi, "interval endpoints out of order");
    if g.eval_q(lo).is_zero() {
        return Err(PolyError::RootAtEndpoint(lo.to_string()));
    }
    if g.eval_q(hi).is_zero() {
        return Err(PolyError::RootAtEndpoint(hi.to_string()));
    }
    let chain = sturm_chain(g);
    Ok(sign_variations(&chain, lo) - sign_variations(&chain, hi))
}

/// Refines isolating intervals for all real roots of a square-free `g` in
/// `(lo, hi)` down to width at most `width`. Returns one `(a, b)` pair per
/// root with `a < root < b`.
pub fn isolate_real_roots(
    g: &UniPoly,
    lo: &Q,
    hi: &Q,
    width: &Q,
) -> Result<Vec<(Q, Q)>, PolyError> {
    let total = sturm_count(g, lo, hi)?;
    let chain = sturm_chain(g);
    let mut out = Vec::with_capacity(total);
    let mut stack = vec![(lo.clone(), hi.clone(), total)];
    let two = Q::from_integer(2.into());
    while let Some((a, b, count)) = stack.pop() {
        if count == 0 {
            continue;
        }
        if count == 1 && (&b - &a) <= *width {
            out.push((a, b));
            continue;
        }
        let mut mid = (&a + &b) / &two;
        // Nudge the midpoint off a root so interval counts stay exact.
        let mut step = (&b - &a) / Q::from_integer(64.into());
        while g.eval_q(&mid).is_zero() {
            step /= &two;
            mid = (&a + &b) / &two + &step;
        }
        let left = sign_variations(&chain, &a) - sign_variations(&chain, &mid);
        stack.push((a, mid.clone(), left));
        stack.push((mid, b, count - left));
    }
    out.sort_by(|p, r| p.0.cmp(&r.0));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::{q, qr};
    use super::*;

    #[test]
    fn counts_simple_quadratics() {
        let g = UniPoly::from_i64(&[-1, 0, 1]); // t^2 - 1
        assert_eq!(sturm_count(&g, &q(-2), &q(2)).unwrap(), 2);
        let h = UniPoly::from_i64(&[1, 0, 1]); // t^2 + 1
        assert_eq!(sturm_count(&h, &q(-2), &q(2)).unwrap(), 0);
    }

    #[test]
    fn counts_partial_interval() {
        let g = UniPoly::from_i64(&[0, -1, 0, 1]); // t^3 - t, roots -1, 0, 1
        assert_eq!(sturm_count(&g, &qr(-1, 2), &q(2)).unwrap(), 2);
    }

    #[test]
    fn endpoint_root_is_an_error() {
        let g = UniPoly::from_i64(&[-1, 0, 1]);
        assert!(matches!(
            sturm_count(&g, &q(-1), &q(2)),
            Err(PolyError::RootAtEndpoint(_))
        ));
    }

    #[test]
    fn non_squarefree_is_an_error() {
        let g = UniPoly::from_i64(&[0, 0, 1]); // t^2
        assert_eq!(sturm_count(&g, &q(-1), &q(1)), Err(PolyError::NotSquareFree));
    }

    #[test]
    fn isolation_brackets_roots() {
        let g = UniPoly::from_i64(&[0, -1, 0, 1]); // roots -1, 0, 1
        let intervals = isolate_real_roots(&g, &q(-2), &q(2), &qr(1, 100)).unwrap();
        assert_eq!(intervals.len(), 3);
        for ((a, b), root) in intervals.iter().zip([q(-1), q(0), q(1)]) {
            assert!(*a < root && root < *b);
            assert!((b - a) <= qr(1, 100));
        }
    }
}

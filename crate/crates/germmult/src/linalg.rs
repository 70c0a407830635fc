//! Small exact and floating-point linear algebra helpers.

use num_traits::{One, Zero};

use crate::polyring::Q;

/// Exact determinant of a square rational matrix (fraction-free Gauss).
pub fn det_q(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m.to_vec();
    let mut det = Q::one();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero());
        let Some(p) = pivot else {
            return Q::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let pv = a[col][col].clone();
        det *= &pv;
        for r in col + 1..n {
            let factor = &a[r][col] / &pv;
            for c in col..n {
                let sub = &a[col][c] * &factor;
                a[r][c] -= sub;
            }
        }
    }
    det
}

/// Exact inverse of a square rational matrix; None when singular.
pub fn invert_q(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m.to_vec();
    let mut inv: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Q::one() } else { Q::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(pivot, col);
        inv.swap(pivot, col);
        let pv = a[col][col].clone();
        for c in 0..n {
            a[col][c] /= &pv;
            inv[col][c] /= &pv;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for c in 0..n {
                let s = &a[col][c] * &factor;
                a[r][c] -= s;
                let s = &inv[col][c] * &factor;
                inv[r][c] -= s;
            }
        }
    }
    Some(inv)
}

pub fn mat_vec_q(m: &[Vec<Q>], v: &[Q]) -> Vec<Q> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn dot_q(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Exact orthogonal projection of `v` onto the complement of `axis`
/// (Gram-Schmidt step, no normalization).
pub fn reject_q(v: &[Q], axis: &[Q]) -> Vec<Q> {
    let coeff = dot_q(v, axis) / dot_q(axis, axis);
    v.iter()
        .zip(axis)
        .map(|(x, a)| x - &(a * &coeff))
        .collect()
}

pub fn mat_vec_f64(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn norm_f64(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Singular values of a square matrix via cyclic Jacobi on `A^T A`,
/// returned in descending order.
pub fn singular_values(m: &[Vec<f64>]) -> Vec<f64> {
    let n = m.len();
    // Gram matrix.
    let mut g = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            g[i][j] = (0..n).map(|k| m[k][i] * m[k][j]).sum();
        }
    }
    for _ in 0..64 {
        let mut off = 0.0f64;
        for p in 0..n {
            for r in p + 1..n {
                off += g[p][r] * g[p][r];
            }
        }
        if off.sqrt() < 1e-30 {
            break;
        }
        for p in 0..n {
            for r in p + 1..n {
                if g[p][r].abs() < 1e-300 {
                    continue;
                }
                let theta = 0.5 * (g[r][r] - g[p][p]) / g[p][r];
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let gpk = g[p][k];
                    let grk = g[r][k];
                    g[p][k] = c * gpk - s * grk;
                    g[r][k] = s * gpk + c * grk;
                }
                for k in 0..n {
                    let gkp = g[k][p];
                    let gkr = g[k][r];
                    g[k][p] = c * gkp - s * gkr;
                    g[k][r] = s * gkp + c * gkr;
                }
            }
        }
    }
    let mut eigs: Vec<f64> = (0..n).map(|i| g[i][i].max(0.0).sqrt()).collect();
    eigs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    eigs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{q, qr};

    #[test]
    fn det_and_inverse_agree() {
        let m = vec![
            vec![q(2), q(1), q(0)],
            vec![q(1), q(-1), q(3)],
            vec![q(0), q(4), q(1)],
        ];
        let d = det_q(&m);
        assert!(!d.is_zero());
        let inv = invert_q(&m).unwrap();
        // M * M^-1 = I
        for i in 0..3 {
            for j in 0..3 {
                let entry: Q = (0..3).map(|k| &m[i][k] * &inv[k][j]).sum();
                assert_eq!(entry, if i == j { q(1) } else { q(0) });
            }
        }
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let m = vec![vec![q(1), q(2)], vec![q(2), q(4)]];
        assert_eq!(det_q(&m), q(0));
        assert!(invert_q(&m).is_none());
    }

    #[test]
    fn rejection_is_orthogonal() {
        let v = vec![q(3), q(1)];
        let axis = vec![q(1), q(1)];
        let r = reject_q(&v, &axis);
        assert_eq!(dot_q(&r, &axis), q(0));
        assert_eq!(r, vec![q(1), q(-1)]);
        let _ = qr(1, 2);
    }

    #[test]
    fn singular_values_of_diag() {
        let m = vec![vec![3.0, 0.0], vec![0.0, -0.5]];
        let sv = singular_values(&m);
        assert!((sv[0] - 3.0).abs() < 1e-12);
        assert!((sv[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn singular_values_detect_rank_drop() {
        let m = vec![vec![1.0, 0.0], vec![0.0, 0.0]];
        let sv = singular_values(&m);
        assert!(sv[1].abs() < 1e-15);
    }
}

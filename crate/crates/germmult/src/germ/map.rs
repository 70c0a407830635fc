//! Mapping germs `(R^N, 0) -> (R^N, 0)` and the numeric derivative check at
//! the origin.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::expr::{expr_parse, Expr};
use super::{Field, GermError, PuiseuxCurve};
use crate::linalg::{mat_vec_f64, norm_f64, singular_values};

/// Default difference-quotient steps: `10^-2 .. 10^-8` in powers of ten.
pub const DEFAULT_DERIVATIVE_STEPS: [f64; 7] =
    [1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8];

/// Piecewise override for maps defined parametrization-to-parametrization on
/// a curve: points within a relative tube of the source curve are mapped by
/// nearest parameter onto the target parametrization.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePiece {
    pub source: PuiseuxCurve,
    pub target: PuiseuxCurve,
    /// Relative matching tolerance: on-curve iff distance <= rel_tol * |p|.
    pub rel_tol: f64,
}

impl CurvePiece {
    /// Nearest parameter of `p = (x, y)` on the source curve. The first
    /// coordinate is a pure power `t^a`, so candidates are the a-th roots.
    fn match_parameter(&self, x: Complex64, y: Complex64) -> Option<Complex64> {
        let norm = (x.norm_sqr() + y.norm_sqr()).sqrt();
        if norm == 0.0 {
            return Some(Complex64::new(0.0, 0.0));
        }
        let (_, a, _) = self.source.integer_exponents();
        let r = x.norm().powf(1.0 / a as f64);
        if r > 1.0 {
            return None;
        }
        let theta0 = x.arg() / a as f64;
        let mut best: Option<(f64, Complex64)> = None;
        for k in 0..a {
            let theta = theta0 + 2.0 * std::f64::consts::PI * k as f64 / a as f64;
            let t = Complex64::from_polar(r, theta);
            let q = self.source.eval_c64(t);
            let dist = ((q[0] - x).norm_sqr() + (q[1] - y).norm_sqr()).sqrt();
            if best.as_ref().is_none_or(|(d, _)| dist < *d) {
                best = Some((dist, t));
            }
        }
        let (dist, t) = best?;
        (dist <= self.rel_tol * norm).then_some(t)
    }
}

/// A mapping germ with closed-form components. Complex-variable maps are
/// read as maps of `R^{2N}` with coordinates interleaved `(re, im)` per
/// complex variable.
#[derive(Debug, Clone, PartialEq)]
pub struct MapGerm {
    pub vars: Vec<String>,
    pub field: Field,
    pub component_sources: Vec<String>,
    components: Vec<Expr>,
    pub declared_derivative: Option<Vec<Vec<f64>>>,
    pub curve_piece: Option<CurvePiece>,
}

impl MapGerm {
    /// Dimension of the map as a real mapping.
    pub fn real_dim(&self) -> usize {
        match self.field {
            Field::Real => self.vars.len(),
            Field::Complex => 2 * self.vars.len(),
        }
    }

    pub fn with_curve_piece(mut self, piece: CurvePiece) -> Self {
        self.curve_piece = Some(piece);
        self
    }

    pub fn with_declared_derivative(mut self, m: Vec<Vec<f64>>) -> Self {
        self.declared_derivative = Some(m);
        self
    }

    /// Evaluates at a real point (length `real_dim`).
    pub fn eval(&self, point: &[f64]) -> Result<Vec<f64>, GermError> {
        assert_eq!(point.len(), self.real_dim());
        // The curve override reads the four real coordinates as a point of
        // the complex plane, whichever way the components are written.
        if let Some(piece) = &self.curve_piece {
            assert_eq!(self.real_dim(), 4, "curve piece needs a plane-curve map");
            let x = Complex64::new(point[0], point[1]);
            let y = Complex64::new(point[2], point[3]);
            if let Some(t) = piece.match_parameter(x, y) {
                let image = piece.target.eval_c64(t);
                return Ok(vec![image[0].re, image[0].im, image[1].re, image[1].im]);
            }
        }
        match self.field {
            Field::Real => {
                let cpt: Vec<Complex64> =
                    point.iter().map(|&x| Complex64::new(x, 0.0)).collect();
                self.components
                    .iter()
                    .map(|c| {
                        let z = c.eval_num(&cpt)?;
                        Ok(z.re)
                    })
                    .collect()
            }
            Field::Complex => {
                let zpt: Vec<Complex64> = point
                    .chunks_exact(2)
                    .map(|c| Complex64::new(c[0], c[1]))
                    .collect();
                let mut out = Vec::with_capacity(point.len());
                for c in &self.components {
                    let z = c.eval_num(&zpt)?;
                    out.push(z.re);
                    out.push(z.im);
                }
                Ok(out)
            }
        }
    }
}

/// Parses component expression strings into a mapping germ and checks every
/// component vanishes at the origin.
pub fn map_parse(texts: &[&str], vars: &[&str], field: Field) -> Result<MapGerm, GermError> {
    if texts.len() != vars.len() {
        return Err(GermError::Schema(
            "one component expression per variable".into(),
        ));
    }
    let var_names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
    let components: Vec<Expr> = texts
        .iter()
        .map(|t| expr_parse(t, &var_names))
        .collect::<Result<_, _>>()?;
    let map = MapGerm {
        vars: var_names,
        field,
        component_sources: texts.iter().map(|s| s.to_string()).collect(),
        components,
        declared_derivative: None,
        curve_piece: None,
    };
    let origin = vec![0.0; map.real_dim()];
    let image = map.eval(&origin)?;
    if image.iter().any(|v| v.abs() > 1e-12) {
        return Err(GermError::InvariantViolation(
            "map components must vanish at the origin".into(),
        ));
    }
    Ok(map)
}

/// Outcome of the difference-quotient derivative check at the origin.
#[derive(Debug, Clone, PartialEq)]
pub enum DerivativeOutcome {
    Differentiable {
        matrix: Vec<Vec<f64>>,
        /// Worst final relative deviation over all probe directions.
        final_error: f64,
    },
    NotDifferentiable {
        witness: Vec<f64>,
        errors: Vec<f64>,
    },
}

/// Decides differentiability at 0 by central difference quotients along the
/// coordinate axes plus random directions, accepting when the trailing map
/// errors have collapsed against the largest error seen earlier on the
/// schedule. The candidate matrix is the declared derivative when present,
/// otherwise the finest-step central-difference estimate.
pub fn derivative_at_zero(
    map: &MapGerm,
    steps: &[f64],
    rng: &mut ChaCha8Rng,
) -> Result<DerivativeOutcome, GermError> {
    assert!(steps.len() >= 4, "schedule needs at least 4 steps");
    assert!(
        steps.windows(2).all(|w| w[1] < w[0] && w[1] > 0.0),
        "schedule must be decreasing and positive"
    );
    let n = map.real_dim();
    let h_min = *steps.last().unwrap();

    let matrix: Vec<Vec<f64>> = match &map.declared_derivative {
        Some(m) => m.clone(),
        None => {
            // Column j from the central difference along e_j at the finest step.
            let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
            for j in 0..n {
                let mut plus = vec![0.0; n];
                plus[j] = h_min;
                let mut minus = vec![0.0; n];
                minus[j] = -h_min;
                let fp = map.eval(&plus)?;
                let fm = map.eval(&minus)?;
                cols.push(
                    fp.iter()
                        .zip(fm.iter())
                        .map(|(a, b)| (a - b) / (2.0 * h_min))
                        .collect(),
                );
            }
            (0..n)
                .map(|i| (0..n).map(|j| cols[j][i]).collect())
                .collect()
        }
    };
    let mat_scale = matrix
        .iter()
        .flatten()
        .fold(0.0f64, |acc, v| acc.max(v.abs()))
        .max(1.0);
    let floor = 1e-11 * mat_scale;

    let mut directions: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            e
        })
        .collect();
    for _ in 0..n.max(3) {
        let mut u: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = norm_f64(&u);
        if norm < 1e-3 {
            u = vec![1.0; n];
        }
        let norm = norm_f64(&u);
        for x in &mut u {
            *x /= norm;
        }
        directions.push(u);
    }

    let mut worst_final = 0.0f64;
    for u in &directions {
        let mut errors = Vec::with_capacity(steps.len());
        for &h in steps {
            let point: Vec<f64> = u.iter().map(|x| x * h).collect();
            let fx = map.eval(&point)?;
            let ax = mat_vec_f64(&matrix, &point);
            let dev: Vec<f64> = fx.iter().zip(ax.iter()).map(|(a, b)| a - b).collect();
            errors.push(norm_f64(&dev) / h);
        }
        // Trailing errors must be small against the largest error observed
        // earlier; plain successive ratios would misread oscillating terms
        // like 2h*sin(1/h) whose envelope still vanishes linearly.
        let k = errors.len();
        let mut pass = true;
        for idx in k - 3..k {
            let prior_max = errors[..idx]
                .iter()
                .fold(floor, |acc, &e| acc.max(e));
            let e = errors[idx];
            if e > floor && e > 0.3 * prior_max {
                pass = false;
                break;
            }
        }
        if !pass {
            return Ok(DerivativeOutcome::NotDifferentiable {
                witness: u.clone(),
                errors,
            });
        }
        worst_final = worst_final.max(*errors.last().unwrap());
    }
    Ok(DerivativeOutcome::Differentiable {
        matrix,
        final_error: worst_final,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsomorphismCheck {
    pub is_isomorphism: bool,
    pub smallest_singular_value: f64,
    pub condition_estimate: f64,
}

/// Rank check through singular values: an isomorphism iff the smallest
/// singular value clears `tol`.
pub fn is_isomorphism(matrix: &[Vec<f64>], tol: f64) -> IsomorphismCheck {
    let sv = singular_values(matrix);
    let smallest = *sv.last().unwrap();
    let largest = sv[0];
    IsomorphismCheck {
        is_isomorphism: smallest > tol,
        smallest_singular_value: smallest,
        condition_estimate: if smallest > 0.0 {
            largest / smallest
        } else {
            f64::INFINITY
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::CRat;
    use crate::polyring::q;
    use rand::SeedableRng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(7)
    }

    #[test]
    fn identity_map_has_identity_derivative() {
        let m = map_parse(&["x", "y"], &["x", "y"], Field::Real).unwrap();
        match derivative_at_zero(&m, &DEFAULT_DERIVATIVE_STEPS, &mut rng()).unwrap() {
            DerivativeOutcome::Differentiable { matrix, .. } => {
                assert!((matrix[0][0] - 1.0).abs() < 1e-9);
                assert!((matrix[1][1] - 1.0).abs() < 1e-9);
                assert!(matrix[0][1].abs() < 1e-9);
            }
            other => panic!("expected differentiable, got {other:?}"),
        }
    }

    #[test]
    fn surface_straightening_map_is_differentiable_with_identity() {
        let m = map_parse(
            &["x", "y", "z - (x^5*y + x*y^5)^(1/3)"],
            &["x", "y", "z"],
            Field::Real,
        )
        .unwrap();
        match derivative_at_zero(&m, &DEFAULT_DERIVATIVE_STEPS, &mut rng()).unwrap() {
            DerivativeOutcome::Differentiable { matrix, .. } => {
                for i in 0..3 {
                    for j in 0..3 {
                        let expect = if i == j { 1.0 } else { 0.0 };
                        assert!(
                            (matrix[i][j] - expect).abs() <= 1e-6,
                            "entry ({i},{j}) = {}",
                            matrix[i][j]
                        );
                    }
                }
            }
            other => panic!("expected differentiable, got {other:?}"),
        }
    }

    #[test]
    fn cusp_flattening_homeomorphism_is_not_differentiable() {
        let m = map_parse(&["x", "x^(2/3) - y"], &["x", "y"], Field::Real).unwrap();
        match derivative_at_zero(&m, &DEFAULT_DERIVATIVE_STEPS, &mut rng()).unwrap() {
            DerivativeOutcome::NotDifferentiable { witness, .. } => {
                // The cusp direction (1, 0) carries the diverging quotient.
                assert!((witness[0].abs() - 1.0).abs() < 1e-12 && witness[1] == 0.0);
            }
            other => panic!("expected not differentiable, got {other:?}"),
        }
    }

    #[test]
    fn oscillating_map_is_differentiable() {
        let m = map_parse(&["x", "y + 2*y^2*sin(1/y)"], &["x", "y"], Field::Real).unwrap();
        match derivative_at_zero(&m, &DEFAULT_DERIVATIVE_STEPS, &mut rng()).unwrap() {
            DerivativeOutcome::Differentiable { matrix, .. } => {
                assert!((matrix[0][0] - 1.0).abs() < 1e-6);
                assert!((matrix[1][1] - 1.0).abs() < 1e-6);
            }
            other => panic!("expected differentiable, got {other:?}"),
        }
    }

    #[test]
    fn polynomial_map_matches_linear_part() {
        let m = map_parse(
            &["2*x + 3*y + x*y", "x - y + y^3"],
            &["x", "y"],
            Field::Real,
        )
        .unwrap();
        match derivative_at_zero(&m, &DEFAULT_DERIVATIVE_STEPS, &mut rng()).unwrap() {
            DerivativeOutcome::Differentiable { matrix, .. } => {
                let h = 1e-8;
                let expect = [[2.0, 3.0], [1.0, -1.0]];
                for i in 0..2 {
                    for j in 0..2 {
                        assert!(
                            (matrix[i][j] - expect[i][j]).abs() <= h * h + 1e-7,
                            "entry ({i},{j})"
                        );
                    }
                }
            }
            other => panic!("expected differentiable, got {other:?}"),
        }
    }

    #[test]
    fn isomorphism_check_on_examples() {
        let id = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        assert!(is_isomorphism(&id, 1e-8).is_isomorphism);

        let cusp = vec![vec![1.0, 0.0], vec![0.0, 0.0]];
        let chk = is_isomorphism(&cusp, 1e-8);
        assert!(!chk.is_isomorphism);
        assert!(chk.smallest_singular_value < 1e-8);

        let perm = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        assert!(is_isomorphism(&perm, 1e-8).is_isomorphism);
    }

    #[test]
    fn curve_piece_maps_on_curve_points() {
        let source = PuiseuxCurve::new(
            Field::Complex,
            q(4),
            vec![(q(6), CRat::real(q(1))), (q(7), CRat::real(q(1)))],
            None,
        )
        .unwrap();
        let target = PuiseuxCurve::new(
            Field::Complex,
            q(4),
            vec![(q(6), CRat::real(q(1))), (q(9), CRat::real(q(1)))],
            Some(q(9)),
        )
        .unwrap();
        let piece = CurvePiece {
            source: source.clone(),
            target: target.clone(),
            rel_tol: 1e-7,
        };
        let m = map_parse(
            &[
                "x1",
                "x2",
                "y1 + 2*y1^2*sin(1/y1)",
                "y2 + 2*y2^2*sin(1/y2)",
            ],
            &["x1", "x2", "y1", "y2"],
            Field::Real,
        )
        .unwrap()
        .with_curve_piece(piece);

        let t = Complex64::new(0.05, 0.02);
        let p = source.eval_c64(t);
        let image = m.eval(&[p[0].re, p[0].im, p[1].re, p[1].im]).unwrap();
        let _ = &m.vars;
        let expect = target.eval_c64(t);
        assert!((image[0] - expect[0].re).abs() < 1e-12);
        assert!((image[2] - expect[1].re).abs() < 1e-12);

        // Off-curve points use the formula.
        let off = m.eval(&[0.01, 0.0, 0.02, 0.0]).unwrap();
        let f = |s: f64| s + 2.0 * s * s * (1.0 / s).sin();
        assert!((off[2] - f(0.02)).abs() < 1e-12);
    }
}

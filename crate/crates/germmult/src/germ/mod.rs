//! Germ specifications: hypersurfaces and Puiseux-parametrized plane curves,
//! over the reals or the complexes, plus mapping germs between them.

mod expr;
mod map;

pub use expr::{expr_parse, Expr, Val};
pub use map::{
    derivative_at_zero, is_isomorphism, map_parse, CurvePiece, DerivativeOutcome,
    IsomorphismCheck, MapGerm, DEFAULT_DERIVATIVE_STEPS,
};

use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::polyring::{poly_parse, Poly, PolyError, Q, UniPoly};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GermError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error("germ is already complex")]
    AlreadyComplex,
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unsupported function `{0}`")]
    UnsupportedFunction(String),
    #[error("expression undefined at probe point: {0}")]
    EvaluationDomain(String),
    #[error("empty parametrization")]
    EmptyParametrization,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl std::fmt::Display for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Field::Real => write!(f, "real"),
            Field::Complex => write!(f, "complex"),
        }
    }
}

/// An exact complex-rational scalar (coefficients of complex Puiseux data).
#[derive(Debug, Clone, PartialEq)]
pub struct CRat {
    pub re: Q,
    pub im: Q,
}

impl CRat {
    pub fn real(re: Q) -> Self {
        CRat { re, im: Q::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

/// A plane-curve germ given by a truncated Puiseux parametrization
/// `t -> (t^a, sum_i c_i t^{b_i})` with `a < b_1 < b_2 < ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct PuiseuxCurve {
    pub field: Field,
    /// Exponent `a` of the first coordinate.
    pub base_exp: Q,
    /// `(b_i, c_i)` pairs of the second coordinate, exponents increasing.
    pub terms: Vec<(Q, CRat)>,
    /// Order up to which the parametrization is trusted.
    pub truncation_order: Option<Q>,
}

impl PuiseuxCurve {
    pub fn new(
        field: Field,
        base_exp: Q,
        terms: Vec<(Q, CRat)>,
        truncation_order: Option<Q>,
    ) -> Result<Self, GermError> {
        if base_exp < Q::one() {
            return Err(GermError::InvariantViolation(
                "first exponent must be at least 1".into(),
            ));
        }
        let mut prev = base_exp.clone();
        for (b, c) in &terms {
            if *b <= prev {
                return Err(GermError::InvariantViolation(
                    "exponents must be strictly increasing".into(),
                ));
            }
            if c.is_zero() {
                return Err(GermError::InvariantViolation(
                    "parametrization terms must have nonzero coefficients".into(),
                ));
            }
            prev = b.clone();
        }
        Ok(PuiseuxCurve {
            field,
            base_exp,
            terms,
            truncation_order,
        })
    }

    /// Integer-exponent view after clearing denominators: returns the common
    /// scaling `k` and the exponents of `t^(1/k)`.
    pub fn integer_exponents(&self) -> (u64, u64, Vec<u64>) {
        let mut k: num_bigint::BigInt = self.base_exp.denom().clone();
        for (b, _) in &self.terms {
            k = num_integer::lcm(k, b.denom().clone());
        }
        let k64 = k.to_u64().expect("exponent denominators fit in u64");
        let scale = |e: &Q| (e * Q::from_integer(k.clone())).to_integer().to_u64().unwrap();
        (
            k64,
            scale(&self.base_exp),
            self.terms.iter().map(|(b, _)| scale(b)).collect(),
        )
    }

    /// Whether the exponent set has gcd one, i.e. the parametrization is not
    /// a substitution `t -> t^g` of a coarser one.
    pub fn is_primitive(&self) -> bool {
        let (_, a, bs) = self.integer_exponents();
        let mut g = a;
        for b in bs {
            g = num_integer::gcd(g, b);
        }
        g == 1
    }

    pub fn all_coeffs_real(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_real())
    }

    /// Exact component polynomials in the scaled parameter, available when
    /// coefficients are real. Returns `(x(t), y(t))`.
    pub fn component_unipolys(&self) -> Option<(UniPoly, UniPoly)> {
        if !self.all_coeffs_real() {
            return None;
        }
        let (_, a, bs) = self.integer_exponents();
        let x = UniPoly::monomial(Q::one(), a as usize);
        let mut y = UniPoly::zero();
        for ((_, c), b) in self.terms.iter().zip(bs) {
            y = y.add(&UniPoly::monomial(c.re.clone(), b as usize));
        }
        Some((x, y))
    }

    pub fn eval_c64(&self, t: Complex64) -> [Complex64; 2] {
        let (k, a, bs) = self.integer_exponents();
        // t is the scaled parameter when k > 1; callers sample, so the
        // distinction only matters for the exponent bookkeeping.
        let _ = k;
        let x = t.powu(a as u32);
        let mut y = Complex64::zero();
        for ((_, c), b) in self.terms.iter().zip(bs) {
            y += c.to_c64() * t.powu(b as u32);
        }
        [x, y]
    }

    pub fn to_document(&self) -> Value {
        let mut pairs = vec![json!([rational_string(&self.base_exp), "t-power-base"])];
        for (b, c) in &self.terms {
            let coeff = if c.is_real() {
                json!(rational_string(&c.re))
            } else {
                json!({"re": rational_string(&c.re), "im": rational_string(&c.im)})
            };
            pairs.push(json!([rational_string(b), coeff]));
        }
        let mut doc = json!({
            "schema_version": 1,
            "kind": "puiseux",
            "field": self.field.to_string(),
            "pairs": pairs,
        });
        if let Some(o) = &self.truncation_order {
            doc["truncation_order"] = json!(rational_string(o));
        }
        doc
    }
}

/// A hypersurface germ `V(f)` at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct HypersurfaceGerm {
    pub field: Field,
    pub vars: Vec<String>,
    pub f: Poly,
    /// The defining expression as written, kept for reports.
    pub source: String,
}

impl HypersurfaceGerm {
    pub fn parse(source: &str, vars: &[&str], field: Field) -> Result<Self, GermError> {
        let f = poly_parse(source, vars)?;
        Self::new(f, vars.iter().map(|s| s.to_string()).collect(), field, source.to_string())
    }

    pub fn new(
        f: Poly,
        vars: Vec<String>,
        field: Field,
        source: String,
    ) -> Result<Self, GermError> {
        if f.is_zero() {
            return Err(GermError::InvariantViolation(
                "defining polynomial must be nonzero".into(),
            ));
        }
        if !(2..=4).contains(&f.nvars()) {
            return Err(GermError::InvariantViolation(
                "ambient dimension must be between 2 and 4".into(),
            ));
        }
        if vars.len() != f.nvars() {
            return Err(GermError::Schema("variable list length mismatch".into()));
        }
        if !f.constant_term().is_zero() {
            return Err(GermError::InvariantViolation(
                "germ must pass through the origin: f(0) = 0".into(),
            ));
        }
        if !squarefree_check(&f) {
            return Err(GermError::InvariantViolation(
                "defining polynomial must be square-free".into(),
            ));
        }
        Ok(HypersurfaceGerm {
            field,
            vars,
            f,
            source,
        })
    }

    pub fn to_document(&self) -> Value {
        json!({
            "schema_version": 1,
            "kind": "hypersurface",
            "field": self.field.to_string(),
            "vars": self.vars,
            "f": self.source,
        })
    }
}

/// Exact square-free check in two variables; random-line probe certificate
/// in three and four (a square factor forces a nonconstant gcd of the
/// restricted polynomial and all restricted partials on every line, so one
/// constant-gcd probe certifies square-freeness).
fn squarefree_check(f: &Poly) -> bool {
    if f.nvars() == 2 {
        return crate::polyring::bivariate_squarefree(f);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x6765_726d);
    let partials: Vec<Poly> = (0..f.nvars()).map(|i| f.partial(i)).collect();
    'probe: for _ in 0..8 {
        let base: Vec<Q> = (0..f.nvars())
            .map(|_| Q::new((rng.gen_range(-19i64..=19)).into(), (rng.gen_range(1i64..=7)).into()))
            .collect();
        let dir: Vec<Q> = (0..f.nvars())
            .map(|_| Q::new((rng.gen_range(-9i64..=9)).into(), 1.into()))
            .collect();
        if dir.iter().all(|d| d.is_zero()) {
            continue;
        }
        let Ok(f_line) = f.restrict_line(&base, &dir) else {
            continue;
        };
        if f_line.is_zero() {
            continue;
        }
        let mut g = f_line;
        for p in &partials {
            if p.is_zero() {
                continue;
            }
            let Ok(p_line) = p.restrict_line(&base, &dir) else {
                continue 'probe;
            };
            g = g.gcd(&p_line);
            if g.degree() == Some(0) {
                return true;
            }
        }
        if g.degree() == Some(0) {
            return true;
        }
    }
    false
}

/// A germ at the origin: hypersurface or parametrized plane curve.
#[derive(Debug, Clone, PartialEq)]
pub enum GermSpec {
    Hypersurface(HypersurfaceGerm),
    Puiseux(PuiseuxCurve),
}

impl GermSpec {
    pub fn field(&self) -> Field {
        match self {
            GermSpec::Hypersurface(h) => h.field,
            GermSpec::Puiseux(c) => c.field,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            GermSpec::Hypersurface(h) => h.f.nvars(),
            GermSpec::Puiseux(_) => 2,
        }
    }

    pub fn is_real(&self) -> bool {
        self.field() == Field::Real
    }

    /// Reinterprets a real germ over the complex numbers. The defining data
    /// is rational, so the conjugation symmetry of the complex points holds
    /// by construction.
    pub fn complexify(&self) -> Result<GermSpec, GermError> {
        if self.field() == Field::Complex {
            return Err(GermError::AlreadyComplex);
        }
        Ok(match self {
            GermSpec::Hypersurface(h) => {
                let mut h = h.clone();
                h.field = Field::Complex;
                GermSpec::Hypersurface(h)
            }
            GermSpec::Puiseux(c) => {
                let mut c = c.clone();
                c.field = Field::Complex;
                GermSpec::Puiseux(c)
            }
        })
    }

    pub fn to_document(&self) -> Value {
        match self {
            GermSpec::Hypersurface(h) => h.to_document(),
            GermSpec::Puiseux(c) => c.to_document(),
        }
    }
}

fn rational_string(q: &Q) -> String {
    q.to_string()
}

fn parse_rational(v: &Value, what: &str) -> Result<Q, GermError> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Q::from_integer(i.into()))
            } else {
                Err(GermError::Schema(format!(
                    "{what}: non-integer numbers must be given as \"p/q\" strings"
                )))
            }
        }
        Value::String(s) => {
            let s = s.trim();
            let (numer, denom) = match s.split_once('/') {
                Some((a, b)) => (a.trim(), b.trim()),
                None => (s, "1"),
            };
            let n: num_bigint::BigInt = numer
                .parse()
                .map_err(|_| GermError::Schema(format!("{what}: bad rational `{s}`")))?;
            let d: num_bigint::BigInt = denom
                .parse()
                .map_err(|_| GermError::Schema(format!("{what}: bad rational `{s}`")))?;
            if d.is_zero() {
                return Err(GermError::Schema(format!("{what}: zero denominator")));
            }
            Ok(Q::new(n, d))
        }
        _ => Err(GermError::Schema(format!("{what}: expected a rational"))),
    }
}

fn parse_field(doc: &Value) -> Result<Field, GermError> {
    match doc.get("field").and_then(|f| f.as_str()) {
        Some("real") => Ok(Field::Real),
        Some("complex") => Ok(Field::Complex),
        _ => Err(GermError::Schema(
            "field must be \"real\" or \"complex\"".into(),
        )),
    }
}

/// Loads and validates a germ-spec document (see `schemas/germ-spec.v1.json`).
pub fn germ_load(document: &str) -> Result<GermSpec, GermError> {
    let doc: Value = serde_json::from_str(document)
        .map_err(|e| GermError::Schema(format!("invalid JSON: {e}")))?;
    germ_from_value(&doc)
}

pub fn germ_from_value(doc: &Value) -> Result<GermSpec, GermError> {
    if let Some(v) = doc.get("schema_version") {
        if v.as_i64() != Some(1) {
            return Err(GermError::Schema("unsupported schema_version".into()));
        }
    }
    let field = parse_field(doc)?;
    match doc.get("kind").and_then(|k| k.as_str()) {
        Some("hypersurface") => {
            let vars: Vec<String> = doc
                .get("vars")
                .and_then(|v| v.as_array())
                .ok_or_else(|| GermError::Schema("hypersurface needs a vars array".into()))?
                .iter()
                .map(|v| {
                    v.as_str()
                        .map(|s| s.to_string())
                        .ok_or_else(|| GermError::Schema("vars must be strings".into()))
                })
                .collect::<Result<_, _>>()?;
            let source = doc
                .get("f")
                .and_then(|f| f.as_str())
                .ok_or_else(|| GermError::Schema("hypersurface needs an expression f".into()))?;
            let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
            let f = poly_parse(source, &var_refs)?;
            Ok(GermSpec::Hypersurface(HypersurfaceGerm::new(
                f,
                vars,
                field,
                source.to_string(),
            )?))
        }
        Some("puiseux") => {
            let pairs = doc
                .get("pairs")
                .and_then(|p| p.as_array())
                .ok_or_else(|| GermError::Schema("puiseux needs a pairs array".into()))?;
            if pairs.is_empty() {
                return Err(GermError::EmptyParametrization);
            }
            let first = pairs[0]
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| GermError::Schema("each pair is [exponent, coefficient]".into()))?;
            if first[1].as_str() != Some("t-power-base") {
                return Err(GermError::Schema(
                    "first pair must be [a, \"t-power-base\"]".into(),
                ));
            }
            let base_exp = parse_rational(&first[0], "base exponent")?;
            let mut terms = Vec::new();
            for pair in &pairs[1..] {
                let pair = pair
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| GermError::Schema("each pair is [exponent, coefficient]".into()))?;
                let b = parse_rational(&pair[0], "exponent")?;
                let c = match &pair[1] {
                    Value::Object(obj) => CRat {
                        re: obj
                            .get("re")
                            .map(|v| parse_rational(v, "re"))
                            .transpose()?
                            .unwrap_or_else(Q::zero),
                        im: obj
                            .get("im")
                            .map(|v| parse_rational(v, "im"))
                            .transpose()?
                            .unwrap_or_else(Q::zero),
                    },
                    other => CRat::real(parse_rational(other, "coefficient")?),
                };
                terms.push((b, c));
            }
            let truncation_order = doc
                .get("truncation_order")
                .map(|v| parse_rational(v, "truncation_order"))
                .transpose()?;
            Ok(GermSpec::Puiseux(PuiseuxCurve::new(
                field,
                base_exp,
                terms,
                truncation_order,
            )?))
        }
        _ => Err(GermError::Schema(
            "kind must be \"hypersurface\" or \"puiseux\"".into(),
        )),
    }
}

/// Consistency check of a Puiseux parametrization against an implicit form:
/// the composition `f(x(t), y(t))` is computed exactly when the coefficients
/// are real; otherwise the residual is sampled numerically. Returns the
/// maximum of `|f(Phi(t))| / ||Phi(t)||^ord(f)` over the sampled radii,
/// which is exactly zero when the composition vanishes identically.
pub fn verify_parametrization(
    curve: &PuiseuxCurve,
    f: &Poly,
    radii: &[f64],
) -> Result<ParametrizationCheck, GermError> {
    if f.nvars() != 2 {
        return Err(GermError::InvariantViolation(
            "implicit form must be a plane curve".into(),
        ));
    }
    let ord = f.ord()?;
    if let Some((x, y)) = curve.component_unipolys() {
        let comp = f.compose_unipolys(&[x, y]);
        if comp.is_zero() {
            return Ok(ParametrizationCheck {
                exact: true,
                max_residual: 0.0,
            });
        }
        let mut max_res = 0.0f64;
        for &r in radii {
            for sign in [1.0, -1.0] {
                let t = Complex64::new(sign * r, 0.0);
                let p = curve.eval_c64(t);
                let norm = (p[0].norm_sqr() + p[1].norm_sqr()).sqrt();
                if norm == 0.0 {
                    continue;
                }
                let v = comp.eval_c64(t).norm();
                max_res = max_res.max(v / norm.powi(ord as i32));
            }
        }
        return Ok(ParametrizationCheck {
            exact: false,
            max_residual: max_res,
        });
    }
    // Complex coefficients: sample real radii and a few phases.
    let mut max_res = 0.0f64;
    for &r in radii {
        for k in 0..8 {
            let theta = std::f64::consts::PI * k as f64 / 4.0;
            let t = Complex64::from_polar(r, theta);
            let p = curve.eval_c64(t);
            let norm = (p[0].norm_sqr() + p[1].norm_sqr()).sqrt();
            if norm == 0.0 {
                continue;
            }
            let v = f.eval_c64(&p).norm();
            max_res = max_res.max(v / norm.powi(ord as i32));
        }
    }
    Ok(ParametrizationCheck {
        exact: false,
        max_residual: max_res,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParametrizationCheck {
    /// True when the composition vanished identically (exact certificate).
    pub exact: bool,
    pub max_residual: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::q;

    fn cusp_doc() -> &'static str {
        r#"{"schema_version":1,"kind":"hypersurface","field":"real","vars":["x","y"],"f":"y^3 - x^2"}"#
    }

    #[test]
    fn loads_hypersurface() {
        let g = germ_load(cusp_doc()).unwrap();
        assert_eq!(g.ambient_dim(), 2);
        assert!(g.is_real());
    }

    #[test]
    fn loads_line_germ() {
        let g = germ_load(
            r#"{"kind":"hypersurface","field":"real","vars":["x","y"],"f":"y"}"#,
        )
        .unwrap();
        match g {
            GermSpec::Hypersurface(h) => assert_eq!(h.f.ord().unwrap(), 1),
            _ => panic!("expected hypersurface"),
        }
    }

    #[test]
    fn loads_puiseux_example() {
        let g = germ_load(
            r#"{"kind":"puiseux","field":"complex","pairs":[[4,"t-power-base"],[6,1],[7,1]]}"#,
        )
        .unwrap();
        match g {
            GermSpec::Puiseux(c) => {
                assert_eq!(c.base_exp, q(4));
                assert_eq!(c.terms.len(), 2);
                assert!(c.is_primitive());
            }
            _ => panic!("expected puiseux"),
        }
    }

    #[test]
    fn rejects_nonvanishing_constant() {
        let err = germ_load(
            r#"{"kind":"hypersurface","field":"real","vars":["x","y"],"f":"y + 1"}"#,
        )
        .unwrap_err();
        assert!(matches!(err, GermError::InvariantViolation(_)));
    }

    #[test]
    fn rejects_square_factor() {
        let err = germ_load(
            r#"{"kind":"hypersurface","field":"real","vars":["x","y"],"f":"(y - x^2)^2"}"#,
        )
        .unwrap_err();
        assert!(matches!(err, GermError::InvariantViolation(_)));
    }

    #[test]
    fn accepts_squarefree_three_vars() {
        let g = germ_load(
            r#"{"kind":"hypersurface","field":"real","vars":["x","y","z"],"f":"z^3 - x^5*y - x*y^5"}"#,
        );
        assert!(g.is_ok());
        let bad = germ_load(
            r#"{"kind":"hypersurface","field":"real","vars":["x","y","z"],"f":"z^2 + 2*x*z + x^2"}"#,
        );
        assert!(bad.is_err());
    }

    #[test]
    fn complexify_is_single_shot() {
        let g = germ_load(cusp_doc()).unwrap();
        let gc = g.complexify().unwrap();
        assert_eq!(gc.field(), Field::Complex);
        match (&g, &gc) {
            (GermSpec::Hypersurface(a), GermSpec::Hypersurface(b)) => {
                assert_eq!(a.f, b.f);
            }
            _ => panic!(),
        }
        assert_eq!(gc.complexify(), Err(GermError::AlreadyComplex));
    }

    #[test]
    fn rejects_decreasing_exponents() {
        let err = germ_load(
            r#"{"kind":"puiseux","field":"real","pairs":[[4,"t-power-base"],[3,1]]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, GermError::InvariantViolation(_)));
    }

    #[test]
    fn verify_parametrization_exact_cases() {
        // (t^2, t^3) against y^2 - x^3 vanishes identically.
        let c = PuiseuxCurve::new(
            Field::Real,
            q(2),
            vec![(q(3), CRat::real(q(1)))],
            None,
        )
        .unwrap();
        let f = poly_parse("y^2 - x^3", &["x", "y"]).unwrap();
        let chk = verify_parametrization(&c, &f, &[0.1, 0.01]).unwrap();
        assert!(chk.exact);
        assert_eq!(chk.max_residual, 0.0);

        // (t, 0) against y.
        let line = PuiseuxCurve::new(Field::Real, q(1), vec![], None).unwrap();
        let fy = poly_parse("y", &["x", "y"]).unwrap();
        let chk = verify_parametrization(&line, &fy, &[0.5]).unwrap();
        assert!(chk.exact);
    }

    #[test]
    fn verify_parametrization_example_quartic() {
        // (t^4, t^6 + t^7) against the Example 4.2 implicit quartic.
        let c = PuiseuxCurve::new(
            Field::Complex,
            q(4),
            vec![(q(6), CRat::real(q(1))), (q(7), CRat::real(q(1)))],
            None,
        )
        .unwrap();
        let f = poly_parse(
            "y^4 - 2*x^3*y^2 - 4*x^5*y + x^6 - x^7",
            &["x", "y"],
        )
        .unwrap();
        let chk = verify_parametrization(&c, &f, &[0.1, 0.05, 0.01]).unwrap();
        assert!(chk.exact, "composition should vanish identically");
    }

    #[test]
    fn document_round_trip() {
        let g = germ_load(cusp_doc()).unwrap();
        let doc = g.to_document();
        let g2 = germ_from_value(&doc).unwrap();
        assert_eq!(g, g2);
    }
}

//! Closed-form expression trees for mapping germs.
//!
//! The vocabulary: rational constants, variables, `+ - * /`, integer powers,
//! fractional powers with the real branch (`s^(2/3)` means `(s^2)^(1/3)`,
//! odd roots are defined on all of R), `sin`, and `conj`.
//!
//! Evaluation tracks two non-numeric states so piecewise-at-zero maps like
//! `y + 2*y^2*sin(1/y)` evaluate by continuity at `y = 0`: an unbounded
//! magnitude (`1/0`) and a bounded-unknown value (`sin` of an unbounded
//! argument, known to lie in `[-1, 1]`). A bounded unknown multiplied by an
//! exact zero collapses to zero; anything else surfaces as a domain error.

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use super::GermError;
use crate::polyring::Q;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Q),
    Var(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    PowInt(Box<Expr>, i64),
    /// Fractional power with reduced positive exponent p/q, q >= 2.
    PowRat(Box<Expr>, i64, u64),
    Sin(Box<Expr>),
    Conj(Box<Expr>),
}

/// Evaluation result: a number, an unknown real bounded in magnitude, or an
/// unbounded magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Val {
    Num(Complex64),
    Bounded(f64),
    Infinite,
}

fn bounded(b: f64) -> Val {
    if b == 0.0 {
        Val::Num(Complex64::zero())
    } else {
        Val::Bounded(b)
    }
}

fn undefined(what: &str) -> GermError {
    GermError::EvaluationDomain(what.to_string())
}

impl Expr {
    pub fn eval(&self, point: &[Complex64]) -> Result<Val, GermError> {
        match self {
            Expr::Const(c) => Ok(Val::Num(Complex64::new(
                c.to_f64().unwrap_or(f64::NAN),
                0.0,
            ))),
            Expr::Var(i) => Ok(Val::Num(point[*i])),
            Expr::Add(a, b) => add(a.eval(point)?, b.eval(point)?),
            Expr::Sub(a, b) => add(a.eval(point)?, neg(b.eval(point)?)),
            Expr::Neg(a) => Ok(neg(a.eval(point)?)),
            Expr::Mul(a, b) => mul(a.eval(point)?, b.eval(point)?),
            Expr::Div(a, b) => div(a.eval(point)?, b.eval(point)?),
            Expr::PowInt(a, k) => pow_int(a.eval(point)?, *k),
            Expr::PowRat(a, p, q) => pow_rat(a.eval(point)?, *p, *q),
            Expr::Sin(a) => Ok(match a.eval(point)? {
                Val::Num(z) => {
                    if z.im.abs() <= 1e-14 * (1.0 + z.re.abs()) {
                        Val::Num(Complex64::new(z.re.sin(), 0.0))
                    } else {
                        Val::Num(z.sin())
                    }
                }
                // sin of an unknown or unbounded real stays in [-1, 1].
                Val::Bounded(_) | Val::Infinite => bounded(1.0),
            }),
            Expr::Conj(a) => Ok(match a.eval(point)? {
                Val::Num(z) => Val::Num(z.conj()),
                other => other,
            }),
        }
    }

    /// Evaluates and requires a numeric result.
    pub fn eval_num(&self, point: &[Complex64]) -> Result<Complex64, GermError> {
        match self.eval(point)? {
            Val::Num(z) => Ok(z),
            Val::Bounded(_) => Err(undefined("value known only within a bound")),
            Val::Infinite => Err(undefined("unbounded value")),
        }
    }
}

fn neg(v: Val) -> Val {
    match v {
        Val::Num(z) => Val::Num(-z),
        other => other,
    }
}

fn add(a: Val, b: Val) -> Result<Val, GermError> {
    Ok(match (a, b) {
        (Val::Num(x), Val::Num(y)) => Val::Num(x + y),
        (Val::Num(x), Val::Bounded(b)) | (Val::Bounded(b), Val::Num(x)) => {
            bounded(x.norm() + b)
        }
        (Val::Bounded(x), Val::Bounded(y)) => bounded(x + y),
        (Val::Infinite, Val::Num(_)) | (Val::Num(_), Val::Infinite) => Val::Infinite,
        (Val::Infinite, Val::Bounded(_)) | (Val::Bounded(_), Val::Infinite) => Val::Infinite,
        (Val::Infinite, Val::Infinite) => {
            return Err(undefined("sum of two unbounded values"));
        }
    })
}

fn mul(a: Val, b: Val) -> Result<Val, GermError> {
    Ok(match (a, b) {
        (Val::Num(x), Val::Num(y)) => Val::Num(x * y),
        (Val::Num(x), Val::Bounded(b)) | (Val::Bounded(b), Val::Num(x)) => {
            // Exact zero absorbs a bounded unknown: this is the removable
            // singularity rule that makes 2*0^2*sin(1/0) collapse to 0.
            bounded(x.norm() * b)
        }
        (Val::Bounded(x), Val::Bounded(y)) => bounded(x * y),
        (Val::Num(x), Val::Infinite) | (Val::Infinite, Val::Num(x)) => {
            if x.norm() == 0.0 {
                return Err(undefined("zero times an unbounded value"));
            }
            Val::Infinite
        }
        (Val::Bounded(_), Val::Infinite) | (Val::Infinite, Val::Bounded(_)) => {
            return Err(undefined("bounded unknown times an unbounded value"));
        }
        (Val::Infinite, Val::Infinite) => Val::Infinite,
    })
}

fn div(a: Val, b: Val) -> Result<Val, GermError> {
    match (a, b) {
        (Val::Num(x), Val::Num(y)) => {
            if y.norm() == 0.0 {
                if x.norm() == 0.0 {
                    Err(undefined("0/0"))
                } else {
                    Ok(Val::Infinite)
                }
            } else {
                Ok(Val::Num(x / y))
            }
        }
        (Val::Num(_), Val::Infinite) => Ok(Val::Num(Complex64::zero())),
        (Val::Bounded(b), Val::Infinite) => {
            let _ = b;
            Ok(Val::Num(Complex64::zero()))
        }
        (Val::Infinite, Val::Num(y)) if y.norm() != 0.0 => Ok(Val::Infinite),
        _ => Err(undefined("division with non-numeric divisor")),
    }
}

fn pow_int(v: Val, k: i64) -> Result<Val, GermError> {
    if k < 0 {
        let p = pow_int(v, -k)?;
        return div(Val::Num(Complex64::new(1.0, 0.0)), p);
    }
    Ok(match v {
        Val::Num(z) => Val::Num(z.powu(k as u32)),
        Val::Bounded(b) => {
            if k == 0 {
                Val::Num(Complex64::new(1.0, 0.0))
            } else {
                bounded(b.powi(k as i32))
            }
        }
        Val::Infinite => {
            if k == 0 {
                return Err(undefined("unbounded value to the zeroth power"));
            }
            Val::Infinite
        }
    })
}

/// Real-branch fractional power: `s^(p/q) = (s^p)^(1/q)` with the real
/// q-th root, so odd roots are total on the reals.
fn pow_rat(v: Val, p: i64, q: u64) -> Result<Val, GermError> {
    let root = |u: f64| -> Result<f64, GermError> {
        if q % 2 == 1 {
            Ok(u.signum() * u.abs().powf(1.0 / q as f64))
        } else if u < 0.0 {
            Err(undefined("even root of a negative value"))
        } else {
            Ok(u.powf(1.0 / q as f64))
        }
    };
    match v {
        Val::Num(z) => {
            if z.im.abs() > 1e-12 * (1.0 + z.norm()) {
                return Err(undefined("fractional power of a non-real value"));
            }
            let s = z.re;
            if p < 0 && s == 0.0 {
                return Ok(Val::Infinite);
            }
            let u = if p >= 0 {
                s.powi(p as i32)
            } else {
                s.powi(p as i32)
            };
            Ok(Val::Num(Complex64::new(root(u)?, 0.0)))
        }
        Val::Bounded(b) => {
            if q % 2 == 0 {
                return Err(undefined("even root of an unknown-sign value"));
            }
            if p < 0 {
                return Err(undefined("negative power of an unknown value"));
            }
            Ok(bounded(b.powi(p as i32).abs().powf(1.0 / q as f64)))
        }
        Val::Infinite => {
            if p > 0 {
                Ok(Val::Infinite)
            } else {
                Ok(Val::Num(Complex64::zero()))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Q),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

fn lex(src: &str) -> Result<Vec<Tok>, GermError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' | '\u{2212}' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' | '\u{00b7}' | '\u{22c5}' => {
                out.push(Tok::Star);
                i += 1;
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            ',' => {
                out.push(Tok::Comma);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let n: num_bigint::BigInt =
                    chars[start..i].iter().collect::<String>().parse().unwrap();
                out.push(Tok::Num(Q::from_integer(n)));
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Tok::Ident(chars[start..i].iter().collect()));
            }
            other => {
                return Err(GermError::Syntax(format!(
                    "unexpected character `{other}` in map expression"
                )));
            }
        }
    }
    Ok(out)
}

struct P<'a> {
    toks: &'a [Tok],
    pos: usize,
    vars: &'a [String],
}

impl P<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Expr, GermError> {
        let mut acc = if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            Expr::Neg(Box::new(self.term()?))
        } else {
            if matches!(self.peek(), Some(Tok::Plus)) {
                self.bump();
            }
            self.term()?
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Expr, GermError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = Expr::Mul(Box::new(acc), Box::new(self.factor()?));
                }
                Some(Tok::Slash) => {
                    self.bump();
                    acc = Expr::Div(Box::new(acc), Box::new(self.factor()?));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr, GermError> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            let (p, q) = self.exponent()?;
            if q == 1 {
                return Ok(Expr::PowInt(Box::new(base), p));
            }
            return Ok(Expr::PowRat(Box::new(base), p, q));
        }
        Ok(base)
    }

    /// `natural`, or `( [-] integer [/ natural] )`.
    fn exponent(&mut self) -> Result<(i64, u64), GermError> {
        match self.bump() {
            Some(Tok::Num(n)) => Ok((int_exp(&n)?, 1)),
            Some(Tok::LParen) => {
                let neg = if matches!(self.peek(), Some(Tok::Minus)) {
                    self.bump();
                    true
                } else {
                    false
                };
                let p = match self.bump() {
                    Some(Tok::Num(n)) => int_exp(&n)?,
                    _ => return Err(GermError::Syntax("expected exponent numerator".into())),
                };
                let q = if matches!(self.peek(), Some(Tok::Slash)) {
                    self.bump();
                    match self.bump() {
                        Some(Tok::Num(n)) => {
                            let d = int_exp(&n)?;
                            if d <= 0 {
                                return Err(GermError::Syntax(
                                    "exponent denominator must be positive".into(),
                                ));
                            }
                            d as u64
                        }
                        _ => {
                            return Err(GermError::Syntax(
                                "expected exponent denominator".into(),
                            ))
                        }
                    }
                } else {
                    1
                };
                if !matches!(self.bump(), Some(Tok::RParen)) {
                    return Err(GermError::Syntax("expected `)` after exponent".into()));
                }
                let p = if neg { -p } else { p };
                // Reduce p/q so the branch rule sees the canonical root order.
                let g = num_integer::gcd(p.unsigned_abs(), q);
                Ok(((p / g as i64), q / g))
            }
            _ => Err(GermError::Syntax("expected an exponent".into())),
        }
    }

    fn atom(&mut self) -> Result<Expr, GermError> {
        match self.bump() {
            Some(Tok::Num(n)) => Ok(Expr::Const(n)),
            Some(Tok::Minus) => Ok(Expr::Neg(Box::new(self.atom()?))),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                if !matches!(self.bump(), Some(Tok::RParen)) {
                    return Err(GermError::Syntax("expected `)`".into()));
                }
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                if matches!(self.peek(), Some(Tok::LParen)) {
                    self.bump();
                    let arg = self.expr()?;
                    if !matches!(self.bump(), Some(Tok::RParen)) {
                        return Err(GermError::Syntax("expected `)` after argument".into()));
                    }
                    match name.as_str() {
                        "sin" => Ok(Expr::Sin(Box::new(arg))),
                        "conj" => Ok(Expr::Conj(Box::new(arg))),
                        other => Err(GermError::UnsupportedFunction(other.to_string())),
                    }
                } else {
                    match self.vars.iter().position(|v| *v == name) {
                        Some(i) => Ok(Expr::Var(i)),
                        None => Err(GermError::Syntax(format!("unknown variable `{name}`"))),
                    }
                }
            }
            _ => Err(GermError::Syntax("expected an expression".into())),
        }
    }
}

fn int_exp(n: &Q) -> Result<i64, GermError> {
    if !n.is_integer() {
        return Err(GermError::Syntax("exponent must be an integer here".into()));
    }
    n.to_integer()
        .to_i64()
        .ok_or_else(|| GermError::Syntax("exponent out of range".into()))
}

/// Parses one mapping-germ component expression.
pub fn expr_parse(text: &str, vars: &[String]) -> Result<Expr, GermError> {
    let toks = lex(text)?;
    let mut p = P {
        toks: &toks,
        pos: 0,
        vars,
    };
    let e = p.expr()?;
    if p.pos != toks.len() {
        return Err(GermError::Syntax("trailing input in map expression".into()));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn eval_real(e: &Expr, point: &[f64]) -> Result<f64, GermError> {
        let cpt: Vec<Complex64> = point.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        e.eval_num(&cpt).map(|z| z.re)
    }

    #[test]
    fn cusp_homeomorphism_total_on_negatives() {
        // x^(2/3) - y uses the real branch (s^2)^(1/3) >= 0.
        let e = expr_parse("x^(2/3) - y", &vars(&["x", "y"])).unwrap();
        let v = eval_real(&e, &[-8.0, 1.0]).unwrap();
        assert!((v - 3.0).abs() < 1e-12);
        assert_eq!(eval_real(&e, &[0.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn cube_root_of_negative() {
        let e = expr_parse("(x^5*y + x*y^5)^(1/3)", &vars(&["x", "y"])).unwrap();
        let v = eval_real(&e, &[-1.0, 1.0]).unwrap();
        assert!((v - (-(2.0f64)).cbrt()).abs() < 1e-12);
    }

    #[test]
    fn oscillating_map_extends_by_continuity() {
        let e = expr_parse("y + 2*y^2*sin(1/y)", &vars(&["x", "y"])).unwrap();
        // Defined at y = 0 through the bounded-unknown collapse.
        assert_eq!(eval_real(&e, &[0.3, 0.0]).unwrap(), 0.0);
        let y = 1e-3;
        let v = eval_real(&e, &[0.0, y]).unwrap();
        assert!((v - (y + 2.0 * y * y * (1.0 / y).sin())).abs() < 1e-15);
    }

    #[test]
    fn genuinely_undefined_surfaces_as_error() {
        let e = expr_parse("sin(1/y) + 1", &vars(&["y"])).unwrap();
        assert!(matches!(
            eval_real(&e, &[0.0]),
            Err(GermError::EvaluationDomain(_))
        ));
        let d = expr_parse("1/y", &vars(&["y"])).unwrap();
        assert!(matches!(
            eval_real(&d, &[0.0]),
            Err(GermError::EvaluationDomain(_))
        ));
    }

    #[test]
    fn even_root_of_negative_rejected() {
        let e = expr_parse("x^(1/2)", &vars(&["x"])).unwrap();
        assert!(eval_real(&e, &[-1.0]).is_err());
        assert!((eval_real(&e, &[4.0]).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn unsupported_function_rejected() {
        assert!(matches!(
            expr_parse("cos(x)", &vars(&["x"])),
            Err(GermError::UnsupportedFunction(_))
        ));
    }

    #[test]
    fn conjugation_on_complex_points() {
        let e = expr_parse("(y + conj(y)) * 1/2", &vars(&["y"])).unwrap();
        let z = Complex64::new(0.25, 0.75);
        let v = e.eval_num(&[z]).unwrap();
        assert!((v.re - 0.25).abs() < 1e-15);
        assert!(v.im.abs() < 1e-15);
    }
}

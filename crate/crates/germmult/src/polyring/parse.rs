//! Parser for polynomial expressions.
//!
//! Grammar (EBNF, also shipped in `docs/expression-grammar.ebnf`):
//!
//! ```text
//! expr     = [ sign ] term { sign term } ;
//! term     = factor { "*" factor } ;
//! factor   = atom [ "^" natural ] ;
//! atom     = rational | variable | "(" expr ")" | "-" atom ;
//! rational = integer [ "/" natural ] ;
//! sign     = "+" | "-" ;
//! ```
//!
//! Coefficients are exact rationals; powers are nonnegative integers.
//! The Unicode minus and middle dot are accepted as synonyms of `-` and `*`.

use num_bigint::BigInt;
use num_traits::One;

use super::{Poly, PolyError, Q};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(Q),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    vars: &'a [&'a str],
}

impl<'a> Lexer<'a> {
    fn err(&self, msg: &str) -> PolyError {
        PolyError::Syntax {
            at: self.pos,
            msg: msg.to_string(),
        }
    }

    fn tokens(mut self) -> Result<Vec<(usize, Token)>, PolyError> {
        let mut out = Vec::new();
        let chars: Vec<char> = self.src.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            self.pos = i;
            match c {
                ' ' | '\t' | '\n' | '\r' => {
                    i += 1;
                }
                '+' => {
                    out.push((i, Token::Plus));
                    i += 1;
                }
                '-' | '\u{2212}' => {
                    out.push((i, Token::Minus));
                    i += 1;
                }
                '*' | '\u{00b7}' | '\u{22c5}' => {
                    out.push((i, Token::Star));
                    i += 1;
                }
                '^' => {
                    out.push((i, Token::Caret));
                    i += 1;
                }
                '(' => {
                    out.push((i, Token::LParen));
                    i += 1;
                }
                ')' => {
                    out.push((i, Token::RParen));
                    i += 1;
                }
                '0'..='9' => {
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let numer: BigInt = chars[start..i].iter().collect::<String>().parse().unwrap();
                    // "p/q" is a rational literal when q is a digit run.
                    let mut denom = BigInt::one();
                    if i < chars.len() && chars[i] == '/' {
                        let mut j = i + 1;
                        let dstart = j;
                        while j < chars.len() && chars[j].is_ascii_digit() {
                            j += 1;
                        }
                        if j == dstart {
                            return Err(self.err("expected digits after `/`"));
                        }
                        denom = chars[dstart..j].iter().collect::<String>().parse().unwrap();
                        if denom == BigInt::from(0) {
                            return Err(self.err("zero denominator"));
                        }
                        i = j;
                    }
                    out.push((start, Token::Number(Q::new(numer, denom))));
                }
                c if c.is_alphabetic() || c == '_' => {
                    let start = i;
                    while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                        i += 1;
                    }
                    let name: String = chars[start..i].iter().collect();
                    match self.vars.iter().position(|v| *v == name) {
                        Some(idx) => out.push((start, Token::Var(idx))),
                        None => return Err(PolyError::UnknownVariable(name)),
                    }
                }
                other => {
                    return Err(self.err(&format!("unexpected character `{other}`")));
                }
            }
        }
        Ok(out)
    }
}

struct Parser<'a> {
    tokens: &'a [(usize, Token)],
    pos: usize,
    nvars: usize,
    src_len: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn next(&mut self) -> Option<&Token> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(at, _)| *at)
            .unwrap_or(self.src_len)
    }

    fn err(&self, msg: &str) -> PolyError {
        PolyError::Syntax {
            at: self.here(),
            msg: msg.to_string(),
        }
    }

    fn expr(&mut self) -> Result<Poly, PolyError> {
        let mut negate = false;
        if matches!(self.peek(), Some(Token::Minus)) {
            self.next();
            negate = true;
        } else if matches!(self.peek(), Some(Token::Plus)) {
            self.next();
        }
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.next();
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Some(Token::Minus) => {
                    self.next();
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly, PolyError> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(Token::Star)) {
            self.next();
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly, PolyError> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Token::Caret)) {
            self.next();
            match self.next() {
                Some(Token::Number(n)) if n.is_integer() && !n.numer().sign().eq(&num_bigint::Sign::Minus) => {
                    let e: u32 = n
                        .to_integer()
                        .try_into()
                        .map_err(|_| self.err("exponent too large"))?;
                    return Ok(base.pow(e));
                }
                _ => return Err(self.err("expected a nonnegative integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly, PolyError> {
        match self.next().cloned() {
            Some(Token::Number(n)) => Ok(Poly::constant(self.nvars, n)),
            Some(Token::Var(i)) => Ok(Poly::variable(self.nvars, i)),
            Some(Token::Minus) => {
                let inner = self.atom()?;
                Ok(-&inner)
            }
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(self.err("expected `)`")),
                }
            }
            _ => Err(self.err("expected a number, variable or parenthesized expression")),
        }
    }
}

/// Parses an exact polynomial expression in the named variables.
pub fn poly_parse(text: &str, vars: &[&str]) -> Result<Poly, PolyError> {
    let tokens = Lexer {
        src: text,
        pos: 0,
        vars,
    }
    .tokens()?;
    let mut parser = Parser {
        tokens: &tokens,
        pos: 0,
        nvars: vars.len(),
        src_len: text.len(),
    };
    let poly = parser.expr()?;
    if parser.pos != tokens.len() {
        return Err(parser.err("trailing input"));
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::super::{q, qr};
    use super::*;

    #[test]
    fn parses_cusp() {
        let f = poly_parse("y^3 - x^2", &["x", "y"]).unwrap();
        let expected = Poly::from_terms(2, [(vec![0, 3], q(1)), (vec![2, 0], q(-1))]);
        assert_eq!(f, expected);
    }

    #[test]
    fn parses_zero() {
        let f = poly_parse("0", &["x", "y"]).unwrap();
        assert!(f.is_zero());
    }

    #[test]
    fn parses_surface() {
        let f = poly_parse("z^3 - x^5*y - x*y^5", &["x", "y", "z"]).unwrap();
        assert_eq!(f.num_terms(), 3);
        assert_eq!(f.ord().unwrap(), 3);
    }

    #[test]
    fn parses_rationals_and_parens() {
        let f = poly_parse("1/2*(x + y)^2 - 3/4", &["x", "y"]).unwrap();
        assert_eq!(f.eval_q(&[q(1), q(1)]), q(2) - qr(3, 4));
    }

    #[test]
    fn rejects_unknown_variable() {
        assert_eq!(
            poly_parse("w^2", &["x", "y"]),
            Err(PolyError::UnknownVariable("w".into()))
        );
    }

    #[test]
    fn rejects_malformed() {
        assert!(matches!(
            poly_parse("x +", &["x", "y"]),
            Err(PolyError::Syntax { .. })
        ));
        assert!(matches!(
            poly_parse("x ^ -2", &["x", "y"]),
            Err(PolyError::Syntax { .. })
        ));
        assert!(matches!(
            poly_parse("(x", &["x"]),
            Err(PolyError::Syntax { .. })
        ));
    }

    #[test]
    fn unicode_operators_accepted() {
        let a = poly_parse("y\u{00b7}x \u{2212} 2", &["x", "y"]).unwrap();
        let b = poly_parse("y*x - 2", &["x", "y"]).unwrap();
        assert_eq!(a, b);
    }
}

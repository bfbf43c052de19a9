//! Polynomial grammar.
//!
//! ```text
//! expr   := ['+' | '-'] term (('+' | '-') term)*
//! term   := power (('*' | '/') power)*
//! power  := atom ['^' int]
//! atom   := int | 'T' | 'pi(' int ')' | 'zeta(' int ')' | 'dworkpi' | '(' expr ')'
//! ```
//!
//! Whitespace is ignored and `−` (U+2212) is accepted as a minus sign.
//! Division is only allowed by non-zero rational constants.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use pirad_core::{Atom, CoeffExpr};

/// Largest degree or exponent the parser will build.
const MAX_DEGREE: usize = 1 << 14;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based character column.
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at column {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "'{n}'"),
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Plus => write!(f, "'+'"),
            Tok::Minus => write!(f, "'-'"),
            Tok::Star => write!(f, "'*'"),
            Tok::Slash => write!(f, "'/'"),
            Tok::Caret => write!(f, "'^'"),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

fn err<T>(position: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        position,
        message: message.into(),
    })
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push((pos, Tok::Int(digits.parse().expect("ascii digits"))));
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((pos, Tok::Ident(chars[start..i].iter().collect())));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' | '\u{2212}' => Tok::Minus,
            '*' | '\u{00b7}' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => return err(pos, format!("unexpected character '{c}'")),
        };
        out.push((pos, tok));
        i += 1;
    }
    out.push((chars.len() + 1, Tok::End));
    Ok(out)
}

/// Dense polynomial in `T` with symbolic coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymPoly(pub Vec<CoeffExpr>);

impl SymPoly {
    fn constant(c: CoeffExpr) -> Self {
        SymPoly(vec![c])
    }

    fn monomial(k: usize) -> Self {
        let mut v = vec![CoeffExpr::zero(); k + 1];
        v[k] = CoeffExpr::integer(1);
        SymPoly(v)
    }

    fn trimmed(mut self) -> Self {
        while self.0.len() > 1 && self.0.last().is_some_and(CoeffExpr::is_zero) {
            self.0.pop();
        }
        if self.0.is_empty() {
            self.0.push(CoeffExpr::zero());
        }
        self
    }

    fn degree(&self) -> usize {
        self.0.len() - 1
    }

    fn as_constant(&self) -> Option<&CoeffExpr> {
        (self.0.len() == 1).then(|| &self.0[0])
    }

    fn add(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let zero = CoeffExpr::zero();
        let v = (0..n)
            .map(|i| self.0.get(i).unwrap_or(&zero).add(other.0.get(i).unwrap_or(&zero)))
            .collect();
        SymPoly(v).trimmed()
    }

    fn neg(&self) -> Self {
        SymPoly(self.0.iter().map(CoeffExpr::neg).collect())
    }

    fn mul(&self, other: &Self) -> Self {
        let mut v = vec![CoeffExpr::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in other.0.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                v[i + j] = v[i + j].add(&a.mul(b));
            }
        }
        SymPoly(v).trimmed()
    }

    fn scale(&self, q: &BigRational) -> Self {
        SymPoly(self.0.iter().map(|c| c.scale(q)).collect()).trimmed()
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        let (pos, t) = self.bump();
        if t == want {
            Ok(())
        } else {
            err(pos, format!("expected {want}, found {t}"))
        }
    }

    fn small_int(&mut self, what: &str) -> Result<usize, ParseError> {
        let (pos, t) = self.bump();
        match t {
            Tok::Int(n) => match usize::try_from(&n) {
                Ok(k) if k <= MAX_DEGREE => Ok(k),
                _ => err(pos, format!("{what} {n} is too large")),
            },
            t => err(pos, format!("expected {what}, found {t}")),
        }
    }

    fn expr(&mut self) -> Result<SymPoly, ParseError> {
        let negate = match self.peek() {
            Tok::Plus => {
                self.bump();
                false
            }
            Tok::Minus => {
                self.bump();
                true
            }
            _ => false,
        };
        let first = self.term()?;
        let mut acc = if negate { first.neg() } else { first };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.add(&self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<SymPoly, ParseError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let rhs = self.power()?;
                    acc = acc.mul(&rhs);
                }
                Tok::Slash => {
                    self.bump();
                    let pos = self.pos();
                    let rhs = self.power()?;
                    let q = rhs
                        .as_constant()
                        .and_then(CoeffExpr::as_rational)
                        .ok_or_else(|| ParseError {
                            position: pos,
                            message: "can only divide by a rational constant".into(),
                        })?;
                    if q.is_zero() {
                        return err(pos, "division by zero");
                    }
                    acc = acc.scale(&(BigRational::from_integer(BigInt::from(1)) / q));
                }
                _ => return Ok(acc),
            }
            if acc.degree() > MAX_DEGREE {
                return err(self.pos(), format!("degree exceeds {MAX_DEGREE}"));
            }
        }
    }

    fn power(&mut self) -> Result<SymPoly, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        let e = self.small_int("exponent")?;
        if base.degree().saturating_mul(e) > MAX_DEGREE {
            return err(pos, format!("degree exceeds {MAX_DEGREE}"));
        }
        if base.degree() == 1 && base.0[0].is_zero() && base.0[1] == CoeffExpr::integer(1) {
            return Ok(SymPoly::monomial(e));
        }
        let mut acc = SymPoly::constant(CoeffExpr::integer(1));
        for _ in 0..e {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<SymPoly, ParseError> {
        let (pos, t) = self.bump();
        match t {
            Tok::Int(n) => Ok(SymPoly::constant(CoeffExpr::rational(BigRational::from_integer(n)))),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Ident(name) => match name.as_str() {
                "T" | "t" => Ok(SymPoly::monomial(1)),
                "dworkpi" => Ok(SymPoly::constant(CoeffExpr::atom(Atom::DworkPi))),
                "pi" | "zeta" => {
                    self.expect(Tok::LParen)?;
                    let k = self.small_int("tower level")?;
                    self.expect(Tok::RParen)?;
                    let k = k as u32;
                    let a = if name == "pi" { Atom::Pi(k) } else { Atom::Zeta(k) };
                    Ok(SymPoly::constant(CoeffExpr::atom(a)))
                }
                _ => err(pos, format!("unknown name '{name}'")),
            },
            t => err(pos, format!("expected a number, 'T', a builtin or '(', found {t}")),
        }
    }
}

/// Parse an expression in `T`. Validation of the constant term and of
/// non-vanishing is left to `InputPolynomial::new`.
pub fn parse_expression(text: &str) -> Result<SymPoly, ParseError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        at: 0,
    };
    if *p.peek() == Tok::End {
        return err(p.pos(), "empty input");
    }
    let poly = p.expr()?;
    if *p.peek() != Tok::End {
        let (pos, t) = p.bump();
        return err(pos, format!("unexpected {t}"));
    }
    Ok(poly)
}

/// Parse a constant (an expression without `T`), as used for `--at`.
pub fn parse_constant(text: &str) -> Result<CoeffExpr, ParseError> {
    let poly = parse_expression(text)?;
    match poly.as_constant() {
        Some(c) => Ok(c.clone()),
        None => err(1, "a point must not involve T"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> CoeffExpr {
        CoeffExpr::rational(BigRational::new(n.into(), d.into()))
    }

    #[test]
    fn rational_terms() {
        let p = parse_expression("T + T^3/3").unwrap();
        assert_eq!(p.0, vec![q(0, 1), q(1, 1), q(0, 1), q(1, 3)]);
        let p = parse_expression(" -2*T^2 \u{2212} 1/2*T").unwrap();
        assert_eq!(p.0, vec![q(0, 1), q(-1, 2), q(-2, 1)]);
    }

    #[test]
    fn parentheses_and_powers() {
        let p = parse_expression("(1 + T)^2 - 1").unwrap();
        assert_eq!(p.0, vec![q(0, 1), q(2, 1), q(1, 1)]);
        let p = parse_expression("T^2/(2*3)").unwrap();
        assert_eq!(p.0[2], q(1, 6));
    }

    #[test]
    fn tower_atoms() {
        let p = parse_expression("pi(0)*T - pi(0)*T^2").unwrap();
        let pi0 = CoeffExpr::atom(Atom::Pi(0));
        assert_eq!(p.0, vec![CoeffExpr::zero(), pi0.clone(), pi0.neg()]);
        let p = parse_expression("dworkpi*(T - T^3)").unwrap();
        assert_eq!(p.0[3], CoeffExpr::atom(Atom::DworkPi).neg());
        let p = parse_expression("zeta(1)^2*T").unwrap();
        assert_eq!(p.0[1], CoeffExpr::atom(Atom::Zeta(1)).pow(2));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_expression("T + * T").unwrap_err();
        assert_eq!(e.position, 5);
        let e = parse_expression("T / T").unwrap_err();
        assert_eq!(e.position, 5);
        let e = parse_expression("T / 0").unwrap_err();
        assert_eq!(e.message, "division by zero");
        let e = parse_expression("T + foo").unwrap_err();
        assert_eq!(e.position, 5);
        let e = parse_expression("pi(1").unwrap_err();
        assert_eq!(e.position, 5);
        let e = parse_expression("T $").unwrap_err();
        assert_eq!(e.position, 3);
        assert!(parse_expression("   ").is_err());
        assert!(parse_expression("T^99999999").is_err());
    }

    #[test]
    fn constants() {
        assert_eq!(parse_constant("3/5").unwrap(), q(3, 5));
        assert!(parse_constant("T").is_err());
    }
}

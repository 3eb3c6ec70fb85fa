//! Literal grammar shared by polynomials and polynomial forms.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '∧' | '/') unary)*      '/' needs a nonzero constant divisor
//! unary := '-' unary | power
//! power := atom ('^' integer)?
//! atom  := integer | 'i' | symbol | '(' expr ')'
//! ```
//!
//! Symbols are `z<k>`, `zb<k>`, `x<k>`; targets may accept further tokens (`dz0`, ...).

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{Poly, Qi, Var};
use crate::error::{Error, Result};

/// Value domain of a parse.
pub trait Target {
    type Value: Clone;
    fn lift(&self, p: Poly) -> Self::Value;
    /// Interprets an identifier that is not a coordinate symbol.
    fn token(&self, name: &str) -> Option<Self::Value>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn neg(&self, a: &Self::Value) -> Self::Value;
    fn as_poly(&self, a: &Self::Value) -> Option<Poly>;
    /// Validates a coordinate symbol against the target's chart.
    fn check_var(&self, _v: Var) -> bool {
        true
    }
}

/// Plain polynomial target.
pub struct PolyTarget;

impl Target for PolyTarget {
    type Value = Poly;
    fn lift(&self, p: Poly) -> Poly {
        p
    }
    fn token(&self, _name: &str) -> Option<Poly> {
        None
    }
    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        a + b
    }
    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        a * b
    }
    fn neg(&self, a: &Poly) -> Poly {
        -a
    }
    fn as_poly(&self, a: &Poly) -> Option<Poly> {
        Some(a.clone())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
    End,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    text: String,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            col += i - start;
            if i < chars.len() && chars[i] == '.' {
                return Err(Error::Parse {
                    line: l0,
                    column: c0,
                    token: format!("{text}."),
                    message: "decimal literals are not exact; write a/b".into(),
                });
            }
            out.push(Spanned { tok: Tok::Int(text.parse().unwrap()), text, line: l0, column: c0 });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Spanned { tok: Tok::Ident(text.clone()), text, line: l0, column: c0 });
            continue;
        }
        if "+-*/^()∧".contains(c) {
            out.push(Spanned { tok: Tok::Op(c), text: c.to_string(), line: l0, column: c0 });
            i += 1;
            col += 1;
            continue;
        }
        if c == '−' {
            out.push(Spanned { tok: Tok::Op('-'), text: c.to_string(), line: l0, column: c0 });
            i += 1;
            col += 1;
            continue;
        }
        return Err(Error::Parse {
            line: l0,
            column: c0,
            token: c.to_string(),
            message: "unexpected character".into(),
        });
    }
    out.push(Spanned { tok: Tok::End, text: "<end>".into(), line, column: col });
    Ok(out)
}

struct Parser<'a, T: Target> {
    toks: Vec<Spanned>,
    pos: usize,
    target: &'a T,
}

impl<'a, T: Target> Parser<'a, T> {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn err<V>(&self, at: &Spanned, message: &str) -> Result<V> {
        Err(Error::Parse {
            line: at.line,
            column: at.column,
            token: at.text.clone(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<T::Value> {
        let mut acc = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Op('+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.target.add(&acc, &t);
                }
                Tok::Op('-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.target.add(&acc, &self.target.neg(&t));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<T::Value> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().tok {
                Tok::Op('*') | Tok::Op('∧') => {
                    self.pos += 1;
                    let t = self.unary()?;
                    acc = self.target.mul(&acc, &t);
                }
                Tok::Op('/') => {
                    let at = self.peek().clone();
                    self.pos += 1;
                    let t = self.unary()?;
                    let c = self.target.as_poly(&t).and_then(|p| p.as_constant());
                    match c.and_then(|c| c.inv()) {
                        Some(inv) => {
                            let s = self.target.lift(Poly::constant(inv));
                            acc = self.target.mul(&acc, &s);
                        }
                        None => return self.err(&at, "divisor must be a nonzero constant"),
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<T::Value> {
        if self.peek().tok == Tok::Op('-') {
            self.pos += 1;
            let v = self.unary()?;
            return Ok(self.target.neg(&v));
        }
        self.power()
    }

    fn power(&mut self) -> Result<T::Value> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Op('^') {
            return Ok(base);
        }
        let caret = self.peek().clone();
        self.pos += 1;
        let at = self.peek().clone();
        let e = match &at.tok {
            Tok::Int(n) => match u32::try_from(n.clone()) {
                Ok(e) if e <= 64 => e,
                _ => return self.err(&at, "exponent too large"),
            },
            _ => return self.err(&at, "expected a non-negative integer exponent"),
        };
        self.pos += 1;
        match self.target.as_poly(&base) {
            Some(p) => Ok(self.target.lift(p.pow(e))),
            None => self.err(&caret, "only functions can be raised to a power"),
        }
    }

    fn atom(&mut self) -> Result<T::Value> {
        let at = self.peek().clone();
        match &at.tok {
            Tok::Int(n) => {
                self.pos += 1;
                let q = Qi::from_rational(BigRational::from_integer(n.clone()));
                Ok(self.target.lift(Poly::constant(q)))
            }
            Tok::Ident(name) => {
                self.pos += 1;
                if name == "i" {
                    return Ok(self.target.lift(Poly::constant(Qi::i())));
                }
                if let Some(v) = Var::parse(name) {
                    if !self.target.check_var(v) {
                        return self.err(&at, "symbol is not a coordinate of the chart");
                    }
                    return Ok(self.target.lift(Poly::var(v)));
                }
                match self.target.token(name) {
                    Some(v) => Ok(v),
                    None => self.err(&at, "unknown symbol"),
                }
            }
            Tok::Op('(') => {
                self.pos += 1;
                let v = self.expr()?;
                let close = self.peek().clone();
                if close.tok != Tok::Op(')') {
                    return self.err(&close, "expected `)`");
                }
                self.pos += 1;
                Ok(v)
            }
            _ => self.err(&at, "expected a number, symbol or `(`"),
        }
    }
}

/// Parses `src` into the target's value domain.
pub fn parse_with<T: Target>(src: &str, target: &T) -> Result<T::Value> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, target };
    let v = p.expr()?;
    let rest = p.peek().clone();
    if rest.tok != Tok::End {
        return p.err(&rest, "unexpected trailing input");
    }
    Ok(v)
}

pub fn parse_poly(src: &str) -> Result<Poly> {
    parse_with(src, &PolyTarget)
}

/// Parses a constant (e.g. `"1/100"`, `"(1+i)/2"`).
pub fn parse_scalar(src: &str) -> Result<Qi> {
    let p = parse_poly(src)?;
    p.as_constant().ok_or_else(|| Error::Parse {
        line: 1,
        column: 1,
        token: src.to_string(),
        message: "expected a constant".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_literals() {
        assert_eq!(parse_scalar("3/2").unwrap(), Qi::from_frac(3, 2));
        assert_eq!(parse_scalar("-i").unwrap(), -Qi::i());
        assert_eq!(parse_scalar("(1/2-3*i)").unwrap(), Qi::from_parts((1, 2), (-3, 1)));
        let p = parse_poly("z0*z1 - 2*zb3^2 + x1/3").unwrap();
        assert_eq!(p.num_terms(), 3);
    }

    #[test]
    fn canonical_print_round_trips() {
        for s in ["z0*z1", "-i*zb1 + 3/2", "(1/2-3*i)*z0^2*zb0 - x2", "0", "-7/3*i"] {
            let p = parse_poly(s).unwrap();
            assert_eq!(parse_poly(&p.to_string()).unwrap(), p, "{s} -> {p}");
        }
    }

    #[test]
    fn errors_carry_position() {
        match parse_poly("z0 + sqrt2") {
            Err(Error::Parse { line, column, token, .. }) => {
                assert_eq!((line, column, token.as_str()), (1, 6, "sqrt2"));
            }
            other => panic!("{other:?}"),
        }
        assert!(parse_poly("0.5*z0").is_err());
        assert!(parse_poly("z0/z1").is_err());
        assert!(parse_poly("(z0").is_err());
    }
}

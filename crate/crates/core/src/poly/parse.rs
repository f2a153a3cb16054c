//! Text format: sums of monomials such as `x1^2*z - 3/2*x2`, with `+ - * / ^`
//! and parentheses. Division is only allowed by nonzero constants.

use std::sync::Arc;

use num_bigint::BigInt;

use super::{MultiPoly, PolyRing};
use crate::arith::{Field, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

fn lex(text: &str) -> Result<Lexer, ParseError> {
    let mut toks = Vec::new();
    let chars: Vec<char> = text.chars().collect();
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
            col += 1;
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            toks.push((Tok::Num(s.parse().expect("digits")), l0, c0));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            toks.push((Tok::Ident(chars[start..i].iter().collect()), l0, c0));
            continue;
        }
        if "+-*/^()".contains(c) {
            toks.push((Tok::Op(c), l0, c0));
            col += 1;
            i += 1;
            continue;
        }
        return Err(ParseError { line: l0, column: c0, message: format!("unexpected character {c:?}") });
    }
    toks.push((Tok::End, line, col));
    Ok(Lexer { toks, pos: 0 })
}

impl Lexer {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn here(&self) -> (usize, usize) {
        (self.toks[self.pos].1, self.toks[self.pos].2)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let (line, column) = self.here();
        Err(ParseError { line, column, message: message.into() })
    }
}

struct Parser<'a, F: Field> {
    lx: Lexer,
    ring: &'a Arc<PolyRing<F>>,
}

impl<F: Field> Parser<'_, F> {
    fn expr(&mut self) -> Result<MultiPoly<F>, ParseError> {
        let mut acc = match self.lx.peek() {
            Tok::Op('-') => {
                self.lx.bump();
                self.term()?.neg()
            }
            Tok::Op('+') => {
                self.lx.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.lx.peek() {
                Tok::Op('+') => {
                    self.lx.bump();
                    acc = acc.add(&self.term()?);
                }
                Tok::Op('-') => {
                    self.lx.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly<F>, ParseError> {
        let mut acc = self.power()?;
        loop {
            match self.lx.peek() {
                Tok::Op('*') => {
                    self.lx.bump();
                    acc = acc.mul(&self.power()?);
                }
                Tok::Op('/') => {
                    self.lx.bump();
                    let f = &self.ring.field;
                    let (line, column) = self.lx.here();
                    let d = self.power()?;
                    if !d.is_constant() || d.is_zero() {
                        return Err(ParseError { line, column, message: "division by a non-constant or zero".into() });
                    }
                    let inv = f.inv(&d.constant_term()).map_err(|e| ParseError { line, column, message: e.to_string() })?;
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<MultiPoly<F>, ParseError> {
        let base = self.atom()?;
        if self.lx.peek() == &Tok::Op('^') {
            self.lx.bump();
            match self.lx.bump() {
                Tok::Num(n) => {
                    let e: u32 = n.try_into().or_else(|_| self.lx.err("exponent too large"))?;
                    return Ok(base.pow(e));
                }
                _ => {
                    self.lx.pos -= 1;
                    return self.lx.err("expected a nonnegative integer exponent");
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly<F>, ParseError> {
        let (line, column) = self.lx.here();
        match self.lx.bump() {
            Tok::Num(n) => {
                let f = &self.ring.field;
                let c = f
                    .from_rational(&Rational::from_int(n))
                    .map_err(|e| ParseError { line, column, message: e.to_string() })?;
                Ok(MultiPoly::constant(self.ring, c))
            }
            Tok::Ident(name) => match self.ring.index(&name) {
                Ok(i) => Ok(MultiPoly::var(self.ring, i)),
                Err(_) => Err(ParseError { line, column, message: format!("unknown variable {name:?}") }),
            },
            Tok::Op('(') => {
                let e = self.expr()?;
                if self.lx.peek() != &Tok::Op(')') {
                    return self.lx.err("expected ')'");
                }
                self.lx.bump();
                Ok(e)
            }
            Tok::Op('-') => Ok(self.power()?.neg()),
            Tok::End => Err(ParseError { line, column, message: "unexpected end of input".into() }),
            Tok::Op(c) => Err(ParseError { line, column, message: format!("unexpected {c:?}") }),
        }
    }
}

/// Parses `text` as a polynomial in `ring`.
pub fn parse_poly<F: Field>(ring: &Arc<PolyRing<F>>, text: &str) -> Result<MultiPoly<F>, ParseError> {
    let lx = lex(text)?;
    let mut p = Parser { lx, ring };
    let out = p.expr()?;
    if p.lx.peek() != &Tok::End {
        return p.lx.err("unexpected trailing input");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{PrimeField, Rationals};

    #[test]
    fn round_trip() {
        let r = PolyRing::new(&Rationals, &["x1", "x2", "z"]);
        for s in ["x1^2*z - 3/2*x2", "(x1 + z)^3 - x2*z/4", "-z^2 + 1", "0", "2*x1*x2 - 7/3"] {
            let p = parse_poly(&r, s).unwrap();
            assert_eq!(parse_poly(&r, &p.to_text()).unwrap(), p);
        }
        assert_eq!(parse_poly(&r, "x1^2*z - 3/2*x2").unwrap().to_text(), "x1^2*z - 3/2*x2");
    }

    #[test]
    fn errors_carry_positions() {
        let r = PolyRing::new(&Rationals, &["x", "y"]);
        let e = parse_poly(&r, "x + + y").unwrap_err();
        assert_eq!((e.line, e.column), (1, 5));
        let e = parse_poly(&r, "x*y\n + w").unwrap_err();
        assert_eq!((e.line, e.column), (2, 4));
        let e = parse_poly(&r, "x^y").unwrap_err();
        assert_eq!((e.line, e.column), (1, 3));
        assert!(parse_poly(&r, "x / y").is_err());
        assert!(parse_poly(&r, "(x").is_err());
        assert!(parse_poly(&r, "x $").is_err());
    }

    #[test]
    fn modular_coefficients() {
        let f = PrimeField::new(7).unwrap();
        let r = PolyRing::new(&f, &["x"]);
        let p = parse_poly(&r, "1/2*x + 8").unwrap();
        assert_eq!(p.to_text(), "4*x + 1");
        assert!(parse_poly(&r, "x/7").is_err());
    }
}

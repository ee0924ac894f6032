use std::sync::Arc;

use thiserror::Error;

use crate::gf::{FieldCtx, FieldElem};
use crate::laurent::LaurentPoly;

const MAX_EXPONENT: i64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("exponent out of range (limit {MAX_EXPONENT})")]
    ExponentOverflow,
    #[error("{0}")]
    NotInField(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("at position {position}: {kind}")]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub kind: ParseErrorKind,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ctx: Arc<FieldCtx>,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, kind: ParseErrorKind) -> Result<T, ParseError> {
        Err(ParseError { position: self.pos, kind })
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        self.err(ParseErrorKind::Syntax(msg.into()))
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Result<&[u8], ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.syntax("expected digits");
        }
        Ok(&self.src[start..self.pos])
    }

    /// `['+'|'-'] digits`, optionally in parentheses.
    fn exponent(&mut self) -> Result<i64, ParseError> {
        let paren = self.eat(b'(');
        let neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let start = self.pos;
        let mut v: i64 = 0;
        for &d in self.digits()? {
            v = v * 10 + (d - b'0') as i64;
            if v > MAX_EXPONENT {
                self.pos = start;
                return self.err(ParseErrorKind::ExponentOverflow);
            }
        }
        if paren && !self.eat(b')') {
            return self.syntax("expected ')'");
        }
        Ok(if neg { -v } else { v })
    }

    /// A product of factors: integers, `g[^e]`, `t1[^e]`, `t2[^e]`.
    fn term(&mut self) -> Result<(FieldElem, i64, i64), ParseError> {
        let mut coeff = FieldElem::one(&self.ctx);
        let (mut m, mut n) = (0i64, 0i64);
        loop {
            let start = self.pos;
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let p = self.ctx.p() as u64;
                    let r = self.digits()?.iter().fold(0u64, |acc, d| (acc * 10 + (d - b'0') as u64) % p);
                    coeff = &coeff * &FieldElem::from_int(&self.ctx, r as i64);
                }
                Some(b'g') => {
                    self.pos += 1;
                    if self.ctx.k() == 1 {
                        self.pos = start;
                        return self.err(ParseErrorKind::NotInField(format!(
                            "g names the generator of an extension, but the field is {}",
                            self.ctx
                        )));
                    }
                    let e = if self.eat(b'^') { self.exponent()? } else { 1 };
                    let gen = FieldElem::generator(&self.ctx);
                    coeff = &coeff * &gen.pow_i(e).expect("generator is nonzero");
                }
                Some(b't') => {
                    self.pos += 1;
                    let var = match self.src.get(self.pos) {
                        Some(b'1') => 1,
                        Some(b'2') => 2,
                        _ => return self.syntax("expected t1 or t2"),
                    };
                    self.pos += 1;
                    let e = if self.eat(b'^') { self.exponent()? } else { 1 };
                    let slot = if var == 1 { &mut m } else { &mut n };
                    *slot += e;
                    if slot.abs() > MAX_EXPONENT {
                        self.pos = start;
                        return self.err(ParseErrorKind::ExponentOverflow);
                    }
                }
                Some(_) => return self.syntax("expected a number, g, t1 or t2"),
                None => return self.syntax("unexpected end of input"),
            }
            if !self.eat(b'*') {
                return Ok((coeff, m, n));
            }
        }
    }

    fn expr(&mut self) -> Result<LaurentPoly, ParseError> {
        let mut out = LaurentPoly::zero(&self.ctx);
        let mut neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        loop {
            let (c, m, n) = self.term()?;
            let c = if neg { -&c } else { c };
            out.add_term((m, n), &c);
            match self.peek() {
                None => return Ok(out),
                Some(b'+') => neg = false,
                Some(b'-') => neg = true,
                Some(_) => return self.syntax("expected '+', '-', '*' or end of input"),
            }
            self.pos += 1;
        }
    }
}

/// Parses `terms joined by + / -`, each term a `*`-product of an integer,
/// `g^e` (the field generator), `t1^e` and `t2^e` in any order.
pub fn parse_poly(expr: &str, field: &Arc<FieldCtx>) -> Result<LaurentPoly, ParseError> {
    let mut p = Parser { src: expr.as_bytes(), pos: 0, ctx: field.clone() };
    p.expr()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32, k: usize) -> Arc<FieldCtx> {
        FieldCtx::new(p, k).unwrap()
    }

    #[test]
    fn examples() {
        let f3 = f(3, 1);
        let m = parse_poly("t1^-2*t2", &f3).unwrap();
        assert_eq!(m, LaurentPoly::monomial(FieldElem::one(&f3), -2, 1));
        let f5 = f(5, 1);
        assert_eq!(parse_poly("2*t1^-3 + t2^-2", &f5).unwrap().len(), 2);
        assert!(parse_poly("t1^-1 + 4*t1^-1", &f5).unwrap().is_zero());
        assert!(parse_poly("0", &f5).unwrap().is_zero());
    }

    #[test]
    fn any_factor_order_and_whitespace() {
        let f5 = f(5, 1);
        let a = parse_poly(" t2 ^ 3 * 2 * t1^-1 - 1", &f5).unwrap();
        let b = parse_poly("2*t1^(-1)*t2^3+4", &f5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn generator_coefficients() {
        let f4 = f(2, 2);
        let p = parse_poly("g*t1^-1 + g^2*t1^-1", &f4).unwrap();
        // g + g^2 = g + g + 1 = 1
        assert_eq!(p, LaurentPoly::monomial(FieldElem::one(&f4), -1, 0));
        assert!(matches!(
            parse_poly("g*t1", &f(3, 1)).unwrap_err().kind,
            ParseErrorKind::NotInField(_)
        ));
    }

    #[test]
    fn errors_carry_positions() {
        let f3 = f(3, 1);
        let e = parse_poly("t1^-2 * x", &f3).unwrap_err();
        assert_eq!(e.position, 8);
        let e = parse_poly("t1^-2 +", &f3).unwrap_err();
        assert_eq!(e.position, 7);
        let e = parse_poly("t3", &f3).unwrap_err();
        assert_eq!(e.position, 1);
        let e = parse_poly("t1^99999999999", &f3).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::ExponentOverflow);
        assert!(parse_poly("t1 t2", &f3).is_err());
    }

    #[test]
    fn print_round_trips() {
        let f9 = f(3, 2);
        let p = parse_poly("2*g*t1^-3*t2 + g^5*t2^-2 + 7 - t1^4", &f9).unwrap();
        assert_eq!(parse_poly(&p.to_string(), &f9).unwrap(), p);
    }
}

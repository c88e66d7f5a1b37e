//! Polynomial text grammar.
//!
//! ```text
//! poly   := ['-'|'+'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := integer ['/' integer] | var ['^' integer]
//! ```
//!
//! Whitespace is allowed between tokens. The canonical renderer writes an optional
//! coefficient first, but the parser accepts numeric factors anywhere in a product.

use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::rational::Rational;
use crate::ring::{Monomial, RingSpec, MAX_EXPONENT};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a Arc<RingSpec>,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(BigInt::from_str(s).unwrap())
    }

    fn ident(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap()
    }

    fn term(&mut self) -> Result<(Monomial, Rational)> {
        let n = self.ring.nvars();
        let mut exps = vec![0u32; n];
        let mut coef = Rational::one();
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let num = self.integer()?;
                    let den = if self.eat(b'/') {
                        let at = self.pos;
                        let d = self.integer()?;
                        if d.is_zero() {
                            self.pos = at;
                            return self.err("zero denominator");
                        }
                        d
                    } else {
                        BigInt::one()
                    };
                    coef *= Rational::new(num, den);
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    let at = self.pos;
                    let name = self.ident();
                    let Some(i) = self.ring.index_of(name) else {
                        self.pos = at;
                        return Err(Error::UnknownVariable(name.to_owned()));
                    };
                    let e = if self.eat(b'^') {
                        let at = self.pos;
                        let e = self.integer()?;
                        match u32::try_from(e) {
                            Ok(e) if e <= MAX_EXPONENT => e,
                            _ => {
                                self.pos = at;
                                return Err(Error::ExponentOverflow { limit: MAX_EXPONENT });
                            }
                        }
                    } else {
                        1
                    };
                    exps[i] += e;
                    if exps[i] > MAX_EXPONENT {
                        return Err(Error::ExponentOverflow { limit: MAX_EXPONENT });
                    }
                }
                Some(_) => return self.err("expected coefficient or variable"),
                None => return self.err("unexpected end of input"),
            }
            if !self.eat(b'*') {
                break;
            }
        }
        Ok((Monomial::from_exponents(&exps)?, coef))
    }
}

pub(crate) fn parse_polynomial(text: &str, ring: &Arc<RingSpec>) -> Result<Polynomial> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        ring,
    };
    let mut terms = Vec::new();
    let mut negate = if p.eat(b'-') {
        true
    } else {
        p.eat(b'+');
        false
    };
    loop {
        let (m, c) = p.term()?;
        terms.push((m, if negate { -c } else { c }));
        match p.peek() {
            None => break,
            Some(b'+') => negate = false,
            Some(b'-') => negate = true,
            Some(_) => return p.err("expected `+`, `-` or end of input"),
        }
        p.pos += 1;
    }
    Ok(Polynomial::from_terms(ring, terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Arc<RingSpec> {
        RingSpec::new(&["p1", "p2"], &[1, 2]).unwrap()
    }

    #[test]
    fn zero_roundtrip() {
        let z = Polynomial::parse("0", &ring()).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.to_string(), "0");
    }

    #[test]
    fn l2_coefficients_roundtrip() {
        let text = "-1/45*p1^2 + 7/45*p2";
        let q = Polynomial::parse(text, &ring()).unwrap();
        assert_eq!(q.to_string(), text);
        let q2 = Polynomial::parse("  7 / 45 * p2-p1 ^2*1/45 ", &ring()).unwrap();
        assert_eq!(q, q2);
    }

    #[test]
    fn errors_carry_position() {
        match Polynomial::parse("p1 + * p2", &ring()) {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            Polynomial::parse("p1 + q", &ring()),
            Err(Error::UnknownVariable(v)) if v == "q"
        ));
        assert!(Polynomial::parse("", &ring()).is_err());
        assert!(Polynomial::parse("p1 p2", &ring()).is_err());
        assert!(Polynomial::parse("1/0*p1", &ring()).is_err());
        assert!(Polynomial::parse("p1^99999", &ring()).is_err());
    }

    #[test]
    fn repeated_variables_accumulate() {
        let q = Polynomial::parse("p1*p1^2*p2", &ring()).unwrap();
        assert_eq!(q.to_string(), "p1^3*p2");
    }
}

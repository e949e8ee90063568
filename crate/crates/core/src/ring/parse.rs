//! Parser for the polynomial text grammar.
//!
//! ```text
//! poly     := term { ("+" | "-") term }
//! term     := rational ["*" factor {"*" factor}] | factor {"*" factor}
//! factor   := var ["^" nat]
//! var      := "x" nat | "d" nat "(" "x" nat ")" | "q" | "u"
//! rational := ["-"] nat ["/" nat]
//! ```
//!
//! `q` parses to `1 + u`. A bare factor list (no leading rational) is
//! accepted on input; the printer always emits the leading rational.

use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::One;

use super::{Poly, VarId};
use crate::{Error, Result};

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Self {
        Parser { bytes: input.as_bytes(), pos: 0 }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse { position: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", b as char)))
        }
    }

    fn nat_digits(&mut self) -> Result<&'a str> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected digits"));
        }
        Ok(std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits"))
    }

    fn nat_u32(&mut self) -> Result<u32> {
        let digits = self.nat_digits()?;
        digits.parse::<u32>().map_err(|_| self.err("number too large"))
    }

    fn nat_bigint(&mut self) -> Result<BigInt> {
        let digits = self.nat_digits()?;
        BigInt::from_str(digits).map_err(|_| self.err("bad integer"))
    }

    fn rational(&mut self) -> Result<BigRational> {
        let negative = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let mut numer = self.nat_bigint()?;
        if negative {
            numer = -numer;
        }
        let denom = if self.peek() == Some(b'/') {
            self.pos += 1;
            let d = self.nat_bigint()?;
            if d == BigInt::from(0) {
                return Err(self.err("zero denominator"));
            }
            d
        } else {
            BigInt::one()
        };
        Ok(BigRational::new(numer, denom))
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                let i = self.nat_u32()?;
                if i == 0 {
                    return Err(self.err("variable index must be >= 1"));
                }
                Poly::var(VarId::X(i))
            }
            Some(b'd') => {
                self.pos += 1;
                let depth = self.nat_u32()?;
                if depth == 0 {
                    return Err(self.err("delta depth must be >= 1"));
                }
                self.expect(b'(')?;
                self.expect(b'x')?;
                let var = self.nat_u32()?;
                if var == 0 {
                    return Err(self.err("variable index must be >= 1"));
                }
                self.expect(b')')?;
                Poly::var(VarId::delta(var, depth))
            }
            Some(b'q') => {
                self.pos += 1;
                Poly::q()
            }
            Some(b'u') => {
                self.pos += 1;
                Poly::var(VarId::U)
            }
            _ => return Err(self.err("expected variable")),
        };
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.nat_u32()?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = match self.peek() {
            Some(c) if c.is_ascii_digit() || c == b'-' => Poly::constant(self.rational()?),
            Some(_) => self.factor()?,
            None => return Err(self.err("expected term")),
        };
        loop {
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
                self.skip_ws();
                let f = self.factor()?;
                acc = acc.mul(&f);
            } else {
                return Ok(acc);
            }
        }
    }

    fn poly(&mut self) -> Result<Poly> {
        self.skip_ws();
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    self.skip_ws();
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    self.skip_ws();
                    acc = acc.sub(&self.term()?);
                }
                None => return Ok(acc),
                Some(c) => return Err(self.err(format!("unexpected '{}'", c as char))),
            }
        }
    }
}

pub fn parse_poly(input: &str) -> Result<Poly> {
    let mut p = Parser::new(input);
    let poly = p.poly()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("trailing input"));
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_strict_term() {
        let f = parse_poly("1*x1^2 + -1*u*d1(x1)").unwrap();
        let expect = Poly::var(VarId::X(1))
            .pow(2)
            .sub(&Poly::var(VarId::U).mul(&Poly::var(VarId::delta(1, 1))));
        assert_eq!(f, expect);
    }

    #[test]
    fn parse_bare_factors() {
        assert_eq!(parse_poly("x1").unwrap(), Poly::var(VarId::X(1)));
        assert_eq!(parse_poly("x2^3").unwrap(), Poly::var(VarId::X(2)).pow(3));
    }

    #[test]
    fn q_expands_to_one_plus_u() {
        assert_eq!(parse_poly("q").unwrap(), Poly::q());
        // 1 + q + q^2 = 3 + 3u + u^2
        let f = parse_poly("1 + q + q^2").unwrap();
        let expect = Poly::from_int(3)
            .add(&Poly::var(VarId::U).scale(&num::BigRational::from_integer(3.into())))
            .add(&Poly::var(VarId::U).pow(2));
        assert_eq!(f, expect);
    }

    #[test]
    fn parse_rational_coeff() {
        let f = parse_poly("-3/4*u^2").unwrap();
        let expect = Poly::var(VarId::U)
            .pow(2)
            .scale(&num::BigRational::new((-3).into(), 4.into()));
        assert_eq!(f, expect);
    }

    #[test]
    fn subtraction_between_terms() {
        assert_eq!(parse_poly("x1 - 1").unwrap(), parse_poly("x1 + -1").unwrap());
    }

    #[test]
    fn roundtrip_is_bit_exact() {
        let samples = [
            "1*x1^2 + -1*d1(x1)*u",
            "1/2*x1^4 + -2/3*x2*u^3 + 5*d2(x1)^2",
            "0",
            "-7",
        ];
        for s in samples {
            let p = parse_poly(s).unwrap();
            assert_eq!(p.to_string(), s, "canonical form should match");
            assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_poly("x0").is_err());
        assert!(parse_poly("x1 $ 2").is_err());
        assert!(parse_poly("1/0").is_err());
        assert!(parse_poly("").is_err());
    }
}

//! Tiny exact expression language for window endpoints.
//!
//! Grammar:
//!
//! ```text
//! expr     := term { ("+" | "-") term }
//! term     := rational [ "*" pow ] | pow
//! pow      := "beta" [ "^" integer ]
//! rational := ["-"] integer [ "/" positive-integer ]
//! ```
//!
//! `beta^k` with `k >= 3` is reduced through the minimal polynomial of
//! `beta`, so endpoints like `beta^3` parse directly. Negative exponents are
//! rejected.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::field::{BaseSpec, QBeta};
use crate::interval::Rat;

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::ParseError {
            pos: self.pos,
            msg: msg.to_string(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
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
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        let digits_from = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_from {
            self.pos = start;
            return self.err("expected an integer");
        }
        let s = std::str::from_utf8(&self.text[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn keyword_beta(&mut self) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(b"beta") {
            self.pos += 4;
            true
        } else {
            false
        }
    }

    fn pow(&mut self, base: &BaseSpec) -> Result<QBeta> {
        if !self.keyword_beta() {
            return self.err("expected `beta`");
        }
        if !self.eat(b'^') {
            return Ok(QBeta::beta());
        }
        let exp = self.integer()?;
        let k: i64 = match TryInto::<i64>::try_into(exp) {
            Ok(k) if k >= 0 => k,
            Ok(k) => return Err(Error::ExponentOutOfRange { exp: k }),
            Err(_) => return Err(Error::ExponentOutOfRange { exp: i64::MIN }),
        };
        Ok(base.beta_pow(k))
    }

    fn rational(&mut self) -> Result<Rat> {
        let num = self.integer()?;
        if self.eat(b'/') {
            self.skip_ws();
            let at = self.pos;
            let den = self.integer()?;
            if den <= BigInt::from(0) {
                self.pos = at;
                return self.err("denominator must be positive");
            }
            Ok(Rat::new(num, den))
        } else {
            Ok(Rat::from_integer(num))
        }
    }

    fn term(&mut self, base: &BaseSpec) -> Result<QBeta> {
        match self.peek() {
            Some(b'b') => self.pow(base),
            Some(c) if c == b'-' || c.is_ascii_digit() => {
                let r = self.rational()?;
                if self.eat(b'*') {
                    Ok(self.pow(base)?.scale(&r))
                } else {
                    Ok(QBeta::from_rat(r))
                }
            }
            _ => self.err("expected a rational or `beta`"),
        }
    }

    fn expr(&mut self, base: &BaseSpec) -> Result<QBeta> {
        let mut acc = self.term(base)?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term(base)?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term(base)?);
            } else {
                return Ok(acc);
            }
        }
    }
}

/// Evaluate a window expression exactly over the given base.
pub fn parse_window(text: &str, base: &BaseSpec) -> Result<QBeta> {
    let mut p = Parser {
        text: text.as_bytes(),
        pos: 0,
    };
    let value = p.expr(base)?;
    p.skip_ws();
    if p.pos != p.text.len() {
        return p.err("trailing input");
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_base;
    use crate::interval::{rat, rat_int};
    use num_traits::Zero;

    fn tribonacci() -> BaseSpec {
        make_base(1, 1).unwrap()
    }

    #[test]
    fn basic_forms() {
        let base = tribonacci();
        assert_eq!(
            parse_window("beta^2+1", &base).unwrap(),
            QBeta::new(rat_int(1), Rat::zero(), rat_int(1))
        );
        assert_eq!(
            parse_window("1/2*beta - 3", &base).unwrap(),
            QBeta::new(rat_int(-3), rat(1, 2), Rat::zero())
        );
        assert_eq!(parse_window(" beta ^ 0 ", &base).unwrap(), QBeta::one());
        assert_eq!(
            parse_window("-2 + beta", &base).unwrap(),
            QBeta::new(rat_int(-2), rat_int(1), Rat::zero())
        );
    }

    #[test]
    fn high_powers_reduce() {
        // beta^3 = a beta^2 + b beta + 1
        let base = tribonacci();
        assert_eq!(
            parse_window("beta^3", &base).unwrap(),
            QBeta::new(rat_int(1), rat_int(1), rat_int(1))
        );
        assert_eq!(parse_window("beta^4", &base).unwrap(), base.beta_pow(4));
    }

    #[test]
    fn error_positions() {
        let base = tribonacci();
        match parse_window("1 + ", &base) {
            Err(Error::ParseError { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("unexpected {other:?}"),
        }
        match parse_window("beta^2 oops", &base) {
            Err(Error::ParseError { pos, .. }) => assert_eq!(pos, 7),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_window("beta^-1", &base),
            Err(Error::ExponentOutOfRange { .. })
        ));
        assert!(matches!(
            parse_window("1/0", &base),
            Err(Error::ParseError { .. })
        ));
    }
}

//! A small parser for input polynomials such as `3*m^2 + m` or `(n-1)^2/2`.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary (('*' | '/') unary)*      divisor must be a nonzero constant
//! unary    := ('+' | '-') unary | power
//! power    := atom ('^' exponent)?
//! exponent := integer | '(' expr ')'          must be a nonnegative integer
//! atom     := integer | 'm' | 'n' | '(' expr ')'
//! ```
//!
//! `m` and `n` name the same variable.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::rational::Rational;

const MAX_EXPONENT: u64 = 4096;

/// Parses `text` into an exact polynomial.
pub fn parse_poly(text: &str) -> Result<Polynomial> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    p.skip_ws();
    if p.at_end() {
        return Err(p.error("empty expression"));
    }
    let out = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error(&format!("unexpected `{}`", p.peek_char())));
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn peek_char(&self) -> char {
        std::str::from_utf8(&self.src[self.pos..])
            .ok()
            .and_then(|s| s.chars().next())
            .unwrap_or('?')
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn error(&self, message: &str) -> Error {
        Error::Parse {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn eat(&mut self, b: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc + self.term()?;
            } else if self.eat(b'-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc * self.unary()?;
            } else if self.eat(b'/') {
                let at = self.pos;
                let divisor = self.unary()?;
                if divisor.degree() > 0 {
                    return Err(Error::Parse {
                        offset: at,
                        message: "division by a non-constant polynomial".into(),
                    });
                }
                if divisor.is_zero() {
                    return Err(Error::Parse {
                        offset: at,
                        message: "division by zero".into(),
                    });
                }
                acc = acc.scale(&divisor.coeff(0).recip());
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial> {
        if self.eat(b'-') {
            return Ok(-self.unary()?);
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        self.skip_ws();
        let at = self.pos;
        let exp = if self.eat(b'(') {
            let e = self.expr()?;
            if !self.eat(b')') {
                return Err(self.error("expected `)`"));
            }
            if e.degree() > 0 {
                return Err(Error::Parse {
                    offset: at,
                    message: "exponent must be a constant".into(),
                });
            }
            let c = e.coeff(0);
            if !c.is_integer() {
                return Err(Error::Parse {
                    offset: at,
                    message: "division in exponents is not allowed".into(),
                });
            }
            c.to_integer()
        } else {
            self.integer()?
        };
        if exp.is_negative() {
            return Err(Error::Parse {
                offset: at,
                message: "negative exponent".into(),
            });
        }
        let e = exp
            .to_u64()
            .filter(|&e| e <= MAX_EXPONENT)
            .ok_or_else(|| Error::Parse {
                offset: at,
                message: format!("exponent larger than {MAX_EXPONENT}"),
            })?;
        Ok((0..e).fold(Polynomial::one(), |acc, _| &acc * &base))
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits form an integer"))
    }

    fn atom(&mut self) -> Result<Polynomial> {
        self.skip_ws();
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(inner)
            }
            Some(b) if b.is_ascii_digit() => {
                let v = self.integer()?;
                self.skip_ws();
                if self.peek().is_some_and(|b| b.is_ascii_alphabetic() || b == b'(') {
                    return Err(self.error("missing `*` before this factor"));
                }
                if self.peek() == Some(b'.') {
                    return Err(self.error("decimal literals are not supported; write a fraction"));
                }
                Ok(Polynomial::constant(Rational::from_integer(v)))
            }
            Some(b) if b.is_ascii_alphabetic() || b == b'_' => {
                let start = self.pos;
                while self
                    .peek()
                    .is_some_and(|b| b.is_ascii_alphanumeric() || b == b'_')
                {
                    self.pos += 1;
                }
                let ident = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match ident {
                    "m" | "n" => Ok(Polynomial::x()),
                    other => Err(Error::Parse {
                        offset: start,
                        message: format!("unknown identifier `{other}` (use `m` or `n`)"),
                    }),
                }
            }
            Some(_) => Err(self.error(&format!("unexpected `{}`", self.peek_char()))),
        }
    }
}

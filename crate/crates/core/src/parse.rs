//! Text format for polynomials.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | '+' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | name | '(' expr ')'
//! ```
//!
//! Division is only allowed by a nonzero constant, which is how `75/4*s^2`
//! style coefficients are written. Offsets in errors are byte offsets.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::Rational;
use crate::poly::{MultiPoly, PolyError};

pub fn parse_poly<S: AsRef<str>>(text: &str, vars: &[S]) -> Result<MultiPoly, PolyError> {
    let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        vars: &vars,
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected character"));
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn error(&self, message: &str) -> PolyError {
        PolyError::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
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

    fn expr(&mut self) -> Result<MultiPoly, PolyError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, PolyError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.unary()?;
                    if !d.is_constant() {
                        return Err(PolyError::Syntax {
                            offset: at,
                            message: "divisor must be a constant".into(),
                        });
                    }
                    let c = d.constant_term();
                    if c.is_zero() {
                        return Err(PolyError::Syntax {
                            offset: at,
                            message: "division by zero".into(),
                        });
                    }
                    acc = acc.scale(&c.recip());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<MultiPoly, PolyError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MultiPoly, PolyError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.error("expected exponent"));
            }
            let e: u32 = digits.parse().map_err(|_| PolyError::Syntax {
                offset: start,
                message: "exponent too large".into(),
            })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap()
    }

    fn atom(&mut self) -> Result<MultiPoly, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n: BigInt = self.digits().parse().unwrap();
                Ok(MultiPoly::constant(self.vars, Rational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                MultiPoly::var(self.vars, name)
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

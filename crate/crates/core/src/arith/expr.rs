//! Parser for cyclotomic scalars written as expressions.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ['^' ['-'] int]
//! atom   := int ['/' int] | 'zeta(' int ')' | 'i' | '(' expr ')'
//! ```
//!
//! Examples: `1`, `-1`, `zeta(4)`, `zeta(8)^3 * 2/3`, `1/2 - 3*zeta(8)^3`.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::CycNumber;
use crate::error::{Error, Result};

pub fn parse_cyc(s: &str) -> Result<CycNumber> {
    let mut p = Parser {
        src: s.as_bytes(),
        pos: 0,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!(
            "{what} at offset {} in {:?}",
            self.pos,
            String::from_utf8_lossy(self.src)
        ))
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

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn int(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(text.parse().unwrap())
    }

    fn small_int(&mut self) -> Result<i64> {
        let v = self.int()?;
        i64::try_from(v).map_err(|_| self.err("integer too large"))
    }

    fn expr(&mut self) -> Result<CycNumber> {
        let mut acc = if self.eat(b'-') {
            -self.term()?
        } else {
            self.eat(b'+');
            self.term()?
        };
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

    fn term(&mut self) -> Result<CycNumber> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = acc * self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<CycNumber> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let neg = self.eat(b'-');
        let e = self.small_int()?;
        let e = if neg { -e } else { e };
        if e < 0 && base.is_zero() {
            return Err(self.err("zero to a negative power"));
        }
        Ok(base.pow(e))
    }

    fn atom(&mut self) -> Result<CycNumber> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(b'z') => {
                if !self.src[self.pos..].starts_with(b"zeta") {
                    return Err(self.err("unknown identifier"));
                }
                self.pos += 4;
                self.expect(b'(')?;
                let n = self.small_int()?;
                self.expect(b')')?;
                if n < 1 {
                    return Err(self.err("zeta order must be positive"));
                }
                Ok(CycNumber::zeta(n as u64, 1))
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(CycNumber::zeta(4, 1))
            }
            Some(c) if c.is_ascii_digit() => {
                let a = self.int()?;
                if self.eat(b'/') {
                    let b = self.int()?;
                    if b == BigInt::from(0) {
                        return Err(self.err("zero denominator"));
                    }
                    Ok(CycNumber::from_rational(&BigRational::new(a, b)))
                } else {
                    Ok(CycNumber::from_rational(&BigRational::from_integer(a)))
                }
            }
            _ => Err(self.err("expected a number, zeta(N), or '('")),
        }
    }
}

//! Recursive-descent reader for ring elements.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' ['-'] nat)?
//! atom   := int ['/' int] | var | '(' expr ')'
//! ```
//! Negative exponents are accepted only on units of the ring.

use alloc::format;
use alloc::string::{String, ToString};

use crate::error::{Error, Result};
use crate::poly::{LocPoly, RingRef};
use crate::rat::Rat;

pub fn parse_poly(ring: &RingRef, src: &str) -> Result<LocPoly> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, ring };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a RingRef,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
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

    fn expr(&mut self) -> Result<LocPoly> {
        let neg = self.eat(b'-');
        let mut acc = self.term()?;
        if neg {
            acc = -&acc;
        }
        loop {
            if self.eat(b'+') {
                let t = self.term()?;
                acc = &acc + &t;
            } else if self.eat(b'-') {
                let t = self.term()?;
                acc = &acc - &t;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<LocPoly> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<LocPoly> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let neg = self.eat(b'-');
            let start = self.pos;
            let n = self.nat()?;
            let n = i32::try_from(n).map_err(|_| Error::Parse { pos: start, msg: "exponent too large".to_string() })?;
            let e = if neg { -n } else { n };
            return base.pow(e).map_err(|_| Error::Parse {
                pos: start,
                msg: format!("negative power of non-unit {}", base),
            });
        }
        Ok(base)
    }

    fn nat(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a natural number"));
        }
        let s = core::str::from_utf8(&self.src[start..self.pos]).unwrap();
        s.parse::<u64>().map_err(|_| Error::Parse { pos: start, msg: "integer too large".to_string() })
    }

    fn atom(&mut self) -> Result<LocPoly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                self.nat()?;
                let mut end = self.pos;
                let save = self.pos;
                if self.eat(b'/') {
                    if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                        self.nat()?;
                        end = self.pos;
                    } else {
                        self.pos = save;
                    }
                }
                let text: String = core::str::from_utf8(&self.src[start..end]).unwrap().chars().filter(|c| !c.is_whitespace()).collect();
                let r: Rat = text.parse().map_err(|_| Error::Parse { pos: start, msg: format!("bad rational '{}'", text) })?;
                Ok(LocPoly::constant(self.ring, r))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = core::str::from_utf8(&self.src[start..self.pos]).unwrap();
                LocPoly::var_named(self.ring, name)
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Ring;

    #[test]
    fn reads_laurent_elements() {
        let r = Ring::new(&["t", "y"], &["t"]).unwrap();
        let a = parse_poly(&r, "t^-2*(t^3 + 1)").unwrap();
        let b = parse_poly(&r, "t + t^-2").unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_poly(&r, "-1/2*y + 3").unwrap().to_string(), "-(1/2)*y + 3");
    }

    #[test]
    fn rejects_bad_input() {
        let r = Ring::new(&["x"], &[]).unwrap();
        assert!(matches!(parse_poly(&r, "x^-1"), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly(&r, "z"), Err(Error::UnknownVariable(_))));
        assert!(matches!(parse_poly(&r, "x +"), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly(&r, "(x"), Err(Error::Parse { .. })));
    }
}

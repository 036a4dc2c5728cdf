//! Recursive-descent parser for rational-function text in `t1`, `t2`.
//!
//! Grammar: `expr := term (('+'|'-') term)*`, `term := unary (('*'|'/') unary)*`,
//! `unary := '-' unary | power`, `power := atom ('^' int)?`,
//! `atom := number | 't1' | 't2' | '(' expr ')'`.

use super::poly2::Poly2;
use super::ratfunc::RatFunc2;
use super::rational::parse_rational;
use crate::error::{Error, Result};

pub fn parse_ratfunc(s: &str) -> Result<RatFunc2> {
    let mut p = Parser { src: s.as_bytes(), pos: 0, text: s };
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
    text: &'a str,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at byte {} in '{}'", self.pos, self.text))
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

    fn expr(&mut self) -> Result<RatFunc2> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc2> {
        let mut acc = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            if c == b'*' {
                acc = &acc * &rhs;
            } else {
                let inv = rhs.inv().ok_or_else(|| self.err("division by zero"))?;
                acc = &acc * &inv;
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RatFunc2> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatFunc2> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let neg = if self.peek() == Some(b'-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let e = self.digits()?;
            let e: i64 = e.parse().map_err(|_| self.err("bad exponent"))?;
            let e = if neg { -e } else { e };
            if e < 0 && base.is_zero() {
                return Err(self.err("negative power of zero"));
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(self.text[start..self.pos].to_string())
    }

    fn atom(&mut self) -> Result<RatFunc2> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b't') => {
                let var = self.src.get(self.pos + 1).copied();
                self.pos += 2;
                match var {
                    Some(b'1') => Ok(RatFunc2::from_poly(Poly2::t1())),
                    Some(b'2') => Ok(RatFunc2::from_poly(Poly2::t2())),
                    _ => Err(self.err("unknown variable")),
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits()?;
                Ok(RatFunc2::from_rational(parse_rational(&d)?))
            }
            _ => Err(self.err("unexpected token")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_powers() {
        let f = parse_ratfunc("2*t1^2 - 3*t1*t2 + 1/2").unwrap();
        assert_eq!(f.to_string(), "2*t1^2 - 3*t1*t2 + 1/2");
        assert_eq!(parse_ratfunc("-t1^2").unwrap().to_string(), "-t1^2");
        assert_eq!(parse_ratfunc("t1^-1").unwrap().to_string(), "(1)/(t1)");
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_ratfunc("t3").is_err());
        assert!(parse_ratfunc("1/0").is_err());
        assert!(parse_ratfunc("(t1").is_err());
        assert!(parse_ratfunc("t1 t2").is_err());
    }
}

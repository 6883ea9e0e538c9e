//! Recursive-descent parser for the polynomial text grammar.
//!
//! ```text
//! poly   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' integer)?
//! atom   := integer | identifier | '(' poly ')'
//! ```

use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::PolyError;
use crate::poly::{Polynomial, Ring};

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    ring: &'a Arc<Ring>,
}

pub fn parse_polynomial(ring: &Arc<Ring>, text: &str) -> Result<Polynomial, PolyError> {
    let mut p = Parser { src: text, pos: 0, ring };
    let f = p.poly()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("end of input or operator"));
    }
    Ok(f)
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn err(&self, expected: &'static str) -> PolyError {
        let found = match self.peek() {
            Some(c) => format!("`{}`", c),
            None => "end of input".to_string(),
        };
        PolyError::Parse { pos: self.pos, expected, found }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn poly(&mut self) -> Result<Polynomial, PolyError> {
        self.skip_ws();
        let mut acc = if self.eat('-') {
            -self.term()?
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, PolyError> {
        let base = self.atom()?;
        if self.eat('^') {
            self.skip_ws();
            let e = self.integer()?;
            let e: u32 = e.try_into().map_err(|_| self.err("small non-negative exponent"))?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn integer(&mut self) -> Result<BigInt, PolyError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("integer"));
        }
        Ok(self.src[start..self.pos].parse().expect("digits parse as integer"))
    }

    fn atom(&mut self) -> Result<Polynomial, PolyError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(self.ring.constant(self.integer()?)),
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                let name = &self.src[start..self.pos];
                match self.ring.ctx().index_of(name) {
                    Some(i) => Ok(self.ring.var_at(i)),
                    None => {
                        self.pos = start;
                        Err(self.err("declared variable"))
                    }
                }
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.poly()?;
                if !self.eat(')') {
                    return Err(self.err("`)`"));
                }
                Ok(inner)
            }
            _ => Err(self.err("integer, variable or `(`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_grammar_example() {
        let r = Ring::lex(&["g1", "y3", "gb"]).unwrap();
        let f = r.parse("2*g1^2*y3 - 3*gb^4").unwrap();
        assert_eq!(f.to_string(), "2*g1^2*y3 - 3*gb^4");
        let g = r.parse("  -3 * gb ^ 4+2*g1 ^2*y3 ").unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn reports_position_and_class() {
        let r = Ring::lex(&["x"]).unwrap();
        match r.parse("2*x + ").unwrap_err() {
            PolyError::Parse { pos, expected, .. } => {
                assert_eq!(pos, 6);
                assert_eq!(expected, "integer, variable or `(`");
            }
            e => panic!("unexpected {e:?}"),
        }
        match r.parse("x + z").unwrap_err() {
            PolyError::Parse { pos, expected, .. } => {
                assert_eq!(pos, 4);
                assert_eq!(expected, "declared variable");
            }
            e => panic!("unexpected {e:?}"),
        }
        assert!(r.parse("x^").is_err());
        assert!(r.parse("(x").is_err());
        assert!(r.parse("x x").is_err());
    }

    #[test]
    fn constants_and_signs() {
        let r = Ring::lex(&["x"]).unwrap();
        assert_eq!(r.parse("0").unwrap().to_string(), "0");
        assert_eq!(r.parse("-x + 1").unwrap().to_string(), "-x + 1");
        assert_eq!(r.parse("+5").unwrap().to_string(), "5");
        assert_eq!(r.parse("(x-1)^2").unwrap().to_string(), "x^2 - 2*x + 1");
    }
}

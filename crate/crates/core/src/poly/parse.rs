//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := ('+'|'-')? term (('+'|'-') term)*
//! term   := factor ('*'? factor)*
//! factor := base ('^' uint)?
//! base   := 'x' | 'y' | number | '(' expr ')'
//! number := uint ('/' uint)? | decimal
//! ```
//!
//! The expression is expanded eagerly into the sparse term map.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Zero, pow};
use thiserror::Error;

use super::{Polynomial, Var};

/// Largest exponent accepted for either variable.
pub const MAX_EXPONENT: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { offset: usize, name: String },
    #[error("exponent overflow at offset {offset}: exponent {exponent} exceeds {MAX_EXPONENT}")]
    ExponentOverflow { offset: usize, exponent: u64 },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::UnknownIdentifier { offset, .. }
            | ParseError::ExponentOverflow { offset, .. } => *offset,
        }
    }
}

pub fn parse_polynomial(text: &str) -> Result<Polynomial, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.syntax("unexpected character"));
    }
    Ok(poly)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
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

    fn syntax(&self, message: &str) -> ParseError {
        ParseError::Syntax { offset: self.pos, message: message.to_string() }
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let negate = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn starts_base(c: u8) -> bool {
        c.is_ascii_alphabetic() || c.is_ascii_digit() || c == b'.' || c == b'('
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.factor()?;
        loop {
            let start = self.pos;
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                }
                Some(c) if Self::starts_base(c) => {}
                _ => return Ok(acc),
            }
            let f = self.factor()?;
            acc = &acc * &f;
            check_exponents(&acc, start)?;
        }
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        let base_start = {
            self.skip_ws();
            self.pos
        };
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let exp_start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.syntax("expected exponent"));
            }
            let exponent: u64 = digits.parse().unwrap_or(u64::MAX);
            if exponent > MAX_EXPONENT as u64 {
                return Err(ParseError::ExponentOverflow { offset: exp_start, exponent });
            }
            let out = base.pow(exponent as u32);
            check_exponents(&out, base_start)?;
            return Ok(out);
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn base(&mut self) -> Result<Polynomial, ParseError> {
        match self.peek() {
            None => Err(self.syntax("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.syntax("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'x') => {
                self.pos += 1;
                Ok(Polynomial::x())
            }
            Some(b'y') => {
                self.pos += 1;
                Ok(Polynomial::y())
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                Err(ParseError::UnknownIdentifier {
                    offset: start,
                    name: String::from_utf8_lossy(&self.src[start..self.pos]).into_owned(),
                })
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(_) => Err(self.syntax("expected `x`, `y`, a number or `(`")),
        }
    }

    fn number(&mut self) -> Result<Polynomial, ParseError> {
        let start = self.pos;
        let int_part = self.digits();
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            let frac = self.digits();
            if int_part.is_empty() && frac.is_empty() {
                self.pos = start;
                return Err(self.syntax("malformed number"));
            }
            let numer: BigInt = format!("{int_part}{frac}").parse().unwrap_or_default();
            let denom = pow(BigInt::from(10), frac.len());
            return Ok(Polynomial::constant(BigRational::new(numer, denom)));
        }
        let numer: BigInt = int_part.parse().map_err(|_| self.syntax("malformed number"))?;
        // `uint '/' uint` is a single rational literal
        if self.pos < self.src.len() && self.src[self.pos] == b'/' {
            self.pos += 1;
            let den_start = self.pos;
            let den = self.digits();
            if den.is_empty() {
                return Err(self.syntax("expected denominator"));
            }
            let denom: BigInt = den.parse().unwrap_or_default();
            if denom.is_zero() {
                self.pos = den_start;
                return Err(self.syntax("zero denominator"));
            }
            return Ok(Polynomial::constant(BigRational::new(numer, denom)));
        }
        Ok(Polynomial::constant(BigRational::from_integer(numer)))
    }
}

fn check_exponents(p: &Polynomial, offset: usize) -> Result<(), ParseError> {
    for var in [Var::X, Var::Y] {
        let d = p.degree_in(var);
        if d > MAX_EXPONENT as i64 {
            return Err(ParseError::ExponentOverflow { offset, exponent: d as u64 });
        }
    }
    Ok(())
}

//! Text form of polynomials.
//!
//! Grammar: terms joined by `+`/`-`; a term is an optional rational
//! coefficient (`p` or `p/q`, optionally signed), then `*`-separated variable
//! powers `xK` or `xK^E` with `K` between 1 and the variable count and `E` a
//! positive integer. Whitespace is insignificant. For up to three variables
//! the names `x`, `y`, `z` alias `x1`, `x2`, `x3`.
//!
//! `Display` writes the canonical form: terms in descending graded-lex
//! order, unit coefficients suppressed, variables numbered `x1..`.

use super::{Monomial, Polynomial};
use crate::rational::{format_rational, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown variable `{name}` at position {position}")]
    UnknownVariable { position: usize, name: String },
    #[error("malformed rational at position {position}: {message}")]
    MalformedRational { position: usize, message: String },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { position, .. }
            | ParseError::UnknownVariable { position, .. }
            | ParseError::MalformedRational { position, .. } => *position,
        }
    }
}

fn syntax(position: usize, message: &str) -> ParseError {
    ParseError::Syntax { position, message: message.to_string() }
}

struct Scanner<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(text: &'a str) -> Self {
        Scanner { bytes: text.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, byte: u8) -> bool {
        if self.peek() == Some(byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos]).unwrap()
    }
}

/// Parses the polynomial grammar over `nvars` variables.
pub fn parse_polynomial(text: &str, nvars: usize) -> Result<Polynomial, ParseError> {
    assert!(nvars >= 1, "need at least one variable");
    let mut s = Scanner::new(text);
    let mut poly = Polynomial::zero(nvars);
    s.skip_ws();
    let mut negative = if s.eat(b'-') {
        true
    } else {
        s.eat(b'+');
        false
    };
    loop {
        let (monomial, coeff) = parse_term(&mut s, nvars)?;
        poly.add_term(monomial, if negative { -coeff } else { coeff });
        s.skip_ws();
        if s.at_end() {
            return Ok(poly);
        }
        negative = match s.peek() {
            Some(b'+') => false,
            Some(b'-') => true,
            _ => return Err(syntax(s.pos, "expected `+`, `-`, or end of input")),
        };
        s.pos += 1;
    }
}

fn parse_term(s: &mut Scanner, nvars: usize) -> Result<(Monomial, Rational), ParseError> {
    s.skip_ws();
    let mut coeff = Rational::one();
    let mut have_coeff = false;
    if matches!(s.peek(), Some(b'+') | Some(b'-')) {
        // A sign here belongs to an explicit numeric coefficient.
        let sign_pos = s.pos;
        let negative = s.peek() == Some(b'-');
        s.pos += 1;
        s.skip_ws();
        if !matches!(s.peek(), Some(b) if b.is_ascii_digit()) {
            return Err(syntax(sign_pos, "expected a number after the sign"));
        }
        coeff = parse_rational_token(s)?;
        if negative {
            coeff = -coeff;
        }
        have_coeff = true;
    } else if matches!(s.peek(), Some(b) if b.is_ascii_digit()) {
        coeff = parse_rational_token(s)?;
        have_coeff = true;
    }

    let mut exponents = vec![0u32; nvars];
    let mut have_var = false;
    loop {
        s.skip_ws();
        if have_coeff || have_var {
            let mark = s.pos;
            if !s.eat(b'*') {
                break;
            }
            s.skip_ws();
            if !matches!(s.peek(), Some(b'x') | Some(b'y') | Some(b'z')) {
                return Err(syntax(mark + 1, "expected a variable after `*`"));
            }
        } else if !matches!(s.peek(), Some(b'x') | Some(b'y') | Some(b'z')) {
            return Err(syntax(s.pos, "expected term"));
        }
        let (var, exp) = parse_varpow(s, nvars)?;
        exponents[var] += exp;
        have_var = true;
    }
    Ok((Monomial::new(exponents), coeff))
}

fn parse_rational_token(s: &mut Scanner) -> Result<Rational, ParseError> {
    let start = s.pos;
    let numer: BigInt = s.digits().parse().unwrap();
    let mut denom = BigInt::one();
    let mark = s.pos;
    s.skip_ws();
    if s.eat(b'/') {
        s.skip_ws();
        let digits = s.digits();
        if digits.is_empty() {
            return Err(ParseError::MalformedRational {
                position: s.pos,
                message: "expected a denominator".to_string(),
            });
        }
        denom = digits.parse().unwrap();
        if denom.is_zero() {
            return Err(ParseError::MalformedRational {
                position: start,
                message: "zero denominator".to_string(),
            });
        }
    } else {
        s.pos = mark;
    }
    Ok(Rational::new(numer, denom))
}

fn parse_varpow(s: &mut Scanner, nvars: usize) -> Result<(usize, u32), ParseError> {
    let start = s.pos;
    let letter = s.peek().unwrap();
    s.pos += 1;
    let var = match letter {
        b'x' if matches!(s.peek(), Some(b) if b.is_ascii_digit()) => {
            let digits = s.digits();
            let index: usize = digits
                .parse()
                .map_err(|_| syntax(start, "variable index too large"))?;
            if index == 0 || index > nvars {
                return Err(ParseError::UnknownVariable {
                    position: start,
                    name: format!("x{digits}"),
                });
            }
            index - 1
        }
        b'x' | b'y' | b'z' => {
            let index = (letter - b'x') as usize;
            if nvars > 3 || index >= nvars {
                return Err(ParseError::UnknownVariable {
                    position: start,
                    name: (letter as char).to_string(),
                });
            }
            index
        }
        _ => return Err(syntax(start, "expected a variable")),
    };
    let mark = s.pos;
    s.skip_ws();
    if !s.eat(b'^') {
        s.pos = mark;
        return Ok((var, 1));
    }
    s.skip_ws();
    let exp_pos = s.pos;
    let digits = s.digits();
    if digits.is_empty() {
        return Err(syntax(exp_pos, "expected an exponent"));
    }
    let exp: u32 = digits
        .parse()
        .map_err(|_| syntax(exp_pos, "exponent too large"))?;
    if exp == 0 {
        return Err(syntax(exp_pos, "exponent must be positive"));
    }
    Ok((var, exp))
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (monomial, coeff)) in self.terms().rev().enumerate() {
            let negative = coeff.is_negative();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            }
            let magnitude = coeff.abs();
            if monomial.is_unit() {
                write!(f, "{}", format_rational(&magnitude))?;
            } else {
                if !magnitude.is_one() {
                    write!(f, "{}*", format_rational(&magnitude))?;
                }
                let mut first_factor = true;
                for (j, &e) in monomial.exponents().iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    if !first_factor {
                        write!(f, "*")?;
                    }
                    first_factor = false;
                    if e == 1 {
                        write!(f, "x{}", j + 1)?;
                    } else {
                        write!(f, "x{}^{}", j + 1, e)?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for super::LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_polynomial())
    }
}

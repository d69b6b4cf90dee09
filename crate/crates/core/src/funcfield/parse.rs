//! Infix expression parser.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' digits)?
//! atom   := digits | identifier | '(' expr ')'
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{Context, FieldSpec, Polynomial, RationalFunction};
use crate::error::FieldError;

pub fn parse_ratfun(text: &str, ctx: &Context) -> Result<RationalFunction, FieldError> {
    parse_with_names(text, ctx.field, &ctx.names())
}

pub fn parse_with_names(text: &str, field: FieldSpec, names: &[String]) -> Result<RationalFunction, FieldError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        field,
        names,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(v.value)
}

struct Parsed {
    value: RationalFunction,
    /// Some nonzero integer literal vanished in the field.
    vanished_literal: bool,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    field: FieldSpec,
    names: &'a [String],
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> FieldError {
        FieldError::SyntaxError {
            pos: self.pos,
            msg: msg.to_string(),
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

    fn expr(&mut self) -> Result<Parsed, FieldError> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc.value = if c == b'+' {
                acc.value.add(&rhs.value)
            } else {
                acc.value.sub(&rhs.value)
            };
            acc.vanished_literal |= rhs.vanished_literal;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Parsed, FieldError> {
        let mut acc = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc.value = if c == b'*' {
                acc.value.mul(&rhs.value)
            } else if rhs.value.is_zero() {
                return Err(if rhs.vanished_literal {
                    FieldError::WrongCharacteristic(format!(
                        "divisor vanishes in characteristic {}",
                        self.field.characteristic()
                    ))
                } else {
                    FieldError::DivisionByZero
                });
            } else {
                acc.value.div(&rhs.value)?
            };
            acc.vanished_literal |= rhs.vanished_literal;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Parsed, FieldError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            let mut v = self.unary()?;
            v.value = v.value.neg();
            return Ok(v);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Parsed, FieldError> {
        let mut base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let digits = self.digits().ok_or_else(|| self.error("expected a non-negative integer exponent"))?;
            let k: i64 = digits.parse().map_err(|_| self.error("exponent too large"))?;
            base.value = base.value.pow(k)?;
        }
        Ok(base)
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn atom(&mut self) -> Result<Parsed, FieldError> {
        let nvars = self.names.len();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.digits().expect("at least one digit");
                let n: BigInt = digits.parse().expect("decimal digits");
                let q = self.field.scalar(&BigRational::from_integer(n.clone()))?;
                Ok(Parsed {
                    vanished_literal: q.is_zero() && !n.is_zero(),
                    value: RationalFunction::constant(self.field, nvars, q),
                })
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
                let i = self
                    .names
                    .iter()
                    .position(|n| *n == name)
                    .ok_or(FieldError::UnknownVariable(name))?;
                Ok(Parsed {
                    value: RationalFunction::from_poly(Polynomial::var(self.field, nvars, i)),
                    vanished_literal: false,
                })
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

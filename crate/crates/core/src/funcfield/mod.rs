//! Exact polynomial and rational-function arithmetic over `ℚ` or `𝔽_p`, and
//! the valued rational function field context the rest of the engine runs in.

mod parse;
mod poly;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::FieldError;
use crate::ordered_group::{GroupElement, OrderSpec};

pub use parse::{parse_ratfun, parse_with_names};
pub use poly::{Monomial, Polynomial, RationalFunction};

/// The constant field: `ℚ` (characteristic 0) or `𝔽_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    characteristic: u32,
}

impl FieldSpec {
    pub fn new(characteristic: u32) -> Result<Self, FieldError> {
        if characteristic != 0 && (characteristic >= 1 << 16 || !is_prime(characteristic)) {
            return Err(FieldError::InvalidField(characteristic));
        }
        Ok(Self { characteristic })
    }

    pub fn rationals() -> Self {
        Self { characteristic: 0 }
    }

    pub fn characteristic(&self) -> u32 {
        self.characteristic
    }

    fn modulus(&self) -> BigInt {
        BigInt::from(self.characteristic)
    }

    /// Maps a rational number into the field.
    pub fn scalar(&self, q: &BigRational) -> Result<BigRational, FieldError> {
        if self.characteristic == 0 {
            return Ok(q.clone());
        }
        let p = self.modulus();
        let den = q.denom().mod_floor(&p);
        if den.is_zero() {
            return Err(FieldError::WrongCharacteristic(format!(
                "{q} is not defined in characteristic {}",
                self.characteristic
            )));
        }
        let inv = den.modpow(&(&p - 2u32), &p);
        Ok(BigRational::from_integer((q.numer() * inv).mod_floor(&p)))
    }

    pub fn from_int(&self, n: i64) -> BigRational {
        self.scalar(&BigRational::from_integer(n.into()))
            .expect("integers are always representable")
    }

    pub fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.reduce_int(a + b)
    }

    pub fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.reduce_int(a - b)
    }

    pub fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.reduce_int(a * b)
    }

    pub fn neg(&self, a: &BigRational) -> BigRational {
        self.reduce_int(-a)
    }

    pub fn inv(&self, a: &BigRational) -> Result<BigRational, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if self.characteristic == 0 {
            return Ok(a.recip());
        }
        let p = self.modulus();
        Ok(BigRational::from_integer(a.numer().modpow(&(&p - 2u32), &p)))
    }

    fn reduce_int(&self, a: BigRational) -> BigRational {
        if self.characteristic == 0 {
            a
        } else {
            debug_assert!(a.is_integer());
            BigRational::from_integer(a.numer().mod_floor(&self.modulus()))
        }
    }

    pub(crate) fn is_negative_repr(&self, a: &BigRational) -> bool {
        self.characteristic == 0 && a.is_negative()
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u32;
    while i * i <= n {
        if n.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

/// Valuation-theoretic role of a variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarClass {
    /// Regular parameter of the base ring; strictly positive value.
    Param,
    /// Value-group generator of the function field.
    Value,
    /// Residue-transcendental variable; value zero.
    Residue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarDecl {
    pub name: String,
    pub class: VarClass,
    pub value: GroupElement,
}

impl VarDecl {
    pub fn new(name: impl Into<String>, class: VarClass, value: GroupElement) -> Self {
        Self {
            name: name.into(),
            class,
            value,
        }
    }
}

/// A valued rational function field `K(t, x, y)`.
///
/// Construction only checks shape (name uniqueness, coordinate lengths,
/// residue values zero). Semantic requirements on the values are checked by
/// [`crate::valuation::check_setting`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Context {
    pub field: FieldSpec,
    pub vars: Vec<VarDecl>,
    pub order: OrderSpec,
}

impl Context {
    pub fn new(field: FieldSpec, vars: Vec<VarDecl>, order: OrderSpec) -> Result<Self, FieldError> {
        for (i, v) in vars.iter().enumerate() {
            if !is_identifier(&v.name) {
                return Err(FieldError::InvalidContext(format!("`{}` is not an identifier", v.name)));
            }
            if vars[..i].iter().any(|w| w.name == v.name) {
                return Err(FieldError::InvalidContext(format!("duplicate variable `{}`", v.name)));
            }
            if v.value.rank() != order.rank() {
                return Err(FieldError::InvalidContext(format!(
                    "value of `{}` has {} coordinates, order has rank {}",
                    v.name,
                    v.value.rank(),
                    order.rank()
                )));
            }
            if v.class == VarClass::Residue && !v.value.is_zero() {
                return Err(FieldError::InvalidContext(format!(
                    "residue variable `{}` must have value 0",
                    v.name
                )));
            }
        }
        Ok(Self { field, vars, order })
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn names(&self) -> Vec<String> {
        self.vars.iter().map(|v| v.name.clone()).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn rank(&self) -> usize {
        self.order.rank()
    }

    pub fn indices_of(&self, class: VarClass) -> Vec<usize> {
        (0..self.vars.len()).filter(|&i| self.vars[i].class == class).collect()
    }

    /// Indices of the `(t, x)` variables: params then values, in declaration order.
    pub fn tx_indices(&self) -> Vec<usize> {
        let mut out = self.indices_of(VarClass::Param);
        out.extend(self.indices_of(VarClass::Value));
        out
    }

    pub fn delta(&self) -> usize {
        self.indices_of(VarClass::Param).len()
    }

    pub fn rho(&self) -> usize {
        self.indices_of(VarClass::Value).len()
    }

    pub fn tau(&self) -> usize {
        self.indices_of(VarClass::Residue).len()
    }

    /// Rows are the value coordinates of the `(t, x)` variables.
    pub fn value_matrix(&self) -> Vec<Vec<i64>> {
        self.tx_indices()
            .into_iter()
            .map(|i| self.vars[i].value.coords.clone())
            .collect()
    }

    pub fn is_tx(&self, i: usize) -> bool {
        self.vars[i].class != VarClass::Residue
    }

    /// The `(t, x)`-part of an exponent vector (residue entries zeroed).
    pub fn tx_part(&self, exps: &[i64]) -> Vec<i64> {
        exps.iter()
            .enumerate()
            .map(|(i, &e)| if self.is_tx(i) { e } else { 0 })
            .collect()
    }

    pub fn parse(&self, text: &str) -> Result<RationalFunction, FieldError> {
        parse_ratfun(text, self)
    }

    pub fn format(&self, f: &RationalFunction) -> String {
        f.format(&self.names())
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

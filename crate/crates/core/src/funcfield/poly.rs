use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::FieldSpec;
use crate::error::FieldError;

/// Exponent vector, ordered graded-lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<i64>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn div(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse (Laurent) polynomial with coefficients in a [`FieldSpec`].
///
/// Normalized: no zero coefficients. Negative exponents are representable;
/// [`Polynomial::pow`] and the ring operations never introduce them on
/// their own.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    field: FieldSpec,
    nvars: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn zero(field: FieldSpec, nvars: usize) -> Self {
        Self {
            field,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: FieldSpec, nvars: usize) -> Self {
        Self::constant(field, nvars, BigRational::one())
    }

    pub fn constant(field: FieldSpec, nvars: usize, c: BigRational) -> Self {
        Self::monomial(field, Monomial::one(nvars), c)
    }

    pub fn var(field: FieldSpec, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(field, Monomial(e), BigRational::one())
    }

    /// `c · x^exps`; `c` must already be a field element.
    pub fn monomial(field: FieldSpec, exps: Monomial, c: BigRational) -> Self {
        let nvars = exps.0.len();
        let mut p = Self::zero(field, nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// Builds a polynomial from raw terms; coefficients are mapped into the field
    /// and like terms combined.
    pub fn from_terms(
        field: FieldSpec,
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<i64>, BigRational)>,
    ) -> Result<Self, FieldError> {
        let mut p = Self::zero(field, nvars);
        for (e, c) in terms {
            debug_assert_eq!(e.len(), nvars);
            let c = field.scalar(&c)?;
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let field = self.field;
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = field.add(v, &c);
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Leading (graded-lex largest) term.
    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    /// The constant value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn has_negative_exponent(&self) -> bool {
        self.terms.keys().any(|m| m.0.iter().any(|&e| e < 0))
    }

    pub fn add(&self, o: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        let field = self.field;
        Polynomial {
            field,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), field.neg(c))).collect(),
        }
    }

    pub fn sub(&self, o: &Polynomial) -> Polynomial {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.field, self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), self.field.mul(c1, c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        let mut out = Polynomial::zero(self.field, self.nvars);
        for (m, k) in &self.terms {
            out.add_term(m.clone(), self.field.mul(k, c));
        }
        out
    }

    pub fn mul_monomial(&self, shift: &Monomial) -> Polynomial {
        Polynomial {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.mul(shift), c.clone())).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> Result<Polynomial, FieldError> {
        if k < 0 {
            return Err(FieldError::NegativeExponent(k));
        }
        let mut result = Polynomial::one(self.field, self.nvars);
        let mut base = self.clone();
        let mut k = k as u64;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        Ok(result)
    }

    /// Componentwise minimum of the exponent vectors (all zeros for `0`).
    pub fn min_exponents(&self) -> Vec<i64> {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return vec![0; self.nvars];
        };
        let mut out = first.0.clone();
        for m in it {
            for (o, e) in out.iter_mut().zip(&m.0) {
                *o = (*o).min(*e);
            }
        }
        out
    }

    /// Substitutes variable `i` by the Laurent monomial `images[i]` over
    /// `target_nvars` variables.
    pub fn map_monomials(&self, images: &[Vec<i64>], target_nvars: usize) -> Polynomial {
        debug_assert_eq!(images.len(), self.nvars);
        let mut out = Polynomial::zero(self.field, target_nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0i64; target_nvars];
            for (k, img) in m.0.iter().zip(images) {
                if *k == 0 {
                    continue;
                }
                for (o, x) in e.iter_mut().zip(img) {
                    *o += k * x;
                }
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Re-embeds into `target_nvars` variables, variable `i` going to `index_map[i]`.
    pub fn reindex(&self, index_map: &[usize], target_nvars: usize) -> Polynomial {
        let images: Vec<Vec<i64>> = index_map
            .iter()
            .map(|&j| {
                let mut e = vec![0; target_nvars];
                e[j] = 1;
                e
            })
            .collect();
        self.map_monomials(&images, target_nvars)
    }

    /// Renders with the given variable names in descending graded-lex order.
    pub fn format(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = self.field.is_negative_repr(c);
            let abs = if negative { -c.clone() } else { c.clone() };
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mono = format_monomial(&m.0, names);
            match (abs.is_one(), mono.is_empty()) {
                (_, true) => out.push_str(&abs.to_string()),
                (true, false) => out.push_str(&mono),
                (false, false) => {
                    out.push_str(&abs.to_string());
                    out.push('*');
                    out.push_str(&mono);
                }
            }
        }
        out
    }
}

fn format_monomial(exps: &[i64], names: &[String]) -> String {
    let mut parts = Vec::new();
    for (e, name) in exps.iter().zip(names) {
        match *e {
            0 => {}
            1 => parts.push(name.clone()),
            k => parts.push(format!("{name}^{k}")),
        }
    }
    parts.join("*")
}

/// Element of the rational function field, `num / den`.
///
/// Normalized: numerator and denominator are genuine polynomials with no
/// common monomial factor, and the denominator has leading coefficient 1.
/// No polynomial gcd is taken, so two normalized representatives of the
/// same element can differ; use [`RationalFunction::equals`] for field
/// equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, FieldError> {
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    pub fn from_poly(p: Polynomial) -> Self {
        let one = Polynomial::one(p.field(), p.nvars());
        Self::normalized(p, one)
    }

    pub fn zero(field: FieldSpec, nvars: usize) -> Self {
        Self::from_poly(Polynomial::zero(field, nvars))
    }

    pub fn one(field: FieldSpec, nvars: usize) -> Self {
        Self::from_poly(Polynomial::one(field, nvars))
    }

    pub fn constant(field: FieldSpec, nvars: usize, c: BigRational) -> Self {
        Self::from_poly(Polynomial::constant(field, nvars, c))
    }

    /// `x^exps` with arbitrary integer exponents.
    pub fn laurent_monomial(field: FieldSpec, exps: &[i64]) -> Self {
        Self::from_poly(Polynomial::monomial(field, Monomial(exps.to_vec()), BigRational::one()))
    }

    fn normalized(num: Polynomial, den: Polynomial) -> Self {
        let nvars = num.nvars();
        let field = num.field();
        if num.is_zero() {
            return Self {
                num,
                den: Polynomial::one(field, nvars),
            };
        }
        let mut shift = num.min_exponents();
        for (s, e) in shift.iter_mut().zip(den.min_exponents()) {
            *s = (*s).min(e);
        }
        // divide both by x^shift so every exponent is >= 0 and some term of
        // num or den has zero exponent in each variable
        let unshift = Monomial(shift.iter().map(|s| -s).collect());
        let mut num = num.mul_monomial(&unshift);
        let mut den = den.mul_monomial(&unshift);
        let num_min = num.min_exponents();
        let den_min = den.min_exponents();
        let common: Vec<i64> = num_min.iter().zip(&den_min).map(|(a, b)| *a.min(b)).collect();
        if common.iter().any(|&c| c != 0) {
            let inv = Monomial(common.iter().map(|c| -c).collect());
            num = num.mul_monomial(&inv);
            den = den.mul_monomial(&inv);
        }
        let lead = den.leading().map(|(_, c)| c.clone()).expect("nonzero denominator");
        if !lead.is_one() {
            let inv = field.inv(&lead).expect("nonzero");
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Self { num, den }
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn field(&self) -> FieldSpec {
        self.num.field()
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// Field equality via cross-multiplication.
    pub fn equals(&self, o: &RationalFunction) -> bool {
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn add(&self, o: &RationalFunction) -> RationalFunction {
        if self.den == o.den {
            return Self::normalized(self.num.add(&o.num), self.den.clone());
        }
        let num = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        Self::normalized(num, self.den.mul(&o.den))
    }

    pub fn neg(&self) -> RationalFunction {
        Self {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &RationalFunction) -> RationalFunction {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RationalFunction) -> RationalFunction {
        Self::normalized(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn inv(&self) -> Result<RationalFunction, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &RationalFunction) -> Result<RationalFunction, FieldError> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, k: i64) -> Result<RationalFunction, FieldError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let k = k.unsigned_abs() as i64;
        Ok(Self::normalized(base.num.pow(k)?, base.den.pow(k)?))
    }

    pub fn scale(&self, c: &BigRational) -> RationalFunction {
        Self::normalized(self.num.scale(c), self.den.clone())
    }

    pub fn mul_laurent_monomial(&self, exps: &[i64]) -> RationalFunction {
        Self::normalized(self.num.mul_monomial(&Monomial(exps.to_vec())), self.den.clone())
    }

    /// Substitutes every variable by a Laurent monomial (see
    /// [`Polynomial::map_monomials`]).
    pub fn map_monomials(&self, images: &[Vec<i64>], target_nvars: usize) -> RationalFunction {
        Self::normalized(
            self.num.map_monomials(images, target_nvars),
            self.den.map_monomials(images, target_nvars),
        )
    }

    pub fn reindex(&self, index_map: &[usize], target_nvars: usize) -> RationalFunction {
        Self::normalized(
            self.num.reindex(index_map, target_nvars),
            self.den.reindex(index_map, target_nvars),
        )
    }

    /// Canonical infix rendering, re-parsable by [`super::parse_ratfun`].
    pub fn format(&self, names: &[String]) -> String {
        let num = self.num.format(names);
        if self.den.is_one() {
            return num;
        }
        let num = if self.num.len() > 1 { format!("({num})") } else { num };
        let den = self.den.format(names);
        let bare_den = self.den.len() == 1
            && self
                .den
                .leading()
                .is_some_and(|(m, c)| c.is_one() && m.0.iter().filter(|&&e| e != 0).count() == 1);
        if bare_den {
            format!("{num}/{den}")
        } else {
            format!("{num}/({den})")
        }
    }
}

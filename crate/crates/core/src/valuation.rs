//! The monomial (Gauss) valuation on `K(t, x, y)`, its residue map, and the
//! verification of the valued-field setting.
//!
//! The value of a polynomial is the least value among its monomials; residue
//! variables have value zero. When the values of the `(t, x)` variables are
//! jointly independent, the monomial of least value is unique up to its
//! residue-variable part, which makes residues purely combinatorial.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ValuationError;
use crate::funcfield::{Context, Monomial, Polynomial, RationalFunction, VarClass};
use crate::lattice;
use crate::ordered_group::{GroupElement, OrderSpec, Sign};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Finite(GroupElement),
    /// The value of zero; larger than every finite value.
    Infinite,
}

impl Value {
    pub fn finite(&self) -> Option<&GroupElement> {
        match self {
            Value::Finite(g) => Some(g),
            Value::Infinite => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Value::Finite(g) if g.is_zero())
    }

    pub fn add(&self, o: &Value) -> Value {
        match (self, o) {
            (Value::Finite(a), Value::Finite(b)) => Value::Finite(a.add(b)),
            _ => Value::Infinite,
        }
    }

    pub fn sign(&self, order: &OrderSpec) -> Sign {
        match self {
            Value::Finite(g) => order.sign(&g.coords),
            Value::Infinite => Sign::Positive,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(g) => write!(f, "{g}"),
            Value::Infinite => write!(f, "inf"),
        }
    }
}

pub fn compare_values(a: &Value, b: &Value, order: &OrderSpec) -> Ordering {
    match (a, b) {
        (Value::Infinite, Value::Infinite) => Ordering::Equal,
        (Value::Infinite, _) => Ordering::Greater,
        (_, Value::Infinite) => Ordering::Less,
        (Value::Finite(x), Value::Finite(y)) => order.sign(&x.sub(y).coords).to_ordering(),
    }
}

/// `Σ exps[i] · v(var_i)`; Laurent exponents allowed.
pub fn value_monomial(exps: &[i64], ctx: &Context) -> GroupElement {
    let mut acc = vec![0i64; ctx.rank()];
    for (e, var) in exps.iter().zip(&ctx.vars) {
        if *e == 0 || var.class == VarClass::Residue {
            continue;
        }
        for (a, c) in acc.iter_mut().zip(&var.value.coords) {
            *a += e * c;
        }
    }
    GroupElement::new(acc)
}

/// The minimal-value `(t, x)`-part among the terms of `f`, with its value.
/// Among equal-valued distinct parts the graded-lex smallest is chosen.
pub fn min_tx_part(f: &Polynomial, ctx: &Context) -> Option<(Vec<i64>, GroupElement)> {
    let mut best: Option<(Monomial, GroupElement)> = None;
    for (m, _) in f.terms() {
        let tx = Monomial(ctx.tx_part(&m.0));
        let v = value_monomial(&tx.0, ctx);
        best = match best {
            None => Some((tx, v)),
            Some((bm, bv)) => match ctx.order.sign(&v.sub(&bv).coords) {
                Sign::Negative => Some((tx, v)),
                Sign::Zero if tx < bm => Some((tx, v)),
                _ => Some((bm, bv)),
            },
        };
    }
    best.map(|(m, v)| (m.0, v))
}

pub fn value_poly(f: &Polynomial, ctx: &Context) -> Value {
    match min_tx_part(f, ctx) {
        Some((_, v)) => Value::Finite(v),
        None => Value::Infinite,
    }
}

pub fn value_ratfun(f: &RationalFunction, ctx: &Context) -> Value {
    match (value_poly(f.num(), ctx), value_poly(f.den(), ctx)) {
        (Value::Finite(a), Value::Finite(b)) => Value::Finite(a.sub(&b)),
        _ => Value::Infinite,
    }
}

/// Sum of the terms of `f` whose `(t, x)`-part equals `part`, with that part removed.
fn initial_form(f: &Polynomial, part: &[i64], ctx: &Context) -> Polynomial {
    let shift = Monomial(part.iter().map(|e| -e).collect());
    let terms = f
        .terms()
        .filter(|(m, _)| ctx.tx_part(&m.0) == part)
        .map(|(m, c)| (m.mul(&shift).0, c.clone()));
    Polynomial::from_terms(f.field(), f.nvars(), terms).expect("coefficients are field elements")
}

/// Residue of a value-zero element, a rational function in the residue
/// variables only.
pub fn residue(f: &RationalFunction, ctx: &Context) -> Result<RationalFunction, ValuationError> {
    if !value_ratfun(f, ctx).is_zero() {
        return Err(ValuationError::NonzeroValue);
    }
    let (num_part, _) = min_tx_part(f.num(), ctx).expect("nonzero numerator");
    let (den_part, _) = min_tx_part(f.den(), ctx).expect("nonzero denominator");
    let num = initial_form(f.num(), &num_part, ctx);
    let den = initial_form(f.den(), &den_part, ctx);
    Ok(RationalFunction::new(num, den).expect("initial form of a nonzero polynomial is nonzero"))
}

/// Image under the place: zero for positive value, the residue for value
/// zero, an error for negative value.
pub fn place_image(f: &RationalFunction, ctx: &Context) -> Result<RationalFunction, ValuationError> {
    let v = value_ratfun(f, ctx);
    match v.sign(&ctx.order) {
        Sign::Positive => Ok(RationalFunction::zero(f.field(), f.nvars())),
        Sign::Zero => residue(f, ctx),
        Sign::Negative => Err(ValuationError::NegativeValue),
    }
}

/// `v(f) = 0` and the residue is nonzero.
pub fn is_unit(f: &RationalFunction, ctx: &Context) -> bool {
    residue(f, ctx).is_ok_and(|r| !r.is_zero())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

impl Clause {
    pub fn new(name: &str, ok: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            ok,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SettingReport {
    pub ok: bool,
    /// Number of value-class variables.
    pub rho: usize,
    /// Number of residue-class variables.
    pub tau: usize,
    /// Number of base-ring parameters.
    pub delta: usize,
    /// Transcendence degree of the function field over the constants, `ρ + τ`.
    pub trdeg: usize,
    /// Rational rank of the value group of the function field, `ρ + δ`.
    pub rational_rank: usize,
    pub residue_trdeg: usize,
    pub abhyankar_equality: bool,
    pub clauses: Vec<Clause>,
}

impl SettingReport {
    pub fn violations(&self) -> Vec<String> {
        self.clauses
            .iter()
            .filter(|c| !c.ok)
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect()
    }
}

/// Verifies that the context describes a monomial Abhyankar place with
/// jointly independent `(t, x)`-values.
pub fn check_setting(ctx: &Context) -> SettingReport {
    let mut clauses = Vec::new();
    let (delta, rho, tau) = (ctx.delta(), ctx.rho(), ctx.tau());
    let r = ctx.rank();

    clauses.push(Clause::new(
        "order_total",
        true,
        format!("{} form(s) injective on Z^{r}", ctx.order.forms().len()),
    ));

    let bad_params: Vec<String> = ctx
        .vars
        .iter()
        .filter(|v| v.class == VarClass::Param && ctx.order.sign(&v.value.coords) != Sign::Positive)
        .map(|v| v.name.clone())
        .collect();
    clauses.push(Clause::new(
        "param_positive",
        bad_params.is_empty(),
        if bad_params.is_empty() {
            "all parameter values are positive".to_string()
        } else {
            format!("non-positive parameter value: {}", bad_params.join(", "))
        },
    ));

    let m = ctx.value_matrix();
    let (unimodular, detail) = if m.len() != r {
        (
            false,
            format!("{} parameter/value variables for a group of rank {r}", m.len()),
        )
    } else {
        let det = lattice::det(&m);
        if num_traits::Zero::is_zero(&det) {
            (false, "rank deficiency: values are rationally dependent".to_string())
        } else if lattice::is_unimodular(&m) {
            (true, "values form a basis of the value group".to_string())
        } else {
            (false, format!("values span a subgroup of index {det}"))
        }
    };
    clauses.push(Clause::new("values_basis", unimodular, detail));

    let residue_zero = ctx
        .vars
        .iter()
        .filter(|v| v.class == VarClass::Residue)
        .all(|v| v.value.is_zero());
    clauses.push(Clause::new("residue_values_zero", residue_zero, ""));

    let abhyankar_equality = unimodular;
    clauses.push(Clause::new(
        "abhyankar_equality",
        abhyankar_equality,
        format!("trdeg {} = rational rank {rho} + residue trdeg {tau}", rho + tau),
    ));

    SettingReport {
        ok: clauses.iter().all(|c| c.ok),
        rho,
        tau,
        delta,
        trdeg: rho + tau,
        rational_rank: rho + delta,
        residue_trdeg: tau,
        abhyankar_equality,
        clauses,
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::funcfield::{FieldSpec, VarDecl};
    use crate::ordered_group::QuadraticNumber;

    pub(crate) fn sqrt_order(d: u64) -> OrderSpec {
        let q = |a, b| QuadraticNumber::from_ints(a, b, d).unwrap();
        OrderSpec::new(d, vec![vec![q(1, 0), q(0, 1)], vec![q(0, 0), q(1, 0)]]).unwrap()
    }

    /// x1, x2 with values 1, √2 (and optionally residue variables y1, y2, ...)
    pub(crate) fn sqrt2_ctx(residues: usize) -> Context {
        let mut vars = vec![
            VarDecl::new("x1", VarClass::Value, GroupElement::new(vec![1, 0])),
            VarDecl::new("x2", VarClass::Value, GroupElement::new(vec![0, 1])),
        ];
        for k in 0..residues {
            vars.push(VarDecl::new(format!("y{}", k + 1), VarClass::Residue, GroupElement::zero(2)));
        }
        Context::new(FieldSpec::rationals(), vars, sqrt_order(2)).unwrap()
    }

    pub(crate) fn lex_ctx() -> Context {
        let vars = vec![
            VarDecl::new("x1", VarClass::Value, GroupElement::new(vec![1, 0])),
            VarDecl::new("x2", VarClass::Value, GroupElement::new(vec![0, 1])),
        ];
        Context::new(FieldSpec::rationals(), vars, OrderSpec::lex(2)).unwrap()
    }

    #[test]
    fn monomial_values() {
        let ctx = sqrt2_ctx(1);
        assert!(value_monomial(&[0, 0, 0], &ctx).is_zero());
        assert_eq!(value_monomial(&[1, 1, 5], &ctx).coords, vec![1, 1]);
        let v = value_monomial(&[3, -2, 0], &ctx);
        assert_eq!(v.coords, vec![3, -2]);
        assert!(ctx.order.is_positive(&v));
    }

    #[test]
    fn polynomial_values() {
        let ctx = sqrt2_ctx(1);
        assert_eq!(value_poly(&Polynomial::zero(ctx.field, 3), &ctx), Value::Infinite);
        let f = ctx.parse("x1 + x2").unwrap();
        assert_eq!(value_ratfun(&f, &ctx), Value::Finite(GroupElement::new(vec![1, 0])));
        let g = ctx.parse("3*x1^2*x2 + y1*x1^5").unwrap();
        assert_eq!(value_ratfun(&g, &ctx), Value::Finite(GroupElement::new(vec![2, 1])));
    }

    #[test]
    fn ratfun_values() {
        let ctx = sqrt2_ctx(2);
        assert!(value_ratfun(&ctx.parse("(x1+x2)/x1").unwrap(), &ctx).is_zero());
        assert!(value_ratfun(&ctx.parse("y1/y2").unwrap(), &ctx).is_zero());
        let lex = lex_ctx();
        let v = value_ratfun(&lex.parse("x2/x1").unwrap(), &lex);
        assert_eq!(v, Value::Finite(GroupElement::new(vec![-1, 1])));
        assert_eq!(v.sign(&lex.order), Sign::Negative);
    }

    #[test]
    fn residues() {
        let ctx = sqrt2_ctx(1);
        let names = ctx.names();
        assert_eq!(residue(&ctx.parse("y1").unwrap(), &ctx).unwrap().format(&names), "y1");
        assert!(residue(&ctx.parse("(x1+x2)/x1").unwrap(), &ctx).unwrap().is_one());
        let r = residue(&ctx.parse("(y1*x1 + x2)/x1").unwrap(), &ctx).unwrap();
        assert_eq!(r.format(&names), "y1");
        assert_eq!(residue(&ctx.parse("x1").unwrap(), &ctx), Err(ValuationError::NonzeroValue));
    }

    #[test]
    fn setting_reports() {
        let ok = check_setting(&sqrt2_ctx(1));
        assert!(ok.ok);
        assert_eq!((ok.rho, ok.tau, ok.delta, ok.trdeg), (2, 1, 0, 3));

        let dep = Context::new(
            FieldSpec::rationals(),
            vec![
                VarDecl::new("x1", VarClass::Value, GroupElement::new(vec![1, 0])),
                VarDecl::new("x2", VarClass::Value, GroupElement::new(vec![2, 0])),
            ],
            OrderSpec::lex(2),
        )
        .unwrap();
        let rep = check_setting(&dep);
        assert!(!rep.ok);
        assert!(rep.violations().iter().any(|v| v.contains("rank deficiency")));

        let zero_param = Context::new(
            FieldSpec::rationals(),
            vec![
                VarDecl::new("t", VarClass::Param, GroupElement::new(vec![0, 0])),
                VarDecl::new("x1", VarClass::Value, GroupElement::new(vec![0, 1])),
            ],
            OrderSpec::lex(2),
        )
        .unwrap();
        let rep = check_setting(&zero_param);
        assert!(!rep.ok);
        assert!(rep.clauses.iter().any(|c| c.name == "param_positive" && !c.ok));
    }
}

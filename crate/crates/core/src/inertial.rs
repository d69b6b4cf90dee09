//! Standard-étale ascent.
//!
//! A presentation `F = E(η)`, `E = K(t, x, y)`, is given by the monic
//! minimal polynomial `f` of `η` and a residue `ā` in the residue field of
//! `E` that is a simple root of `f̄`. By Hensel's lemma `η` then lies in the
//! henselization of `E`, hence in its absolute inertia field, and the
//! extension is immediate. Values on `F` are computed by Newton
//! approximation of `η` inside `E`: for an approximant `η_k` the error
//! `v(η − η_k)` equals `v(f(η_k))`, so `v(e(η)) = v(e(η_k))` as soon as the
//! latter is below `v(f(η_k)) + min v(c_i)`.

use serde::{Deserialize, Serialize};

use crate::error::InertialError;
use crate::funcfield::{is_identifier, parse_with_names, Context, FieldSpec, Polynomial, RationalFunction};
use crate::lattice;
use crate::monomialize::{chart_report, Chart};
use crate::ordered_group::Sign;
use crate::valuation::{self, compare_values, place_image, value_ratfun, Clause, Value};

/// Newton steps tried before a value is reported as undetermined.
pub const NEWTON_LIMIT: usize = 6;

/// Univariate polynomial with rational-function coefficients, lowest degree
/// first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    field: FieldSpec,
    nvars: usize,
    coeffs: Vec<RationalFunction>,
}

impl UniPoly {
    pub fn new(field: FieldSpec, nvars: usize, mut coeffs: Vec<RationalFunction>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { field, nvars, coeffs }
    }

    pub fn zero(field: FieldSpec, nvars: usize) -> Self {
        Self::new(field, nvars, vec![])
    }

    pub fn constant(c: RationalFunction) -> Self {
        Self::new(c.field(), c.nvars(), vec![c])
    }

    pub fn coeffs(&self) -> &[RationalFunction] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn coeff(&self, i: usize) -> RationalFunction {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| RationalFunction::zero(self.field, self.nvars))
    }

    pub fn leading(&self) -> Option<&RationalFunction> {
        self.coeffs.last()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(self.field, self.nvars, (0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(self.field, self.nvars, (0..n).map(|i| self.coeff(i).sub(&o.coeff(i))).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.field, self.nvars);
        }
        let mut out = vec![RationalFunction::zero(self.field, self.nvars); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(self.field, self.nvars, out)
    }

    pub fn scale(&self, c: &RationalFunction) -> Self {
        Self::new(self.field, self.nvars, self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(RationalFunction::one(self.field, self.nvars));
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(&self.field.from_int(i as i64)))
            .collect();
        Self::new(self.field, self.nvars, coeffs)
    }

    /// Quotient and remainder; `m` must be nonzero.
    pub fn div_rem(&self, m: &Self) -> (Self, Self) {
        let dm = m.degree().expect("nonzero divisor");
        let lead_inv = m.leading().expect("nonzero").inv().expect("nonzero leading coefficient");
        let mut rem = self.clone();
        let mut quot = vec![RationalFunction::zero(self.field, self.nvars); self.coeffs.len().saturating_sub(dm)];
        while let Some(dr) = rem.degree().filter(|&d| d >= dm) {
            let c = rem.leading().expect("nonzero").mul(&lead_inv);
            let shift = dr - dm;
            let mut sub = vec![RationalFunction::zero(self.field, self.nvars); shift];
            sub.extend(m.coeffs.iter().map(|a| a.mul(&c)));
            rem = rem.sub(&Self::new(self.field, self.nvars, sub));
            quot[shift] = c;
        }
        (Self::new(self.field, self.nvars, quot), rem)
    }

    pub fn rem(&self, m: &Self) -> Self {
        self.div_rem(m).1
    }

    pub fn eval(&self, x: &RationalFunction) -> RationalFunction {
        let mut acc = RationalFunction::zero(self.field, self.nvars);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn map_coeffs(&self, nvars: usize, f: impl Fn(&RationalFunction) -> RationalFunction) -> Self {
        Self::new(self.field, nvars, self.coeffs.iter().map(f).collect())
    }

    fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&l.inv().expect("nonzero")),
            None => self.clone(),
        }
    }

    /// Parses an expression in the context variables and the generator; the
    /// denominator must not involve the generator.
    pub fn parse(text: &str, ctx: &Context, generator: &str) -> Result<Self, InertialError> {
        let (num, den) = parse_split(text, ctx, generator)?;
        if den.degree() != Some(0) {
            return Err(InertialError::InvalidPresentation(format!(
                "`{text}` has the generator in a denominator"
            )));
        }
        let d = den.coeffs[0].clone();
        Ok(num.map_coeffs(ctx.nvars(), |c| c.div(&d).expect("nonzero denominator")))
    }

    pub fn format(&self, names: &[String], generator: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let power = match i {
                0 => String::new(),
                1 => generator.to_string(),
                _ => format!("{generator}^{i}"),
            };
            let coeff = c.format(names);
            parts.push(match (i, c.is_one()) {
                (0, _) => format!("({coeff})"),
                (_, true) => power,
                _ => format!("({coeff})*{power}"),
            });
        }
        parts.join(" + ")
    }
}

/// Numerator and denominator of a parsed expression, split by degree in the
/// generator.
pub(crate) fn parse_split(text: &str, ctx: &Context, generator: &str) -> Result<(UniPoly, UniPoly), InertialError> {
    let mut names = ctx.names();
    names.push(generator.to_string());
    let r = parse_with_names(text, ctx.field, &names)?;
    let n = ctx.nvars();
    let split = |p: &Polynomial| -> Result<UniPoly, InertialError> {
        let deg = p.terms().map(|(m, _)| m.0[n]).max().unwrap_or(0);
        let mut coeffs = Vec::new();
        for j in 0..=deg {
            let terms = p
                .terms()
                .filter(|(m, _)| m.0[n] == j)
                .map(|(m, c)| (m.0[..n].to_vec(), c.clone()));
            coeffs.push(RationalFunction::from_poly(Polynomial::from_terms(ctx.field, n, terms)?));
        }
        Ok(UniPoly::new(ctx.field, n, coeffs))
    };
    Ok((split(r.num())?, split(r.den())?))
}

/// Monic gcd over the coefficient field.
pub fn poly_gcd(a: &UniPoly, b: &UniPoly) -> UniPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = a.rem(&b);
        a = b;
        b = r;
    }
    a.monic()
}

/// `(g, s)` with `s·a ≡ g (mod m)`, `g` the monic gcd.
pub(crate) fn inverse_mod(a: &UniPoly, m: &UniPoly) -> Option<UniPoly> {
    let (field, nvars) = (m.field, m.nvars);
    let (mut r0, mut r1) = (m.clone(), a.rem(m));
    let (mut s0, mut s1) = (UniPoly::zero(field, nvars), UniPoly::constant(RationalFunction::one(field, nvars)));
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1);
        let s = s0.sub(&q.mul(&s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    // r0 is the gcd, s0 · a ≡ r0
    (r0.degree() == Some(0)).then(|| s0.scale(&r0.coeffs[0].inv().expect("nonzero")).rem(m))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivativeInverse {
    pub g: UniPoly,
    pub h: UniPoly,
    pub s: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtalePresentation {
    pub generator: String,
    pub f: UniPoly,
    /// `f′(η)⁻¹ = h(η) / g(η)^s`, when declared.
    pub derivative_inverse: Option<DerivativeInverse>,
    /// `ā`, a rational function in the residue variables.
    pub declared_residue: RationalFunction,
}

impl EtalePresentation {
    pub fn new(
        generator: &str,
        f: UniPoly,
        derivative_inverse: Option<DerivativeInverse>,
        declared_residue: RationalFunction,
        ctx: &Context,
    ) -> Result<Self, InertialError> {
        if !is_identifier(generator) || ctx.index_of(generator).is_some() {
            return Err(InertialError::InvalidPresentation(format!(
                "generator `{generator}` must be a fresh identifier"
            )));
        }
        if f.degree().unwrap_or(0) == 0 {
            return Err(InertialError::InvalidPresentation("f must have positive degree".into()));
        }
        let stray = declared_residue
            .num()
            .terms()
            .chain(declared_residue.den().terms())
            .any(|(m, _)| m.0.iter().enumerate().any(|(i, &e)| e != 0 && ctx.is_tx(i)));
        if stray || declared_residue.nvars() != ctx.nvars() {
            return Err(InertialError::InvalidPresentation(
                "declared residue must be a function of the residue variables".into(),
            ));
        }
        Ok(Self {
            generator: generator.to_string(),
            f,
            derivative_inverse,
            declared_residue,
        })
    }

    /// Parses `f`, optional `(g, h, s)` and the residue from text.
    pub fn parse(
        generator: &str,
        f: &str,
        gh: Option<(&str, &str, u32)>,
        residue: &str,
        ctx: &Context,
    ) -> Result<Self, InertialError> {
        let fp = UniPoly::parse(f, ctx, generator)?;
        let di = match gh {
            Some((g, h, s)) => Some(DerivativeInverse {
                g: UniPoly::parse(g, ctx, generator)?,
                h: UniPoly::parse(h, ctx, generator)?,
                s,
            }),
            None => None,
        };
        Self::new(generator, fp, di, ctx.parse(residue)?, ctx)
    }

    pub fn degree(&self) -> usize {
        self.f.degree().expect("positive degree")
    }

    /// The element `p(η)`.
    pub fn element(&self, p: &UniPoly) -> ExtElement {
        let r = p.rem(&self.f);
        let n = self.degree();
        ExtElement {
            coeffs: (0..n).map(|i| r.coeff(i)).collect(),
        }
    }

    /// Parses an element of `F`; the generator may appear in denominators.
    pub fn parse_element(&self, text: &str, ctx: &Context) -> Result<ExtElement, InertialError> {
        let (num, den) = parse_split(text, ctx, &self.generator)?;
        let inv = inverse_mod(&den, &self.f).ok_or_else(|| {
            InertialError::InvalidPresentation(format!("denominator of `{text}` is not invertible modulo f"))
        })?;
        Ok(self.element(&num.mul(&inv)))
    }

    /// Newton approximants `η_0 = ā, η_1, …` of `η` in `E`.
    fn approximants(&self) -> impl Iterator<Item = RationalFunction> + '_ {
        let df = self.f.derivative();
        std::iter::successors(Some(self.declared_residue.clone()), move |x| {
            let fx = self.f.eval(x);
            if fx.is_zero() {
                return None;
            }
            let d = df.eval(x);
            Some(x.sub(&fx.div(&d).ok()?))
        })
        .take(NEWTON_LIMIT + 1)
    }

    /// The conditions Newton approximation needs: `f` integral at `ā`,
    /// `f̄(ā) = 0` and `f̄′(ā) ≠ 0`.
    fn hensel_ready(&self, ctx: &Context) -> bool {
        let a = &self.declared_residue;
        let positive = |v: Value| v.sign(&ctx.order) == Sign::Positive;
        let zero = |v: Value| v.is_zero();
        self.f.coeffs.iter().all(|c| value_ratfun(c, ctx).sign(&ctx.order) != Sign::Negative)
            && positive(value_ratfun(&self.f.eval(a), ctx))
            && zero(value_ratfun(&self.f.derivative().eval(a), ctx))
    }
}

/// `Σ c_i η^i`, `i < deg f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtElement {
    pub coeffs: Vec<RationalFunction>,
}

impl ExtElement {
    pub fn from_base(c: RationalFunction, pres: &EtalePresentation) -> Self {
        pres.element(&UniPoly::constant(c))
    }

    pub fn to_poly(&self, field: FieldSpec, nvars: usize) -> UniPoly {
        UniPoly::new(field, nvars, self.coeffs.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn mul(&self, o: &Self, pres: &EtalePresentation) -> Self {
        let (field, nvars) = (pres.f.field, pres.f.nvars);
        pres.element(&self.to_poly(field, nvars).mul(&o.to_poly(field, nvars)))
    }

    pub fn add(&self, o: &Self, pres: &EtalePresentation) -> Self {
        let (field, nvars) = (pres.f.field, pres.f.nvars);
        pres.element(&self.to_poly(field, nvars).add(&o.to_poly(field, nvars)))
    }

    /// Multiplies every coefficient by an element of `E`.
    pub fn scale(&self, c: &RationalFunction) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
        }
    }

    pub fn equals(&self, o: &Self) -> bool {
        self.coeffs.len() == o.coeffs.len() && self.coeffs.iter().zip(&o.coeffs).all(|(a, b)| a.equals(b))
    }

    pub fn format(&self, names: &[String], generator: &str) -> String {
        let p = UniPoly {
            field: FieldSpec::rationals(),
            nvars: names.len(),
            coeffs: self.coeffs.clone(),
        };
        UniPoly::new(p.field, p.nvars, p.coeffs).format(names, generator)
    }
}

/// An approximant value that equals `v(e)`.
fn settle(e: &ExtElement, pres: &EtalePresentation, ctx: &Context) -> Result<Option<RationalFunction>, InertialError> {
    if e.coeffs.len() != pres.degree() {
        return Err(InertialError::InvalidPresentation(format!(
            "element has {} coefficients, degree of f is {}",
            e.coeffs.len(),
            pres.degree()
        )));
    }
    if e.is_zero() {
        return Ok(None);
    }
    if !pres.hensel_ready(ctx) {
        return Err(InertialError::InvalidPresentation(
            "declared residue is not a simple root of the reduced polynomial".into(),
        ));
    }
    let m = e
        .coeffs
        .iter()
        .map(|c| value_ratfun(c, ctx))
        .min_by(|a, b| compare_values(a, b, &ctx.order))
        .expect("nonempty");
    let poly = e.to_poly(ctx.field, ctx.nvars());
    let mut last = String::new();
    for x in pres.approximants() {
        let ex = poly.eval(&x);
        let err = value_ratfun(&pres.f.eval(&x), ctx).add(&m);
        let ve = value_ratfun(&ex, ctx);
        if compare_values(&ve, &err, &ctx.order).is_lt() || matches!(err, Value::Infinite) {
            return Ok(Some(ex));
        }
        last = format!("approximant value {ve}, error bound {err}");
    }
    Err(InertialError::Undetermined(last))
}

pub fn ext_value(e: &ExtElement, pres: &EtalePresentation, ctx: &Context) -> Result<Value, InertialError> {
    Ok(match settle(e, pres, ctx)? {
        Some(x) => value_ratfun(&x, ctx),
        None => Value::Infinite,
    })
}

/// Residue of an element of value zero, in the residue field of `E`.
pub fn ext_residue(e: &ExtElement, pres: &EtalePresentation, ctx: &Context) -> Result<RationalFunction, InertialError> {
    let x = settle(e, pres, ctx)?.ok_or(InertialError::InertialCheckFailed("zero has no residue".into()))?;
    Ok(valuation::residue(&x, ctx)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitSplit {
    /// `u_ζ` (or `ζ` itself when it is a unit).
    pub unit: ExtElement,
    /// `ζ′`, a `(t, x)` Laurent monomial of value `v(ζ)`; `None` for units.
    pub prime: Option<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub units: Vec<ExtElement>,
    pub primes: Vec<RationalFunction>,
    /// One entry per input element.
    pub unit_map: Vec<UnitSplit>,
}

pub fn split_units(zs: &[ExtElement], pres: &EtalePresentation, ctx: &Context) -> Result<Split, InertialError> {
    let vm = ctx.value_matrix();
    let tx = ctx.tx_indices();
    let mut out = Split {
        units: vec![],
        primes: vec![],
        unit_map: vec![],
    };
    for (index, z) in zs.iter().enumerate() {
        let v = match ext_value(z, pres, ctx)? {
            Value::Finite(v) => v,
            Value::Infinite => return Err(InertialError::NegativeValue { index }),
        };
        match ctx.order.sign(&v.coords) {
            Sign::Negative => return Err(InertialError::NegativeValue { index }),
            Sign::Zero => {
                out.units.push(z.clone());
                out.unit_map.push(UnitSplit {
                    unit: z.clone(),
                    prime: None,
                });
            }
            Sign::Positive => {
                let c = lattice::solve_left_unimodular(&vm, &v.coords)?;
                let mut exps = vec![0i64; ctx.nvars()];
                for (&i, &e) in tx.iter().zip(&c) {
                    exps[i] = e;
                }
                let neg: Vec<i64> = exps.iter().map(|e| -e).collect();
                let unit = z.scale(&RationalFunction::laurent_monomial(ctx.field, &neg));
                out.primes.push(RationalFunction::laurent_monomial(ctx.field, &exps));
                out.units.push(unit.clone());
                out.unit_map.push(UnitSplit {
                    unit,
                    prime: Some(exps),
                });
            }
        }
    }
    Ok(out)
}

/// `ξ = a(η) / b(η) · g(η)^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    pub a: UniPoly,
    pub b: UniPoly,
    pub k: i64,
}

impl Representation {
    /// `ξ = ξ / 1 · g⁰`.
    pub fn trivial(xi: &ExtElement, pres: &EtalePresentation) -> Self {
        let (field, nvars) = (pres.f.field, pres.f.nvars);
        Self {
            a: xi.to_poly(field, nvars),
            b: UniPoly::constant(RationalFunction::one(field, nvars)),
            k: 0,
        }
    }

    /// The represented element equals `xi`.
    pub fn represents(&self, xi: &ExtElement, pres: &EtalePresentation) -> bool {
        let (field, nvars) = (pres.f.field, pres.f.nvars);
        let one = UniPoly::constant(RationalFunction::one(field, nvars));
        let g = pres.derivative_inverse.as_ref().map_or(one.clone(), |d| d.g.clone());
        let gk = |k: i64| if k > 0 { g.pow(k as u32) } else { one.clone() };
        let lhs = xi.to_poly(field, nvars).mul(&self.b).mul(&gk(-self.k));
        let rhs = self.a.mul(&gk(self.k));
        pres.element(&lhs).equals(&pres.element(&rhs))
    }
}

fn push_unique(out: &mut Vec<RationalFunction>, c: &RationalFunction) {
    if !c.is_zero() && !out.iter().any(|d| d.equals(c)) {
        out.push(c.clone());
    }
}

/// Coefficients of `f, g, h` and of every `a, b` in the representations.
pub fn collect_constants(
    pres: &EtalePresentation,
    reps: &[Representation],
    ctx: &Context,
) -> Result<Vec<RationalFunction>, InertialError> {
    let mut out = Vec::new();
    for c in pres.f.coeffs() {
        push_unique(&mut out, c);
    }
    if let Some(d) = &pres.derivative_inverse {
        for c in d.g.coeffs().iter().chain(d.h.coeffs()) {
            push_unique(&mut out, c);
        }
    }
    for (index, r) in reps.iter().enumerate() {
        let b = pres.element(&r.b);
        if !ext_value(&b, pres, ctx)?.is_zero() {
            return Err(InertialError::NonUnitDenominator { index });
        }
        for c in r.a.coeffs().iter().chain(r.b.coeffs()) {
            push_unique(&mut out, c);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InertialReport {
    pub ok: bool,
    pub clauses: Vec<Clause>,
}

impl InertialReport {
    pub fn violations(&self) -> Vec<String> {
        self.clauses
            .iter()
            .filter(|c| !c.ok)
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect()
    }
}

pub fn check_inertial(pres: &EtalePresentation, ctx: &Context) -> InertialReport {
    let names = ctx.names();
    let g = &pres.generator;
    let mut clauses = Vec::new();
    let monic = pres.f.degree().unwrap_or(0) >= 1 && pres.f.leading().is_some_and(|l| l.is_one());
    clauses.push(Clause::new("f_monic", monic, pres.f.format(&names, g)));

    let reduced: Result<Vec<RationalFunction>, _> = pres.f.coeffs().iter().map(|c| place_image(c, ctx)).collect();
    clauses.push(Clause::new(
        "f_integral",
        reduced.is_ok(),
        if reduced.is_ok() {
            "all coefficients have value >= 0".to_string()
        } else {
            "some coefficient has negative value".to_string()
        },
    ));
    let a = &pres.declared_residue;
    if let Ok(red) = reduced {
        let fbar = UniPoly::new(ctx.field, ctx.nvars(), red);
        let dbar = fbar.derivative();
        let gcd = poly_gcd(&fbar, &dbar);
        clauses.push(Clause::new(
            "separable",
            gcd.degree() == Some(0),
            format!("gcd(fbar, fbar') = {}", gcd.format(&names, g)),
        ));
        let at = fbar.eval(a);
        clauses.push(Clause::new("root", at.is_zero(), format!("fbar(a) = {}", at.format(&names))));
        let dat = dbar.eval(a);
        clauses.push(Clause::new(
            "simple_root",
            !dat.is_zero(),
            format!("fbar'(a) = {}", dat.format(&names)),
        ));
    }

    if pres.hensel_ready(ctx) {
        let df = pres.element(&pres.f.derivative());
        let (ok, detail) = match ext_value(&df, pres, ctx) {
            Ok(v) => (v.is_zero(), format!("v(f'(eta)) = {v}")),
            Err(e) => (false, e.to_string()),
        };
        clauses.push(Clause::new("etale_unit", ok, detail));
        // a root of f in E would make f reducible; early Newton steps find
        // the roots that are rational functions of low degree
        let exact = pres.degree() >= 2 && pres.approximants().take(3).any(|x| pres.f.eval(&x).is_zero());
        clauses.push(Clause::new(
            "irreducible_sanity",
            !exact,
            if exact { "f has a root in the base field" } else { "no base-field root found" },
        ));
    } else {
        clauses.push(Clause::new("etale_unit", false, "not evaluated: residue is not a simple root"));
    }

    if let Some(d) = &pres.derivative_inverse {
        let lhs = pres.element(&pres.f.derivative().mul(&d.h));
        let rhs = pres.element(&d.g.pow(d.s));
        clauses.push(Clause::new(
            "derivative_inverse",
            lhs.equals(&rhs),
            format!("f'(eta) h(eta) vs g(eta)^{}", d.s),
        ));
    }

    InertialReport {
        ok: clauses.iter().all(|c| c.ok),
        clauses,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AscendedFactorization {
    pub zeta: ExtElement,
    /// Coefficients over the chart context of the base chart.
    pub unit: ExtElement,
    /// Exponents over the base chart's new coordinates.
    pub exps: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AscendedChart {
    pub base: Chart,
    pub presentation: EtalePresentation,
    pub factorizations: Vec<AscendedFactorization>,
    pub regular_params: Vec<String>,
    pub dimension: usize,
}

impl AscendedChart {
    /// `unit × x′^exps` in the original context.
    pub fn expand(&self, f: &AscendedFactorization, ctx: &Context) -> ExtElement {
        let images = self.base.substitution(ctx);
        let mut mono = vec![0i64; ctx.nvars()];
        for (k, v) in f.exps.iter().zip(&self.base.new_vars) {
            for (m, d) in mono.iter_mut().zip(&v.definition) {
                *m += k * d;
            }
        }
        ExtElement {
            coeffs: f
                .unit
                .coeffs
                .iter()
                .map(|c| c.map_monomials(&images, ctx.nvars()).mul_laurent_monomial(&mono))
                .collect(),
        }
    }

    pub fn to_text(&self, ctx: &Context) -> String {
        let names = ctx.names();
        let chart_names = self.base.context(ctx).map(|c| c.names()).unwrap_or_default();
        let g = &self.presentation.generator;
        let mut out = String::new();
        for f in &self.factorizations {
            let mono: Vec<String> = f
                .exps
                .iter()
                .zip(&self.base.new_vars)
                .filter(|(e, _)| **e != 0)
                .map(|(e, v)| if *e == 1 { v.name.clone() } else { format!("{}^{e}", v.name) })
                .collect();
            let mono = if mono.is_empty() { "1".to_string() } else { mono.join("*") };
            out.push_str(&format!(
                "{} = [{}] * {}\n",
                f.zeta.format(&names, g),
                f.unit.format(&chart_names, g),
                mono
            ));
        }
        out
    }
}

/// Lifts a base chart through the presentation.
///
/// `reps` pairs an input index with a representation of its unit part;
/// indices without one use the trivial representation.
pub fn ascend_chart(
    base: &Chart,
    pres: &EtalePresentation,
    zs: &[ExtElement],
    reps: &[(usize, Representation)],
    ctx: &Context,
) -> Result<AscendedChart, InertialError> {
    let report = check_inertial(pres, ctx);
    if !report.ok {
        return Err(InertialError::InertialCheckFailed(report.violations().join("; ")));
    }
    let split = split_units(zs, pres, ctx)?;
    let mut chosen = Vec::with_capacity(zs.len());
    for (i, us) in split.unit_map.iter().enumerate() {
        let rep = match reps.iter().find(|(j, _)| *j == i) {
            Some((_, r)) => r.clone(),
            None => Representation::trivial(&us.unit, pres),
        };
        if !rep.represents(&us.unit, pres) {
            return Err(InertialError::InvalidPresentation(format!(
                "representation for element {i} does not evaluate to its unit part"
            )));
        }
        chosen.push(rep);
    }
    let mut required = collect_constants(pres, &chosen, ctx)?;
    for p in &split.primes {
        push_unique(&mut required, p);
    }
    let names = ctx.names();
    for c in &required {
        if base.monomial_form(c, ctx)?.is_none() {
            return Err(InertialError::MissingConstant(c.format(&names)));
        }
    }

    let chart_ctx = base.context(ctx)?;
    let mut factorizations = Vec::with_capacity(zs.len());
    for (z, us) in zs.iter().zip(&split.unit_map) {
        let (prime_unit, exps) = match &us.prime {
            Some(e) => base
                .monomial_form(&RationalFunction::laurent_monomial(ctx.field, e), ctx)?
                .expect("required primes are chart monomials"),
            None => (RationalFunction::one(ctx.field, chart_ctx.nvars()), vec![0; base.new_vars.len()]),
        };
        let coeffs = us
            .unit
            .coeffs
            .iter()
            .map(|c| Ok(base.pull_back(c, ctx)?.mul(&prime_unit)))
            .collect::<Result<Vec<_>, InertialError>>()?;
        factorizations.push(AscendedFactorization {
            zeta: z.clone(),
            unit: ExtElement { coeffs },
            exps,
        });
    }
    Ok(AscendedChart {
        base: base.clone(),
        presentation: pres.clone(),
        factorizations,
        regular_params: base.regular_params.clone(),
        dimension: base.dimension,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AscendReport {
    pub ok: bool,
    pub clauses: Vec<Clause>,
}

/// Re-verifies an ascended chart from its data.
pub fn verify_ascended(asc: &AscendedChart, ctx: &Context) -> AscendReport {
    let mut clauses = Vec::new();
    let inertial = check_inertial(&asc.presentation, ctx);
    clauses.push(Clause::new("inertial", inertial.ok, inertial.violations().join("; ")));
    let base = chart_report(&asc.base, ctx);
    clauses.push(Clause::new("base_chart", base.ok(), base.details.clone()));
    clauses.push(Clause::new(
        "dimension",
        asc.dimension == asc.base.dimension && asc.regular_params == asc.base.regular_params,
        format!("{} (base {})", asc.dimension, asc.base.dimension),
    ));
    for (i, f) in asc.factorizations.iter().enumerate() {
        let exps_ok = f.exps.len() == asc.base.new_vars.len() && f.exps.iter().all(|&e| e >= 0);
        let round = exps_ok && asc.expand(f, ctx).equals(&f.zeta);
        clauses.push(Clause::new(
            &format!("round_trip[{i}]"),
            round,
            if round { "exact" } else { "mismatch or bad exponents" },
        ));
        let unit_ctx = ExtElement {
            coeffs: f
                .unit
                .coeffs
                .iter()
                .map(|c| c.map_monomials(&asc.base.substitution(ctx), ctx.nvars()))
                .collect(),
        };
        let (ok, detail) = match ext_value(&unit_ctx, &asc.presentation, ctx) {
            Ok(v) => (v.is_zero(), format!("value {v}")),
            Err(e) => (false, e.to_string()),
        };
        clauses.push(Clause::new(&format!("unit[{i}]"), ok, detail));
    }
    AscendReport {
        ok: clauses.iter().all(|c| c.ok),
        clauses,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcfield::{VarClass, VarDecl};
    use crate::monomialize::{ChartVar, Factorization};
    use crate::ordered_group::{GroupElement, OrderSpec};
    use crate::valuation::tests::sqrt2_ctx;
    use crate::valuation::value_monomial;

    /// `E = K(x1)` with `v x1 = 1`.
    fn x1_ctx(p: u32) -> Context {
        Context::new(
            FieldSpec::new(p).unwrap(),
            vec![VarDecl::new("x1", VarClass::Value, GroupElement::new(vec![1]))],
            OrderSpec::lex(1),
        )
        .unwrap()
    }

    fn as_pres(ctx: &Context, a: &str) -> EtalePresentation {
        EtalePresentation::parse("eta", "eta^2 - eta - x1", None, a, ctx).unwrap()
    }

    fn fin(c: i64) -> Value {
        Value::Finite(GroupElement::new(vec![c]))
    }

    #[test]
    fn check_inertial_examples() {
        let q = x1_ctx(0);
        let rep = check_inertial(&as_pres(&q, "0"), &q);
        assert!(rep.ok, "{:?}", rep.violations());

        let f2 = x1_ctx(2);
        let rep = check_inertial(&as_pres(&f2, "0"), &f2);
        assert!(rep.ok, "{:?}", rep.violations());

        let ram = EtalePresentation::parse("eta", "eta^2 - x1", None, "0", &q).unwrap();
        let rep = check_inertial(&ram, &q);
        assert!(!rep.ok);
        assert!(rep.clauses.iter().any(|c| c.name == "separable" && !c.ok));
    }

    #[test]
    fn derivative_inverse_clause() {
        let q = x1_ctx(0);
        // (2 eta - 1)^2 = 1 + 4 x1
        let good = EtalePresentation::parse("eta", "eta^2 - eta - x1", Some(("1", "(2*eta - 1)/(1 + 4*x1)", 0)), "0", &q)
            .unwrap();
        assert!(check_inertial(&good, &q).ok);
        let bad = EtalePresentation::parse("eta", "eta^2 - eta - x1", Some(("1", "1", 0)), "0", &q).unwrap();
        let rep = check_inertial(&bad, &q);
        assert!(rep.clauses.iter().any(|c| c.name == "derivative_inverse" && !c.ok));
    }

    #[test]
    fn ext_value_examples() {
        let q = x1_ctx(0);
        let unit_root = as_pres(&q, "1");
        let e = |s: &str, p: &EtalePresentation| p.parse_element(s, &q).unwrap();
        assert_eq!(ext_value(&e("eta", &unit_root), &unit_root, &q).unwrap(), fin(0));
        assert_eq!(ext_value(&e("x1*eta + x1^2", &unit_root), &unit_root, &q).unwrap(), fin(1));
        assert_eq!(ext_value(&e("0", &unit_root), &unit_root, &q).unwrap(), Value::Infinite);
        // residue 0 picks the root with eta (eta - 1) = x1, so v(eta) = 1
        let small_root = as_pres(&q, "0");
        assert_eq!(ext_value(&e("eta", &small_root), &small_root, &q).unwrap(), fin(1));
        assert_eq!(ext_value(&e("eta - 1", &small_root), &small_root, &q).unwrap(), fin(0));
        // eta = -x1 + x1^2 - ...
        assert_eq!(ext_value(&e("eta - x1", &small_root), &small_root, &q).unwrap(), fin(1));
        assert_eq!(ext_value(&e("eta + x1", &small_root), &small_root, &q).unwrap(), fin(2));
        let r = ext_residue(&e("eta - 1", &small_root), &small_root, &q).unwrap();
        assert_eq!(r.format(&q.names()), "-1");
    }

    #[test]
    fn split_examples() {
        let q = x1_ctx(0);
        let p = as_pres(&q, "1");
        let z: Vec<ExtElement> = ["eta", "x1", "x1*eta"].iter().map(|s| p.parse_element(s, &q).unwrap()).collect();
        let s = split_units(&z, &p, &q).unwrap();
        assert_eq!(s.unit_map[0].prime, None);
        assert_eq!(s.unit_map[1].prime, Some(vec![1]));
        assert!(s.unit_map[1].unit.equals(&p.parse_element("1", &q).unwrap()));
        assert!(s.unit_map[2].unit.equals(&p.parse_element("eta", &q).unwrap()));
        assert_eq!(s.primes.len(), 2);
        assert!(matches!(
            split_units(&[p.parse_element("eta/x1", &q).unwrap()], &p, &q),
            Err(InertialError::NegativeValue { index: 0 })
        ));
    }

    #[test]
    fn constants_examples() {
        let q = x1_ctx(0);
        let p = EtalePresentation::parse("eta", "eta^2 - eta - x1", Some(("1", "1", 0)), "1", &q).unwrap();
        let c = collect_constants(&p, &[], &q).unwrap();
        let shown: Vec<String> = c.iter().map(|x| x.format(&q.names())).collect();
        assert_eq!(shown, vec!["-x1", "-1", "1"]);

        let rep = Representation {
            a: UniPoly::parse("x1*eta + 1", &q, "eta").unwrap(),
            b: UniPoly::parse("eta", &q, "eta").unwrap(),
            k: 0,
        };
        let c2 = collect_constants(&p, std::slice::from_ref(&rep), &q).unwrap();
        assert!(c2.iter().any(|x| x.format(&q.names()) == "x1"));
        assert!(rep.represents(&p.parse_element("(x1*eta + 1)/eta", &q).unwrap(), &p));

        let zero_root = as_pres(&q, "0");
        assert_eq!(
            collect_constants(&zero_root, &[rep], &q),
            Err(InertialError::NonUnitDenominator { index: 0 })
        );
    }

    fn hand_chart(ctx: &Context) -> Chart {
        let names = vec!["xp1".to_string(), "xp2".to_string()];
        let var = |n: &str, d: Vec<i64>| ChartVar {
            name: n.into(),
            value: value_monomial(&d, ctx),
            definition: d,
        };
        Chart {
            new_vars: vec![var("xp1", vec![-1, 1]), var("xp2", vec![3, -2])],
            kept_params: vec![],
            regular_params: names.clone(),
            factorizations: vec![Factorization {
                zeta: ctx.parse("x1 + x2").unwrap(),
                unit: parse_with_names("1 + xp1", ctx.field, &names).unwrap(),
                exps: vec![2, 1],
            }],
            dimension: 2,
        }
    }

    #[test]
    fn ascend_composed_example() {
        let ctx = sqrt2_ctx(0);
        let p = EtalePresentation::parse("eta", "eta^2 - eta - x1", None, "1", &ctx).unwrap();
        let base = hand_chart(&ctx);
        let z = vec![p.parse_element("(x1 + x2)*eta", &ctx).unwrap()];
        let asc = ascend_chart(&base, &p, &z, &[], &ctx).unwrap();
        assert_eq!(asc.factorizations[0].exps, vec![2, 1]);
        let chart_names = base.context(&ctx).unwrap().names();
        assert_eq!(asc.factorizations[0].unit.format(&chart_names, "eta"), "(xp1 + 1)*eta");
        assert_eq!(asc.dimension, 2);
        let rep = verify_ascended(&asc, &ctx);
        assert!(rep.ok, "{:?}", rep.clauses);
    }

    #[test]
    fn ascend_simple_examples() {
        let q = x1_ctx(0);
        let p = as_pres(&q, "1");
        let base = crate::monomialize::monomialize_set(&[q.parse("x1").unwrap()], &q).unwrap();
        let z = vec![p.parse_element("eta", &q).unwrap(), p.parse_element("x1*eta", &q).unwrap()];
        let asc = ascend_chart(&base, &p, &z, &[], &q).unwrap();
        assert_eq!(asc.factorizations[0].exps, vec![0]);
        assert_eq!(asc.factorizations[1].exps, vec![1]);
        assert!(verify_ascended(&asc, &q).ok);
    }

    #[test]
    fn missing_constant_detected() {
        let ctx = sqrt2_ctx(0);
        let p = EtalePresentation::parse("eta", "eta^2 - eta - x1", None, "1", &ctx).unwrap();
        let base = crate::monomialize::monomialize_set(&[ctx.parse("x1").unwrap()], &ctx).unwrap();
        // the unit part 1 - x2/x1 is not a monomial in the identity chart
        let z = vec![p.parse_element("(x1 - x2)*eta", &ctx).unwrap()];
        assert!(matches!(
            ascend_chart(&base, &p, &z, &[], &ctx),
            Err(InertialError::MissingConstant(_))
        ));
    }
}

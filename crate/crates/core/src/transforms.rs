//! Monoidal transforms of a regular local base ring of dimension at most 2
//! carrying a monomial valuation on its parameters.
//!
//! The state keeps every current parameter as a Laurent monomial in the
//! original parameters. A quadratic transform keeps the parameter of least
//! value and divides the others by it. When two parameters tie the quotient
//! has value zero; it leaves the valuation ideal and becomes a residue
//! variable, and the dimension drops.

use serde::{Deserialize, Serialize};

use crate::error::TransformError;
use crate::funcfield::{Context, Polynomial, RationalFunction, VarClass, VarDecl};
use crate::lattice;
use crate::ordered_group::{GroupElement, Sign};
use crate::valuation::{value_ratfun, Value};

pub const DEFAULT_ITER_CAP: usize = 512;

/// The transform cap, overridable with `VALUNIFORM_ITER_CAP`.
pub fn iter_cap_from_env() -> usize {
    std::env::var("VALUNIFORM_ITER_CAP")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_ITER_CAP)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamDef {
    pub name: String,
    /// Laurent exponents over the original parameters, in declaration order.
    pub definition: Vec<i64>,
    pub value: GroupElement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CenterRecord {
    pub center: Vec<String>,
    /// The parameter kept (least value); `None` for a principal center.
    pub pivot: Option<String>,
    /// Names of parameters reclassified as residue variables by this step.
    pub reclassified: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalRingState {
    pub params: Vec<ParamDef>,
    /// Former parameters whose value dropped to zero.
    pub residues: Vec<ParamDef>,
    pub history: Vec<CenterRecord>,
    pub dim: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransformOptions {
    pub cap: usize,
    pub allow_reclassify: bool,
}

impl Default for TransformOptions {
    fn default() -> Self {
        Self {
            cap: DEFAULT_ITER_CAP,
            allow_reclassify: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationCert {
    /// The coefficient, in the original context.
    pub element: RationalFunction,
    /// Unit over the state variables (params, then reclassified residues).
    pub unit: RationalFunction,
    /// Exponents over the current params.
    pub exps: Vec<i64>,
}

impl LocalRingState {
    /// The base ring of `ctx`: its parameters with identity definitions.
    pub fn new(ctx: &Context) -> Result<Self, TransformError> {
        let params = ctx.indices_of(VarClass::Param);
        if params.len() > 2 {
            return Err(TransformError::DimensionTooLarge(params.len()));
        }
        let params: Vec<ParamDef> = params
            .iter()
            .enumerate()
            .map(|(k, &i)| {
                let mut definition = vec![0; params.len()];
                definition[k] = 1;
                ParamDef {
                    name: ctx.vars[i].name.clone(),
                    definition,
                    value: ctx.vars[i].value.clone(),
                }
            })
            .collect();
        Ok(Self {
            dim: params.len(),
            params,
            residues: Vec::new(),
            history: Vec::new(),
        })
    }

    pub fn param_names(&self) -> Vec<String> {
        self.params.iter().map(|p| p.name.clone()).collect()
    }

    /// Names of all state variables: params, then reclassified residues.
    pub fn names(&self) -> Vec<String> {
        self.params.iter().chain(&self.residues).map(|p| p.name.clone()).collect()
    }

    /// Definitions of all state variables, a square matrix over the original
    /// parameters.
    pub fn definitions(&self) -> Vec<Vec<i64>> {
        self.params.iter().chain(&self.residues).map(|p| p.definition.clone()).collect()
    }

    /// Context over the state variables.
    pub fn context(&self, ctx: &Context) -> Result<Context, TransformError> {
        let mut vars: Vec<VarDecl> = self
            .params
            .iter()
            .map(|p| VarDecl::new(p.name.clone(), VarClass::Param, p.value.clone()))
            .collect();
        vars.extend(
            self.residues
                .iter()
                .map(|p| VarDecl::new(p.name.clone(), VarClass::Residue, GroupElement::zero(ctx.rank()))),
        );
        Ok(Context::new(ctx.field, vars, ctx.order.clone())?)
    }

    /// Images of the original context's variables as Laurent monomials over
    /// the state variables. Non-parameter variables map to 1.
    pub fn pullback_images(&self, ctx: &Context) -> Result<Vec<Vec<i64>>, TransformError> {
        let inv = lattice::unimodular_inverse(&self.definitions())?;
        let n = self.params.len() + self.residues.len();
        let mut images = vec![vec![0i64; n]; ctx.nvars()];
        for (k, i) in ctx.indices_of(VarClass::Param).into_iter().enumerate() {
            images[i] = inv[k].clone();
        }
        Ok(images)
    }

    /// Images of the state variables as Laurent monomials over `ctx`.
    pub fn pushforward_images(&self, ctx: &Context) -> Vec<Vec<i64>> {
        let params = ctx.indices_of(VarClass::Param);
        self.params
            .iter()
            .chain(&self.residues)
            .map(|p| {
                let mut e = vec![0i64; ctx.nvars()];
                for (&i, &d) in params.iter().zip(&p.definition) {
                    e[i] = d;
                }
                e
            })
            .collect()
    }

    /// Values of the params are linearly independent over the rationals.
    pub fn values_independent(&self) -> bool {
        if self.params.is_empty() {
            return true;
        }
        let rows: Vec<Vec<num_bigint::BigInt>> = self
            .params
            .iter()
            .map(|p| p.value.coords.iter().map(|&c| c.into()).collect())
            .collect();
        // rank of the transpose equals rank of the rows
        let r = self.params[0].value.rank();
        let cols: Vec<Vec<num_bigint::BigInt>> = (0..r)
            .map(|j| rows.iter().map(|row| row[j].clone()).collect())
            .collect();
        lattice::column_reduce(&cols, self.params.len()).1 == self.params.len()
    }

    fn fresh_name(&self, base: &str, ctx: &Context) -> String {
        let stem = match base.rfind('_') {
            Some(k) if base[k + 1..].chars().all(|c| c.is_ascii_digit()) && k + 1 < base.len() => &base[..k],
            _ => base,
        };
        // names never repeat along a chain, so history entries stay unambiguous
        let taken = |s: &str| {
            ctx.index_of(s).is_some()
                || self.names().iter().any(|n| n == s)
                || self.history.iter().any(|h| h.center.iter().any(|n| n == s))
        };
        (1..)
            .map(|k| format!("{stem}_{k}"))
            .find(|s| !taken(s))
            .expect("unbounded search")
    }
}

pub fn monoidal_transform(
    state: &LocalRingState,
    center: &[String],
    ctx: &Context,
) -> Result<LocalRingState, TransformError> {
    if state.dim == 0 {
        return Err(TransformError::DimensionZero);
    }
    if center.is_empty() {
        return Err(TransformError::EmptyCenter);
    }
    let mut idx = Vec::with_capacity(center.len());
    for name in center {
        let i = state
            .params
            .iter()
            .position(|p| &p.name == name)
            .ok_or_else(|| TransformError::UnknownParam(name.clone()))?;
        if !idx.contains(&i) {
            idx.push(i);
        }
    }
    let mut next = state.clone();
    if idx.len() == 1 {
        next.history.push(CenterRecord {
            center: center.to_vec(),
            pivot: None,
            reclassified: vec![],
        });
        return Ok(next);
    }
    // least value; ties by name
    let pivot = *idx
        .iter()
        .min_by(|&&a, &&b| {
            let (pa, pb) = (&state.params[a], &state.params[b]);
            ctx.order
                .sign(&pa.value.sub(&pb.value).coords)
                .to_ordering()
                .then_with(|| pa.name.cmp(&pb.name))
        })
        .expect("nonempty center");
    let x = state.params[pivot].clone();
    let mut reclassified = Vec::new();
    let mut kept = Vec::new();
    for (i, p) in state.params.iter().enumerate() {
        if i == pivot || !idx.contains(&i) {
            kept.push(p.clone());
            continue;
        }
        let q = ParamDef {
            name: next.fresh_name(&p.name, ctx),
            definition: p.definition.iter().zip(&x.definition).map(|(a, b)| a - b).collect(),
            value: p.value.sub(&x.value),
        };
        // keep the fresh-name search aware of names issued in this step
        next.params.push(q.clone());
        if ctx.order.sign(&q.value.coords) == Sign::Zero {
            reclassified.push(q);
        } else {
            kept.push(q);
        }
    }
    next.params = kept;
    next.history.push(CenterRecord {
        center: center.to_vec(),
        pivot: Some(x.name.clone()),
        reclassified: reclassified.iter().map(|p| p.name.clone()).collect(),
    });
    next.residues.extend(reclassified);
    next.dim = next.params.len();
    Ok(next)
}

/// `f` over the state variables as `unit × params^exps`, when possible.
///
/// Params all have positive value, so a polynomial over the state variables
/// has value zero exactly when it has a term free of params, and its residue
/// is that param-free part.
pub fn factor_in_state(f: &RationalFunction, state: &LocalRingState) -> Option<(RationalFunction, Vec<i64>)> {
    let k = state.params.len();
    let num_min = f.num().min_exponents();
    let den_min = f.den().min_exponents();
    let exps: Vec<i64> = (0..k).map(|i| num_min[i] - den_min[i]).collect();
    if exps.iter().any(|&e| e < 0) {
        return None;
    }
    let mut shift = vec![0i64; f.nvars()];
    for (s, e) in shift.iter_mut().zip(&exps) {
        *s = -e;
    }
    let unit = f.mul_laurent_monomial(&shift);
    unit_in_state(&unit, state).then_some((unit, exps))
}

/// Residue of `f` over the state variables if it has value zero.
pub fn state_residue(f: &RationalFunction, state: &LocalRingState) -> Option<RationalFunction> {
    let k = state.params.len();
    let free = |p: &Polynomial| -> Polynomial {
        let terms = p
            .terms()
            .filter(|(m, _)| m.0[..k].iter().all(|&e| e == 0))
            .map(|(m, c)| (m.0.clone(), c.clone()));
        Polynomial::from_terms(p.field(), p.nvars(), terms).expect("field coefficients")
    };
    let (n, d) = (free(f.num()), free(f.den()));
    if n.is_zero() || d.is_zero() || f.num().has_negative_exponent() || f.den().has_negative_exponent() {
        return None;
    }
    RationalFunction::new(n, d).ok()
}

fn unit_in_state(f: &RationalFunction, state: &LocalRingState) -> bool {
    state_residue(f, state).is_some_and(|r| !r.is_zero())
}

/// Re-verifies a certificate against the original context.
pub fn verify_cert(cert: &FactorizationCert, state: &LocalRingState, ctx: &Context) -> bool {
    if cert.exps.len() != state.params.len() || cert.exps.iter().any(|&e| e < 0) {
        return false;
    }
    if cert.unit.nvars() != state.params.len() + state.residues.len() || !unit_in_state(&cert.unit, state) {
        return false;
    }
    let images = state.pushforward_images(ctx);
    let mut mono = vec![0i64; ctx.nvars()];
    for (e, img) in cert.exps.iter().zip(&images) {
        for (m, d) in mono.iter_mut().zip(img) {
            *m += e * d;
        }
    }
    cert.unit
        .map_monomials(&images, ctx.nvars())
        .mul_laurent_monomial(&mono)
        .equals(&cert.element)
}

/// Quadratic transforms until every coefficient is a unit times a monomial
/// in the params and the param values are rationally independent.
pub fn establish_nc_v(
    state: &LocalRingState,
    coeffs: &[RationalFunction],
    ctx: &Context,
    opts: TransformOptions,
) -> Result<(LocalRingState, Vec<FactorizationCert>), TransformError> {
    let params = ctx.indices_of(VarClass::Param);
    for (index, c) in coeffs.iter().enumerate() {
        let stray = c
            .num()
            .terms()
            .chain(c.den().terms())
            .any(|(m, _)| m.0.iter().enumerate().any(|(i, &e)| e != 0 && !params.contains(&i)));
        if c.is_zero() || stray {
            return Err(TransformError::NotInBaseRing(ctx.format(c)));
        }
        match value_ratfun(c, ctx) {
            Value::Finite(v) if ctx.order.sign(&v.coords) != Sign::Negative => {}
            _ => return Err(TransformError::NegativeValue { index }),
        }
    }

    let mut state = state.clone();
    let mut steps = 0usize;
    loop {
        let images = state.pullback_images(ctx)?;
        let n = state.params.len() + state.residues.len();
        let pulled: Vec<RationalFunction> = coeffs.iter().map(|c| c.map_monomials(&images, n)).collect();
        let factored: Vec<Option<(RationalFunction, Vec<i64>)>> =
            pulled.iter().map(|g| factor_in_state(g, &state)).collect();
        let residual = factored.iter().position(Option::is_none);
        let independent = state.values_independent();
        if residual.is_none() && independent {
            let certs = coeffs
                .iter()
                .zip(factored)
                .map(|(c, f)| {
                    let (unit, exps) = f.expect("all factored");
                    FactorizationCert {
                        element: c.clone(),
                        unit,
                        exps,
                    }
                })
                .collect();
            return Ok((state, certs));
        }
        if state.dim <= 1 {
            // one parameter: every element of nonnegative value factors
            let what = residual.map_or_else(
                || "parameter values".to_string(),
                |i| pulled[i].format(&state.names()),
            );
            return Err(TransformError::RationalDependenceUnresolved(what));
        }
        if steps >= opts.cap {
            let residual = match residual {
                Some(i) => describe_residual(&pulled[i], &state),
                None => "parameter values remain rationally dependent".into(),
            };
            return Err(TransformError::IterationCapExceeded { cap: opts.cap, residual });
        }
        let center = state.param_names();
        let next = monoidal_transform(&state, &center, ctx)?;
        if !opts.allow_reclassify && next.residues.len() > state.residues.len() {
            return Err(TransformError::RationalDependenceUnresolved(
                next.history.last().expect("just pushed").reclassified.join(", "),
            ));
        }
        state = next;
        steps += 1;
    }
}

/// The element and the param-exponents of its numerator terms.
fn describe_residual(f: &RationalFunction, state: &LocalRingState) -> String {
    let k = state.params.len();
    let polygon: Vec<String> = f
        .num()
        .terms()
        .map(|(m, _)| format!("{:?}", &m.0[..k]))
        .collect();
    format!("{} with exponents {}", f.format(&state.names()), polygon.join(" "))
}

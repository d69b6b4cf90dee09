//! Monomialization of a finite set of valuation-ring elements.
//!
//! Pipeline: every `ζ` is divided through by the least-value `(t, x)`-monomial
//! of its denominator; the exponent differences that appear are collected in
//! a finite set `H` of non-negative-value monomials; a positive basis of the
//! exponent lattice containing `H` in its non-negative cone gives new
//! coordinates `x′`; rewriting `ζ` in them yields `unit × x′^α`.

use serde::{Deserialize, Serialize};

use crate::error::MonomializeError;
use crate::funcfield::{Context, Monomial, Polynomial, RationalFunction, VarClass, VarDecl};
use crate::lattice;
use crate::ordered_group::{perron_basis, GroupElement, Sign};
use crate::valuation::{self, check_setting, value_monomial, value_ratfun, Value};

/// `ζ` with numerator and denominator divided by the pivot monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThirdFraction {
    pub zeta: RationalFunction,
    /// Laurent numerator after division by the pivot.
    pub num_terms: Polynomial,
    /// Laurent denominator after division by the pivot.
    pub den_terms: Polynomial,
    /// Least-value `(t, x)`-exponent of the original denominator.
    pub pivot: Vec<i64>,
}

/// Least-value `(t, x)`-part of `f`, rejecting distinct parts of equal value.
fn unique_min_tx(f: &Polynomial, ctx: &Context) -> Result<(Vec<i64>, GroupElement), MonomializeError> {
    let (part, value) = valuation::min_tx_part(f, ctx)
        .ok_or_else(|| MonomializeError::InternalInconsistency("zero polynomial".into()))?;
    for (m, _) in f.terms() {
        let tx = ctx.tx_part(&m.0);
        if tx != part && value_monomial(&tx, ctx) == value {
            return Err(MonomializeError::NonInjective(value.to_string()));
        }
    }
    Ok((part, value))
}

pub fn clear_denominator(zeta: &RationalFunction, ctx: &Context) -> Result<ThirdFraction, MonomializeError> {
    clear_denominator_indexed(zeta, ctx, 0)
}

fn clear_denominator_indexed(
    zeta: &RationalFunction,
    ctx: &Context,
    index: usize,
) -> Result<ThirdFraction, MonomializeError> {
    if value_ratfun(zeta, ctx).sign(&ctx.order) == Sign::Negative {
        return Err(MonomializeError::NegativeValue { index });
    }
    let (pivot, _) = unique_min_tx(zeta.den(), ctx)?;
    let shift = Monomial(pivot.iter().map(|e| -e).collect());
    let third = ThirdFraction {
        zeta: zeta.clone(),
        num_terms: zeta.num().mul_monomial(&shift),
        den_terms: zeta.den().mul_monomial(&shift),
        pivot,
    };
    for (label, poly) in [("denominator", &third.den_terms), ("numerator", &third.num_terms)] {
        for (m, _) in poly.terms() {
            let v = value_monomial(&ctx.tx_part(&m.0), ctx);
            if ctx.order.sign(&v.coords) == Sign::Negative {
                return Err(MonomializeError::InternalInconsistency(format!(
                    "{label} monomial of negative value {v} after clearing"
                )));
            }
        }
    }
    Ok(third)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HSet {
    /// Distinct `(t, x)`-exponent vectors (full length, residue entries 0),
    /// in graded-lex order.
    pub elements: Vec<Vec<i64>>,
    /// `h_ζ` for each input, in input order.
    pub h_min: Vec<Vec<i64>>,
}

/// Indices of the `(t, x)` variables that take part in the chart: all value
/// variables and the parameters occurring in some element.
fn active_indices(zs: &[RationalFunction], ctx: &Context) -> Vec<usize> {
    ctx.tx_indices()
        .into_iter()
        .filter(|&i| {
            ctx.vars[i].class == VarClass::Value
                || zs.iter().any(|z| {
                    z.num().terms().chain(z.den().terms()).any(|(m, _)| m.0[i] != 0)
                })
        })
        .collect()
}

pub fn build_h(thirds: &[ThirdFraction], ctx: &Context) -> Result<HSet, MonomializeError> {
    let zs: Vec<RationalFunction> = thirds.iter().map(|t| t.zeta.clone()).collect();
    let n = ctx.nvars();
    // x_i of negative value enters as x_i⁻¹; both generate the same group
    let mut elements: Vec<Monomial> = active_indices(&zs, ctx)
        .into_iter()
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = match ctx.order.sign(&ctx.vars[i].value.coords) {
                Sign::Negative => -1,
                _ => 1,
            };
            Monomial(e)
        })
        .collect();
    let mut h_min = Vec::with_capacity(thirds.len());
    for third in thirds {
        let (h, _) = unique_min_tx(&third.num_terms, ctx)?;
        elements.push(Monomial(h.clone()));
        for (m, _) in third.den_terms.terms() {
            elements.push(Monomial(ctx.tx_part(&m.0)));
        }
        for (m, _) in third.num_terms.terms() {
            let tx = ctx.tx_part(&m.0);
            elements.push(Monomial(tx.iter().zip(&h).map(|(a, b)| a - b).collect()));
        }
        h_min.push(h);
    }
    elements.sort();
    elements.dedup();
    for e in &elements {
        let v = value_monomial(&e.0, ctx);
        if ctx.order.sign(&v.coords) == Sign::Negative {
            return Err(MonomializeError::InternalInconsistency(format!(
                "H contains an element of negative value {v}"
            )));
        }
    }
    Ok(HSet {
        elements: elements.into_iter().map(|m| m.0).collect(),
        h_min,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartVar {
    pub name: String,
    /// Laurent exponent vector over the variables of the original context.
    pub definition: Vec<i64>,
    pub value: GroupElement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    /// The element, in the original context.
    pub zeta: RationalFunction,
    /// Unit, in the chart context (see [`Chart::context`]).
    pub unit: RationalFunction,
    /// Exponents over the new coordinates `x′`.
    pub exps: Vec<i64>,
}

/// A regular chart: new coordinates, regular parameters and factorizations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chart {
    pub new_vars: Vec<ChartVar>,
    /// Parameters of the base ring that occur in no element; they stay
    /// regular parameters unchanged.
    pub kept_params: Vec<usize>,
    pub regular_params: Vec<String>,
    pub factorizations: Vec<Factorization>,
    pub dimension: usize,
}

impl Chart {
    /// The field `K(x′, t_unused, y)` the units live in. Its value matrix is
    /// the chart's parameter value matrix.
    pub fn context(&self, ctx: &Context) -> Result<Context, MonomializeError> {
        let mut vars: Vec<VarDecl> = self
            .new_vars
            .iter()
            .map(|v| VarDecl::new(v.name.clone(), VarClass::Value, v.value.clone()))
            .collect();
        for &i in &self.kept_params {
            vars.push(ctx.vars[i].clone());
        }
        for i in ctx.indices_of(VarClass::Residue) {
            vars.push(ctx.vars[i].clone());
        }
        Ok(Context::new(ctx.field, vars, ctx.order.clone())?)
    }

    /// Images of the chart variables as Laurent monomials over `ctx`.
    pub fn substitution(&self, ctx: &Context) -> Vec<Vec<i64>> {
        let n = ctx.nvars();
        let unit = |i: usize| {
            let mut e = vec![0; n];
            e[i] = 1;
            e
        };
        let mut images: Vec<Vec<i64>> = self.new_vars.iter().map(|v| v.definition.clone()).collect();
        images.extend(self.kept_params.iter().map(|&i| unit(i)));
        images.extend(ctx.indices_of(VarClass::Residue).into_iter().map(unit));
        images
    }

    /// `unit × Π x′^exps`, expressed back in `ctx`.
    pub fn expand(&self, f: &Factorization, ctx: &Context) -> RationalFunction {
        let images = self.substitution(ctx);
        let unit = f.unit.map_monomials(&images, ctx.nvars());
        let mut mono = vec![0i64; ctx.nvars()];
        for (k, v) in f.exps.iter().zip(&self.new_vars) {
            for (m, d) in mono.iter_mut().zip(&v.definition) {
                *m += k * d;
            }
        }
        unit.mul_laurent_monomial(&mono)
    }

    /// Rewrites an element of `ctx` in the chart variables.
    pub fn pull_back(&self, f: &RationalFunction, ctx: &Context) -> Result<RationalFunction, MonomializeError> {
        let chart_ctx = self.context(ctx)?;
        let images = self.substitution(ctx);
        // exponent matrix of the chart substitution, restricted to its rows'
        // support; invert it over the integers
        let support: Vec<usize> = (0..ctx.nvars())
            .filter(|&j| images.iter().any(|img| img[j] != 0))
            .collect();
        let square: Vec<Vec<i64>> = images.iter().map(|img| support.iter().map(|&j| img[j]).collect()).collect();
        let inv = lattice::unimodular_inverse(&square)?;
        let mut back = vec![vec![0i64; chart_ctx.nvars()]; ctx.nvars()];
        for (row, &j) in inv.iter().zip(&support) {
            back[j] = row.clone();
        }
        if (0..ctx.nvars()).any(|j| !support.contains(&j) && f.num().terms().chain(f.den().terms()).any(|(m, _)| m.0[j] != 0)) {
            return Err(MonomializeError::InternalInconsistency(
                "element uses a variable the chart does not cover".into(),
            ));
        }
        Ok(f.map_monomials(&back, chart_ctx.nvars()))
    }

    /// Writes `f` (an element of `ctx`) as `unit × x′^e` with a unit of the
    /// chart's local ring and `e ≥ 0`, if possible.
    pub fn monomial_form(
        &self,
        f: &RationalFunction,
        ctx: &Context,
    ) -> Result<Option<(RationalFunction, Vec<i64>)>, MonomializeError> {
        let chart_ctx = self.context(ctx)?;
        let g = self.pull_back(f, ctx)?;
        if g.is_zero() {
            return Ok(None);
        }
        let k = self.new_vars.len();
        let num_min = g.num().min_exponents();
        let den_min = g.den().min_exponents();
        let exps: Vec<i64> = (0..k).map(|i| num_min[i] - den_min[i]).collect();
        if exps.iter().any(|&e| e < 0) {
            return Ok(None);
        }
        let mut shift = vec![0i64; chart_ctx.nvars()];
        for (s, e) in shift.iter_mut().zip(&exps) {
            *s = -e;
        }
        let unit = g.mul_laurent_monomial(&shift);
        Ok(valuation::is_unit(&unit, &chart_ctx).then_some((unit, exps)))
    }

    /// Human-readable listing.
    pub fn to_text(&self, ctx: &Context) -> String {
        let names = ctx.names();
        let chart_names = self.context(ctx).map(|c| c.names()).unwrap_or_default();
        let mut out = String::new();
        for v in &self.new_vars {
            let def = RationalFunction::laurent_monomial(ctx.field, &v.definition);
            out.push_str(&format!("{} = {}    [value {}]\n", v.name, def.format(&names), v.value));
        }
        out.push_str(&format!("regular parameters: {}\n", self.regular_params.join(", ")));
        out.push_str(&format!("dimension: {}\n", self.dimension));
        for f in &self.factorizations {
            let mono: Vec<String> = f
                .exps
                .iter()
                .zip(&self.new_vars)
                .filter(|(e, _)| **e != 0)
                .map(|(e, v)| if *e == 1 { v.name.clone() } else { format!("{}^{e}", v.name) })
                .collect();
            let mono = if mono.is_empty() { "1".to_string() } else { mono.join("*") };
            out.push_str(&format!(
                "{} = ({}) * {}\n",
                f.zeta.format(&names),
                f.unit.format(&chart_names),
                mono
            ));
        }
        out
    }
}

/// Computes a chart in which every element of `zs` is a unit times a
/// monomial in the new coordinates.
pub fn monomialize_set(zs: &[RationalFunction], ctx: &Context) -> Result<Chart, MonomializeError> {
    let setting = check_setting(ctx);
    if !setting.ok {
        return Err(MonomializeError::ContextInvalid(setting.violations().join("; ")));
    }
    let thirds = zs
        .iter()
        .enumerate()
        .map(|(i, z)| clear_denominator_indexed(z, ctx, i))
        .collect::<Result<Vec<_>, _>>()?;
    let hset = build_h(&thirds, ctx)?;

    // Perron on the exponent lattice of the active variables, ordered by value
    let active = active_indices(zs, ctx);
    let active_values: Vec<Vec<i64>> = active.iter().map(|&i| ctx.vars[i].value.coords.clone()).collect();
    let sub_order = ctx.order.pullback(&active_values)?;
    let restrict = |e: &[i64]| GroupElement::new(active.iter().map(|&i| e[i]).collect());
    let alphas: Vec<GroupElement> = hset.elements.iter().map(|e| restrict(e)).collect();
    let perron = perron_basis(&alphas, &sub_order)?;

    let n = ctx.nvars();
    let new_vars: Vec<ChartVar> = perron
        .basis
        .iter()
        .enumerate()
        .map(|(j, row)| {
            let mut definition = vec![0i64; n];
            for (&i, &c) in active.iter().zip(row) {
                definition[i] = c;
            }
            let value = value_monomial(&definition, ctx);
            ChartVar {
                name: format!("xp{}", j + 1),
                definition,
                value,
            }
        })
        .collect();
    let kept_params: Vec<usize> = ctx
        .indices_of(VarClass::Param)
        .into_iter()
        .filter(|i| !active.contains(i))
        .collect();
    let k = new_vars.len();
    let mut regular_params: Vec<String> = new_vars.iter().map(|v| v.name.clone()).collect();
    regular_params.extend(kept_params.iter().map(|&i| ctx.vars[i].name.clone()));

    let residues = ctx.indices_of(VarClass::Residue);
    let chart_nvars = k + kept_params.len() + residues.len();
    let express = |tx: &[i64]| -> Result<Vec<i64>, MonomializeError> {
        let c = lattice::solve_left_unimodular(&perron.basis, &restrict(tx).coords)?;
        if c.iter().any(|&x| x < 0) {
            return Err(MonomializeError::InternalInconsistency(format!(
                "monomial {tx:?} is not in the non-negative cone of the new basis"
            )));
        }
        Ok(c)
    };
    // chart exponents: x′ part from `express`, residue part copied
    let to_chart = |xp: &[i64], m: &Monomial| -> Vec<i64> {
        let mut e = vec![0i64; chart_nvars];
        e[..k].copy_from_slice(xp);
        for (slot, &i) in residues.iter().enumerate() {
            e[k + kept_params.len() + slot] = m.0[i];
        }
        e
    };

    let mut factorizations = Vec::with_capacity(zs.len());
    for (third, h) in thirds.iter().zip(&hset.h_min) {
        let alpha = express(h)?;
        let mut num_terms = Vec::new();
        for (m, c) in third.num_terms.terms() {
            let tx = ctx.tx_part(&m.0);
            let rel: Vec<i64> = tx.iter().zip(h).map(|(a, b)| a - b).collect();
            num_terms.push((to_chart(&express(&rel)?, m), c.clone()));
        }
        let mut den_terms = Vec::new();
        for (m, c) in third.den_terms.terms() {
            let tx = ctx.tx_part(&m.0);
            den_terms.push((to_chart(&express(&tx)?, m), c.clone()));
        }
        let num = Polynomial::from_terms(ctx.field, chart_nvars, num_terms)?;
        let den = Polynomial::from_terms(ctx.field, chart_nvars, den_terms)?;
        factorizations.push(Factorization {
            zeta: third.zeta.clone(),
            unit: RationalFunction::new(num, den)?,
            exps: alpha,
        });
    }

    Ok(Chart {
        dimension: k + kept_params.len(),
        new_vars,
        kept_params,
        regular_params,
        factorizations,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructReport {
    pub rho: usize,
    pub tau: usize,
    pub delta: usize,
    pub dimension: usize,
    pub abhyankar_ok: bool,
    pub basis_ok: bool,
    pub factorization_ok: bool,
    pub unit_ok: bool,
    pub dimension_ok: bool,
    pub details: String,
}

impl StructReport {
    pub fn ok(&self) -> bool {
        self.abhyankar_ok && self.basis_ok && self.factorization_ok && self.unit_ok && self.dimension_ok
    }
}

/// Re-verifies every chart invariant from the chart data alone.
pub fn chart_report(chart: &Chart, ctx: &Context) -> StructReport {
    let mut details = Vec::new();
    let setting = check_setting(ctx);
    let abhyankar_ok = setting.ok;
    if !abhyankar_ok {
        details.push(format!("setting: {}", setting.violations().join("; ")));
    }

    // basis: parameter values form a basis, new coordinates positive and
    // consistent with their definitions
    let mut basis_ok = true;
    for v in &chart.new_vars {
        if v.definition.len() != ctx.nvars() {
            basis_ok = false;
            details.push(format!("{}: definition has wrong length", v.name));
            continue;
        }
        if v.definition.iter().enumerate().any(|(i, &e)| e != 0 && !ctx.is_tx(i)) {
            basis_ok = false;
            details.push(format!("{}: definition involves a residue variable", v.name));
        }
        let value = value_monomial(&v.definition, ctx);
        if value != v.value {
            basis_ok = false;
            details.push(format!("{}: recorded value {} differs from {}", v.name, v.value, value));
        }
        if ctx.order.sign(&value.coords) != Sign::Positive {
            basis_ok = false;
            details.push(format!("{}: value {} is not positive", v.name, value));
        }
    }
    let chart_ctx = match chart.context(ctx) {
        Ok(c) => Some(c),
        Err(e) => {
            basis_ok = false;
            details.push(format!("chart context: {e}"));
            None
        }
    };
    if let Some(cc) = &chart_ctx {
        let m = cc.value_matrix();
        if m.len() != ctx.rank() || !lattice::is_unimodular(&m) {
            basis_ok = false;
            details.push("parameter values are not a basis of the value group".into());
        }
    }

    let mut factorization_ok = true;
    let mut unit_ok = chart_ctx.is_some();
    for (i, f) in chart.factorizations.iter().enumerate() {
        if f.exps.len() != chart.new_vars.len() || f.exps.iter().any(|&e| e < 0) {
            factorization_ok = false;
            details.push(format!("element {i}: exponents {:?} are not a non-negative vector over x'", f.exps));
        }
        let Some(cc) = &chart_ctx else { continue };
        if f.unit.nvars() != cc.nvars() {
            factorization_ok = false;
            unit_ok = false;
            details.push(format!("element {i}: unit lives in the wrong field"));
            continue;
        }
        if f.exps.len() == chart.new_vars.len() && !chart.expand(f, ctx).equals(&f.zeta) {
            factorization_ok = false;
            details.push(format!("element {i}: unit x monomial does not reproduce the element"));
        }
        match valuation::residue(&f.unit, cc) {
            Ok(r) if !r.is_zero() => {}
            Ok(_) => {
                unit_ok = false;
                details.push(format!("element {i}: unit has zero residue"));
            }
            Err(_) => {
                unit_ok = false;
                let v = value_ratfun(&f.unit, cc);
                details.push(format!(
                    "element {i}: unit has value {}",
                    match v {
                        Value::Finite(g) => g.to_string(),
                        Value::Infinite => "inf".into(),
                    }
                ));
            }
        }
    }

    let expected_dim = setting.rho + setting.delta;
    let dimension_ok = chart.dimension == expected_dim
        && chart.regular_params.len() == chart.dimension
        && chart.dimension == chart.new_vars.len() + chart.kept_params.len();
    if !dimension_ok {
        details.push(format!(
            "dimension {} differs from rho + delta = {expected_dim}",
            chart.dimension
        ));
    }

    StructReport {
        rho: setting.rho,
        tau: setting.tau,
        delta: setting.delta,
        dimension: chart.dimension,
        abhyankar_ok,
        basis_ok,
        factorization_ok,
        unit_ok,
        dimension_ok,
        details: if details.is_empty() {
            "all clauses verified".into()
        } else {
            details.join("\n")
        },
    }
}

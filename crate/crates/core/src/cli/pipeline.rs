//! Transforms, monomialization and ascent over one working context.
//!
//! Without a base ring the working context is the problem's own. With one,
//! the parameters are replaced by the transformed parameters (and any
//! reclassified residue variables) and every input is pulled back along the
//! transform before it reaches the chart construction.

use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::funcfield::{Context, Polynomial, RationalFunction, VarClass, VarDecl};
use crate::inertial::{
    ascend_chart, check_inertial, collect_constants, inverse_mod, parse_split, split_units, AscendedChart,
    DerivativeInverse, EtalePresentation, ExtElement, Representation, UniPoly,
};
use crate::monomialize::{chart_report, monomialize_set, Chart};
use crate::transforms::{
    establish_nc_v, iter_cap_from_env, FactorizationCert, LocalRingState, TransformOptions,
};
use crate::ordered_group::Sign;
use crate::valuation::{check_setting, value_ratfun};

use super::problem::{
    AscendedFactorJson, AscendedJson, CertJson, ChartJson, ChartVarJson, ContextJson, FactorJson, ParamJson,
    ProblemFile, ReportFile, TransformsJson, Verdict,
};
use super::{verify, CliError};

fn input(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

/// The working context and the images of the problem's variables in it.
#[derive(Debug, Clone)]
pub struct Working {
    pub ctx: Context,
    pub images: Vec<Vec<i64>>,
}

impl Working {
    pub fn identity(ctx: &Context) -> Self {
        let n = ctx.nvars();
        let images = (0..n)
            .map(|i| {
                let mut e = vec![0; n];
                e[i] = 1;
                e
            })
            .collect();
        Self {
            ctx: ctx.clone(),
            images,
        }
    }

    /// Context with the state's params and residues in place of the original
    /// params; the other variables follow unchanged.
    pub fn after(orig: &Context, state: &LocalRingState) -> Result<Self, CliError> {
        let base = state.context(orig)?;
        let pulled = state.pullback_images(orig)?;
        let k = base.nvars();
        let mut vars: Vec<VarDecl> = base.vars.clone();
        let mut images = vec![Vec::new(); orig.nvars()];
        let others: Vec<usize> = (0..orig.nvars())
            .filter(|&i| orig.vars[i].class != VarClass::Param)
            .collect();
        let n = k + others.len();
        for (i, img) in pulled.iter().enumerate() {
            if orig.vars[i].class == VarClass::Param {
                let mut e = img.clone();
                e.resize(n, 0);
                images[i] = e;
            }
        }
        for (pos, &i) in others.iter().enumerate() {
            vars.push(orig.vars[i].clone());
            let mut e = vec![0; n];
            e[k + pos] = 1;
            images[i] = e;
        }
        let ctx = Context::new(orig.field, vars, orig.order.clone()).map_err(input)?;
        Ok(Self { ctx, images })
    }

    pub fn map(&self, f: &RationalFunction) -> RationalFunction {
        f.map_monomials(&self.images, self.ctx.nvars())
    }

    pub fn map_uni(&self, p: &UniPoly) -> UniPoly {
        p.map_coeffs(self.ctx.nvars(), |c| self.map(c))
    }
}

/// Elements of the base field the transforms have to handle: the inputs, or
/// with a presentation every coefficient in the generator.
pub fn base_elements(problem: &ProblemFile, ctx: &Context) -> Result<Vec<RationalFunction>, CliError> {
    let Some(e) = &problem.etale else {
        return problem.z.iter().map(|z| ctx.parse(z).map_err(input)).collect();
    };
    let gen = e.generator.as_str();
    let mut out = Vec::new();
    for z in &problem.z {
        let (num, den) = parse_split(z, ctx, gen).map_err(input)?;
        out.extend(num.coeffs().iter().chain(den.coeffs()).cloned());
    }
    for text in [Some(&e.f), e.g.as_ref(), e.h.as_ref()].into_iter().flatten() {
        out.extend(UniPoly::parse(text, ctx, gen).map_err(input)?.coeffs().iter().cloned());
    }
    Ok(out)
}

/// Coefficients of the elements as polynomials in the params, one per
/// monomial in the other variables, without repetition.
pub fn param_coefficients(elems: &[RationalFunction], ctx: &Context) -> Vec<RationalFunction> {
    let is_param: Vec<bool> = ctx.vars.iter().map(|v| v.class == VarClass::Param).collect();
    let mut out: Vec<RationalFunction> = Vec::new();
    for f in elems.iter().filter(|f| !f.is_zero()) {
        for p in [f.num(), f.den()] {
            let mut groups: BTreeMap<Vec<i64>, Vec<(Vec<i64>, BigRational)>> = BTreeMap::new();
            for (m, c) in p.terms() {
                let key = m.0.iter().zip(&is_param).map(|(&e, &t)| if t { 0 } else { e }).collect();
                let exps = m.0.iter().zip(&is_param).map(|(&e, &t)| if t { e } else { 0 }).collect();
                groups.entry(key).or_default().push((exps, c.clone()));
            }
            for terms in groups.into_values() {
                let c = RationalFunction::from_poly(
                    Polynomial::from_terms(ctx.field, ctx.nvars(), terms).expect("coefficients of a valid polynomial"),
                );
                if !out.iter().any(|d| d.equals(&c)) {
                    out.push(c);
                }
            }
        }
    }
    out
}

pub fn run_transforms(
    problem: &ProblemFile,
    ctx: &Context,
) -> Result<(LocalRingState, Vec<FactorizationCert>), CliError> {
    let state = LocalRingState::new(ctx)?;
    let coeffs = param_coefficients(&base_elements(problem, ctx)?, ctx);
    let opts = TransformOptions {
        cap: iter_cap_from_env(),
        allow_reclassify: true,
    };
    Ok(establish_nc_v(&state, &coeffs, ctx, opts)?)
}

/// The presentation, inputs and representations, moved to the working
/// context.
#[derive(Debug, Clone)]
pub struct MappedEtale {
    pub pres: EtalePresentation,
    pub zs: Vec<ExtElement>,
    pub reps: Vec<(usize, Representation)>,
}

pub fn map_etale(problem: &ProblemFile, orig: &Context, w: &Working) -> Result<MappedEtale, CliError> {
    let e = problem
        .etale
        .as_ref()
        .ok_or_else(|| CliError::Input("problem has no etale presentation".into()))?;
    let gen = e.generator.as_str();
    let uni = |text: &str| -> Result<UniPoly, CliError> { Ok(w.map_uni(&UniPoly::parse(text, orig, gen).map_err(input)?)) };
    let di = match (&e.g, &e.h) {
        (Some(g), Some(h)) => Some(DerivativeInverse {
            g: uni(g)?,
            h: uni(h)?,
            s: e.s.unwrap_or(1),
        }),
        (None, None) if e.s.is_none() => None,
        _ => return Err(CliError::Input("etale: g and h must be given together".into())),
    };
    let residue = w.map(&orig.parse(&e.residue).map_err(input)?);
    let pres = EtalePresentation::new(gen, uni(&e.f)?, di, residue, &w.ctx).map_err(input)?;
    let zs = problem
        .z
        .iter()
        .map(|z| {
            let (num, den) = parse_split(z, orig, gen).map_err(input)?;
            let inv = inverse_mod(&w.map_uni(&den), &pres.f)
                .ok_or_else(|| CliError::Input(format!("denominator of `{z}` is not invertible modulo f")))?;
            Ok(pres.element(&w.map_uni(&num).mul(&inv)))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let reps = e
        .reps
        .iter()
        .map(|r| {
            if r.index >= problem.z.len() {
                return Err(CliError::Input(format!("representation index {} out of range", r.index)));
            }
            Ok((
                r.index,
                Representation {
                    a: uni(&r.a)?,
                    b: uni(&r.b)?,
                    k: r.k,
                },
            ))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(MappedEtale { pres, zs, reps })
}

/// Everything the base chart of an ascent has to factorize.
pub fn required_constants(m: &MappedEtale, ctx: &Context) -> Result<Vec<RationalFunction>, CliError> {
    let split = split_units(&m.zs, &m.pres, ctx)?;
    let chosen: Vec<Representation> = split
        .unit_map
        .iter()
        .enumerate()
        .map(|(i, us)| match m.reps.iter().find(|(j, _)| *j == i) {
            Some((_, r)) => r.clone(),
            None => Representation::trivial(&us.unit, &m.pres),
        })
        .collect();
    let mut out = collect_constants(&m.pres, &chosen, ctx)?;
    for p in split.primes {
        if !out.iter().any(|d| d.equals(&p)) {
            out.push(p);
        }
    }
    Ok(out)
}

pub fn transforms_json(
    state: &LocalRingState,
    certs: &[FactorizationCert],
    orig: &Context,
) -> Result<TransformsJson, CliError> {
    let state_ctx = state.context(orig)?;
    let param = |p: &crate::transforms::ParamDef| ParamJson {
        name: p.name.clone(),
        definition: p.definition.clone(),
        value: p.value.coords.clone(),
    };
    Ok(TransformsJson {
        history: state.history.clone(),
        params: state.params.iter().map(param).collect(),
        residues: state.residues.iter().map(param).collect(),
        certificates: certs
            .iter()
            .map(|c| CertJson {
                element: orig.format(&c.element),
                unit: state_ctx.format(&c.unit),
                exps: c.exps.clone(),
            })
            .collect(),
    })
}

pub fn chart_json(chart: &Chart, ctx: &Context) -> Result<ChartJson, CliError> {
    let names = ctx.names();
    let chart_ctx = chart.context(ctx)?;
    Ok(ChartJson {
        new_vars: chart
            .new_vars
            .iter()
            .map(|v| ChartVarJson {
                name: v.name.clone(),
                definition: RationalFunction::laurent_monomial(ctx.field, &v.definition).format(&names),
                exponents: v.definition.clone(),
                value: v.value.coords.clone(),
            })
            .collect(),
        kept_params: chart.kept_params.iter().map(|&i| ctx.vars[i].name.clone()).collect(),
        regular_params: chart.regular_params.clone(),
        dimension: chart.dimension,
        factorizations: chart
            .factorizations
            .iter()
            .map(|f| FactorJson {
                zeta: ctx.format(&f.zeta),
                unit: chart_ctx.format(&f.unit),
                exps: f.exps.clone(),
            })
            .collect(),
    })
}

pub fn ascended_json(asc: &AscendedChart, ctx: &Context) -> Result<AscendedJson, CliError> {
    let names = ctx.names();
    let chart_ctx = asc.base.context(ctx)?;
    let chart_names = chart_ctx.names();
    let gen = asc.presentation.generator.as_str();
    Ok(AscendedJson {
        dimension: asc.dimension,
        regular_params: asc.regular_params.clone(),
        factorizations: asc
            .factorizations
            .iter()
            .map(|f| AscendedFactorJson {
                zeta: f.zeta.format(&names, gen),
                zeta_coeffs: f.zeta.coeffs.iter().map(|c| ctx.format(c)).collect(),
                unit: f.unit.format(&chart_names, gen),
                unit_coeffs: f.unit.coeffs.iter().map(|c| chart_ctx.format(c)).collect(),
                exps: f.exps.clone(),
            })
            .collect(),
    })
}

/// Runs `command` on a problem. Input errors are returned; mathematical
/// failures are recorded in the report.
pub fn emit(command: &str, problem: &ProblemFile) -> Result<ReportFile, CliError> {
    let orig = problem.context()?;
    match command {
        "check" | "monomialize" => {}
        "transform" if problem.base_ring.is_none() => {
            return Err(CliError::Input("transform needs a base_ring".into()))
        }
        "ascend" if problem.etale.is_none() => return Err(CliError::Input("ascend needs an etale presentation".into())),
        "transform" | "ascend" => {}
        other => return Err(CliError::Input(format!("unknown command `{other}`"))),
    }
    if problem.base_ring.is_some() && orig.indices_of(VarClass::Param).len() > 2 {
        return Err(CliError::Input("base rings of dimension above 2 are not supported".into()));
    }
    base_elements(problem, &orig)?;
    let mut report = ReportFile {
        command: command.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        problem: problem.clone(),
        error: None,
        setting: None,
        transforms: None,
        working_context: None,
        inertial: None,
        chart: None,
        structure: None,
        ascended: None,
        verdict: Verdict {
            ok: false,
            clauses: vec![],
        },
    };
    match build(command, problem, &orig, &mut report) {
        Ok(()) => {}
        Err(CliError::Math(m)) => report.error = Some(m),
        Err(e) => return Err(e),
    }
    report.verdict = verify::compute_verdict(&report);
    Ok(report)
}

fn build(command: &str, problem: &ProblemFile, orig: &Context, report: &mut ReportFile) -> Result<(), CliError> {
    let w = match &problem.base_ring {
        Some(_) => {
            let (state, certs) = run_transforms(problem, orig)?;
            report.transforms = Some(transforms_json(&state, &certs, orig)?);
            Working::after(orig, &state)?
        }
        None => Working::identity(orig),
    };
    report.working_context = Some(ContextJson::of(&w.ctx, &problem.order));
    report.setting = Some(check_setting(&w.ctx));
    match command {
        "check" | "transform" => {
            if command == "check" && problem.etale.is_some() {
                let m = map_etale(problem, orig, &w)?;
                report.inertial = Some(check_inertial(&m.pres, &w.ctx));
            }
        }
        "monomialize" => {
            let zs = problem
                .z
                .iter()
                .map(|z| Ok(w.map(&orig.parse(z).map_err(input)?)))
                .collect::<Result<Vec<_>, CliError>>()?;
            let chart = monomialize_set(&zs, &w.ctx)?;
            report.chart = Some(chart_json(&chart, &w.ctx)?);
            report.structure = Some(chart_report(&chart, &w.ctx));
        }
        "ascend" => {
            let m = map_etale(problem, orig, &w)?;
            let inertial = check_inertial(&m.pres, &w.ctx);
            let passed = inertial.ok;
            let violations = inertial.violations().join("; ");
            report.inertial = Some(inertial);
            if !passed {
                return Err(CliError::Math(format!("InertialCheckFailed: {violations}")));
            }
            let required = required_constants(&m, &w.ctx)?;
            for c in &required {
                if value_ratfun(c, &w.ctx).sign(&w.ctx.order) == Sign::Negative {
                    return Err(CliError::Math(format!(
                        "NegativeValue: constant `{}` needed by the ascent has negative value; \
                         give a representation with integral coefficients",
                        w.ctx.format(c)
                    )));
                }
            }
            let base = monomialize_set(&required, &w.ctx)?;
            report.chart = Some(chart_json(&base, &w.ctx)?);
            report.structure = Some(chart_report(&base, &w.ctx));
            let asc = ascend_chart(&base, &m.pres, &m.zs, &m.reps, &w.ctx)?;
            report.ascended = Some(ascended_json(&asc, &w.ctx)?);
        }
        _ => unreachable!("command validated by emit"),
    }
    Ok(())
}

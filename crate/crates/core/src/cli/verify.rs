//! Verdicts recomputed from report data alone.
//!
//! `emit` and `verify` both call [`compute_verdict`], so a freshly written
//! report and its later re-verification agree clause by clause.

use serde::{Deserialize, Serialize};

use crate::funcfield::Context;
use crate::inertial::{check_inertial, verify_ascended, AscendedChart, AscendedFactorization, ExtElement};
use crate::monomialize::{chart_report, Chart, ChartVar, Factorization};
use crate::ordered_group::GroupElement;
use crate::transforms::{monoidal_transform, verify_cert, FactorizationCert, LocalRingState, ParamDef};
use crate::valuation::{check_setting, Clause};

use super::pipeline::{base_elements, map_etale, param_coefficients, Working};
use super::problem::{AscendedJson, ChartJson, ContextJson, ReportFile, TransformsJson, Verdict};
use super::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOutcome {
    pub command: String,
    pub report_command: String,
    /// Recomputed verdict.
    pub ok: bool,
    /// The recorded verdict equals the recomputed one.
    pub agrees: bool,
    pub recorded: Verdict,
    pub clauses: Vec<Clause>,
}

pub fn verify_report(report: &ReportFile) -> VerifyOutcome {
    let v = compute_verdict(report);
    VerifyOutcome {
        command: "verify".into(),
        report_command: report.command.clone(),
        ok: v.ok,
        agrees: v == report.verdict,
        recorded: report.verdict.clone(),
        clauses: v.clauses,
    }
}

pub fn compute_verdict(report: &ReportFile) -> Verdict {
    let mut clauses = Vec::new();
    if let Some(e) = &report.error {
        clauses.push(Clause::new("error", false, e.clone()));
    } else if let Err(e) = check_all(report, &mut clauses) {
        clauses.push(Clause::new("rebuild", false, e.to_string()));
    }
    Verdict {
        ok: !clauses.is_empty() && clauses.iter().all(|c| c.ok),
        clauses,
    }
}

fn bad(what: &str) -> CliError {
    CliError::Input(format!("report is missing `{what}`"))
}

fn check_all(r: &ReportFile, clauses: &mut Vec<Clause>) -> Result<(), CliError> {
    let problem = &r.problem;
    let orig = problem.context()?;
    let command = r.command.as_str();
    if !matches!(command, "check" | "transform" | "monomialize" | "ascend") {
        return Err(CliError::Input(format!("unknown command `{command}`")));
    }

    let w = match &problem.base_ring {
        Some(_) => {
            let tj = r.transforms.as_ref().ok_or_else(|| bad("transforms"))?;
            let state = check_transforms(tj, problem, &orig, clauses)?;
            Working::after(&orig, &state)?
        }
        None => Working::identity(&orig),
    };
    let wj = r.working_context.as_ref().ok_or_else(|| bad("working_context"))?;
    let expected = ContextJson::of(&w.ctx, &problem.order);
    clauses.push(Clause::new(
        "working_context",
        *wj == expected,
        if *wj == expected { "matches the transforms" } else { "differs from the one the transforms give" },
    ));

    let setting = check_setting(&w.ctx);
    clauses.push(Clause::new("setting", setting.ok, setting.violations().join("; ")));
    let recorded = r.setting.as_ref() == Some(&setting);
    clauses.push(Clause::new("setting.recorded", recorded, ""));

    let wants_inertial = problem.etale.is_some() && matches!(command, "check" | "ascend");
    let mapped = if wants_inertial {
        let m = map_etale(problem, &orig, &w)?;
        let rep = check_inertial(&m.pres, &w.ctx);
        clauses.push(Clause::new("inertial", rep.ok, rep.violations().join("; ")));
        clauses.push(Clause::new("inertial.recorded", r.inertial.as_ref() == Some(&rep), ""));
        Some(m)
    } else {
        None
    };

    if !matches!(command, "monomialize" | "ascend") {
        return Ok(());
    }
    let cj = r.chart.as_ref().ok_or_else(|| bad("chart"))?;
    let chart = rebuild_chart(cj, &w.ctx)?;
    let structure = chart_report(&chart, &w.ctx);
    clauses.push(Clause::new("structure", structure.ok(), structure.details.clone()));
    clauses.push(Clause::new("structure.recorded", r.structure.as_ref() == Some(&structure), ""));

    if command == "monomialize" {
        let zs = problem
            .z
            .iter()
            .map(|z| Ok(w.map(&orig.parse(z)?)))
            .collect::<Result<Vec<_>, CliError>>()?;
        let covers = zs.len() == chart.factorizations.len()
            && zs.iter().zip(&chart.factorizations).all(|(z, f)| z.equals(&f.zeta));
        clauses.push(Clause::new("covers_problem", covers, format!("{} elements", zs.len())));
        return Ok(());
    }

    let m = mapped.expect("ascend has a presentation");
    let aj = r.ascended.as_ref().ok_or_else(|| bad("ascended"))?;
    let asc = rebuild_ascended(aj, &chart, m.pres.clone(), &w.ctx)?;
    let covers = m.zs.len() == asc.factorizations.len()
        && m.zs.iter().zip(&asc.factorizations).all(|(z, f)| z.equals(&f.zeta));
    clauses.push(Clause::new("covers_problem", covers, format!("{} elements", m.zs.len())));
    let rep = verify_ascended(&asc, &w.ctx);
    clauses.extend(rep.clauses.into_iter().map(|c| Clause {
        name: format!("ascended.{}", c.name),
        ..c
    }));
    Ok(())
}

fn param_def(p: &super::problem::ParamJson) -> ParamDef {
    ParamDef {
        name: p.name.clone(),
        definition: p.definition.clone(),
        value: GroupElement::new(p.value.clone()),
    }
}

fn check_transforms(
    tj: &TransformsJson,
    problem: &super::problem::ProblemFile,
    orig: &Context,
    clauses: &mut Vec<Clause>,
) -> Result<LocalRingState, CliError> {
    let state = LocalRingState {
        params: tj.params.iter().map(param_def).collect(),
        residues: tj.residues.iter().map(param_def).collect(),
        history: tj.history.clone(),
        dim: tj.params.len(),
    };
    let n = orig.indices_of(crate::funcfield::VarClass::Param).len();
    let square = state.params.len() + state.residues.len() == n
        && state.definitions().iter().all(|d| d.len() == n)
        && state.params.iter().chain(&state.residues).all(|p| p.value.rank() == orig.rank());
    if !square {
        return Err(CliError::Input("transformed parameters do not match the base ring".into()));
    }

    let mut replay = LocalRingState::new(orig)?;
    let mut replay_ok = true;
    for rec in &state.history {
        match monoidal_transform(&replay, &rec.center, orig) {
            Ok(next) => replay = next,
            Err(_) => {
                replay_ok = false;
                break;
            }
        }
    }
    let replay_ok = replay_ok && replay == state;
    clauses.push(Clause::new(
        "transforms.replay",
        replay_ok,
        format!("{} centers", state.history.len()),
    ));
    if !replay_ok {
        return Ok(state);
    }
    clauses.push(Clause::new(
        "transforms.independent",
        state.values_independent(),
        "parameter values",
    ));

    let coeffs = param_coefficients(&base_elements(problem, orig)?, orig);
    let state_ctx = state.context(orig)?;
    let same = coeffs.len() == tj.certificates.len();
    clauses.push(Clause::new(
        "transforms.coefficients",
        same,
        format!("{} expected, {} certified", coeffs.len(), tj.certificates.len()),
    ));
    for (i, cj) in tj.certificates.iter().enumerate() {
        let cert = FactorizationCert {
            element: orig.parse(&cj.element)?,
            unit: state_ctx.parse(&cj.unit)?,
            exps: cj.exps.clone(),
        };
        let matches = coeffs.get(i).is_some_and(|c| c.equals(&cert.element));
        let ok = matches && verify_cert(&cert, &state, orig);
        clauses.push(Clause::new(&format!("transforms.cert[{i}]"), ok, cj.element.clone()));
    }
    Ok(state)
}

/// A chart from its serialized form, over the working context `ctx`.
pub fn rebuild_chart(cj: &ChartJson, ctx: &Context) -> Result<Chart, CliError> {
    let mut new_vars = Vec::with_capacity(cj.new_vars.len());
    for v in &cj.new_vars {
        if v.exponents.len() != ctx.nvars() || v.value.len() != ctx.rank() {
            return Err(CliError::Input(format!("chart variable `{}` has the wrong shape", v.name)));
        }
        new_vars.push(ChartVar {
            name: v.name.clone(),
            definition: v.exponents.clone(),
            value: GroupElement::new(v.value.clone()),
        });
    }
    let kept_params = cj
        .kept_params
        .iter()
        .map(|n| ctx.index_of(n).ok_or_else(|| CliError::Input(format!("unknown kept parameter `{n}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    let mut chart = Chart {
        new_vars,
        kept_params,
        regular_params: cj.regular_params.clone(),
        factorizations: vec![],
        dimension: cj.dimension,
    };
    let chart_ctx = chart.context(ctx)?;
    for f in &cj.factorizations {
        chart.factorizations.push(Factorization {
            zeta: ctx.parse(&f.zeta)?,
            unit: chart_ctx.parse(&f.unit)?,
            exps: f.exps.clone(),
        });
    }
    Ok(chart)
}

fn rebuild_ascended(
    aj: &AscendedJson,
    base: &Chart,
    presentation: crate::inertial::EtalePresentation,
    ctx: &Context,
) -> Result<AscendedChart, CliError> {
    let chart_ctx = base.context(ctx)?;
    let parse_all = |texts: &[String], c: &Context| -> Result<ExtElement, CliError> {
        Ok(ExtElement {
            coeffs: texts.iter().map(|t| c.parse(t)).collect::<Result<_, _>>()?,
        })
    };
    let factorizations = aj
        .factorizations
        .iter()
        .map(|f| {
            Ok(AscendedFactorization {
                zeta: parse_all(&f.zeta_coeffs, ctx)?,
                unit: parse_all(&f.unit_coeffs, &chart_ctx)?,
                exps: f.exps.clone(),
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(AscendedChart {
        base: base.clone(),
        presentation,
        factorizations,
        regular_params: aj.regular_params.clone(),
        dimension: aj.dimension,
    })
}

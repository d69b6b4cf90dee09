//! Problem and report files.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::funcfield::{Context, FieldSpec, VarClass, VarDecl};
use crate::inertial::InertialReport;
use crate::monomialize::StructReport;
use crate::ordered_group::{GroupElement, OrderSpec, QuadraticNumber};
use crate::transforms::CenterRecord;
use crate::valuation::{Clause, SettingReport};

use super::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderJson {
    pub d: u64,
    /// Each entry is `[a_num, a_den, b_num, b_den]` for `a + b√d`.
    pub forms: Vec<Vec<[i64; 4]>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VarJson {
    pub name: String,
    pub class: VarClass,
    pub value: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseRingJson {
    pub dim: usize,
    pub params: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepJson {
    /// Index into `Z` of the element whose unit part is represented.
    pub index: usize,
    pub a: String,
    pub b: String,
    #[serde(default)]
    pub k: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EtaleJson {
    #[serde(default = "default_generator")]
    pub generator: String,
    pub f: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<u32>,
    pub residue: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reps: Vec<RepJson>,
}

fn default_generator() -> String {
    "eta".into()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub field: u32,
    pub order: OrderJson,
    pub variables: Vec<VarJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_ring: Option<BaseRingJson>,
    #[serde(rename = "Z")]
    pub z: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub etale: Option<EtaleJson>,
}

/// A field, an order and variables; the working context of a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContextJson {
    pub field: u32,
    pub order: OrderJson,
    pub variables: Vec<VarJson>,
}

fn rat(n: i64, d: i64) -> Result<BigRational, CliError> {
    if d == 0 {
        return Err(CliError::Input("zero denominator in order form".into()));
    }
    Ok(BigRational::new(n.into(), d.into()))
}

pub fn build_order(o: &OrderJson) -> Result<OrderSpec, CliError> {
    let forms = o
        .forms
        .iter()
        .map(|row| {
            row.iter()
                .map(|&[an, ad, bn, bd]| Ok(QuadraticNumber::new(rat(an, ad)?, rat(bn, bd)?, o.d)?))
                .collect::<Result<Vec<_>, CliError>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(OrderSpec::new(o.d, forms)?)
}

pub fn build_context(field: u32, order: &OrderJson, vars: &[VarJson]) -> Result<Context, CliError> {
    let field = FieldSpec::new(field)?;
    let order = build_order(order)?;
    let vars = vars
        .iter()
        .map(|v| VarDecl::new(v.name.clone(), v.class, GroupElement::new(v.value.clone())))
        .collect();
    Ok(Context::new(field, vars, order)?)
}

impl ProblemFile {
    pub fn context(&self) -> Result<Context, CliError> {
        let ctx = build_context(self.field, &self.order, &self.variables)?;
        if let Some(b) = &self.base_ring {
            let declared = ctx.indices_of(VarClass::Param);
            let names: Vec<String> = declared.iter().map(|&i| ctx.vars[i].name.clone()).collect();
            if b.params != names || b.dim != names.len() {
                return Err(CliError::Input(format!(
                    "base_ring must list exactly the param variables {names:?} with dim {}",
                    names.len()
                )));
            }
        }
        Ok(ctx)
    }
}

impl ContextJson {
    pub fn of(ctx: &Context, order: &OrderJson) -> Self {
        Self {
            field: ctx.field.characteristic(),
            order: order.clone(),
            variables: ctx
                .vars
                .iter()
                .map(|v| VarJson {
                    name: v.name.clone(),
                    class: v.class,
                    value: v.value.coords.clone(),
                })
                .collect(),
        }
    }

    pub fn context(&self) -> Result<Context, CliError> {
        build_context(self.field, &self.order, &self.variables)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamJson {
    pub name: String,
    /// Exponents over the original params.
    pub definition: Vec<i64>,
    pub value: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertJson {
    pub element: String,
    /// Over the transformed params and reclassified residues.
    pub unit: String,
    pub exps: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformsJson {
    pub history: Vec<CenterRecord>,
    pub params: Vec<ParamJson>,
    pub residues: Vec<ParamJson>,
    pub certificates: Vec<CertJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartVarJson {
    pub name: String,
    /// Human-readable form of `exponents`.
    pub definition: String,
    /// Laurent exponents over the working context.
    pub exponents: Vec<i64>,
    pub value: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorJson {
    pub zeta: String,
    pub unit: String,
    pub exps: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartJson {
    pub new_vars: Vec<ChartVarJson>,
    pub kept_params: Vec<String>,
    pub regular_params: Vec<String>,
    pub dimension: usize,
    pub factorizations: Vec<FactorJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AscendedJson {
    pub dimension: usize,
    pub regular_params: Vec<String>,
    pub factorizations: Vec<AscendedFactorJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AscendedFactorJson {
    pub zeta: String,
    /// Coefficients of `1, η, η², …` over the working context.
    pub zeta_coeffs: Vec<String>,
    pub unit: String,
    /// Coefficients over the base chart's variables.
    pub unit_coeffs: Vec<String>,
    pub exps: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Verdict {
    pub ok: bool,
    pub clauses: Vec<Clause>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportFile {
    pub command: String,
    pub version: String,
    pub problem: ProblemFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub setting: Option<SettingReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transforms: Option<TransformsJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub working_context: Option<ContextJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inertial: Option<InertialReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chart: Option<ChartJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ascended: Option<AscendedJson>,
    pub verdict: Verdict,
}

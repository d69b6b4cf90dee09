//! Plain-text rendering of reports.

use std::fmt::Write;

use super::problem::ReportFile;
use super::verify::VerifyOutcome;

fn verdict_line(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn monomial(exps: &[i64], names: &[&str]) -> String {
    let parts: Vec<String> = exps
        .iter()
        .zip(names)
        .filter(|(e, _)| **e != 0)
        .map(|(e, n)| if *e == 1 { n.to_string() } else { format!("{n}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

pub fn render_report(r: &ReportFile) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "valuniform {} {}", r.version, r.command);
    let _ = writeln!(out, "verdict: {}", verdict_line(r.verdict.ok));
    if let Some(e) = &r.error {
        let _ = writeln!(out, "error: {e}");
    }
    for c in r.verdict.clauses.iter().filter(|c| !c.ok) {
        let _ = writeln!(out, "  failed {}: {}", c.name, c.detail);
    }
    if let Some(t) = &r.transforms {
        let _ = writeln!(out, "transforms: {} centers", t.history.len());
        for h in &t.history {
            let _ = writeln!(
                out,
                "  center ({}) pivot {}{}",
                h.center.join(", "),
                h.pivot.as_deref().unwrap_or("-"),
                if h.reclassified.is_empty() {
                    String::new()
                } else {
                    format!(", reclassified {}", h.reclassified.join(", "))
                }
            );
        }
        for p in &t.params {
            let _ = writeln!(out, "  param {} {:?} value {:?}", p.name, p.definition, p.value);
        }
        for p in &t.residues {
            let _ = writeln!(out, "  residue {} {:?}", p.name, p.definition);
        }
    }
    if let Some(s) = &r.setting {
        let _ = writeln!(
            out,
            "setting: rho {} tau {} delta {} {}",
            s.rho,
            s.tau,
            s.delta,
            if s.ok { "ok" } else { "invalid" }
        );
    }
    if let Some(i) = &r.inertial {
        let _ = writeln!(out, "inertial: {}", if i.ok { "ok" } else { "failed" });
    }
    if let Some(c) = &r.chart {
        let names: Vec<&str> = c.new_vars.iter().map(|v| v.name.as_str()).collect();
        let _ = writeln!(out, "chart:");
        for v in &c.new_vars {
            let _ = writeln!(out, "  {} = {}    [value {:?}]", v.name, v.definition, v.value);
        }
        let _ = writeln!(out, "  regular parameters: {}", c.regular_params.join(", "));
        let _ = writeln!(out, "  dimension: {}", c.dimension);
        for f in &c.factorizations {
            let _ = writeln!(out, "  {} = ({}) * {}", f.zeta, f.unit, monomial(&f.exps, &names));
        }
        if let Some(a) = &r.ascended {
            let _ = writeln!(out, "ascended:");
            for f in &a.factorizations {
                let _ = writeln!(out, "  {} = [{}] * {}", f.zeta, f.unit, monomial(&f.exps, &names));
            }
        }
    }
    out
}

pub fn render_verify(v: &VerifyOutcome) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "verify {}: {}", v.report_command, verdict_line(v.ok && v.agrees));
    if !v.agrees {
        let _ = writeln!(out, "  recorded verdict differs from the recomputed one");
    }
    for c in &v.clauses {
        let _ = writeln!(out, "  [{}] {} {}", if c.ok { "ok" } else { "FAIL" }, c.name, c.detail);
    }
    out
}

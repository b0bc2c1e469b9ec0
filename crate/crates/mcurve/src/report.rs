//! Serializable analysis reports: a stable JSON schema plus the
//! human-readable text rendering used by the CLI.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::analyze::{Analysis, InputKind};
use crate::criteria::Applicability;
use crate::global::freeness_identity_holds;

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct Report {
    pub curve: CurveMeta,
    pub global: GlobalReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub arrangement: Option<ArrangementReport>,
    pub singularities: Vec<SingularityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub local_tau_sum: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub local_complete: Option<bool>,
    pub verdicts: VerdictsReport,
    pub engine: EngineReport,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct CurveMeta {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub field: String,
    pub degree: u32,
    pub input: String,
    pub reduced: bool,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct GlobalReport {
    pub tau: u64,
    pub mdr: u32,
    pub ar_kernel_dim: usize,
    pub free: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponents: Option<(u32, u32)>,
    pub hilbert_trace: Vec<(u32, u64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_syzygy: Option<[String; 3]>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct ArrangementReport {
    pub lines: usize,
    /// (k, t_k) pairs
    pub incidences: Vec<(usize, usize)>,
    pub naive_count_ok: bool,
    pub cm_check: String,
    pub tau_combinatorial: u64,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct SingularityReport {
    pub point: String,
    #[serde(rename = "type")]
    pub stype: String,
    pub mu: u64,
    pub tau: u64,
    pub mult: u32,
    pub tangent_cone: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lct: Option<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct VerdictValue {
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl VerdictValue {
    fn from_bool(v: &Applicability<bool>) -> Self {
        match v {
            Applicability::Applies(b) => VerdictValue {
                status: b.to_string(),
                reason: None,
            },
            Applicability::NotApplicable(r) => VerdictValue {
                status: "not_applicable".to_string(),
                reason: Some(r.to_string()),
            },
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct VerdictsReport {
    pub maximizing: VerdictValue,
    pub nonexistence: VerdictValue,
    pub m_curve: VerdictValue,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub arnold_exponent: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ds_bound_ok: Option<bool>,
    pub notes: Vec<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct EngineReport {
    pub rank_mode: String,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn from_analysis(a: &Analysis) -> Report {
        // the reported free flag must match the identity recomputed from
        // the reported tau and mdr
        assert_eq!(
            a.global.free,
            freeness_identity_holds(a.global.degree, a.global.mdr, a.global.tau),
            "free flag inconsistent with tau and mdr"
        );
        let input = match &a.input_kind {
            InputKind::Polynomial => "polynomial".to_string(),
            InputKind::Lines(n) => format!("{n} lines"),
        };
        Report {
            curve: CurveMeta {
                name: a.name.clone(),
                field: a.field.to_string(),
                degree: a.global.degree,
                input,
                reduced: a.reduced,
            },
            global: GlobalReport {
                tau: a.global.tau,
                mdr: a.global.mdr,
                ar_kernel_dim: a.global.ar_kernel_dim,
                free: a.global.free,
                exponents: a.global.exponents,
                hilbert_trace: a.global.hilbert_trace.clone(),
                witness_syzygy: a
                    .global
                    .witness_syzygy
                    .as_ref()
                    .map(|s| [s[0].to_string(), s[1].to_string(), s[2].to_string()]),
            },
            arrangement: a.arrangement.as_ref().map(|d| ArrangementReport {
                lines: d.wc.d,
                incidences: d.wc.tk.iter().map(|(&k, &c)| (k, c)).collect(),
                naive_count_ok: d.naive_count_ok,
                cm_check: d.cm.to_string(),
                tau_combinatorial: d.tau_combinatorial,
            }),
            singularities: a
                .records
                .iter()
                .map(|r| SingularityReport {
                    point: r.point.to_string(),
                    stype: r.germ.stype.to_string(),
                    mu: r.germ.mu,
                    tau: r.germ.tau,
                    mult: r.germ.mult,
                    tangent_cone: r.germ.tc_pattern.clone(),
                    lct: r.germ.lct.as_ref().map(|q| q.to_string()),
                })
                .collect(),
            local_tau_sum: a.local_tau_sum,
            local_complete: a.local_complete,
            verdicts: VerdictsReport {
                maximizing: VerdictValue::from_bool(&a.verdicts.maximizing),
                nonexistence: match &a.verdicts.nonexistence {
                    Applicability::Applies(v) => VerdictValue {
                        status: v.to_string(),
                        reason: None,
                    },
                    Applicability::NotApplicable(r) => VerdictValue {
                        status: "not_applicable".to_string(),
                        reason: Some(r.to_string()),
                    },
                },
                m_curve: VerdictValue::from_bool(&a.verdicts.m_curve),
                arnold_exponent: a.verdicts.arnold_exponent.as_ref().map(|q| q.to_string()),
                ds_bound_ok: a.verdicts.ds_bound_ok,
                notes: a.verdicts.notes.clone(),
            },
            engine: EngineReport {
                rank_mode: a.rank_mode.describe(),
                elapsed_ms: a.elapsed_ms,
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Human-readable rendering for the terminal.
pub fn render_text(a: &Analysis) -> String {
    let mut out = String::new();
    let name = a.name.as_deref().unwrap_or("curve");
    let input = match &a.input_kind {
        InputKind::Polynomial => "polynomial".to_string(),
        InputKind::Lines(n) => format!("{n} lines"),
    };
    let _ = writeln!(out, "{name}: degree {} over {} ({input})", a.global.degree, a.field);
    let _ = writeln!(out, "  reduced: yes (probabilistic squarefree check)");
    let free = if a.global.free {
        match a.global.exponents {
            Some((d1, d2)) => format!("yes, exponents ({d1},{d2})"),
            None => "yes".to_string(),
        }
    } else {
        "no".to_string()
    };
    let _ = writeln!(
        out,
        "  tau(C) = {}   mdr = {} (relation space dim {})   free: {free}",
        a.global.tau, a.global.mdr, a.global.ar_kernel_dim
    );
    let trace: Vec<String> = a
        .global
        .hilbert_trace
        .iter()
        .map(|(k, v)| format!("k={k} -> {v}"))
        .collect();
    let _ = writeln!(out, "  hilbert trace: {}", trace.join(", "));
    if let Some(arr) = &a.arrangement {
        let _ = writeln!(
            out,
            "  lattice: {}   naive count: {}   screening identity: {}   combinatorial tau = {}",
            arr.wc,
            if arr.naive_count_ok { "holds" } else { "FAILS" },
            arr.cm,
            arr.tau_combinatorial
        );
    }
    if a.records.is_empty() {
        if a.global.tau == 0 {
            let _ = writeln!(out, "  singularities: none (smooth curve)");
        } else {
            let _ = writeln!(out, "  singularities: no point data supplied");
        }
    } else {
        let complete = match a.local_complete {
            Some(true) => format!(" = tau(C), complete"),
            Some(false) => format!(" < tau(C) = {}, PARTIAL", a.global.tau),
            None => String::new(),
        };
        let _ = writeln!(
            out,
            "  singularities ({} points, sum tau_p = {}{complete}):",
            a.records.len(),
            a.local_tau_sum.unwrap_or(0)
        );
        for r in &a.records {
            let lct = r
                .germ
                .lct
                .as_ref()
                .map(|q| format!("  lct={q}"))
                .unwrap_or_default();
            let _ = writeln!(
                out,
                "    {:24} {:6} mu={} tau={} mult={} tc={:?}{lct}",
                r.point.to_string(),
                r.germ.stype.to_string(),
                r.germ.mu,
                r.germ.tau,
                r.germ.mult,
                r.germ.tc_pattern
            );
        }
    }
    let _ = writeln!(out, "  verdicts:");
    let _ = writeln!(out, "    maximizing:   {}", a.verdicts.maximizing);
    let _ = writeln!(out, "    non-existence: {}", a.verdicts.nonexistence);
    let _ = writeln!(out, "    M-curve:      {}", a.verdicts.m_curve);
    match (&a.verdicts.arnold_exponent, a.verdicts.ds_bound_ok) {
        (Some(alpha), Some(ok)) => {
            let _ = writeln!(
                out,
                "    arnold exponent = {alpha}; mdr >= alpha*d - 2 {}",
                if ok { "holds" } else { "FAILS" }
            );
        }
        _ => {}
    }
    for note in &a.verdicts.notes {
        let _ = writeln!(out, "    note: {note}");
    }
    let _ = writeln!(
        out,
        "  engine: rank mode {}, {} ms",
        a.rank_mode.describe(),
        a.elapsed_ms
    );
    out
}

/// Builds the type-count map used for expectation checks, from a report.
pub fn report_type_counts(r: &Report) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for s in &r.singularities {
        *out.entry(s.stype.clone()).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyze::{analyze, EngineOptions};
    use crate::curvefile::parse_curve_file;

    #[test]
    fn json_round_trip() {
        let cf = parse_curve_file(
            "name: triangle\nfield: Q\nf = x*y*z\npoint: (1:0:0)\npoint: (0:1:0)\npoint: (0:0:1)\n",
        )
        .unwrap();
        let a = analyze(&cf, &EngineOptions::default()).unwrap();
        let report = Report::from_analysis(&a);
        let json = report.to_json();
        let back: Report = serde_json::from_str(&json).unwrap();
        assert_eq!(report, back);
        assert_eq!(report_type_counts(&back)["A1"], 3);
    }

    #[test]
    fn text_rendering_mentions_key_values() {
        let cf = parse_curve_file("field: Q\nf = x*y*z\n").unwrap();
        let a = analyze(&cf, &EngineOptions::default()).unwrap();
        let text = render_text(&a);
        assert!(text.contains("tau(C) = 3"));
        assert!(text.contains("mdr = 1"));
    }
}

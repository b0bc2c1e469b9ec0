//! The analysis pipeline: reducedness check, global invariants, per-point
//! local classification, the completeness cross-check, and verdicts.

use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::arrangement::{self, CmCheck, WeakCombinatorics};
use crate::criteria::{self, Applicability, Inapplicability, Verdicts};
use crate::curvefile::{CurveFile, CurveInput};
use crate::field::NumberField;
use crate::global::{self, GlobalInvariants};
use crate::local::{classify, LocalError, LocalGerm, SingularityRecord, SingularityType};
use crate::modular::RankMode;
use crate::poly::{self, HomPoly, ProjPoint};

#[derive(Debug, Error)]
pub enum AnalyzeError {
    /// Problems with the input curve or point list (CLI exit code 2).
    #[error("input error: {0}")]
    Input(String),
    /// Violations of internal identities; engine faults (CLI exit code 3).
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineOptions {
    pub rank_mode: RankMode,
    pub squarefree_trials: usize,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            rank_mode: RankMode::default(),
            squarefree_trials: 3,
        }
    }
}

impl EngineOptions {
    pub fn exact() -> Self {
        EngineOptions {
            rank_mode: RankMode::Exact,
            ..Default::default()
        }
    }
}

/// Lattice data computed for line arrangements.
#[derive(Debug, Clone)]
pub struct ArrangementData {
    pub wc: WeakCombinatorics,
    pub naive_count_ok: bool,
    pub cm: CmCheck,
    pub tau_combinatorial: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputKind {
    Polynomial,
    Lines(usize),
}

/// Everything the engine knows about one curve after a full run.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub name: Option<String>,
    pub field: Arc<NumberField>,
    pub f: HomPoly,
    pub input_kind: InputKind,
    pub reduced: bool,
    pub global: GlobalInvariants,
    pub arrangement: Option<ArrangementData>,
    pub records: Vec<SingularityRecord>,
    /// Sum of the local Tjurina numbers, when local data exists.
    pub local_tau_sum: Option<u64>,
    /// Whether the local sum certifies completeness against tau(C).
    pub local_complete: Option<bool>,
    pub verdicts: Verdicts,
    pub rank_mode: RankMode,
    pub elapsed_ms: u64,
}

impl Analysis {
    pub fn inventory(&self) -> Vec<SingularityType> {
        self.records.iter().map(|r| r.germ.stype.clone()).collect()
    }

    /// Counts per classified type name, for reports and expect blocks.
    pub fn type_counts(&self) -> std::collections::BTreeMap<String, usize> {
        let mut out = std::collections::BTreeMap::new();
        for r in &self.records {
            *out.entry(r.germ.stype.to_string()).or_insert(0) += 1;
        }
        out
    }
}

/// Runs the full pipeline on a parsed curve file.
pub fn analyze(cf: &CurveFile, opts: &EngineOptions) -> Result<Analysis, AnalyzeError> {
    let started = Instant::now();
    let field = &cf.field;

    let (f, input_kind, lattice_points) = match &cf.input {
        CurveInput::Polynomial(f) => (f.clone(), InputKind::Polynomial, None),
        CurveInput::Lines(arr) => {
            let (pts, _) = arr.intersection_lattice();
            (
                arr.product_polynomial(),
                InputKind::Lines(arr.line_count()),
                Some(pts),
            )
        }
    };
    if f.degree() < 2 {
        return Err(AnalyzeError::Input(format!(
            "curve degree must be at least 2, got {}",
            f.degree()
        )));
    }

    let mut rng = rand::thread_rng();
    let reduced = poly::squarefree_check(&f, opts.squarefree_trials, &mut rng)
        .map_err(|e| AnalyzeError::Input(e.to_string()))?;
    if !reduced {
        return Err(AnalyzeError::Input(
            "the curve is not reduced (a repeated factor was detected)".to_string(),
        ));
    }

    let global = global::freeness(&f, opts.rank_mode).map_err(|e| match e {
        global::GlobalError::ZeroGradient => AnalyzeError::Input(e.to_string()),
        global::GlobalError::NoStabilization { .. } => AnalyzeError::Input(e.to_string()),
        other => AnalyzeError::Internal(other.to_string()),
    })?;

    // assemble the points to analyze locally
    let points_with_incidence: Vec<(ProjPoint, Option<usize>)> = match &lattice_points {
        Some(pts) => pts.iter().map(|(p, k)| (p.clone(), Some(*k))).collect(),
        None => {
            let mut seen: Vec<ProjPoint> = Vec::new();
            for p in &cf.points {
                if seen.contains(p) {
                    return Err(AnalyzeError::Input(format!("duplicate point {p}")));
                }
                seen.push(p.clone());
            }
            cf.points.iter().map(|p| (p.clone(), None)).collect()
        }
    };

    // every supplied point must be singular: all three partials vanish
    // (by the Euler relation this also puts the point on the curve)
    let grad = f.gradient();
    for (p, _) in &points_with_incidence {
        if grad.iter().any(|g| !g.eval(p).is_zero()) {
            return Err(AnalyzeError::Input(format!(
                "point {p} is not a singular point of the curve"
            )));
        }
    }

    let records: Vec<SingularityRecord> = points_with_incidence
        .par_iter()
        .map(|(p, incidence)| -> Result<SingularityRecord, AnalyzeError> {
            let germ = LocalGerm::new(poly::localize(&f, p))
                .map_err(|e| AnalyzeError::Input(format!("at {p}: {e}")))?;
            let classification = classify(&germ).map_err(|e| match e {
                LocalError::NonIsolated => AnalyzeError::Input(format!(
                    "non-isolated singularity at {p}: the curve is not reduced"
                )),
                other => AnalyzeError::Internal(format!("at {p}: {other}")),
            })?;
            if let Some(k) = incidence {
                let expected = arrangement::ordinary_type_map(*k);
                if expected.is_classified() && classification.stype != expected {
                    return Err(AnalyzeError::Internal(format!(
                        "lattice point {p} with {k} lines classified as {} instead of {expected}",
                        classification.stype
                    )));
                }
            }
            Ok(SingularityRecord {
                point: p.clone(),
                germ: classification,
            })
        })
        .collect::<Result<_, _>>()?;

    let (local_tau_sum, local_complete) = if records.is_empty() && global.tau > 0 {
        (None, None)
    } else {
        let sum: u64 = records.iter().map(|r| r.germ.tau).sum();
        if sum > global.tau {
            return Err(AnalyzeError::Internal(format!(
                "local Tjurina sum {sum} exceeds the global total {}",
                global.tau
            )));
        }
        (Some(sum), Some(sum == global.tau))
    };

    let arrangement_data = match &cf.input {
        CurveInput::Lines(arr) => {
            let (_, wc) = arr.intersection_lattice();
            let naive_ok = arrangement::naive_count_check(&wc);
            if !naive_ok {
                return Err(AnalyzeError::Internal(format!(
                    "naive combinatorial count fails for computed lattice {wc}"
                )));
            }
            let tau_comb = arrangement::tau_from_combinatorics(&wc);
            if tau_comb != global.tau {
                return Err(AnalyzeError::Internal(format!(
                    "combinatorial tau {tau_comb} disagrees with the Hilbert value {}",
                    global.tau
                )));
            }
            Some(ArrangementData {
                cm: arrangement::cm_check(&wc),
                naive_count_ok: naive_ok,
                tau_combinatorial: tau_comb,
                wc,
            })
        }
        CurveInput::Polynomial(_) => None,
    };

    let verdicts = if local_complete == Some(true) || (records.is_empty() && global.tau == 0) {
        let types: Vec<SingularityType> = records.iter().map(|r| r.germ.stype.clone()).collect();
        criteria::evaluate_verdicts(
            global.degree,
            global.tau,
            global.free,
            global.mdr,
            &types,
        )
        .map_err(|e| AnalyzeError::Internal(e.to_string()))?
    } else {
        // no or incomplete local data: type-based verdicts are unsound
        let reason = Inapplicability::IncompleteSingularData;
        Verdicts {
            maximizing: Applicability::NotApplicable(reason.clone()),
            nonexistence: Applicability::NotApplicable(reason.clone()),
            m_curve: Applicability::NotApplicable(reason),
            arnold_exponent: None,
            ds_bound_ok: None,
            notes: vec![
                "singular point list is missing or incomplete; classification is partial"
                    .to_string(),
            ],
        }
    };

    Ok(Analysis {
        name: cf.name.clone(),
        field: Arc::clone(field),
        f,
        input_kind,
        reduced,
        global,
        arrangement: arrangement_data,
        records,
        local_tau_sum,
        local_complete,
        verdicts,
        rank_mode: opts.rank_mode,
        elapsed_ms: started.elapsed().as_millis() as u64,
    })
}

/// Compares an analysis against the expect block; returns one line per
/// mismatch (empty means the regression passes).
pub fn compare_expectations(a: &Analysis, e: &crate::curvefile::Expectations) -> Vec<String> {
    let mut bad = Vec::new();
    if let Some(tau) = e.tau {
        if a.global.tau != tau {
            bad.push(format!("tau: expected {tau}, got {}", a.global.tau));
        }
    }
    if let Some(mdr) = e.mdr {
        if a.global.mdr != mdr {
            bad.push(format!("mdr: expected {mdr}, got {}", a.global.mdr));
        }
    }
    if let Some(free) = e.free {
        if a.global.free != free {
            bad.push(format!("free: expected {free}, got {}", a.global.free));
        }
    }
    if let Some(exp) = e.exponents {
        if a.global.exponents != Some(exp) {
            bad.push(format!(
                "exponents: expected {exp:?}, got {:?}",
                a.global.exponents
            ));
        }
    }
    if let Some(want) = &e.maximizing {
        let got = verdict_word(&a.verdicts.maximizing);
        if *want != got {
            bad.push(format!("maximizing: expected {want}, got {got}"));
        }
    }
    if let Some(want) = &e.mcurve {
        let got = verdict_word(&a.verdicts.m_curve);
        if *want != got {
            bad.push(format!("mcurve: expected {want}, got {got}"));
        }
    }
    if let Some(want) = &e.nonexistence {
        let got = match &a.verdicts.nonexistence {
            Applicability::Applies(v) => v.to_string(),
            Applicability::NotApplicable(_) => "na".to_string(),
        };
        if *want != got {
            bad.push(format!("nonexistence: expected {want}, got {got}"));
        }
    }
    if let Some(types) = &e.types {
        let got = a.type_counts();
        if got != *types {
            bad.push(format!("types: expected {types:?}, got {got:?}"));
        }
    }
    if !e.tk.is_empty() {
        match &a.arrangement {
            Some(data) => {
                for (&k, &count) in &e.tk {
                    let got = data.wc.t(k);
                    if got != count {
                        bad.push(format!("t{k}: expected {count}, got {got}"));
                    }
                }
            }
            None => bad.push("t_k expectations given for a non-arrangement".to_string()),
        }
    }
    bad
}

fn verdict_word(v: &Applicability<bool>) -> String {
    match v {
        Applicability::Applies(true) => "true".to_string(),
        Applicability::Applies(false) => "false".to_string(),
        Applicability::NotApplicable(_) => "na".to_string(),
    }
}

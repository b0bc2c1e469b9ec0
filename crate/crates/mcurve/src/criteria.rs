//! The decision layer: log canonical thresholds per singularity type, the
//! Arnold exponent, the Dimca-Sernesi bound, the maximizing definition, the
//! odd-degree non-existence criterion, and both M-curve characterizations.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::field::Rat;
use crate::local::SingularityType;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CriteriaError {
    #[error("cannot evaluate: unclassified singularity type ({0})")]
    UnclassifiedType(String),
    #[error("the singular set is empty; the Arnold exponent is undefined")]
    EmptySingularSet,
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Log canonical threshold of a classified singularity type:
/// A_k -> (k+3)/(2(k+1)), D_k -> k/(2(k-1)), E6 -> 7/12, E7 -> 5/9,
/// E8 -> 8/15, and 1/2 for both simple elliptic types.
pub fn lct(stype: &SingularityType) -> Result<Rat, CriteriaError> {
    match stype {
        SingularityType::A(k) => Ok(rat(*k as i64 + 3, 2 * (*k as i64 + 1))),
        SingularityType::D(k) => Ok(rat(*k as i64, 2 * (*k as i64 - 1))),
        SingularityType::E6 => Ok(rat(7, 12)),
        SingularityType::E7 => Ok(rat(5, 9)),
        SingularityType::E8 => Ok(rat(8, 15)),
        SingularityType::X9 | SingularityType::T236 => Ok(rat(1, 2)),
        SingularityType::Unclassified(reason) => {
            Err(CriteriaError::UnclassifiedType(reason.clone()))
        }
    }
}

/// Arnold exponent: the minimum log canonical threshold over all singular
/// points.
pub fn arnold_exponent(types: &[SingularityType]) -> Result<Rat, CriteriaError> {
    if types.is_empty() {
        return Err(CriteriaError::EmptySingularSet);
    }
    let mut min: Option<Rat> = None;
    for t in types {
        let v = lct(t)?;
        min = Some(match min {
            None => v,
            Some(m) => m.min(v),
        });
    }
    Ok(min.unwrap())
}

/// The Dimca-Sernesi inequality mdr >= alpha * d - 2, checked exactly.
pub fn ds_bound_check(alpha: &Rat, d: u32, r: u32) -> bool {
    let lhs = Rat::from_integer(BigInt::from(r));
    let rhs = alpha * Rat::from_integer(BigInt::from(d)) - Rat::from_integer(BigInt::from(2));
    lhs >= rhs
}

/// Machine-readable reason why a verdict does not apply to a curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inapplicability {
    WrongParity,
    DegreeBelowThreshold,
    UnclassifiedPresent,
    NonAdeType,
    NoSimpleElliptic,
    NoSingularities,
    IncompleteSingularData,
}

impl fmt::Display for Inapplicability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Inapplicability::WrongParity => "wrong_parity",
            Inapplicability::DegreeBelowThreshold => "degree_below_threshold",
            Inapplicability::UnclassifiedPresent => "unclassified_singularity_present",
            Inapplicability::NonAdeType => "non_ade_singularity_present",
            Inapplicability::NoSimpleElliptic => "no_simple_elliptic_singularity",
            Inapplicability::NoSingularities => "no_singularities",
            Inapplicability::IncompleteSingularData => "incomplete_singular_data",
        };
        write!(f, "{s}")
    }
}

/// A verdict value, or a reasoned statement that the hypotheses fail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Applicability<T> {
    Applies(T),
    NotApplicable(Inapplicability),
}

impl<T> Applicability<T> {
    pub fn value(&self) -> Option<&T> {
        match self {
            Applicability::Applies(v) => Some(v),
            Applicability::NotApplicable(_) => None,
        }
    }
}

impl<T: fmt::Display> fmt::Display for Applicability<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Applicability::Applies(v) => write!(f, "{v}"),
            Applicability::NotApplicable(r) => write!(f, "not applicable ({r})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NonexistenceOutcome {
    CannotBeMaximizing,
    CriterionSilent,
}

impl fmt::Display for NonexistenceOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NonexistenceOutcome::CannotBeMaximizing => write!(f, "cannot_be_maximizing"),
            NonexistenceOutcome::CriterionSilent => write!(f, "criterion_silent"),
        }
    }
}

fn all_classified(types: &[SingularityType]) -> bool {
    types.iter().all(SingularityType::is_classified)
}

fn all_ade(types: &[SingularityType]) -> bool {
    types.iter().all(SingularityType::is_ade)
}

/// Maximizing verdict: applicable to simply singular (ADE-only) curves of
/// odd degree 2m+1 >= 5; true exactly when tau = 3m^2 + 1.
pub fn maximizing_verdict(
    d: u32,
    tau: u64,
    types: &[SingularityType],
) -> Applicability<bool> {
    if d % 2 == 0 {
        return Applicability::NotApplicable(Inapplicability::WrongParity);
    }
    if d < 5 {
        return Applicability::NotApplicable(Inapplicability::DegreeBelowThreshold);
    }
    if !all_classified(types) {
        return Applicability::NotApplicable(Inapplicability::UnclassifiedPresent);
    }
    if !all_ade(types) {
        return Applicability::NotApplicable(Inapplicability::NonAdeType);
    }
    let m = ((d - 1) / 2) as u64;
    Applicability::Applies(tau == 3 * m * m + 1)
}

/// Type-list form of the non-existence criterion for odd degree 2m+1: the
/// curve cannot be maximizing when every singularity is A_k with k <= 4m,
/// D_l with l <= 2m+1, E6; E7 joins the list for m >= 5 and E8 for m >= 8.
pub fn nonexistence_by_type_list(m: u32, types: &[SingularityType]) -> bool {
    types.iter().all(|t| match t {
        SingularityType::A(k) => *k <= 4 * m,
        SingularityType::D(l) => *l <= 2 * m + 1,
        SingularityType::E6 => true,
        SingularityType::E7 => m >= 5,
        SingularityType::E8 => m >= 8,
        _ => false,
    })
}

/// Threshold form of the same criterion: every log canonical threshold is
/// strictly above (m+1)/(2m+1).
pub fn nonexistence_by_lct_threshold(m: u32, types: &[SingularityType]) -> bool {
    let bound = rat(m as i64 + 1, 2 * m as i64 + 1);
    types
        .iter()
        .all(|t| lct(t).map(|v| v > bound).unwrap_or(false))
}

/// Non-existence verdict, computed both by the explicit type list and by
/// the lct threshold; the two routes must agree.
pub fn nonexistence_verdict(
    d: u32,
    types: &[SingularityType],
) -> Applicability<NonexistenceOutcome> {
    if d % 2 == 0 {
        return Applicability::NotApplicable(Inapplicability::WrongParity);
    }
    let m = (d - 1) / 2;
    if m < 3 {
        return Applicability::NotApplicable(Inapplicability::DegreeBelowThreshold);
    }
    if !all_classified(types) {
        return Applicability::NotApplicable(Inapplicability::UnclassifiedPresent);
    }
    if !all_ade(types) {
        return Applicability::NotApplicable(Inapplicability::NonAdeType);
    }
    let by_list = nonexistence_by_type_list(m, types);
    let by_lct = nonexistence_by_lct_threshold(m, types);
    assert_eq!(
        by_list, by_lct,
        "type-list and lct-threshold criteria disagree at m = {m} on {types:?}"
    );
    if by_list {
        Applicability::Applies(NonexistenceOutcome::CannotBeMaximizing)
    } else {
        Applicability::Applies(NonexistenceOutcome::CriterionSilent)
    }
}

/// M-curve verdict. Applicable to curves whose singularities are all ADE or
/// simple elliptic with at least one simple elliptic point, of even degree
/// >= 4 or odd degree >= 5. The definitional check (free with mdr m-2 for
/// d = 2m, m-1 for d = 2m+1) is evaluated alongside the total-Tjurina
/// characterization (3m^2-3m+3, respectively 3m^2+1); disagreement is an
/// engine fault, never an input property.
pub fn m_curve_verdict(
    d: u32,
    tau: u64,
    free: bool,
    r: u32,
    types: &[SingularityType],
) -> Result<Applicability<bool>, CriteriaError> {
    if !all_classified(types) {
        return Ok(Applicability::NotApplicable(
            Inapplicability::UnclassifiedPresent,
        ));
    }
    if !types.iter().any(SingularityType::is_simple_elliptic) {
        return Ok(Applicability::NotApplicable(
            Inapplicability::NoSimpleElliptic,
        ));
    }
    if d < 4 || (d % 2 == 1 && d < 5) {
        return Ok(Applicability::NotApplicable(
            Inapplicability::DegreeBelowThreshold,
        ));
    }
    let (definitional, tau_target) = if d % 2 == 0 {
        let m = (d / 2) as u64;
        (free && r as u64 == m - 2, 3 * m * m - 3 * m + 3)
    } else {
        let m = ((d - 1) / 2) as u64;
        (free && r as u64 == m - 1, 3 * m * m + 1)
    };
    let by_tau = tau == tau_target;
    if definitional != by_tau {
        return Err(CriteriaError::InternalInconsistency(format!(
            "M-curve definition ({definitional}) and tau characterization ({by_tau}, target {tau_target}, tau {tau}) disagree at d = {d}"
        )));
    }
    Ok(Applicability::Applies(definitional))
}

/// All verdicts for one curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdicts {
    pub maximizing: Applicability<bool>,
    pub nonexistence: Applicability<NonexistenceOutcome>,
    pub m_curve: Applicability<bool>,
    pub arnold_exponent: Option<Rat>,
    pub ds_bound_ok: Option<bool>,
    pub notes: Vec<String>,
}

/// Evaluates every verdict from the global invariants and the classified
/// singularity inventory.
pub fn evaluate_verdicts(
    d: u32,
    tau: u64,
    free: bool,
    r: u32,
    types: &[SingularityType],
) -> Result<Verdicts, CriteriaError> {
    let mut notes = Vec::new();
    let maximizing = maximizing_verdict(d, tau, types);
    let nonexistence = nonexistence_verdict(d, types);
    let m_curve = m_curve_verdict(d, tau, free, r, types)?;
    let (arnold, ds) = if types.is_empty() {
        notes.push("smooth curve: Arnold exponent undefined".to_string());
        (None, None)
    } else if all_classified(types) {
        let alpha = arnold_exponent(types)?;
        let ds = ds_bound_check(&alpha, d, r);
        (Some(alpha), Some(ds))
    } else {
        notes.push("unclassified singularity present: Arnold exponent unavailable".to_string());
        (None, None)
    };
    if let Applicability::Applies(true) = maximizing {
        notes.push(format!(
            "maximizing: tau = 3m^2+1 with m = {}; the curve is free with mdr = m-1",
            (d - 1) / 2
        ));
    }
    if let Applicability::Applies(true) = m_curve {
        notes.push("M-curve: definitional and tau characterizations agree".to_string());
    }
    Ok(Verdicts {
        maximizing,
        nonexistence,
        m_curve,
        arnold_exponent: arnold,
        ds_bound_ok: ds,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local::SingularityType as S;

    #[test]
    fn lct_table_values() {
        assert_eq!(lct(&S::A(1)).unwrap(), Rat::from_integer(1.into()));
        assert_eq!(lct(&S::A(2)).unwrap(), rat(5, 6));
        assert_eq!(lct(&S::D(4)).unwrap(), rat(2, 3));
        assert_eq!(lct(&S::E6).unwrap(), rat(7, 12));
        assert_eq!(lct(&S::E7).unwrap(), rat(5, 9));
        assert_eq!(lct(&S::E8).unwrap(), rat(8, 15));
        assert_eq!(lct(&S::X9).unwrap(), rat(1, 2));
        assert_eq!(lct(&S::T236).unwrap(), rat(1, 2));
        assert!(lct(&S::Unclassified("x".into())).is_err());
        // A1 is the maximum of the table
        for t in [S::A(5), S::D(7), S::E6, S::E7, S::E8, S::X9] {
            assert!(lct(&t).unwrap() < lct(&S::A(1)).unwrap());
        }
    }

    #[test]
    fn arnold_exponent_examples() {
        // degree-9 curve inventory: seven A1, six E7
        let mut types = vec![S::A(1); 7];
        types.extend(vec![S::E7; 6]);
        assert_eq!(arnold_exponent(&types).unwrap(), rat(5, 9));
        // Hesse: 12 A1, 9 X9
        let mut types = vec![S::A(1); 12];
        types.extend(vec![S::X9; 9]);
        assert_eq!(arnold_exponent(&types).unwrap(), rat(1, 2));
        assert_eq!(arnold_exponent(&[S::A(2)]).unwrap(), rat(5, 6));
        assert!(matches!(
            arnold_exponent(&[]),
            Err(CriteriaError::EmptySingularSet)
        ));
    }

    #[test]
    fn ds_bound_examples() {
        assert!(ds_bound_check(&rat(5, 9), 9, 3)); // 3 >= 5 - 2
        assert!(ds_bound_check(&rat(1, 2), 12, 4)); // 4 >= 6 - 2
        assert!(!ds_bound_check(&rat(1, 1), 9, 2)); // 2 >= 7 fails
    }

    #[test]
    fn maximizing_examples() {
        let mut deg9 = vec![S::A(1); 7];
        deg9.extend(vec![S::E7; 6]);
        assert_eq!(maximizing_verdict(9, 49, &deg9), Applicability::Applies(true));
        assert_eq!(maximizing_verdict(9, 48, &deg9), Applicability::Applies(false));
        let mixed = vec![S::A(1), S::D(4), S::X9];
        assert_eq!(
            maximizing_verdict(11, 76, &mixed),
            Applicability::NotApplicable(Inapplicability::NonAdeType)
        );
        assert_eq!(
            maximizing_verdict(8, 39, &deg9),
            Applicability::NotApplicable(Inapplicability::WrongParity)
        );
        assert_eq!(
            maximizing_verdict(3, 3, &[S::A(1)]),
            Applicability::NotApplicable(Inapplicability::DegreeBelowThreshold)
        );
    }

    #[test]
    fn nonexistence_examples() {
        // degree 9 (m = 4): E7 sits exactly on the bound, criterion silent
        assert_eq!(
            nonexistence_verdict(9, &[S::A(1), S::E7]),
            Applicability::Applies(NonexistenceOutcome::CriterionSilent)
        );
        // degree 11 (m = 5): E7 joins the list
        assert_eq!(
            nonexistence_verdict(11, &[S::A(1), S::E7]),
            Applicability::Applies(NonexistenceOutcome::CannotBeMaximizing)
        );
        // degree 7 (m = 3): A12 at the k <= 4m boundary
        assert_eq!(
            nonexistence_verdict(7, &[S::A(12)]),
            Applicability::Applies(NonexistenceOutcome::CannotBeMaximizing)
        );
        assert_eq!(
            nonexistence_verdict(7, &[S::A(13)]),
            Applicability::Applies(NonexistenceOutcome::CriterionSilent)
        );
        assert_eq!(
            nonexistence_verdict(5, &[S::A(1)]),
            Applicability::NotApplicable(Inapplicability::DegreeBelowThreshold)
        );
    }

    #[test]
    fn m_curve_examples() {
        let cl8 = {
            let mut v = vec![S::A(1); 3];
            v.extend(vec![S::X9; 4]);
            v
        };
        assert_eq!(
            m_curve_verdict(8, 39, true, 2, &cl8).unwrap(),
            Applicability::Applies(true)
        );
        let cl11 = {
            let mut v = vec![S::A(1); 6];
            v.extend(vec![S::D(4); 4]);
            v.extend(vec![S::X9; 6]);
            v
        };
        assert_eq!(
            m_curve_verdict(11, 76, true, 4, &cl11).unwrap(),
            Applicability::Applies(true)
        );
        let hesse = {
            let mut v = vec![S::A(1); 12];
            v.extend(vec![S::X9; 9]);
            v
        };
        assert_eq!(
            m_curve_verdict(12, 93, true, 4, &hesse).unwrap(),
            Applicability::Applies(true)
        );
        // no SE singularity: not applicable
        assert_eq!(
            m_curve_verdict(9, 49, true, 3, &[S::A(1), S::E7]).unwrap(),
            Applicability::NotApplicable(Inapplicability::NoSimpleElliptic)
        );
        // disagreement between the definition and the tau characterization
        // is an internal fault
        assert!(m_curve_verdict(8, 39, false, 2, &cl8).is_err());
    }

    #[test]
    fn nonexistence_routes_agree_on_boundaries() {
        for m in 3..=12u32 {
            for t in [
                S::A(4 * m),
                S::A(4 * m + 1),
                S::D(2 * m + 1),
                S::D(2 * m + 2),
                S::E6,
                S::E7,
                S::E8,
            ] {
                let types = [t.clone()];
                assert_eq!(
                    nonexistence_by_type_list(m, &types),
                    nonexistence_by_lct_threshold(m, &types),
                    "disagreement at m = {m}, type {t}"
                );
            }
        }
    }
}

//! Per-point invariants of curve germs via truncated-jet linear algebra:
//! Milnor and Tjurina numbers, multiplicity, tangent-cone patterns, and the
//! classification into A_k, D_k, E6, E7, E8, X9 and T_{2,3,6}.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::field::{FieldElement, NumberField, Rat};
use crate::linalg::{ExactMatrix, MonoBasis};
use crate::poly::{AffinePoly, ProjPoint};
use crate::upoly::{self, BiPoly, UPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LocalError {
    #[error("the singularity at the origin is not isolated")]
    NonIsolated,
    #[error("the origin is not a singular point of the germ")]
    NotSingular,
    #[error("the germ is zero")]
    ZeroGerm,
}

/// A curve germ at the origin of an affine chart: a bivariate polynomial
/// with zero constant term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalGerm {
    poly: AffinePoly,
}

impl LocalGerm {
    pub fn new(poly: AffinePoly) -> Result<Self, LocalError> {
        if poly.is_zero() {
            return Err(LocalError::ZeroGerm);
        }
        if !poly.coeff(&[0, 0]).is_zero() {
            return Err(LocalError::NotSingular);
        }
        Ok(LocalGerm { poly })
    }

    pub fn poly(&self) -> &AffinePoly {
        &self.poly
    }

    pub fn field(&self) -> &Arc<NumberField> {
        self.poly.field()
    }

    /// Minimum total degree among stored terms.
    pub fn multiplicity(&self) -> u32 {
        self.poly.min_total_degree().expect("germ is nonzero")
    }

    /// The lowest-degree homogeneous part, a binary form.
    fn lowest_form(&self) -> AffinePoly {
        let m = self.multiplicity();
        let field = self.field();
        let mut out = AffinePoly::zero(field);
        for (e, c) in self.poly.terms() {
            if e[0] + e[1] == m {
                out = out.add(&AffinePoly::monomial(*e, c.clone()));
            }
        }
        out
    }
}

/// Dimension of K[x,y] / (<gens> + m^N) where m = <x, y>: the number of
/// monomials of total degree < N minus the rank of the span of all monomial
/// multiples of the generators truncated below total degree N.
pub fn jet_quotient_dim(gens: &[AffinePoly], n: u32) -> usize {
    assert!(n >= 1);
    let field = gens.first().expect("at least one generator").field();
    let basis = MonoBasis::affine_truncated(n);
    let mut columns: Vec<Vec<(usize, FieldElement)>> = Vec::new();
    for g in gens {
        let Some(mindeg) = g.min_total_degree() else {
            continue; // zero generator spans nothing
        };
        if mindeg >= n {
            continue;
        }
        let mult_bound = n - mindeg;
        for d in 0..mult_bound {
            for a in (0..=d).rev() {
                let mono = [a, d - a];
                let mut col = Vec::new();
                for (e, c) in g.terms() {
                    let target = [e[0] + mono[0], e[1] + mono[1], 0];
                    if target[0] + target[1] < n {
                        let row = basis.position(&target).expect("basis covers degree < N");
                        col.push((row, c.clone()));
                    }
                }
                if !col.is_empty() {
                    columns.push(col);
                }
            }
        }
    }
    let mut m = ExactMatrix::zero(basis.len(), columns.len(), field);
    for (j, col) in columns.iter().enumerate() {
        for (row, c) in col {
            let prev = m.get(*row, j).add(c);
            m.set(*row, j, prev);
        }
    }
    basis.len() - m.rank_exact()
}

fn to_bipoly(p: &AffinePoly) -> BiPoly {
    let field = p.field();
    let dy = p.terms().map(|(e, _)| e[1]).max().unwrap_or(0) as usize;
    let dx = p.terms().map(|(e, _)| e[0]).max().unwrap_or(0) as usize;
    let mut out: BiPoly = vec![vec![FieldElement::zero(field); dx + 1]; dy + 1];
    for (e, c) in p.terms() {
        out[e[1] as usize][e[0] as usize] = c.clone();
    }
    out.iter_mut().for_each(|c| *c = upoly::normalized(std::mem::take(c)));
    upoly::bi_normalized(out)
}

/// Isolation pre-check: the singular locus of the ideal contains a curve
/// through the origin exactly when the gcd of the generators vanishes there.
fn isolated_at_origin(gens: &[AffinePoly]) -> bool {
    let field = gens[0].field();
    let mut g: Option<BiPoly> = None;
    for gen in gens {
        let b = to_bipoly(gen);
        g = Some(match g {
            None => b,
            Some(acc) => upoly::bi_gcd(&acc, &b, field),
        });
    }
    let g = g.unwrap();
    if upoly::bi_is_zero(&g) {
        return false; // all generators vanish identically
    }
    !upoly::bi_eval_origin(&g, field).is_zero()
}

/// Stabilized jet dimension for a generator set with finite colength at the
/// origin: N grows by 1 from 2 until two consecutive dimensions agree.
fn stabilized_dim(gens: &[AffinePoly], germ_degree: u32) -> Result<u64, LocalError> {
    if !isolated_at_origin(gens) {
        return Err(LocalError::NonIsolated);
    }
    let cap = 2 * germ_degree * germ_degree;
    let mut prev = jet_quotient_dim(gens, 2);
    let mut n = 3u32;
    while n <= cap.max(3) {
        let dim = jet_quotient_dim(gens, n);
        if dim == prev {
            return Ok(dim as u64);
        }
        prev = dim;
        n += 1;
    }
    Err(LocalError::NonIsolated)
}

/// Milnor number: colength of the gradient ideal at the origin.
pub fn local_milnor(g: &LocalGerm) -> Result<u64, LocalError> {
    let gx = g.poly.diff(0);
    let gy = g.poly.diff(1);
    if g.multiplicity() < 2 {
        return Err(LocalError::NotSingular);
    }
    let deg = g.poly.total_degree().unwrap();
    stabilized_dim(&[gx, gy], deg)
}

/// Tjurina number: colength of (g, g_x, g_y) at the origin.
pub fn local_tjurina(g: &LocalGerm) -> Result<u64, LocalError> {
    let gx = g.poly.diff(0);
    let gy = g.poly.diff(1);
    if g.multiplicity() < 2 {
        return Err(LocalError::NotSingular);
    }
    let deg = g.poly.total_degree().unwrap();
    stabilized_dim(&[g.poly.clone(), gx, gy], deg)
}

/// Multiset of tangent-line multiplicities over the algebraic closure,
/// computed from the squarefree decomposition of the lowest-degree form
/// over the base field: a squarefree factor of degree e with multiplicity m
/// contributes m repeated e times. Sorted descending.
pub fn tangent_cone_pattern(g: &LocalGerm) -> Vec<u32> {
    let field = g.field();
    let form = g.lowest_form();
    let d = g.multiplicity();
    // coefficients of x^j y^{d-j} as a univariate polynomial u(t) = form(t, 1)
    let mut u: UPoly = vec![FieldElement::zero(field); d as usize + 1];
    for (e, c) in form.terms() {
        u[e[0] as usize] = c.clone();
    }
    let u = upoly::normalized(u);
    let mut pattern = Vec::new();
    let y_mult = d - (u.len() as u32 - 1);
    if y_mult > 0 {
        pattern.push(y_mult);
    }
    for (factor, mult) in upoly::squarefree_decomposition(&u, field) {
        let e = upoly::degree(&factor).unwrap() as u32;
        for _ in 0..e {
            pattern.push(mult as u32);
        }
    }
    pattern.sort_unstable_by(|a, b| b.cmp(a));
    pattern
}

/// ADE and simple elliptic singularity types, plus a first-class
/// "unclassified" outcome carrying the reason.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SingularityType {
    A(u32),
    D(u32),
    E6,
    E7,
    E8,
    X9,
    T236,
    Unclassified(String),
}

impl SingularityType {
    pub fn is_ade(&self) -> bool {
        matches!(
            self,
            SingularityType::A(_)
                | SingularityType::D(_)
                | SingularityType::E6
                | SingularityType::E7
                | SingularityType::E8
        )
    }

    pub fn is_simple_elliptic(&self) -> bool {
        matches!(self, SingularityType::X9 | SingularityType::T236)
    }

    pub fn is_classified(&self) -> bool {
        !matches!(self, SingularityType::Unclassified(_))
    }

    /// Parses the compact names used in curve files ("A1", "D4", "E7",
    /// "X9", "T236").
    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "E6" => return Some(SingularityType::E6),
            "E7" => return Some(SingularityType::E7),
            "E8" => return Some(SingularityType::E8),
            "X9" => return Some(SingularityType::X9),
            "T236" => return Some(SingularityType::T236),
            _ => {}
        }
        let (head, tail) = text.split_at(1);
        let k: u32 = tail.parse().ok()?;
        match head {
            "A" if k >= 1 => Some(SingularityType::A(k)),
            "D" if k >= 4 => Some(SingularityType::D(k)),
            _ => None,
        }
    }
}

impl fmt::Display for SingularityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingularityType::A(k) => write!(f, "A{k}"),
            SingularityType::D(k) => write!(f, "D{k}"),
            SingularityType::E6 => write!(f, "E6"),
            SingularityType::E7 => write!(f, "E7"),
            SingularityType::E8 => write!(f, "E8"),
            SingularityType::X9 => write!(f, "X9"),
            SingularityType::T236 => write!(f, "T236"),
            SingularityType::Unclassified(reason) => write!(f, "unclassified({reason})"),
        }
    }
}

/// Invariants and classification of one germ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GermClassification {
    pub mu: u64,
    pub tau: u64,
    pub mult: u32,
    pub tc_pattern: Vec<u32>,
    pub stype: SingularityType,
    /// Log canonical threshold from the criteria table, when classified.
    pub lct: Option<Rat>,
}

/// Full analysis of one singular point: localized germ invariants plus the
/// projective point they belong to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularityRecord {
    pub point: ProjPoint,
    pub germ: GermClassification,
}

/// Decision table on (multiplicity, tangent-cone pattern, mu), followed by
/// the tau = mu consistency requirement for quasi-homogeneous types; any
/// mismatch downgrades to Unclassified.
pub fn classify(g: &LocalGerm) -> Result<GermClassification, LocalError> {
    if g.multiplicity() < 2 {
        return Err(LocalError::NotSingular);
    }
    let mu = local_milnor(g)?;
    let tau = local_tjurina(g)?;
    let mult = g.multiplicity();
    let pattern = tangent_cone_pattern(g);
    let candidate = match (mult, pattern.as_slice()) {
        (2, _) => Some(SingularityType::A(mu as u32)),
        (3, [1, 1, 1]) => {
            if mu == 4 {
                Some(SingularityType::D(4))
            } else {
                None
            }
        }
        (3, [2, 1]) => {
            if mu >= 5 {
                Some(SingularityType::D(mu as u32))
            } else {
                None
            }
        }
        (3, [3]) => match mu {
            6 => Some(SingularityType::E6),
            7 => Some(SingularityType::E7),
            8 => Some(SingularityType::E8),
            10 => Some(SingularityType::T236),
            _ => None,
        },
        (4, [1, 1, 1, 1]) => {
            if mu == 9 {
                Some(SingularityType::X9)
            } else {
                None
            }
        }
        _ => None,
    };
    let stype = match candidate {
        Some(t) => {
            if tau == mu {
                t
            } else {
                SingularityType::Unclassified(format!(
                    "tau = {tau} differs from mu = {mu} for candidate {t}"
                ))
            }
        }
        None => SingularityType::Unclassified(format!(
            "no type with multiplicity {mult}, tangent cone {pattern:?}, mu = {mu}"
        )),
    };
    let lct = crate::criteria::lct(&stype).ok();
    Ok(GermClassification {
        mu,
        tau,
        mult,
        tc_pattern: pattern,
        stype,
        lct,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat_int;
    use crate::parse::parse_expr;

    fn q() -> Arc<NumberField> {
        NumberField::rationals()
    }

    pub(crate) fn germ(text: &str, field: &Arc<NumberField>) -> LocalGerm {
        let p3 = parse_expr(text, field, &["x", "y"]).unwrap();
        let mut p = AffinePoly::zero(field);
        for (e, c) in p3.terms() {
            assert_eq!(e[2], 0);
            p = p.add(&AffinePoly::monomial([e[0], e[1]], c.clone()));
        }
        LocalGerm::new(p).unwrap()
    }

    #[test]
    fn jet_dims_for_node_cusp_d4() {
        let f = q();
        // node xy: gens (y, x), any N >= 2 gives 1
        let node = germ("x*y", &f);
        assert_eq!(
            jet_quotient_dim(&[node.poly().diff(0), node.poly().diff(1)], 4),
            1
        );
        // cusp x^2 + y^3: gens (2x, 3y^2), N = 3: basis 1, y
        let cusp = germ("x^2 + y^3", &f);
        assert_eq!(
            jet_quotient_dim(&[cusp.poly().diff(0), cusp.poly().diff(1)], 3),
            2
        );
        // D4 germ y^2 x + x^3: gens (y^2 + 3x^2, 2xy), N = 4 gives 4
        let d4 = germ("y^2*x + x^3", &f);
        assert_eq!(
            jet_quotient_dim(&[d4.poly().diff(0), d4.poly().diff(1)], 4),
            4
        );
    }

    #[test]
    fn milnor_numbers_of_normal_forms() {
        let f = q();
        assert_eq!(local_milnor(&germ("x*y", &f)).unwrap(), 1);
        assert_eq!(local_milnor(&germ("x^2 + y^3", &f)).unwrap(), 2);
        assert_eq!(local_milnor(&germ("x^4 + y^4 + x^2*y^2", &f)).unwrap(), 9);
        assert_eq!(local_tjurina(&germ("x^3 + x^2*y^2 + y^6", &f)).unwrap(), 10);
    }

    #[test]
    fn multiplicity_and_tangent_cones() {
        let f = q();
        assert_eq!(germ("x*y", &f).multiplicity(), 2);
        assert_eq!(germ("y^2*x + x^3", &f).multiplicity(), 3);
        assert_eq!(germ("x^4 + y^4 + x^2*y^2", &f).multiplicity(), 4);
        assert_eq!(tangent_cone_pattern(&germ("x*y", &f)), vec![1, 1]);
        assert_eq!(tangent_cone_pattern(&germ("y^2*x + x^5", &f)), vec![2, 1]);
        assert_eq!(tangent_cone_pattern(&germ("x^3 + y^4", &f)), vec![3]);
        assert_eq!(
            tangent_cone_pattern(&germ("x^4 + y^4 + x^2*y^2", &f)),
            vec![1, 1, 1, 1]
        );
    }

    #[test]
    fn classify_core_normal_forms() {
        let f = q();
        let cases = [
            ("x^2 + y^2", SingularityType::A(1)),
            ("x^2 + y^4", SingularityType::A(3)),
            ("y^2*x + x^3", SingularityType::D(4)),
            ("y^2*x + x^4", SingularityType::D(5)),
            ("x^3 + y^4", SingularityType::E6),
            ("x^3 + x*y^3", SingularityType::E7),
            ("x^3 + y^5", SingularityType::E8),
            ("x^4 + y^4 + x^2*y^2", SingularityType::X9),
            ("x^3 + y^6 + x^2*y^2", SingularityType::T236),
        ];
        for (text, expected) in cases {
            let c = classify(&germ(text, &f)).unwrap();
            assert_eq!(c.stype, expected, "germ {text}");
            assert_eq!(c.mu, c.tau, "mu != tau for {text}");
        }
    }

    #[test]
    fn nonisolated_is_detected_quickly() {
        let f = q();
        // x^2 is a non-reduced germ: NonIsolated, without jet blowup
        let g = germ("x^2 + x^2*y", &f);
        assert_eq!(local_milnor(&g).unwrap_err(), LocalError::NonIsolated);
    }

    #[test]
    fn degenerate_t236_modulus_is_nonisolated() {
        // a = gamma/2 with gamma^3 = -54 satisfies 4a^3 + 27 = 0; the germ
        // x^3 + y^6 + a x^2 y^2 then has a repeated branch.
        let f = NumberField::new(
            vec![rat_int(54), rat_int(0), rat_int(0), rat_int(1)],
            "g",
        )
        .unwrap();
        let g = germ("x^3 + y^6", &f);
        let half_gamma = FieldElement::generator(&f).scale(&Rat::new(1.into(), 2.into()));
        let extra = AffinePoly::monomial([2, 2], half_gamma);
        let degenerate = LocalGerm::new(g.poly().add(&extra)).unwrap();
        assert_eq!(local_milnor(&degenerate).unwrap_err(), LocalError::NonIsolated);
        // while a = 1 (4 + 27 != 0) is an honest T236 with mu = 10
        let fine = germ("x^3 + y^6 + x^2*y^2", &NumberField::rationals());
        assert_eq!(classify(&fine).unwrap().stype, SingularityType::T236);
    }

    #[test]
    fn not_singular_at_smooth_point() {
        let f = q();
        let smooth = germ("x + x^2 + y^3", &f);
        assert_eq!(classify(&smooth).unwrap_err(), LocalError::NotSingular);
    }

    #[test]
    fn type_parser_round_trip() {
        for name in ["A1", "A10", "D4", "D8", "E6", "E7", "E8", "X9", "T236"] {
            let t = SingularityType::parse(name).unwrap();
            assert_eq!(t.to_string(), name);
        }
        assert!(SingularityType::parse("D3").is_none());
        assert!(SingularityType::parse("A0").is_none());
        assert!(SingularityType::parse("Q7").is_none());
    }
}

//! Sparse multivariate polynomials over a [`NumberField`]: the homogeneous
//! curve datum in x, y, z, affine localizations in two variables, projective
//! points, differentiation, chart/dehomogenization, and the probabilistic
//! reducedness check.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use rand::Rng;
use thiserror::Error;

use crate::field::{FieldElement, NumberField, Rat};
use crate::upoly;

pub const VAR_NAMES: [&str; 3] = ["x", "y", "z"];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("input polynomial is not homogeneous")]
    InhomogeneousInput,
    #[error("projective point must have a nonzero coordinate")]
    ZeroPoint,
    #[error("restriction to every sampled line degenerated to zero")]
    DegenerateRestriction,
    #[error("polynomial is zero")]
    ZeroPolynomial,
}

/// Sparse polynomial in `N` variables; exponent vectors map to nonzero
/// coefficients. Used with N = 3 (projective) and N = 2 (affine charts).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPoly<const N: usize> {
    field: Arc<NumberField>,
    terms: BTreeMap<[u32; N], FieldElement>,
}

pub type AffinePoly = MPoly<2>;

impl<const N: usize> MPoly<N> {
    pub fn zero(field: &Arc<NumberField>) -> Self {
        MPoly {
            field: Arc::clone(field),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: FieldElement) -> Self {
        let field = Arc::clone(c.field());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert([0; N], c);
        }
        MPoly { field, terms }
    }

    pub fn monomial(exps: [u32; N], c: FieldElement) -> Self {
        let field = Arc::clone(c.field());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        MPoly { field, terms }
    }

    pub fn variable(idx: usize, field: &Arc<NumberField>) -> Self {
        let mut exps = [0u32; N];
        exps[idx] = 1;
        Self::monomial(exps, FieldElement::one(field))
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; N], &FieldElement)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32; N]) -> FieldElement {
        self.terms
            .get(exps)
            .cloned()
            .unwrap_or_else(|| FieldElement::zero(&self.field))
    }

    fn insert_add(&mut self, exps: [u32; N], c: &FieldElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(existing) => {
                *existing = existing.add(c);
                if existing.is_zero() {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, c.clone());
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(*e, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(*e, &c.neg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        MPoly {
            field: Arc::clone(&self.field),
            terms: self.terms.iter().map(|(e, c)| (*e, c.neg())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.field);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let mut e = [0u32; N];
                for k in 0..N {
                    e[k] = e1[k] + e2[k];
                }
                out.insert_add(e, &c1.mul(c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        if c.is_zero() {
            return Self::zero(&self.field);
        }
        MPoly {
            field: Arc::clone(&self.field),
            terms: self.terms.iter().map(|(e, k)| (*e, k.mul(c))).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(FieldElement::one(&self.field));
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    /// Exact partial derivative with respect to variable `idx`.
    pub fn diff(&self, idx: usize) -> Self {
        let mut out = Self::zero(&self.field);
        for (e, c) in &self.terms {
            if e[idx] == 0 {
                continue;
            }
            let mut e2 = *e;
            e2[idx] -= 1;
            out.insert_add(e2, &c.scale(&Rat::from_integer(BigInt::from(e[idx]))));
        }
        out
    }

    pub fn eval(&self, point: &[FieldElement; N]) -> FieldElement {
        let mut acc = FieldElement::zero(&self.field);
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for k in 0..N {
                if e[k] > 0 {
                    t = t.mul(&point[k].pow(e[k]));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn min_total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).min()
    }

    /// Degree of homogeneity, if homogeneous. The zero polynomial counts
    /// as homogeneous of every degree and reports 0.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => Some(0),
            Some(d) => {
                if degs.all(|k| k == d) {
                    Some(d)
                } else {
                    None
                }
            }
        }
    }
}

/// A homogeneous polynomial in x, y, z with its degree verified and cached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomPoly {
    poly: MPoly<3>,
    degree: u32,
}

impl HomPoly {
    /// Wraps a trivariate polynomial after a full homogeneity scan.
    pub fn new(poly: MPoly<3>) -> Result<Self, PolyError> {
        match poly.homogeneous_degree() {
            Some(d) => Ok(HomPoly { poly, degree: d }),
            None => Err(PolyError::InhomogeneousInput),
        }
    }

    /// The zero polynomial with a declared degree (partials of constants
    /// and coordinate-free directions need one).
    pub fn zero(field: &Arc<NumberField>, degree: u32) -> Self {
        HomPoly {
            poly: MPoly::zero(field),
            degree,
        }
    }

    pub fn poly(&self) -> &MPoly<3> {
        &self.poly
    }

    pub fn field(&self) -> &Arc<NumberField> {
        self.poly.field()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn num_terms(&self) -> usize {
        self.poly.num_terms()
    }

    pub fn coeff(&self, exps: &[u32; 3]) -> FieldElement {
        self.poly.coeff(exps)
    }

    /// Exact partial derivative; homogeneous of degree d-1 (or zero).
    pub fn diff(&self, idx: usize) -> HomPoly {
        HomPoly {
            poly: self.poly.diff(idx),
            degree: self.degree.saturating_sub(1),
        }
    }

    pub fn gradient(&self) -> [HomPoly; 3] {
        [self.diff(0), self.diff(1), self.diff(2)]
    }

    pub fn eval(&self, p: &ProjPoint) -> FieldElement {
        self.poly.eval(p.coords())
    }

    pub fn mul(&self, other: &HomPoly) -> HomPoly {
        HomPoly {
            poly: self.poly.mul(&other.poly),
            degree: self.degree + other.degree,
        }
    }

    /// Verifies the Euler relation x*f_x + y*f_y + z*f_z = d*f exactly.
    pub fn euler_relation_holds(&self) -> bool {
        let field = self.field();
        let mut acc = MPoly::<3>::zero(field);
        for (k, fk) in self.gradient().iter().enumerate() {
            acc = acc.add(&MPoly::variable(k, field).mul(fk.poly()));
        }
        let scaled = self
            .poly
            .scale(&FieldElement::from_rat(Rat::from_integer(self.degree.into()), field));
        acc == scaled
    }
}

/// A point of the projective plane, normalized so that the first nonzero
/// coordinate is 1; equality after normalization is coordinate-wise.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    coords: [FieldElement; 3],
}

impl ProjPoint {
    pub fn new(coords: [FieldElement; 3]) -> Result<Self, PolyError> {
        let pivot = coords.iter().position(|c| !c.is_zero()).ok_or(PolyError::ZeroPoint)?;
        let inv = coords[pivot].inv().expect("nonzero coordinate invertible");
        let coords = [
            coords[0].mul(&inv),
            coords[1].mul(&inv),
            coords[2].mul(&inv),
        ];
        Ok(ProjPoint { coords })
    }

    pub fn coords(&self) -> &[FieldElement; 3] {
        &self.coords
    }

    /// Index of the chart coordinate (first nonzero, normalized to 1).
    pub fn chart(&self) -> usize {
        self.coords.iter().position(|c| !c.is_zero()).unwrap()
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{}:{})", self.coords[0], self.coords[1], self.coords[2])
    }
}

/// Dehomogenizes at the chart of `p` and translates `p` to the origin.
/// The constant term of the result equals f(p).
pub fn localize(f: &HomPoly, p: &ProjPoint) -> AffinePoly {
    let field = f.field();
    let chart = p.chart();
    let rest: [usize; 2] = match chart {
        0 => [1, 2],
        1 => [0, 2],
        _ => [0, 1],
    };
    // substitution for each original variable as an affine polynomial in (u, v)
    let one = MPoly::<2>::constant(FieldElement::one(field));
    let subs: [MPoly<2>; 3] = {
        let mut arr = [
            MPoly::<2>::zero(field),
            MPoly::<2>::zero(field),
            MPoly::<2>::zero(field),
        ];
        arr[chart] = one;
        for (slot, &orig) in rest.iter().enumerate() {
            arr[orig] = MPoly::<2>::variable(slot, field)
                .add(&MPoly::<2>::constant(p.coords()[orig].clone()));
        }
        arr
    };
    let mut out = MPoly::<2>::zero(field);
    for (e, c) in f.poly().terms() {
        let mut term = MPoly::<2>::constant(c.clone());
        for k in 0..3 {
            if e[k] > 0 {
                term = term.mul(&subs[k].pow(e[k]));
            }
        }
        out = out.add(&term);
    }
    out
}

/// Restriction of `f` to the line s*Q + t*R, as a univariate polynomial in t
/// after setting s = 1; together with the degree drop (multiplicity of the
/// point at infinity of the parameterization).
fn restrict_to_line(f: &HomPoly, q: &[i64; 3], r: &[i64; 3]) -> (upoly::UPoly, u32) {
    let field = f.field();
    let d = f.degree() as usize;
    let mut coeffs = vec![FieldElement::zero(field); d + 1];
    // binomial-free expansion: substitute x_k = q_k + t*r_k and collect powers of t
    for (e, c) in f.poly().terms() {
        // per-variable polynomials (q_k + t r_k)^{e_k}, multiplied out
        let mut acc: Vec<FieldElement> = vec![FieldElement::one(field)];
        for k in 0..3 {
            let qk = FieldElement::from_int(q[k], field);
            let rk = FieldElement::from_int(r[k], field);
            for _ in 0..e[k] {
                let mut next = vec![FieldElement::zero(field); acc.len() + 1];
                for (i, a) in acc.iter().enumerate() {
                    next[i] = next[i].add(&a.mul(&qk));
                    next[i + 1] = next[i + 1].add(&a.mul(&rk));
                }
                acc = next;
            }
        }
        for (i, a) in acc.iter().enumerate() {
            coeffs[i] = coeffs[i].add(&a.mul(c));
        }
    }
    let trimmed = upoly::normalized(coeffs);
    let drop = if trimmed.is_empty() {
        0
    } else {
        d as u32 - (trimmed.len() as u32 - 1)
    };
    (trimmed, drop)
}

/// Monte Carlo reducedness check: restricts `f` to random lines with small
/// integer anchor points and tests univariate squarefreeness.
///
/// A single squarefree restriction certifies that `f` is squarefree (a
/// repeated factor of `f` restricts to a repeated factor on every
/// non-degenerate line), so `true` carries a witness. `false` means every
/// sampled restriction had a repeated factor, which for `trials` independent
/// random lines identifies a non-reduced curve up to negligible error.
pub fn squarefree_check<R: Rng>(
    f: &HomPoly,
    trials: usize,
    rng: &mut R,
) -> Result<bool, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    assert!(trials >= 1, "trials must be >= 1");
    if f.degree() == 0 {
        return Ok(true);
    }
    let field = f.field();
    let sample = |rng: &mut R| -> [i64; 3] {
        [
            rng.gen_range(-20i64..=20),
            rng.gen_range(-20i64..=20),
            rng.gen_range(-20i64..=20),
        ]
    };
    let mut produced = 0usize;
    for _ in 0..trials {
        let mut line = None;
        for _ in 0..24 {
            let q = sample(rng);
            let r = sample(rng);
            let cross = [
                q[1] * r[2] - q[2] * r[1],
                q[2] * r[0] - q[0] * r[2],
                q[0] * r[1] - q[1] * r[0],
            ];
            if cross == [0, 0, 0] {
                continue; // proportional samples do not span a line
            }
            let (u, drop) = restrict_to_line(f, &q, &r);
            if u.is_empty() {
                continue; // the whole line lies on the curve
            }
            line = Some((u, drop));
            break;
        }
        let Some((u, drop)) = line else { continue };
        produced += 1;
        if drop >= 2 {
            continue; // repeated root at the s = 0 point of this line
        }
        let g = upoly::gcd(&u, &upoly::derivative(&u), field);
        if upoly::degree(&g) == Some(0) {
            return Ok(true);
        }
    }
    if produced == 0 {
        return Err(PolyError::DegenerateRestriction);
    }
    Ok(false)
}

/// Graded-lexicographic order with x > y > z, descending; the canonical
/// print order.
fn grlex_desc<const N: usize>(a: &[u32; N], b: &[u32; N]) -> std::cmp::Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    db.cmp(&da).then_with(|| b.cmp(a))
}

fn format_terms<const N: usize>(
    p: &MPoly<N>,
    names: &[&str],
    f: &mut fmt::Formatter<'_>,
) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    let mut keys: Vec<&[u32; N]> = p.terms.keys().collect();
    keys.sort_by(|a, b| grlex_desc(a, b));
    for (idx, e) in keys.iter().enumerate() {
        let c = &p.terms[*e];
        let mono: Vec<String> = (0..N)
            .filter(|&k| e[k] > 0)
            .map(|k| {
                if e[k] == 1 {
                    names[k].to_string()
                } else {
                    format!("{}^{}", names[k], e[k])
                }
            })
            .collect();
        let mono = mono.join("*");
        let coeff = format!("{c}");
        let printable = if mono.is_empty() {
            wrap_sum(&coeff)
        } else if coeff == "1" {
            mono
        } else if coeff == "-1" {
            format!("-{mono}")
        } else {
            format!("{}*{mono}", wrap_sum(&coeff))
        };
        if idx == 0 {
            write!(f, "{printable}")?;
        } else if let Some(stripped) = printable.strip_prefix('-') {
            write!(f, " - {stripped}")?;
        } else {
            write!(f, " + {printable}")?;
        }
    }
    Ok(())
}

fn wrap_sum(s: &str) -> String {
    if s.contains(" + ") || s.contains(" - ") {
        format!("({s})")
    } else {
        s.to_string()
    }
}

impl fmt::Display for HomPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format_terms(&self.poly, &VAR_NAMES, f)
    }
}

impl fmt::Display for AffinePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format_terms(self, &VAR_NAMES[..2], f)
    }
}

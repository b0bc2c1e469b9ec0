//! Exact arithmetic over Q and simple extensions Q(a) = Q[t]/(p(t)).
//!
//! Elements are stored in the power basis 1, a, ..., a^{n-1} with
//! `BigRational` coordinates, so equality is coordinate-wise and every
//! operation is exact. Degree 1 (minimal polynomial `t`) encodes Q itself.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// Exact rational scalar used throughout the engine.
pub type Rat = BigRational;

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("minimal polynomial must be monic")]
    NonMonic,
    #[error("minimal polynomial must have degree >= 1")]
    ZeroDegree,
    #[error("minimal polynomial is not squarefree: repeated factor {factor}")]
    NotSquarefree { factor: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero divisor: gcd with the minimal polynomial is {factor} (reducible minimal polynomial)")]
    ZeroDivisor { factor: String },
    #[error("elements belong to different fields")]
    FieldMismatch,
}

/// Q or a simple extension Q(a), described by the monic squarefree
/// minimal polynomial of its generator.
///
/// Irreducibility is assumed, not verified; a reducible minimal polynomial
/// surfaces later as [`FieldError::ZeroDivisor`] on inversion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumberField {
    name: String,
    /// Coefficients of the minimal polynomial, constant term first, monic.
    minpoly: Vec<Rat>,
}

impl Hash for NumberField {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.name.hash(state);
        self.minpoly.hash(state);
    }
}

impl NumberField {
    /// Builds a field descriptor from the generator's minimal polynomial
    /// (constant term first). Monicity and squarefreeness are verified.
    pub fn new(minpoly: Vec<Rat>, name: &str) -> Result<Arc<Self>, FieldError> {
        let minpoly = rp::normalized(minpoly);
        if rp::degree(&minpoly).is_none() || rp::degree(&minpoly) == Some(0) {
            return Err(FieldError::ZeroDegree);
        }
        if !minpoly.last().unwrap().is_one() {
            return Err(FieldError::NonMonic);
        }
        let g = rp::gcd(&minpoly, &rp::derivative(&minpoly));
        if rp::degree(&g) != Some(0) {
            return Err(FieldError::NotSquarefree {
                factor: rp::display(&g, name),
            });
        }
        Ok(Arc::new(NumberField {
            name: name.to_string(),
            minpoly,
        }))
    }

    /// The rational field Q, encoded as Q[t]/(t).
    pub fn rationals() -> Arc<Self> {
        NumberField::new(vec![Rat::zero(), Rat::one()], "").expect("Q is well-formed")
    }

    /// Q(i) with i^2 = -1.
    pub fn gaussian() -> Arc<Self> {
        NumberField::new(vec![rat_int(1), rat_int(0), rat_int(1)], "i").expect("t^2+1")
    }

    /// Q(e) with e^2 + e + 1 = 0 (primitive cube root of unity).
    pub fn eisenstein() -> Arc<Self> {
        NumberField::new(vec![rat_int(1), rat_int(1), rat_int(1)], "e").expect("t^2+t+1")
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    pub fn generator_name(&self) -> &str {
        &self.name
    }

    pub fn minpoly(&self) -> &[Rat] {
        &self.minpoly
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }
}

impl fmt::Display for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "Q")
        } else {
            write!(f, "Q({})", self.name)
        }
    }
}

/// An element of a [`NumberField`], in canonical power-basis form:
/// `coords[k]` is the coefficient of a^k, always reduced mod the
/// minimal polynomial. Two elements are equal iff their coordinates are.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    coords: Vec<Rat>,
    field: Arc<NumberField>,
}

impl FieldElement {
    /// Builds an element from arbitrary-length power-basis coordinates,
    /// reducing modulo the minimal polynomial.
    pub fn new(mut coords: Vec<Rat>, field: &Arc<NumberField>) -> Self {
        rp::rem_by_monic(&mut coords, &field.minpoly);
        coords.resize(field.degree(), Rat::zero());
        FieldElement {
            coords,
            field: Arc::clone(field),
        }
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        FieldElement {
            coords: vec![Rat::zero(); field.degree()],
            field: Arc::clone(field),
        }
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        Self::from_rat(Rat::one(), field)
    }

    pub fn from_rat(q: Rat, field: &Arc<NumberField>) -> Self {
        let mut coords = vec![Rat::zero(); field.degree()];
        coords[0] = q;
        FieldElement {
            coords,
            field: Arc::clone(field),
        }
    }

    pub fn from_int(n: i64, field: &Arc<NumberField>) -> Self {
        Self::from_rat(rat_int(n), field)
    }

    /// The generator a itself (zero when the field is Q).
    pub fn generator(field: &Arc<NumberField>) -> Self {
        Self::new(vec![Rat::zero(), Rat::one()], field)
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Rat::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Rat::is_zero)
    }

    /// The rational value of the element, if it lies in Q.
    pub fn as_rat(&self) -> Option<&Rat> {
        if self.coords[1..].iter().all(Rat::is_zero) {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    fn check_same_field(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.field, &other.field) || self.field == other.field,
            "field mismatch: {} vs {}",
            self.field,
            other.field
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same_field(other);
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        FieldElement {
            coords,
            field: Arc::clone(&self.field),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_same_field(other);
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect();
        FieldElement {
            coords,
            field: Arc::clone(&self.field),
        }
    }

    pub fn neg(&self) -> Self {
        FieldElement {
            coords: self.coords.iter().map(|a| -a).collect(),
            field: Arc::clone(&self.field),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_same_field(other);
        let mut prod = rp::mul(&self.coords, &other.coords);
        rp::rem_by_monic(&mut prod, &self.field.minpoly);
        prod.resize(self.field.degree(), Rat::zero());
        FieldElement {
            coords: prod,
            field: Arc::clone(&self.field),
        }
    }

    pub fn scale(&self, q: &Rat) -> Self {
        FieldElement {
            coords: self.coords.iter().map(|a| a * q).collect(),
            field: Arc::clone(&self.field),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// the minimal polynomial.
    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let a = rp::normalized(self.coords.clone());
        let (g, u) = rp::half_xgcd(&a, &self.field.minpoly);
        match rp::degree(&g) {
            Some(0) => {
                let scaled: Vec<Rat> = u.iter().map(|c| c / &g[0]).collect();
                Ok(FieldElement::new(scaled, &self.field))
            }
            _ => Err(FieldError::ZeroDivisor {
                factor: rp::display(&g, &self.field.name),
            }),
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_same_field(other);
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = FieldElement::one(&self.field);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", rp::display(&rp::normalized(self.coords.clone()), &self.field.name))
    }
}

/// Dense univariate polynomial helpers over `Rat`, constant term first.
/// Shared by the field layer (minimal polynomials, inversion) and by the
/// modular layer (reducing minimal polynomials mod p).
pub(crate) mod rp {
    use super::Rat;
    use num_traits::{One, Zero};

    pub fn normalized(mut p: Vec<Rat>) -> Vec<Rat> {
        while p.last().map_or(false, Rat::is_zero) {
            p.pop();
        }
        p
    }

    /// None encodes the zero polynomial.
    pub fn degree(p: &[Rat]) -> Option<usize> {
        p.iter().rposition(|c| !c.is_zero())
    }

    pub fn derivative(p: &[Rat]) -> Vec<Rat> {
        if p.len() <= 1 {
            return vec![];
        }
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Rat::from_integer(i.into()))
            .collect()
    }

    pub fn mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if !bj.is_zero() {
                    out[i + j] += ai * bj;
                }
            }
        }
        out
    }

    /// In-place remainder by a monic divisor.
    pub fn rem_by_monic(p: &mut Vec<Rat>, m: &[Rat]) {
        let md = m.len() - 1;
        while p.len() > md {
            let lead = p.pop().unwrap();
            if lead.is_zero() {
                continue;
            }
            let shift = p.len() - md;
            for (k, mk) in m.iter().take(md).enumerate() {
                if !mk.is_zero() {
                    p[shift + k] -= &lead * mk;
                }
            }
        }
    }

    /// Euclidean division by an arbitrary nonzero divisor; returns (q, r).
    pub fn divrem(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
        let db = degree(b).expect("division by zero polynomial");
        let lead = b[db].clone();
        let mut r = normalized(a.to_vec());
        let mut q = vec![Rat::zero(); r.len().saturating_sub(db)];
        while let Some(dr) = degree(&r) {
            if dr < db {
                break;
            }
            let c = &r[dr] / &lead;
            q[dr - db] = c.clone();
            for k in 0..=db {
                let t = &b[k] * &c;
                r[dr - db + k] -= t;
            }
            r = normalized(r);
        }
        (normalized(q), r)
    }

    /// Monic gcd.
    pub fn gcd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        let mut a = normalized(a.to_vec());
        let mut b = normalized(b.to_vec());
        while !b.is_empty() {
            let (_, r) = divrem(&a, &b);
            a = b;
            b = r;
        }
        make_monic(a)
    }

    pub fn make_monic(mut p: Vec<Rat>) -> Vec<Rat> {
        if let Some(d) = degree(&p) {
            let lead = p[d].clone();
            for c in &mut p {
                *c /= &lead;
            }
        }
        p
    }

    /// Returns (g, u) with u*a = g mod m, g = gcd(a, m).
    /// Only the cofactor of `a` is tracked.
    pub fn half_xgcd(a: &[Rat], m: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
        let mut r0 = normalized(a.to_vec());
        let mut r1 = normalized(m.to_vec());
        let mut u0 = vec![Rat::one()];
        let mut u1 = vec![];
        while !r1.is_empty() {
            let (q, r) = divrem(&r0, &r1);
            let qu = mul(&q, &u1);
            let next_u = sub(&u0, &qu);
            r0 = r1;
            r1 = r;
            u0 = u1;
            u1 = next_u;
        }
        (r0, u0)
    }

    pub fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        let mut out = a.to_vec();
        if out.len() < b.len() {
            out.resize(b.len(), Rat::zero());
        }
        for (o, c) in out.iter_mut().zip(b) {
            *o -= c;
        }
        normalized(out)
    }

    pub fn display(p: &[Rat], var: &str) -> String {
        let var = if var.is_empty() { "t" } else { var };
        if p.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, c) in p.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let part = if mono.is_empty() {
                format!("{c}")
            } else if c.is_one() {
                mono
            } else if (-c).is_one() {
                format!("-{mono}")
            } else {
                format!("{c}*{mono}")
            };
            parts.push(part);
        }
        let mut out = String::new();
        for (k, part) in parts.iter().enumerate() {
            if k == 0 {
                out.push_str(part);
            } else if let Some(stripped) = part.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(stripped);
            } else {
                out.push_str(" + ");
                out.push_str(part);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qi() -> Arc<NumberField> {
        NumberField::gaussian()
    }

    fn qe() -> Arc<NumberField> {
        NumberField::eisenstein()
    }

    #[test]
    fn rationals_is_degree_one() {
        let q = NumberField::rationals();
        assert_eq!(q.degree(), 1);
        assert!(FieldElement::generator(&q).is_zero());
        let a = FieldElement::from_rat(Rat::new(3.into(), 4.into()), &q);
        let b = FieldElement::from_int(2, &q);
        assert_eq!(a.mul(&b), FieldElement::from_rat(Rat::new(3.into(), 2.into()), &q));
    }

    #[test]
    fn rejects_non_monic_minpoly() {
        let err = NumberField::new(vec![rat_int(1), rat_int(0), rat_int(2)], "a").unwrap_err();
        assert_eq!(err, FieldError::NonMonic);
    }

    #[test]
    fn rejects_non_squarefree_minpoly() {
        // (t - 1)^2 = t^2 - 2t + 1
        let err = NumberField::new(vec![rat_int(1), rat_int(-2), rat_int(1)], "a").unwrap_err();
        assert!(matches!(err, FieldError::NotSquarefree { .. }));
    }

    #[test]
    fn gaussian_defining_relation() {
        let f = qi();
        let i = FieldElement::generator(&f);
        assert_eq!(i.mul(&i), FieldElement::from_int(-1, &f));
    }

    #[test]
    fn eisenstein_square_reduces() {
        // e^2 = -e - 1 mod t^2 + t + 1
        let f = qe();
        let e = FieldElement::generator(&f);
        let e2 = e.mul(&e);
        assert_eq!(e2, FieldElement::new(vec![rat_int(-1), rat_int(-1)], &f));
    }

    #[test]
    fn eisenstein_inverse_of_one_plus_e() {
        // (1+e)^{-1} = -e, since (1+e)(-e) = -e - e^2 = 1.
        let f = qe();
        let e = FieldElement::generator(&f);
        let a = FieldElement::one(&f).add(&e);
        assert_eq!(a.inv().unwrap(), e.neg());
        assert!(a.mul(&a.inv().unwrap()).is_one());
    }

    #[test]
    fn generator_satisfies_minpoly() {
        for field in [NumberField::rationals(), qi(), qe()] {
            let a = FieldElement::generator(&field);
            let mut acc = FieldElement::zero(&field);
            for (k, c) in field.minpoly().iter().enumerate() {
                acc = acc.add(&a.pow(k as u32).scale(c));
            }
            assert!(acc.is_zero(), "minpoly({}) != 0 in {}", a, field);
        }
    }

    #[test]
    fn division_by_zero_is_reported() {
        let f = qi();
        let one = FieldElement::one(&f);
        assert_eq!(one.div(&FieldElement::zero(&f)).unwrap_err(), FieldError::DivisionByZero);
    }

    #[test]
    fn zero_divisor_reports_gcd_factor() {
        // t^2 - t is squarefree but reducible; t is a zero divisor.
        let f = NumberField::new(vec![rat_int(0), rat_int(-1), rat_int(1)], "a").unwrap();
        let a = FieldElement::generator(&f);
        match a.inv() {
            Err(FieldError::ZeroDivisor { factor }) => assert_eq!(factor, "a"),
            other => panic!("expected zero divisor, got {other:?}"),
        }
    }

    #[test]
    fn field_axioms_on_random_samples() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(0xf1e1d);
        for field in [NumberField::rationals(), qi(), qe()] {
            let random_elem = |rng: &mut rand::rngs::StdRng| {
                let coords: Vec<Rat> = (0..field.degree())
                    .map(|_| Rat::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=5).into()))
                    .collect();
                FieldElement::new(coords, &field)
            };
            for _ in 0..1000 {
                let a = random_elem(&mut rng);
                let b = random_elem(&mut rng);
                let c = random_elem(&mut rng);
                // associativity and distributivity
                assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
                assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
                // canonical-form equality
                assert_eq!(a.add(&b).sub(&b), a);
                // inverses
                if !a.is_zero() {
                    assert!(a.mul(&a.inv().unwrap()).is_one());
                }
            }
        }
    }
}

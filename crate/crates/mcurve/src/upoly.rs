//! Dense univariate (and bivariate-via-nesting) polynomial helpers over a
//! [`FieldElement`] coefficient field: Euclidean gcd, Yun squarefree
//! decomposition, and a primitive-PRS bivariate gcd.
//!
//! Coefficients are stored constant term first; the empty vector is zero.

use std::sync::Arc;

use crate::field::{FieldElement, NumberField, Rat};

pub type UPoly = Vec<FieldElement>;

pub fn normalized(mut p: UPoly) -> UPoly {
    while p.last().map_or(false, FieldElement::is_zero) {
        p.pop();
    }
    p
}

pub fn degree(p: &[FieldElement]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn is_zero(p: &[FieldElement]) -> bool {
    degree(p).is_none()
}

pub fn derivative(p: &[FieldElement]) -> UPoly {
    if p.len() <= 1 {
        return vec![];
    }
    normalized(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(&Rat::from_integer(i.into())))
            .collect(),
    )
}

pub fn add(a: &[FieldElement], b: &[FieldElement], field: &Arc<NumberField>) -> UPoly {
    let n = a.len().max(b.len());
    let zero = FieldElement::zero(field);
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let x = a.get(k).unwrap_or(&zero);
        let y = b.get(k).unwrap_or(&zero);
        out.push(x.add(y));
    }
    normalized(out)
}

pub fn sub(a: &[FieldElement], b: &[FieldElement], field: &Arc<NumberField>) -> UPoly {
    let n = a.len().max(b.len());
    let zero = FieldElement::zero(field);
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let x = a.get(k).unwrap_or(&zero);
        let y = b.get(k).unwrap_or(&zero);
        out.push(x.sub(y));
    }
    normalized(out)
}

pub fn mul(a: &[FieldElement], b: &[FieldElement], field: &Arc<NumberField>) -> UPoly {
    if is_zero(a) || is_zero(b) {
        return vec![];
    }
    let mut out = vec![FieldElement::zero(field); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                out[i + j] = out[i + j].add(&ai.mul(bj));
            }
        }
    }
    normalized(out)
}

pub fn scale(p: &[FieldElement], c: &FieldElement) -> UPoly {
    normalized(p.iter().map(|a| a.mul(c)).collect())
}

/// Euclidean division; the divisor may have any nonzero leading coefficient.
pub fn divrem(a: &[FieldElement], b: &[FieldElement], field: &Arc<NumberField>) -> (UPoly, UPoly) {
    let db = degree(b).expect("division by zero polynomial");
    let lead_inv = b[db].inv().expect("leading coefficient invertible");
    let mut r = normalized(a.to_vec());
    let mut q = vec![FieldElement::zero(field); r.len().saturating_sub(db)];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = r[dr].mul(&lead_inv);
        q[dr - db] = c.clone();
        for k in 0..=db {
            if !b[k].is_zero() {
                r[dr - db + k] = r[dr - db + k].sub(&b[k].mul(&c));
            }
        }
        r = normalized(r);
    }
    (normalized(q), r)
}

/// Monic gcd over the coefficient field.
pub fn gcd(a: &[FieldElement], b: &[FieldElement], field: &Arc<NumberField>) -> UPoly {
    let mut a = normalized(a.to_vec());
    let mut b = normalized(b.to_vec());
    while !is_zero(&b) {
        let (_, r) = divrem(&a, &b, field);
        a = b;
        b = r;
    }
    make_monic(a)
}

pub fn make_monic(mut p: UPoly) -> UPoly {
    if let Some(d) = degree(&p) {
        let inv = p[d].inv().expect("leading coefficient invertible");
        for c in &mut p {
            *c = c.mul(&inv);
        }
    }
    p
}

pub fn eval(p: &[FieldElement], x: &FieldElement, field: &Arc<NumberField>) -> FieldElement {
    let mut acc = FieldElement::zero(field);
    for c in p.iter().rev() {
        acc = acc.mul(x).add(c);
    }
    acc
}

/// Yun's squarefree decomposition in characteristic zero.
///
/// Returns pairs `(u_m, m)` where each `u_m` is squarefree of positive
/// degree, the `u_m` are pairwise coprime, and `p = lc * prod u_m^m`.
pub fn squarefree_decomposition(
    p: &[FieldElement],
    field: &Arc<NumberField>,
) -> Vec<(UPoly, usize)> {
    let p = make_monic(normalized(p.to_vec()));
    if degree(&p).map_or(true, |d| d == 0) {
        return vec![];
    }
    let dp = derivative(&p);
    let g = gcd(&p, &dp, field);
    let (mut w, _) = divrem(&p, &g, field);
    let (mut y, _) = divrem(&dp, &g, field);
    let mut z = sub(&y, &derivative(&w), field);
    let mut out = Vec::new();
    let mut m = 1usize;
    while degree(&w).map_or(false, |d| d > 0) {
        let u = gcd(&w, &z, field);
        if degree(&u).map_or(false, |d| d > 0) {
            out.push((u.clone(), m));
        }
        let (w2, _) = divrem(&w, &u, field);
        let (y2, _) = divrem(&z, &u, field);
        w = w2;
        y = y2;
        z = sub(&y, &derivative(&w), field);
        m += 1;
    }
    out
}

/// A polynomial in y whose coefficients are polynomials in x.
pub type BiPoly = Vec<UPoly>;

pub fn bi_normalized(mut p: BiPoly) -> BiPoly {
    while p.last().map_or(false, |c| is_zero(c)) {
        p.pop();
    }
    p
}

pub fn bi_is_zero(p: &BiPoly) -> bool {
    p.iter().all(|c| is_zero(c))
}

fn bi_content(p: &BiPoly, field: &Arc<NumberField>) -> UPoly {
    let mut c: UPoly = vec![];
    for coeff in p {
        if !is_zero(coeff) {
            c = if is_zero(&c) {
                make_monic(normalized(coeff.clone()))
            } else {
                gcd(&c, coeff, field)
            };
        }
    }
    c
}

fn bi_primitive(p: &BiPoly, field: &Arc<NumberField>) -> BiPoly {
    let c = bi_content(p, field);
    if is_zero(&c) {
        return vec![];
    }
    p.iter()
        .map(|coeff| {
            if is_zero(coeff) {
                vec![]
            } else {
                let (q, r) = divrem(coeff, &c, field);
                debug_assert!(is_zero(&r));
                q
            }
        })
        .collect()
}

fn bi_scale(p: &BiPoly, c: &UPoly, field: &Arc<NumberField>) -> BiPoly {
    p.iter().map(|coeff| mul(coeff, c, field)).collect()
}

/// Pseudo-remainder of a by b with respect to y.
fn bi_pseudo_rem(a: &BiPoly, b: &BiPoly, field: &Arc<NumberField>) -> BiPoly {
    let db = b.len() - 1;
    let lead = b[db].clone();
    let mut r = bi_normalized(a.clone());
    while r.len() > db {
        let dr = r.len() - 1;
        let top = r[dr].clone();
        // lead * r - top * y^{dr-db} * b
        let mut next: BiPoly = r.iter().map(|c| mul(c, &lead, field)).collect();
        for (k, bk) in b.iter().enumerate() {
            let t = mul(&top, bk, field);
            next[dr - db + k] = sub(&next[dr - db + k], &t, field);
        }
        r = bi_normalized(next);
        if r.len() > dr {
            // degree must strictly drop
            r.truncate(dr);
            r = bi_normalized(r);
        }
    }
    r
}

/// Gcd of two bivariate polynomials over the field, up to a constant,
/// via a primitive pseudo-remainder sequence in y.
pub fn bi_gcd(a: &BiPoly, b: &BiPoly, field: &Arc<NumberField>) -> BiPoly {
    let a = bi_normalized(a.clone());
    let b = bi_normalized(b.clone());
    if bi_is_zero(&a) {
        return b;
    }
    if bi_is_zero(&b) {
        return a;
    }
    let ca = bi_content(&a, field);
    let cb = bi_content(&b, field);
    let c = gcd(&ca, &cb, field);
    let (mut f, mut g) = if a.len() >= b.len() {
        (bi_primitive(&a, field), bi_primitive(&b, field))
    } else {
        (bi_primitive(&b, field), bi_primitive(&a, field))
    };
    while !bi_is_zero(&g) {
        let r = bi_pseudo_rem(&f, &g, field);
        f = g;
        g = bi_primitive(&r, field);
    }
    bi_scale(&bi_primitive(&f, field), &c, field)
}

/// Evaluates a bivariate polynomial at the origin.
pub fn bi_eval_origin(p: &BiPoly, field: &Arc<NumberField>) -> FieldElement {
    p.first()
        .and_then(|c| c.first().cloned())
        .unwrap_or_else(|| FieldElement::zero(field))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Arc<NumberField> {
        NumberField::rationals()
    }

    fn fe(n: i64, f: &Arc<NumberField>) -> FieldElement {
        FieldElement::from_int(n, f)
    }

    fn poly(coeffs: &[i64], f: &Arc<NumberField>) -> UPoly {
        normalized(coeffs.iter().map(|&c| fe(c, f)).collect())
    }

    #[test]
    fn gcd_of_coprime_is_one() {
        let f = q();
        // gcd(t^2 + 1, t) = 1
        let g = gcd(&poly(&[1, 0, 1], &f), &poly(&[0, 1], &f), &f);
        assert_eq!(degree(&g), Some(0));
        assert!(g[0].is_one());
    }

    #[test]
    fn yun_detects_multiplicities() {
        let f = q();
        // t^2 (t - 1)^3 = t^5 - 3t^4 + 3t^3 - t^2
        let p = poly(&[0, 0, -1, 3, -3, 1], &f);
        let dec = squarefree_decomposition(&p, &f);
        let mults: Vec<(usize, usize)> = dec
            .iter()
            .map(|(u, m)| (degree(u).unwrap(), *m))
            .collect();
        assert_eq!(mults, vec![(1, 2), (1, 3)]);
    }

    #[test]
    fn yun_on_squarefree_quartic() {
        let f = q();
        // t^4 + t^2 + 1 = (t^2+t+1)(t^2-t+1), squarefree of degree 4
        let p = poly(&[1, 0, 1, 0, 1], &f);
        let dec = squarefree_decomposition(&p, &f);
        assert_eq!(dec.len(), 1);
        assert_eq!(dec[0].1, 1);
        assert_eq!(degree(&dec[0].0), Some(4));
    }

    #[test]
    fn bivariate_gcd_finds_common_factor() {
        let f = q();
        // a = x * (x + y) -> coefficients in y: [x^2, x]
        let a: BiPoly = vec![poly(&[0, 0, 1], &f), poly(&[0, 1], &f)];
        // b = x * y      -> [0, x]
        let b: BiPoly = vec![vec![], poly(&[0, 1], &f)];
        let g = bi_gcd(&a, &b, &f);
        // gcd = x up to constant: y-degree 0, x-degree 1, vanishing at 0
        assert_eq!(g.len(), 1);
        assert_eq!(degree(&g[0]), Some(1));
        assert!(bi_eval_origin(&g, &f).is_zero());
    }

    #[test]
    fn bivariate_gcd_of_coprime_is_constant() {
        let f = q();
        // a = y^2 + x^3 (no common factor with b = y)
        let a: BiPoly = vec![poly(&[0, 0, 0, 1], &f), vec![], poly(&[1], &f)];
        let b: BiPoly = vec![vec![], poly(&[1], &f)];
        let g = bi_gcd(&a, &b, &f);
        assert_eq!(g.len(), 1);
        assert_eq!(degree(&g[0]), Some(0));
    }
}

//! Randomized modular rank: reduces matrix entries and the field's minimal
//! polynomial modulo random 62-bit primes and eliminates in the quotient
//! ring F_p[t]/(m). The minimal polynomial need not stay irreducible mod p;
//! when elimination meets a zero divisor the modulus is split along the
//! offending gcd and the maximum of the component ranks is taken. Every
//! component rank is a specialization of the true rank, so the result is
//! always a lower bound for [`ExactMatrix::rank_exact`]; it differs only if
//! every sampled prime divides a fixed nonzero maximal minor, which for
//! independent 62-bit primes has negligible probability.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::field::Rat;
use crate::linalg::ExactMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModularError {
    #[error("prime {0} is unusable: a denominator vanishes or the minimal polynomial degenerates")]
    BadPrime(u64),
}

/// Rank engine selection. `Auto` uses the modular path for matrices with
/// more than `threshold` entries and exact elimination otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankMode {
    Exact,
    Modular { primes: usize },
    Auto { primes: usize, threshold: usize },
}

impl Default for RankMode {
    fn default() -> Self {
        RankMode::Auto {
            primes: 3,
            threshold: 10_000,
        }
    }
}

impl RankMode {
    pub fn rank(&self, m: &ExactMatrix) -> usize {
        match *self {
            RankMode::Exact => m.rank_exact(),
            RankMode::Modular { primes } => rank_modular(m, primes),
            RankMode::Auto { primes, threshold } => {
                if m.entry_count() > threshold {
                    rank_modular(m, primes)
                } else {
                    m.rank_exact()
                }
            }
        }
    }

    pub fn describe(&self) -> String {
        match *self {
            RankMode::Exact => "exact".to_string(),
            RankMode::Modular { primes } => format!("modular({primes} primes)"),
            RankMode::Auto { primes, threshold } => {
                format!("auto(modular {primes} primes over {threshold} entries)")
            }
        }
    }
}

const MAXN: usize = 4;

/// Element of F_p[t]/(m), dense coordinates of degree < n.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct Fq([u64; MAXN]);

impl Fq {
    const ZERO: Fq = Fq([0; MAXN]);

    fn is_zero(&self) -> bool {
        self.0 == [0; MAXN]
    }
}

#[derive(Clone, Debug)]
struct ModCtx {
    p: u64,
    n: usize,
    /// monic minimal polynomial mod p, constant first, length n+1
    mp: Vec<u64>,
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn addmod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

fn submod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

impl ModCtx {
    fn mul(&self, a: &Fq, b: &Fq) -> Fq {
        let n = self.n;
        if n == 1 {
            let mut out = Fq::ZERO;
            out.0[0] = mulmod(a.0[0], b.0[0], self.p);
            return out;
        }
        let mut acc = [0u128; 2 * MAXN - 1];
        for i in 0..n {
            let ai = a.0[i];
            if ai == 0 {
                continue;
            }
            for j in 0..n {
                acc[i + j] += ai as u128 * b.0[j] as u128;
            }
        }
        let mut c = [0u64; 2 * MAXN - 1];
        for k in 0..2 * n - 1 {
            c[k] = (acc[k] % self.p as u128) as u64;
        }
        for k in (n..2 * n - 1).rev() {
            let lead = c[k];
            if lead == 0 {
                continue;
            }
            c[k] = 0;
            for j in 0..n {
                if self.mp[j] != 0 {
                    c[k - n + j] = submod(c[k - n + j], mulmod(lead, self.mp[j], self.p), self.p);
                }
            }
        }
        let mut out = Fq::ZERO;
        out.0[..n].copy_from_slice(&c[..n]);
        out
    }

    fn sub(&self, a: &Fq, b: &Fq) -> Fq {
        let mut out = Fq::ZERO;
        for k in 0..self.n {
            out.0[k] = submod(a.0[k], b.0[k], self.p);
        }
        out
    }

    /// Inverse in the quotient ring; `Err` carries the nontrivial gcd with
    /// the modulus (a proper factor, since the modulus is squarefree).
    fn inv(&self, a: &Fq) -> Result<Fq, Vec<u64>> {
        let a_poly: Vec<u64> = a.0[..self.n].to_vec();
        let (g, u) = pxgcd(&a_poly, &self.mp, self.p);
        if pdeg(&g) == Some(0) {
            let c = invmod(g[0], self.p);
            let u = prem(&u, &self.mp, self.p);
            let mut out = Fq::ZERO;
            for (k, &coeff) in u.iter().enumerate() {
                out.0[k] = mulmod(coeff, c, self.p);
            }
            Ok(out)
        } else {
            Err(pnormalize(g))
        }
    }

    fn reduce_fq(&self, coords: &[Rat]) -> Result<Fq, ModularError> {
        let mut raw = vec![0u64; coords.len().max(1)];
        for (k, q) in coords.iter().enumerate() {
            raw[k] = reduce_rat(q, self.p)?;
        }
        // fold coordinates above the (possibly split) modulus degree
        let reduced = prem(&raw, &self.mp, self.p);
        let mut out = Fq::ZERO;
        for (k, &c) in reduced.iter().enumerate().take(self.n) {
            out.0[k] = c;
        }
        Ok(out)
    }
}

fn reduce_rat(q: &Rat, p: u64) -> Result<u64, ModularError> {
    let pm = BigInt::from(p);
    let n = q.numer().mod_floor(&pm).to_u64().unwrap();
    let d = q.denom().mod_floor(&pm).to_u64().unwrap();
    if d == 0 {
        return Err(ModularError::BadPrime(p));
    }
    Ok(mulmod(n, invmod(d, p), p))
}

// --- small dense polynomials over F_p, constant term first ---

fn pnormalize(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn pdeg(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

fn pderiv(a: &[u64], p: u64) -> Vec<u64> {
    if a.len() <= 1 {
        return vec![];
    }
    pnormalize(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mulmod(c, (i as u64) % p, p))
            .collect(),
    )
}

fn pdivrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let db = pdeg(b).expect("nonzero divisor");
    let lead_inv = invmod(b[db], p);
    let mut r = pnormalize(a.to_vec());
    let mut q = vec![0u64; r.len().saturating_sub(db)];
    while let Some(dr) = pdeg(&r) {
        if dr < db {
            break;
        }
        let c = mulmod(r[dr], lead_inv, p);
        q[dr - db] = c;
        for k in 0..=db {
            let t = mulmod(b[k], c, p);
            r[dr - db + k] = submod(r[dr - db + k], t, p);
        }
        r = pnormalize(r);
    }
    (pnormalize(q), r)
}

fn prem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    pdivrem(a, b, p).1
}

fn pgcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = pnormalize(a.to_vec());
    let mut b = pnormalize(b.to_vec());
    while !b.is_empty() {
        let r = prem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Half-extended gcd: (g, u) with u*a = g mod m.
fn pxgcd(a: &[u64], m: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r0 = pnormalize(a.to_vec());
    let mut r1 = pnormalize(m.to_vec());
    let mut u0 = vec![1u64];
    let mut u1: Vec<u64> = vec![];
    while !r1.is_empty() {
        let (q, r) = pdivrem(&r0, &r1, p);
        let qu = pmul(&q, &u1, p);
        let next = psub(&u0, &qu, p);
        r0 = r1;
        r1 = r;
        u0 = u1;
        u1 = next;
    }
    (r0, u0)
}

fn pmul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = addmod(out[i + j], mulmod(ai, bj, p), p);
        }
    }
    pnormalize(out)
}

fn psub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = a.to_vec();
    if out.len() < b.len() {
        out.resize(b.len(), 0);
    }
    for (o, &c) in out.iter_mut().zip(b) {
        *o = submod(*o, c, p);
    }
    pnormalize(out)
}

// --- primality ---

/// Deterministic Miller-Rabin for u64 inputs.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn random_prime_62<R: Rng>(rng: &mut R) -> u64 {
    loop {
        let candidate = rng.gen_range((1u64 << 61)..(1u64 << 62)) | 1;
        if is_prime_u64(candidate) {
            return candidate;
        }
    }
}

/// Rank of the matrix reduced modulo one prime, or `Err` when the prime is
/// unusable (a denominator vanishes or the minimal polynomial stops being
/// squarefree mod p). The result never exceeds the exact rank.
pub fn rank_modulo_prime(m: &ExactMatrix, p: u64) -> Result<usize, ModularError> {
    let field = m.field();
    let mut mp = Vec::with_capacity(field.minpoly().len());
    for c in field.minpoly() {
        mp.push(reduce_rat(c, p)?);
    }
    let mp = pnormalize(mp);
    let n = match pdeg(&mp) {
        Some(n) if n >= 1 && n <= MAXN => n,
        _ => return Err(ModularError::BadPrime(p)),
    };
    let g = pgcd(&mp, &pderiv(&mp, p), p);
    if pdeg(&g) != Some(0) {
        return Err(ModularError::BadPrime(p));
    }
    let ctx = ModCtx { p, n, mp };
    let mut entries = Vec::with_capacity(m.entry_count());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            entries.push(ctx.reduce_fq(m.get(r, c).coords())?);
        }
    }
    Ok(rank_in_quotient(entries, m.rows(), m.cols(), &ctx))
}

/// Elimination over F_p[t]/(m) with dynamic splitting: if a column offers
/// only zero-divisor pivots, split the modulus along the gcd and take the
/// larger of the component ranks.
fn rank_in_quotient(mut mat: Vec<Fq>, rows: usize, cols: usize, ctx: &ModCtx) -> usize {
    let mut rank = 0usize;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let mut pivot: Option<(usize, Fq)> = None;
        let mut zero_divisor: Option<Vec<u64>> = None;
        for r in rank..rows {
            let e = mat[r * cols + col];
            if e.is_zero() {
                continue;
            }
            match ctx.inv(&e) {
                Ok(inv) => {
                    pivot = Some((r, inv));
                    break;
                }
                Err(g) => zero_divisor = Some(g),
            }
        }
        match pivot {
            Some((prow, inv)) => {
                if prow != rank {
                    for c in col..cols {
                        mat.swap(prow * cols + c, rank * cols + c);
                    }
                }
                for c in col..cols {
                    mat[rank * cols + c] = ctx.mul(&mat[rank * cols + c], &inv);
                }
                for r in rank + 1..rows {
                    let head = mat[r * cols + col];
                    if head.is_zero() {
                        continue;
                    }
                    for c in col..cols {
                        let t = ctx.mul(&head, &mat[rank * cols + c]);
                        mat[r * cols + c] = ctx.sub(&mat[r * cols + c], &t);
                    }
                }
                rank += 1;
            }
            None => {
                if let Some(g) = zero_divisor {
                    let (h, rem) = pdivrem(&ctx.mp, &g, ctx.p);
                    debug_assert!(rem.is_empty());
                    let sub_rows = rows - rank;
                    let sub_cols = cols - col;
                    let remaining: Vec<Fq> = (rank..rows)
                        .flat_map(|r| (col..cols).map(move |c| (r, c)))
                        .map(|(r, c)| mat[r * cols + c])
                        .collect();
                    let branch = |modulus: Vec<u64>| -> usize {
                        let bn = pdeg(&modulus).unwrap();
                        let monic = make_monic_modp(modulus, ctx.p);
                        let bctx = ModCtx {
                            p: ctx.p,
                            n: bn,
                            mp: monic,
                        };
                        let reduced: Vec<Fq> = remaining
                            .iter()
                            .map(|e| {
                                let r = prem(&e.0[..ctx.n], &bctx.mp, ctx.p);
                                let mut out = Fq::ZERO;
                                for (k, &c) in r.iter().enumerate() {
                                    out.0[k] = c;
                                }
                                out
                            })
                            .collect();
                        rank_in_quotient(reduced, sub_rows, sub_cols, &bctx)
                    };
                    return rank + branch(g).max(branch(h));
                }
            }
        }
    }
    rank
}

fn make_monic_modp(mut a: Vec<u64>, p: u64) -> Vec<u64> {
    let d = pdeg(&a).unwrap();
    let inv = invmod(a[d], p);
    for c in &mut a {
        *c = mulmod(*c, inv, p);
    }
    a.truncate(d + 1);
    a
}

/// Maximum rank observed over `primes` random 62-bit primes; always a lower
/// bound for the exact rank, equal with overwhelming probability.
pub fn rank_modular(m: &ExactMatrix, primes: usize) -> usize {
    assert!(primes >= 1);
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    let mut rng = rand::thread_rng();
    let mut ranks: Vec<usize> = Vec::new();
    let mut attempts = 0usize;
    while ranks.len() < primes {
        attempts += 1;
        assert!(attempts <= primes * 50, "no usable primes found");
        let want = primes - ranks.len();
        let candidates: Vec<u64> = (0..want).map(|_| random_prime_62(&mut rng)).collect();
        let batch: Vec<usize> = candidates
            .par_iter()
            .filter_map(|&p| rank_modulo_prime(m, p).ok())
            .collect();
        ranks.extend(batch);
    }
    ranks.into_iter().max().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat_int, FieldElement, NumberField};
    use crate::linalg::mulmap_matrix;
    use crate::parse::parse_hompoly;
    use num_bigint::BigInt;

    #[test]
    fn identity_rank_any_prime() {
        let f = NumberField::rationals();
        let m = ExactMatrix::identity(5, &f);
        assert_eq!(rank_modulo_prime(&m, 2305843009213693951).unwrap(), 5);
        assert_eq!(rank_modular(&m, 1), 5);
    }

    #[test]
    fn constructed_degeneracy_needs_second_prime() {
        // 1x1 matrix [p]: rank 0 mod the chosen prime, 1 mod any other.
        let f = NumberField::rationals();
        let p: u64 = 2305843009213693951; // 2^61 - 1
        let mut m = ExactMatrix::zero(1, 1, &f);
        m.set(
            0,
            0,
            FieldElement::from_rat(Rat::from_integer(BigInt::from(p)), &f),
        );
        assert_eq!(rank_modulo_prime(&m, p).unwrap(), 0);
        let q: u64 = 4611686018427387847; // prime below 2^62
        assert!(is_prime_u64(q));
        assert_eq!(rank_modulo_prime(&m, q).unwrap(), 1);
        assert_eq!(rank_modular(&m, 2), 1);
    }

    #[test]
    fn agrees_with_exact_on_number_field_matrix() {
        let f = NumberField::eisenstein();
        let hesse_line = parse_hompoly("x + e*y + z", &f).unwrap();
        let gens = [
            hesse_line.clone().mul(&parse_hompoly("x", &f).unwrap()),
            parse_hompoly("y^2 + e*z^2", &f).unwrap(),
            parse_hompoly("x*z + y*z", &f).unwrap(),
        ];
        let m = mulmap_matrix(&gens, &[2, 2, 2], 4).unwrap();
        let exact = m.rank_exact();
        assert_eq!(rank_modular(&m, 3), exact);
    }

    #[test]
    fn bad_prime_on_denominator() {
        let f = NumberField::rationals();
        let mut m = ExactMatrix::zero(1, 1, &f);
        let p: u64 = 4611686018427387847;
        m.set(
            0,
            0,
            FieldElement::from_rat(Rat::new(BigInt::from(1), BigInt::from(p)), &f),
        );
        assert!(matches!(
            rank_modulo_prime(&m, p),
            Err(ModularError::BadPrime(_))
        ));
        // but another prime works
        assert_eq!(rank_modulo_prime(&m, 2305843009213693951).unwrap(), 1);
    }

    #[test]
    fn split_modulus_path() {
        // t^2 - 1 is squarefree but splits for every odd prime; inverting
        // t - 1 forces the D5 split. Rank must still match the exact rank.
        let f = NumberField::new(vec![rat_int(-1), rat_int(0), rat_int(1)], "s").unwrap();
        let s = FieldElement::generator(&f);
        let one = FieldElement::one(&f);
        // [[s-1, 0], [0, s+1]]: both entries are zero divisors in every
        // split; rank over the fraction field... s-1 and s+1 are nonzero
        // elements of the ring, the matrix has exact "rank" 2 over Q[t]/(t^2-1)
        // viewed via Bareiss (nonzero products of pivots), while each split
        // component sees rank 1. The modular result stays a lower bound.
        let mut m = ExactMatrix::zero(2, 2, &f);
        m.set(0, 0, s.sub(&one));
        m.set(1, 1, s.add(&one));
        let r = rank_modulo_prime(&m, 2305843009213693951).unwrap();
        assert!(r <= 2 && r >= 1);
        // a diagonal of units is seen at full rank in every component
        let mut u = ExactMatrix::zero(2, 2, &f);
        u.set(0, 0, s.clone());
        u.set(1, 1, one.clone());
        assert_eq!(rank_modulo_prime(&u, 2305843009213693951).unwrap(), 2);
    }

    #[test]
    fn primality_test_sanity() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(2305843009213693951));
        assert!(!is_prime_u64(2305843009213693953));
        assert!(!is_prime_u64((1 << 61) + 1));
        let mut rng = rand::thread_rng();
        let p = random_prime_62(&mut rng);
        assert!(p > (1 << 61) && p < (1 << 62) && is_prime_u64(p));
    }
}

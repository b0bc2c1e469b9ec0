//! Graded exact linear algebra over a [`NumberField`]: deterministic
//! monomial bases, multiplication-map matrices, fraction-free rank, and
//! right-kernel bases.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::field::{FieldElement, NumberField};
use crate::poly::HomPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("generator {index} has degree {found}, expected {expected} for destination degree")]
    DegreeMismatch {
        index: usize,
        found: u32,
        expected: u32,
    },
}

/// Number of monomials of total degree `k` in three variables.
pub fn dim_s3(k: u32) -> usize {
    ((k as usize + 1) * (k as usize + 2)) / 2
}

/// Deterministic ordered monomial basis of a graded piece, in graded
/// lexicographic order with x > y > z descending.
#[derive(Debug, Clone)]
pub struct MonoBasis {
    nvars: usize,
    monomials: Vec<[u32; 3]>,
    index: HashMap<[u32; 3], usize>,
}

impl MonoBasis {
    /// All monomials of total degree exactly `k` in `nvars` (2 or 3)
    /// variables.
    pub fn homogeneous(nvars: usize, k: u32) -> Self {
        assert!(nvars == 2 || nvars == 3, "nvars must be 2 or 3");
        let mut monomials = Vec::new();
        if nvars == 3 {
            for a in (0..=k).rev() {
                for b in (0..=k - a).rev() {
                    monomials.push([a, b, k - a - b]);
                }
            }
        } else {
            for a in (0..=k).rev() {
                monomials.push([a, k - a, 0]);
            }
        }
        Self::from_list(nvars, monomials)
    }

    /// All bivariate monomials of total degree strictly below `k`,
    /// graded lexicographic.
    pub fn affine_truncated(k: u32) -> Self {
        let mut monomials = Vec::new();
        for d in 0..k {
            for a in (0..=d).rev() {
                monomials.push([a, d - a, 0]);
            }
        }
        Self::from_list(2, monomials)
    }

    fn from_list(nvars: usize, monomials: Vec<[u32; 3]>) -> Self {
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (*m, i))
            .collect();
        MonoBasis {
            nvars,
            monomials,
            index,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[[u32; 3]] {
        &self.monomials
    }

    pub fn position(&self, m: &[u32; 3]) -> Option<usize> {
        self.index.get(m).copied()
    }
}

/// Dense matrix of exact field elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<FieldElement>,
    field: Arc<NumberField>,
}

impl ExactMatrix {
    pub fn zero(rows: usize, cols: usize, field: &Arc<NumberField>) -> Self {
        ExactMatrix {
            rows,
            cols,
            entries: vec![FieldElement::zero(field); rows * cols],
            field: Arc::clone(field),
        }
    }

    pub fn identity(n: usize, field: &Arc<NumberField>) -> Self {
        let mut m = Self::zero(n, n, field);
        for k in 0..n {
            m.set(k, k, FieldElement::one(field));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry_count(&self) -> usize {
        self.rows * self.cols
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn get(&self, r: usize, c: usize) -> &FieldElement {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        self.entries[r * self.cols + c] = v;
    }

    /// Rank over the field by fraction-free (Bareiss) elimination with row
    /// pivoting on the first nonzero entry; deterministic.
    pub fn rank_exact(&self) -> usize {
        let mut m = self.entries.clone();
        let cols = self.cols;
        let rows = self.rows;
        let mut rank = 0usize;
        let mut denom = FieldElement::one(&self.field);
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(pivot_row) = (rank..rows).find(|&r| !m[r * cols + col].is_zero()) else {
                continue;
            };
            if pivot_row != rank {
                for c in 0..cols {
                    m.swap(pivot_row * cols + c, rank * cols + c);
                }
            }
            let pivot = m[rank * cols + col].clone();
            for r in rank + 1..rows {
                let head = m[r * cols + col].clone();
                if head.is_zero() {
                    // still rescale the remaining entries to keep the
                    // Bareiss invariant (entries are minors of the input)
                    for c in col + 1..cols {
                        if !m[r * cols + c].is_zero() {
                            let v = m[r * cols + c].mul(&pivot);
                            m[r * cols + c] = v.div(&denom).expect("exact Bareiss division");
                        }
                    }
                    continue;
                }
                for c in col + 1..cols {
                    let v = m[r * cols + c]
                        .mul(&pivot)
                        .sub(&head.mul(&m[rank * cols + c]));
                    m[r * cols + c] = v.div(&denom).expect("exact Bareiss division");
                }
                m[r * cols + col] = FieldElement::zero(&self.field);
            }
            denom = pivot;
            rank += 1;
        }
        rank
    }

    /// Basis of the right kernel via reduced row echelon form. Vectors are
    /// normalized so their first nonzero coordinate is 1 and are ordered by
    /// free column; deterministic.
    pub fn kernel_basis(&self) -> Vec<Vec<FieldElement>> {
        let cols = self.cols;
        let rows = self.rows;
        let mut m = self.entries.clone();
        let mut pivot_cols: Vec<usize> = Vec::new();
        let mut rank = 0usize;
        for col in 0..cols {
            let Some(pivot_row) = (rank..rows).find(|&r| !m[r * cols + col].is_zero()) else {
                continue;
            };
            if pivot_row != rank {
                for c in 0..cols {
                    m.swap(pivot_row * cols + c, rank * cols + c);
                }
            }
            let inv = m[rank * cols + col].inv().expect("pivot invertible");
            for c in col..cols {
                m[rank * cols + c] = m[rank * cols + c].mul(&inv);
            }
            for r in 0..rows {
                if r == rank || m[r * cols + col].is_zero() {
                    continue;
                }
                let factor = m[r * cols + col].clone();
                for c in col..cols {
                    let v = m[r * cols + c].sub(&factor.mul(&m[rank * cols + c]));
                    m[r * cols + c] = v;
                }
            }
            pivot_cols.push(col);
            rank += 1;
            if rank == rows {
                break;
            }
        }
        let mut basis = Vec::new();
        let zero = FieldElement::zero(&self.field);
        let one = FieldElement::one(&self.field);
        for free in 0..cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![zero.clone(); cols];
            v[free] = one.clone();
            for (row, &pc) in pivot_cols.iter().enumerate() {
                if pc < free {
                    v[pc] = m[row * cols + free].neg();
                }
            }
            // normalize leading coordinate to 1
            if let Some(lead) = v.iter().position(|c| !c.is_zero()) {
                let inv = v[lead].inv().expect("nonzero coordinate");
                for c in &mut v {
                    *c = c.mul(&inv);
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Matrix-vector product, for kernel verification.
    pub fn apply(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = FieldElement::zero(&self.field);
                for c in 0..self.cols {
                    let e = self.get(r, c);
                    if !e.is_zero() && !v[c].is_zero() {
                        acc = acc.add(&e.mul(&v[c]));
                    }
                }
                acc
            })
            .collect()
    }
}

/// Matrix of the map (a_1, ..., a_s) -> sum a_i * gen_i from the product of
/// the degree-`src_degs[i]` graded pieces into the degree-`dst_deg` piece.
/// Columns are indexed by (generator, source monomial) pairs, generators
/// outermost; rows by the destination monomial basis.
pub fn mulmap_matrix(
    gens: &[HomPoly],
    src_degs: &[u32],
    dst_deg: u32,
) -> Result<ExactMatrix, LinalgError> {
    assert_eq!(gens.len(), src_degs.len());
    let field = gens
        .first()
        .map(|g| Arc::clone(g.field()))
        .expect("at least one generator");
    for (i, (g, &r)) in gens.iter().zip(src_degs).enumerate() {
        if !g.is_zero() && g.degree() + r != dst_deg {
            return Err(LinalgError::DegreeMismatch {
                index: i,
                found: g.degree(),
                expected: dst_deg - r.min(dst_deg),
            });
        }
    }
    let dst = MonoBasis::homogeneous(3, dst_deg);
    let src_bases: Vec<MonoBasis> = src_degs
        .iter()
        .map(|&r| MonoBasis::homogeneous(3, r))
        .collect();
    let cols: usize = src_bases.iter().map(MonoBasis::len).sum();
    let mut m = ExactMatrix::zero(dst.len(), cols, &field);
    let mut col = 0usize;
    for (g, src) in gens.iter().zip(&src_bases) {
        for mono in src.monomials() {
            for (e, c) in g.poly().terms() {
                let target = [e[0] + mono[0], e[1] + mono[1], e[2] + mono[2]];
                let row = dst.position(&target).expect("degree bookkeeping");
                let prev = m.get(row, col).add(c);
                m.set(row, col, prev);
            }
            col += 1;
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_hompoly;

    fn q() -> Arc<NumberField> {
        NumberField::rationals()
    }

    /// Independent rank oracle: plain rational Gaussian elimination with
    /// field division, no Bareiss step.
    pub(crate) fn rank_naive(m: &ExactMatrix) -> usize {
        let mut rows: Vec<Vec<FieldElement>> = (0..m.rows())
            .map(|r| (0..m.cols()).map(|c| m.get(r, c).clone()).collect())
            .collect();
        let mut rank = 0;
        for col in 0..m.cols() {
            let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(p, rank);
            let inv = rows[rank][col].inv().unwrap();
            for c in col..m.cols() {
                rows[rank][c] = rows[rank][c].mul(&inv);
            }
            for r in 0..rows.len() {
                if r != rank && !rows[r][col].is_zero() {
                    let f = rows[r][col].clone();
                    for c in col..m.cols() {
                        let v = rows[r][c].sub(&f.mul(&rows[rank][c]));
                        rows[r][c] = v;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(MonoBasis::homogeneous(3, 0).len(), 1);
        assert_eq!(MonoBasis::homogeneous(3, 2).len(), 6);
        assert_eq!(MonoBasis::homogeneous(3, 30).len(), 496);
        assert_eq!(MonoBasis::homogeneous(2, 5).len(), 6);
        // affine truncation: monomials of total degree < k
        assert_eq!(MonoBasis::affine_truncated(4).len(), 10);
    }

    #[test]
    fn basis_order_is_graded_lex() {
        let b = MonoBasis::homogeneous(3, 2);
        assert_eq!(
            b.monomials(),
            &[[2, 0, 0], [1, 1, 0], [1, 0, 1], [0, 2, 0], [0, 1, 1], [0, 0, 2]]
        );
    }

    #[test]
    fn rank_of_zero_and_identity() {
        let f = q();
        assert_eq!(ExactMatrix::zero(4, 3, &f).rank_exact(), 0);
        assert_eq!(ExactMatrix::identity(5, &f).rank_exact(), 5);
        assert!(ExactMatrix::identity(3, &f).kernel_basis().is_empty());
    }

    #[test]
    fn triangle_jacobian_map_rank_seven() {
        // gens = (yz, xz, xy), src 1, dst 3: the image misses x^3, y^3, z^3
        // so the rank is 10 - 3 = 7; cross-checked against the naive oracle.
        let f = q();
        let gens = [
            parse_hompoly("y*z", &f).unwrap(),
            parse_hompoly("x*z", &f).unwrap(),
            parse_hompoly("x*y", &f).unwrap(),
        ];
        let m = mulmap_matrix(&gens, &[1, 1, 1], 3).unwrap();
        assert_eq!((m.rows(), m.cols()), (10, 9));
        assert_eq!(m.rank_exact(), 7);
        assert_eq!(rank_naive(&m), 7);
        // kernel dimension 9 - 7 = 2, containing (x, -y, 0)
        let kernel = m.kernel_basis();
        assert_eq!(kernel.len(), 2);
        assert!(kernel_contains(&m, &kernel, &xyz_relation(&f)));
        for v in &kernel {
            assert!(m.apply(v).iter().all(FieldElement::is_zero));
        }
    }

    /// (x, -y, 0) as a column vector in the (generator, monomial) indexing
    /// of the triangle map above: src basis per generator is [x, y, z].
    fn xyz_relation(f: &Arc<NumberField>) -> Vec<FieldElement> {
        let mut v = vec![FieldElement::zero(f); 9];
        v[0] = FieldElement::one(f); // a = x on generator yz
        v[4] = FieldElement::from_int(-1, f); // b = -y on generator xz
        v
    }

    /// Membership in the kernel span, checked by rank augmentation.
    fn kernel_contains(
        m: &ExactMatrix,
        basis: &[Vec<FieldElement>],
        v: &[FieldElement],
    ) -> bool {
        let field = m.field();
        let rows = basis.len() + 1;
        let mut aug = ExactMatrix::zero(rows, v.len(), field);
        for (r, b) in basis.iter().enumerate() {
            for (c, e) in b.iter().enumerate() {
                aug.set(r, c, e.clone());
            }
        }
        for (c, e) in v.iter().enumerate() {
            aug.set(rows - 1, c, e.clone());
        }
        aug.rank_exact() == basis.len()
    }

    #[test]
    fn smooth_conic_jacobian_kernel() {
        // Jacobian of x^2+y^2+z^2 at src 1 surjects onto S_2: rank 6,
        // kernel dimension 3 (the Koszul relations), containing (y, -x, 0).
        let f = q();
        let conic = parse_hompoly("x^2+y^2+z^2", &f).unwrap();
        let gens = conic.gradient();
        let m = mulmap_matrix(&gens, &[1, 1, 1], 2).unwrap();
        assert_eq!(m.rank_exact(), 6);
        assert_eq!(rank_naive(&m), 6);
        let kernel = m.kernel_basis();
        assert_eq!(kernel.len(), 3);
        let mut v = vec![FieldElement::zero(&f); 9];
        v[1] = FieldElement::one(&f); // a = y on f_x
        v[3] = FieldElement::from_int(-1, &f); // b = -x on f_y
        assert!(kernel_contains(&m, &kernel, &v));
    }

    #[test]
    fn degree_mismatch_is_reported() {
        let f = q();
        let gens = [parse_hompoly("x^2", &f).unwrap()];
        assert!(matches!(
            mulmap_matrix(&gens, &[1], 2),
            Err(LinalgError::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn bareiss_agrees_with_naive_oracle_on_random_matrices() {
        use rand::{Rng, SeedableRng};
        let f = NumberField::eisenstein();
        let mut rng = rand::rngs::StdRng::seed_from_u64(42);
        for trial in 0..40 {
            let rows = rng.gen_range(1..=8);
            let cols = rng.gen_range(1..=8);
            let mut m = ExactMatrix::zero(rows, cols, &f);
            for r in 0..rows {
                for c in 0..cols {
                    if rng.gen_bool(0.7) {
                        let coords = vec![
                            crate::field::rat_int(rng.gen_range(-4..=4)),
                            crate::field::rat_int(rng.gen_range(-2..=2)),
                        ];
                        m.set(r, c, FieldElement::new(coords, &f));
                    }
                }
            }
            assert_eq!(m.rank_exact(), rank_naive(&m), "trial {trial}");
            assert_eq!(m.rank_exact() + m.kernel_basis().len(), cols);
            for v in m.kernel_basis() {
                assert!(m.apply(&v).iter().all(FieldElement::is_zero));
            }
        }
    }
}

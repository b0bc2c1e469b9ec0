//! Global curve invariants: the Hilbert function of the Milnor algebra, the
//! total Tjurina number, the minimal degree of a Jacobian relation, freeness
//! with exponents, and the du Plessis-Wall upper bounds.

use thiserror::Error;

use crate::field::FieldElement;
use crate::linalg::{dim_s3, mulmap_matrix, MonoBasis};
use crate::modular::RankMode;
use crate::poly::{HomPoly, MPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GlobalError {
    #[error("all three partial derivatives vanish; the input is malformed")]
    ZeroGradient,
    #[error("Hilbert function did not stabilize below degree {cap}; the curve is not reduced")]
    NoStabilization { cap: u32 },
    #[error("no Jacobian relation found up to degree {0}; internal fault")]
    NotFoundBelowDegree(u32),
    #[error("mdr argument out of range: r = {r}, degree = {d}")]
    OutOfRange { r: u32, d: u32 },
}

/// Global invariants of a reduced plane curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalInvariants {
    pub degree: u32,
    /// Total Tjurina number tau(C), the stable value of the Hilbert
    /// function of the Milnor algebra.
    pub tau: u64,
    /// Minimal degree of a Jacobian relation.
    pub mdr: u32,
    /// Dimension of the relation space at degree `mdr`.
    pub ar_kernel_dim: usize,
    /// One witness relation (a, b, c) with a*f_x + b*f_y + c*f_z = 0.
    pub witness_syzygy: Option<[HomPoly; 3]>,
    pub free: bool,
    /// Exponents (d1, d2) = (mdr, d - 1 - mdr) when the curve is free.
    pub exponents: Option<(u32, u32)>,
    /// Hilbert dimensions actually computed, as (degree, dimension) pairs.
    pub hilbert_trace: Vec<(u32, u64)>,
}

/// Dimension of the degree-`k` piece of the Milnor algebra S/J_f.
pub fn milnor_hilbert_dim(f: &HomPoly, k: u32, mode: RankMode) -> Result<u64, GlobalError> {
    let d = f.degree();
    let grad = f.gradient();
    if grad.iter().all(HomPoly::is_zero) {
        return Err(GlobalError::ZeroGradient);
    }
    let dim_sk = dim_s3(k) as u64;
    if k + 1 < d {
        return Ok(dim_sk);
    }
    let src = k + 1 - d;
    let m = mulmap_matrix(&grad, &[src, src, src], k).expect("degree bookkeeping");
    let rank = mode.rank(&m) as u64;
    Ok(dim_sk - rank)
}

/// Total Tjurina number: Hilbert dimensions are computed from degree
/// 3(d-2) upward until two consecutive values agree; a hard cap at
/// 3(d-2)+d converts non-reduced input that slipped past the probabilistic
/// check into an error.
pub fn total_tjurina(f: &HomPoly, mode: RankMode) -> Result<(u64, Vec<(u32, u64)>), GlobalError> {
    let d = f.degree();
    assert!(d >= 2, "total_tjurina needs degree >= 2");
    let start = 3 * (d - 2);
    let cap = start + d;
    let mut trace: Vec<(u32, u64)> = Vec::new();
    let mut prev = milnor_hilbert_dim(f, start, mode)?;
    trace.push((start, prev));
    let mut k = start + 1;
    while k <= cap {
        let dim = milnor_hilbert_dim(f, k, mode)?;
        trace.push((k, dim));
        if dim == prev {
            return Ok((dim, trace));
        }
        prev = dim;
        k += 1;
    }
    Err(GlobalError::NoStabilization { cap })
}

/// Result of the minimal-degree relation search.
#[derive(Debug, Clone)]
pub struct MdrResult {
    pub r: u32,
    pub kernel_dim: usize,
    /// Kernel vectors converted to syzygy triples, kept for reports.
    pub syzygies: Vec<[HomPoly; 3]>,
}

/// Minimal degree r with AR(f)_r != 0, searched from r = 0 upward. The
/// Koszul relations guarantee termination by r = d - 1.
pub fn mdr(f: &HomPoly, mode: RankMode) -> Result<MdrResult, GlobalError> {
    let d = f.degree();
    let grad = f.gradient();
    if grad.iter().all(HomPoly::is_zero) {
        return Err(GlobalError::ZeroGradient);
    }
    for r in 0..d {
        let m = mulmap_matrix(&grad, &[r, r, r], r + d - 1).expect("degree bookkeeping");
        let kernel_dim = m.cols() - mode.rank(&m);
        if kernel_dim > 0 {
            let kernel = m.kernel_basis();
            debug_assert_eq!(kernel.len(), kernel_dim);
            let src = MonoBasis::homogeneous(3, r);
            let syzygies = kernel
                .iter()
                .map(|v| kernel_vector_to_syzygy(v, &src, f))
                .collect();
            return Ok(MdrResult {
                r,
                kernel_dim,
                syzygies,
            });
        }
    }
    Err(GlobalError::NotFoundBelowDegree(d - 1))
}

fn kernel_vector_to_syzygy(v: &[FieldElement], src: &MonoBasis, f: &HomPoly) -> [HomPoly; 3] {
    let field = f.field();
    let n = src.len();
    let mut out = [
        MPoly::<3>::zero(field),
        MPoly::<3>::zero(field),
        MPoly::<3>::zero(field),
    ];
    for (slot, part) in out.iter_mut().enumerate() {
        for (j, mono) in src.monomials().iter().enumerate() {
            let c = &v[slot * n + j];
            if !c.is_zero() {
                *part = part.add(&MPoly::monomial(*mono, c.clone()));
            }
        }
    }
    out.map(|p| HomPoly::new(p).expect("graded piece is homogeneous"))
}

/// Assembles tau and mdr and decides freeness by the criterion
/// (d-1)^2 - r(d-r-1) = tau(C); exponents are (r, d-1-r) when it holds.
pub fn freeness(f: &HomPoly, mode: RankMode) -> Result<GlobalInvariants, GlobalError> {
    let d = f.degree();
    let (tau, trace) = total_tjurina(f, mode)?;
    let m = mdr(f, mode)?;
    let r = m.r;
    let free = freeness_identity_holds(d, r, tau);
    Ok(GlobalInvariants {
        degree: d,
        tau,
        mdr: r,
        ar_kernel_dim: m.kernel_dim,
        witness_syzygy: m.syzygies.into_iter().next(),
        free,
        exponents: free.then_some((r, d - 1 - r)),
        hilbert_trace: trace,
    })
}

/// The freeness identity (d-1)^2 - r(d-r-1) = tau.
pub fn freeness_identity_holds(d: u32, r: u32, tau: u64) -> bool {
    let d = d as i64;
    let r = r as i64;
    (d - 1) * (d - 1) - r * (d - r - 1) == tau as i64
}

/// Upper bound for the total Tjurina number at degree `d` and minimal
/// relation degree `r`:
/// (d-1)(d-r-1) + r^2 for r < d/2, with the binomial correction
/// C(2r-d+2, 2) subtracted when d/2 <= r <= d-1.
pub fn tau_max(d: u32, r: u32) -> Result<u64, GlobalError> {
    if r + 1 > d {
        return Err(GlobalError::OutOfRange { r, d });
    }
    let di = d as i64;
    let ri = r as i64;
    let base = (di - 1) * (di - ri - 1) + ri * ri;
    let value = if 2 * ri < di {
        base
    } else {
        let t = 2 * ri - di + 2;
        base - t * (t - 1) / 2
    };
    Ok(value as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::NumberField;
    use crate::parse::parse_hompoly;
    use std::sync::Arc;

    fn q() -> Arc<NumberField> {
        NumberField::rationals()
    }

    fn exact() -> RankMode {
        RankMode::Exact
    }

    #[test]
    fn triangle_hilbert_dimension() {
        let f = parse_hompoly("x*y*z", &q()).unwrap();
        // dim S_3 = 10 minus Jacobian map rank 7
        assert_eq!(milnor_hilbert_dim(&f, 3, exact()).unwrap(), 3);
    }

    #[test]
    fn smooth_conic_tau_zero() {
        let f = parse_hompoly("x^2+y^2+z^2", &q()).unwrap();
        assert_eq!(milnor_hilbert_dim(&f, 6, exact()).unwrap(), 0);
        let (tau, trace) = total_tjurina(&f, exact()).unwrap();
        assert_eq!(tau, 0);
        // socle degree 3(d-2) = 0 still shows dimension 1 before dropping
        assert_eq!(trace[0], (0, 1));
    }

    #[test]
    fn triangle_tau_and_mdr() {
        let f = parse_hompoly("x*y*z", &q()).unwrap();
        let (tau, _) = total_tjurina(&f, exact()).unwrap();
        assert_eq!(tau, 3);
        let m = mdr(&f, exact()).unwrap();
        assert_eq!(m.r, 1);
        assert_eq!(m.kernel_dim, 2);
        // witness syzygies really annihilate the gradient
        let grad = f.gradient();
        for s in &m.syzygies {
            let mut acc = MPoly::<3>::zero(f.field());
            for k in 0..3 {
                acc = acc.add(&s[k].poly().mul(grad[k].poly()));
            }
            assert!(acc.is_zero());
        }
        let inv = freeness(&f, exact()).unwrap();
        assert!(inv.free);
        assert_eq!(inv.exponents, Some((1, 1)));
    }

    #[test]
    fn smooth_conic_mdr_one() {
        // no degree-0 relation (partials independent); (y,-x,0) in degree 1
        let f = parse_hompoly("x^2+y^2+z^2", &q()).unwrap();
        let m = mdr(&f, exact()).unwrap();
        assert_eq!(m.r, 1);
        let inv = freeness(&f, exact()).unwrap();
        assert!(!inv.free);
    }

    #[test]
    fn tau_max_values() {
        assert_eq!(tau_max(8, 2).unwrap(), 39); // 3m^2-3m+3 at m=4
        assert_eq!(tau_max(11, 4).unwrap(), 76); // 3m^2+1 at m=5
        assert_eq!(tau_max(4, 2).unwrap(), 6); // case b: 3+4-C(2,2)
        assert!(matches!(tau_max(4, 4), Err(GlobalError::OutOfRange { .. })));
    }

    #[test]
    fn tau_max_strictly_decreasing() {
        for d in 2..=25u32 {
            let mut prev = None;
            for r in 0..d {
                let v = tau_max(d, r).unwrap();
                if let Some(p) = prev {
                    assert!(v < p, "tau_max({d}, {r}) = {v} not below {p}");
                }
                prev = Some(v);
            }
        }
    }

    #[test]
    fn zero_gradient_detected() {
        let f = HomPoly::zero(&q(), 3);
        assert_eq!(
            milnor_hilbert_dim(&f, 3, exact()).unwrap_err(),
            GlobalError::ZeroGradient
        );
    }
}

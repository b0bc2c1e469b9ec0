//! Combinatorics-only screening of line-arrangement tuples `d t2 t3 t4 ...`
//! against the naive count and the M-arrangement identity, without any
//! geometry.

use thiserror::Error;

use crate::arrangement::{cm_check, naive_count_check, tau_from_combinatorics, CmCheck, WeakCombinatorics};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScreenError {
    #[error("line {line}: malformed tuple `{text}`")]
    Malformed { line: usize, text: String },
}

/// Screening outcome for one tuple.
#[derive(Debug, Clone)]
pub struct ScreenRow {
    pub wc: WeakCombinatorics,
    pub naive_count_ok: bool,
    pub cm: CmCheck,
    pub tau: u64,
    /// Total Tjurina number an M-arrangement of this degree must have.
    pub target_tau: u64,
    /// Exponents (d1, d2) a free M-arrangement of this degree would have.
    pub target_exponents: (i64, i64),
}

impl ScreenRow {
    /// A tuple is a candidate M-arrangement when the naive count holds and
    /// the screening identity passes. The identity is necessary, not
    /// sufficient.
    pub fn candidate(&self) -> bool {
        self.naive_count_ok && self.cm == CmCheck::Passes
    }
}

/// Evaluates one tuple (d; t2, t3, t4, ...).
pub fn screen_tuple(d: usize, t: &[usize]) -> ScreenRow {
    let wc = WeakCombinatorics::from_tuple(d, t);
    let naive_count_ok = naive_count_check(&wc);
    let cm = cm_check(&wc);
    let tau = tau_from_combinatorics(&wc);
    let di = d as i64;
    let (target_tau, target_exponents) = if d % 2 == 1 {
        let m = (di - 1) / 2;
        ((3 * m * m + 1) as u64, (m - 1, m + 1))
    } else {
        let m = di / 2;
        ((3 * m * m - 3 * m + 3) as u64, (m - 2, m + 1))
    };
    ScreenRow {
        wc,
        naive_count_ok,
        cm,
        tau,
        target_tau,
        target_exponents,
    }
}

/// Parses a screening file: one `d t2 t3 t4 ...` tuple per line, `#`
/// comments allowed.
pub fn parse_screen_file(text: &str) -> Result<Vec<(usize, Vec<usize>)>, ScreenError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(k) => &raw[..k],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let mut nums = Vec::new();
        for part in line.split_whitespace() {
            let n: usize = part.parse().map_err(|_| ScreenError::Malformed {
                line: idx + 1,
                text: raw.to_string(),
            })?;
            nums.push(n);
        }
        if nums.is_empty() {
            continue;
        }
        let d = nums[0];
        if d < 2 {
            return Err(ScreenError::Malformed {
                line: idx + 1,
                text: raw.to_string(),
            });
        }
        out.push((d, nums[1..].to_vec()));
    }
    Ok(out)
}

pub fn format_row(row: &ScreenRow) -> String {
    let verdict = if row.candidate() {
        if row.tau == row.target_tau {
            "candidate (tau matches the M-target)"
        } else {
            "candidate"
        }
    } else if !row.naive_count_ok {
        "rejected (naive count fails)"
    } else {
        "rejected"
    };
    format!(
        "{}: naive count {}; screening identity {}; tau = {}; M-target tau = {} with (d1,d2) = ({},{}); {}",
        row.wc,
        if row.naive_count_ok { "holds" } else { "FAILS" },
        row.cm,
        row.tau,
        row.target_tau,
        row.target_exponents.0,
        row.target_exponents.1,
        verdict
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn screening_examples() {
        // A(9,1)
        let r = screen_tuple(9, &[6, 4, 3]);
        assert!(r.candidate());
        assert_eq!(r.tau, 49);
        assert_eq!(r.target_tau, 49);
        assert_eq!(r.target_exponents, (3, 5));
        // A(13,2)
        let r = screen_tuple(13, &[12, 4, 9]);
        assert!(r.candidate());
        assert_eq!(r.tau, 109);
        assert_eq!(r.target_tau, 109);
        // Klein
        let r = screen_tuple(21, &[0, 28, 21]);
        assert!(r.candidate());
        assert_eq!(r.tau, 301);
        assert_eq!(r.target_tau, 301);
        assert_eq!(r.target_exponents, (9, 11));
    }

    #[test]
    fn parse_and_malformed() {
        let parsed = parse_screen_file("9 6 4 3  # A(9,1)\n\n13 12 4 9\n").unwrap();
        assert_eq!(parsed.len(), 2);
        assert_eq!(parsed[0], (9, vec![6, 4, 3]));
        assert!(parse_screen_file("9 six\n").is_err());
    }
}

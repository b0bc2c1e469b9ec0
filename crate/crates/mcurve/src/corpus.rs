//! The built-in corpus: every example curve with its expected invariants,
//! plus the screening tuples. `run_corpus` re-analyzes each entry and
//! compares against its expect block.

use rayon::prelude::*;

use crate::analyze::{analyze, compare_expectations, Analysis, AnalyzeError, EngineOptions};
use crate::curvefile::parse_curve_file;
use crate::screen::{parse_screen_file, screen_tuple, ScreenRow};

#[derive(Debug, Clone, Copy)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub text: &'static str,
}

pub const CURVES: &[CorpusEntry] = &[
    CorpusEntry {
        name: "triangle",
        text: include_str!("../corpus/triangle.curve"),
    },
    CorpusEntry {
        name: "conic",
        text: include_str!("../corpus/conic.curve"),
    },
    CorpusEntry {
        name: "sextic-dual-quartic",
        text: include_str!("../corpus/sextic-dual-quartic.curve"),
    },
    CorpusEntry {
        name: "deg9-maximizing",
        text: include_str!("../corpus/deg9-maximizing.curve"),
    },
    CorpusEntry {
        name: "hesse",
        text: include_str!("../corpus/hesse.curve"),
    },
    CorpusEntry {
        name: "conic-line-8",
        text: include_str!("../corpus/conic-line-8.curve"),
    },
    CorpusEntry {
        name: "conic-line-11",
        text: include_str!("../corpus/conic-line-11.curve"),
    },
    CorpusEntry {
        name: "conic-line-12",
        text: include_str!("../corpus/conic-line-12.curve"),
    },
];

/// The simplicial/Klein screening tuples shipped with the corpus.
pub const SCREEN_TUPLES: &str = include_str!("../corpus/simplicial.screen");

/// Expected screening outcomes: (degree, tau, target tau); every shipped
/// tuple must pass the naive count and the screening identity.
pub const SCREEN_EXPECT: &[(usize, u64, u64)] = &[(9, 49, 49), (13, 109, 109), (21, 301, 301)];

pub fn find(name: &str) -> Option<&'static CorpusEntry> {
    CURVES.iter().find(|e| e.name == name)
}

/// The outcome of one corpus entry.
pub struct CorpusResult {
    pub name: &'static str,
    pub analysis: Result<Analysis, AnalyzeError>,
    /// Expectation mismatches; empty means pass.
    pub diffs: Vec<String>,
}

impl CorpusResult {
    pub fn passed(&self) -> bool {
        self.analysis.is_ok() && self.diffs.is_empty()
    }
}

/// Runs every curve entry (optionally filtered by substring) concurrently;
/// output order follows the corpus index.
pub fn run_corpus(filter: Option<&str>, opts: &EngineOptions) -> Vec<CorpusResult> {
    let selected: Vec<&CorpusEntry> = CURVES
        .iter()
        .filter(|e| filter.map_or(true, |f| e.name.contains(f)))
        .collect();
    selected
        .par_iter()
        .map(|entry| {
            let cf = parse_curve_file(entry.text).expect("corpus file parses");
            let analysis = analyze(&cf, opts);
            let diffs = match (&analysis, &cf.expect) {
                (Ok(a), Some(e)) => compare_expectations(a, e),
                (Ok(_), None) => vec![],
                (Err(_), _) => vec![],
            };
            CorpusResult {
                name: entry.name,
                analysis,
                diffs,
            }
        })
        .collect()
}

/// Screens the shipped tuples and checks them against the frozen outcomes.
pub fn run_screen_corpus() -> Vec<(ScreenRow, Vec<String>)> {
    let tuples = parse_screen_file(SCREEN_TUPLES).expect("shipped tuples parse");
    tuples
        .iter()
        .map(|(d, t)| {
            let row = screen_tuple(*d, t);
            let mut diffs = Vec::new();
            match SCREEN_EXPECT.iter().find(|(ed, _, _)| ed == d) {
                Some((_, tau, target)) => {
                    if !row.candidate() {
                        diffs.push("expected a candidate".to_string());
                    }
                    if row.tau != *tau {
                        diffs.push(format!("tau: expected {tau}, got {}", row.tau));
                    }
                    if row.target_tau != *target {
                        diffs.push(format!(
                            "target: expected {target}, got {}",
                            row.target_tau
                        ));
                    }
                }
                None => diffs.push(format!("no frozen expectation for d = {d}")),
            }
            (row, diffs)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_files_parse_and_filter_works() {
        for entry in CURVES {
            let cf = parse_curve_file(entry.text).unwrap();
            assert_eq!(cf.name.as_deref(), Some(entry.name));
            assert!(cf.expect.is_some(), "{} lacks an expect block", entry.name);
        }
        assert!(find("hesse").is_some());
        assert!(find("nope").is_none());
    }

    #[test]
    fn light_corpus_entries_pass() {
        // the cheap entries; the full corpus runs in the acceptance suite
        let opts = EngineOptions::default();
        for name in ["triangle", "conic"] {
            let results = run_corpus(Some(name), &opts);
            assert_eq!(results.len(), 1);
            assert!(results[0].passed(), "{name}: {:?}", results[0].diffs);
        }
    }

    #[test]
    fn screen_corpus_passes() {
        for (row, diffs) in run_screen_corpus() {
            assert!(diffs.is_empty(), "{}: {diffs:?}", row.wc);
        }
    }
}

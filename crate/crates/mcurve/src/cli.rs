//! Command-line front end: `analyze`, `screen` and `corpus`.
//!
//! Exit codes: 0 success, 1 verdict or regression failure, 2 input error,
//! 3 internal inconsistency.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::analyze::{analyze, compare_expectations, AnalyzeError, EngineOptions};
use crate::corpus;
use crate::curvefile::{parse_curve_file, parse_point_list};
use crate::report::{render_text, Report};
use crate::screen::{format_row, parse_screen_file, screen_tuple};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REGRESSION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser)]
#[command(
    name = "mcurve",
    about = "Exact invariants and verdicts for reduced plane curves",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a curve file: reducedness, tau, mdr, freeness, per-point
    /// singularity types, and verdicts.
    Analyze {
        /// Curve file path
        path: PathBuf,
        /// Emit the JSON report instead of text
        #[arg(long)]
        json: bool,
        /// Force exact rank computations everywhere
        #[arg(long)]
        exact: bool,
        /// Extra singular points, one `(a:b:c)` per line
        #[arg(long)]
        points: Option<PathBuf>,
    },
    /// Screen weak-combinatorics tuples `d t2 t3 t4 ...` against the
    /// M-arrangement identities.
    Screen {
        /// File of tuples, one per line
        path: Option<PathBuf>,
        /// Inline tuple, e.g. --tuple "9 6 4 3"
        #[arg(long)]
        tuple: Option<String>,
    },
    /// Run the built-in corpus and compare against its expected values.
    Corpus {
        /// Only entries whose name contains this substring
        #[arg(long)]
        filter: Option<String>,
        /// Emit JSON reports
        #[arg(long)]
        json: bool,
        /// Force exact rank computations everywhere
        #[arg(long)]
        exact: bool,
    },
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version through this path
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match cli.command {
        Command::Analyze {
            path,
            json,
            exact,
            points,
        } => cmd_analyze(&path, json, exact, points.as_deref()),
        Command::Screen { path, tuple } => cmd_screen(path.as_deref(), tuple.as_deref()),
        Command::Corpus {
            filter,
            json,
            exact,
        } => cmd_corpus(filter.as_deref(), json, exact),
    }
}

fn engine_options(exact: bool) -> EngineOptions {
    if exact {
        EngineOptions::exact()
    } else {
        EngineOptions::default()
    }
}

fn exit_code_for(e: &AnalyzeError) -> i32 {
    match e {
        AnalyzeError::Input(_) => EXIT_INPUT,
        AnalyzeError::Internal(_) => EXIT_INTERNAL,
    }
}

fn cmd_analyze(
    path: &std::path::Path,
    json: bool,
    exact: bool,
    points: Option<&std::path::Path>,
) -> i32 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return EXIT_INPUT;
        }
    };
    let mut cf = match parse_curve_file(&text) {
        Ok(cf) => cf,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return EXIT_INPUT;
        }
    };
    if let Some(pp) = points {
        let ptext = match std::fs::read_to_string(pp) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", pp.display());
                return EXIT_INPUT;
            }
        };
        match parse_point_list(&ptext, &cf.field) {
            Ok(extra) => {
                for p in extra {
                    if !cf.points.contains(&p) {
                        cf.points.push(p);
                    }
                }
            }
            Err(e) => {
                eprintln!("error: {}: {e}", pp.display());
                return EXIT_INPUT;
            }
        }
    }
    if cf.name.is_none() {
        cf.name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned());
    }
    let opts = engine_options(exact);
    let a = match analyze(&cf, &opts) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    if json {
        println!("{}", Report::from_analysis(&a).to_json());
    } else {
        print!("{}", render_text(&a));
    }
    if let Some(e) = &cf.expect {
        let diffs = compare_expectations(&a, e);
        if !diffs.is_empty() {
            for d in &diffs {
                eprintln!("expectation failed: {d}");
            }
            return EXIT_REGRESSION;
        }
    }
    EXIT_OK
}

fn cmd_screen(path: Option<&std::path::Path>, tuple: Option<&str>) -> i32 {
    let mut tuples = Vec::new();
    if let Some(t) = tuple {
        match parse_screen_file(t) {
            Ok(mut parsed) => tuples.append(&mut parsed),
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_INPUT;
            }
        }
    }
    if let Some(p) = path {
        let text = match std::fs::read_to_string(p) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", p.display());
                return EXIT_INPUT;
            }
        };
        match parse_screen_file(&text) {
            Ok(mut parsed) => tuples.append(&mut parsed),
            Err(e) => {
                eprintln!("error: {}: {e}", p.display());
                return EXIT_INPUT;
            }
        }
    }
    if tuples.is_empty() {
        eprintln!("error: provide a tuples file or --tuple \"d t2 t3 t4\"");
        return EXIT_INPUT;
    }
    for (d, t) in &tuples {
        let row = screen_tuple(*d, t);
        println!("{}", format_row(&row));
    }
    EXIT_OK
}

fn cmd_corpus(filter: Option<&str>, json: bool, exact: bool) -> i32 {
    let opts = engine_options(exact);
    let results = corpus::run_corpus(filter, &opts);
    if results.is_empty() {
        eprintln!("error: no corpus entry matches the filter");
        return EXIT_INPUT;
    }
    let mut failures = 0usize;
    let mut worst = EXIT_OK;
    for r in &results {
        match &r.analysis {
            Ok(a) => {
                if json {
                    println!("{}", Report::from_analysis(a).to_json());
                } else {
                    let status = if r.diffs.is_empty() { "pass" } else { "FAIL" };
                    println!(
                        "{:22} degree {:2}  tau {:4}  mdr {:2}  free {:5}  [{status}]",
                        r.name, a.global.degree, a.global.tau, a.global.mdr, a.global.free
                    );
                }
                for d in &r.diffs {
                    eprintln!("  {}: {d}", r.name);
                }
                if !r.diffs.is_empty() {
                    failures += 1;
                    worst = worst.max(EXIT_REGRESSION);
                }
            }
            Err(e) => {
                eprintln!("{}: error: {e}", r.name);
                failures += 1;
                worst = worst.max(exit_code_for(e));
            }
        }
    }
    // screening tuples are part of the corpus contract
    if filter.is_none() {
        for (row, diffs) in corpus::run_screen_corpus() {
            if !json {
                println!("screen {}", format_row(&row));
            }
            for d in &diffs {
                eprintln!("  screen {}: {d}", row.wc);
            }
            if !diffs.is_empty() {
                failures += 1;
                worst = worst.max(EXIT_REGRESSION);
            }
        }
    }
    if !json {
        println!(
            "corpus: {} entries, {} failed",
            results.len(),
            failures
        );
    }
    worst
}

fn main() {
    // `MCURVE_THREADS` caps the rayon pool used for corpus entries,
    // per-point analyses, and modular primes.
    if let Ok(n) = std::env::var("MCURVE_THREADS") {
        if let Ok(n) = n.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
    std::process::exit(mcurve::cli::run(std::env::args_os()));
}

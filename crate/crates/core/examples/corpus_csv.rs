//! Runs every algorithm over a seeded corpus and prints the CSV table.
//!
//! `cargo run --release --example corpus_csv -- [seed] [count] [multi]`

use txsched::harness::{corpus, run_experiment, Algorithm, CorpusBounds, ExperimentOptions};
use txsched::tours::TourKind;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let seed = args.first().and_then(|s| s.parse().ok()).unwrap_or(1);
    let count = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    let bounds = if args.get(2).is_some_and(|s| s == "multi") {
        CorpusBounds::multi_object(8, 4, 2)
    } else {
        CorpusBounds::single_object(10, 6)
    };
    let scenarios = corpus(seed, count, &bounds);
    let report = run_experiment(
        &scenarios,
        &Algorithm::ALL,
        &[TourKind::Mst, TourKind::Universal],
        &ExperimentOptions::default(),
    );
    print!("{}", report.to_csv());
    eprintln!("{} runs, {} with failed checks", report.records.len(), report.failures());
}

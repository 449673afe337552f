//! Parses a scenario document, runs it, and writes it back out.
//!
//! `cargo run --example scenario_file -- [path.toml]`

use txsched::harness::{
    parse_scenario, parse_scenario_str, run_experiment, serialize_scenario, Algorithm, ExperimentOptions,
};
use txsched::tours::TourKind;

const SAMPLE: &str = r#"
name = "ring"

[graph]
n = 6
edges = [[0, 1, 1], [1, 2, 2], [2, 3, 1], [3, 4, 1], [4, 5, 2], [5, 0, 1]]

[cost]
alpha = 4
beta = 1

[[objects]]
id = 0
home = 0

[[transactions]]
id = 0
home = 3
objs = [0]

[[transactions]]
id = 1
home = 2
objs = [0]

[config]
tour = "mst"
"#;

fn main() {
    let sc = match std::env::args().nth(1) {
        Some(path) => parse_scenario(&path),
        None => parse_scenario_str(SAMPLE),
    };
    let sc = match sc {
        Ok(sc) => sc,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    println!("{}: n={} D={} txns={}", sc.name, sc.graph.n(), sc.metric.diameter(), sc.transactions.len());
    let report = run_experiment(
        std::slice::from_ref(&sc),
        &[Algorithm::SingleGlobal, Algorithm::SingleDist, Algorithm::Direct],
        &[TourKind::Mst],
        &ExperimentOptions::default(),
    );
    print!("{}", report.to_csv());
    println!("---");
    print!("{}", serialize_scenario(&sc).expect("serializable"));
}

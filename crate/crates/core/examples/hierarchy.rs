//! Builds the partition hierarchy of a grid and checks every level.
//!
//! `cargo run --example hierarchy -- [width] [height] [sigma]`

use txsched::hierarchy::{build_hierarchy, verify_partition};
use txsched::metric::{doubling_dimension_estimate, generate, DistanceOracle, GeneratorSpec};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let width = args.first().and_then(|s| s.parse().ok()).unwrap_or(8);
    let height = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(8);
    let sigma = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(2.0);

    let g = generate(&GeneratorSpec::grid(width, height)).expect("grid");
    let d = DistanceOracle::new(&g);
    let h = build_hierarchy(&d, sigma).expect("hierarchy");
    let p = &h.params;
    println!(
        "n={} D={} h={} rho={} I={} delta={} (estimate {}) zeta={}",
        d.n(),
        d.diameter(),
        p.h,
        p.rho,
        p.intersection,
        p.delta,
        doubling_dimension_estimate(&d),
        p.zeta
    );
    for lvl in h.levels() {
        let rep = verify_partition(&d, lvl);
        println!(
            "level {:>2}: r={:<8.3} clusters={:<4} max diameter={:<3} (bound {:.1}) I={}",
            lvl.level,
            lvl.radius,
            lvl.clusters.len(),
            rep.max_diameter,
            sigma * lvl.radius,
            rep.measured_i
        );
    }
    println!("root leader {}", h.root());
}

//! Exact optimum against the schedulers on a few small scenarios.
//!
//! `cargo run --release --example oracle_compare -- [count]`

use txsched::harness::{corpus, direct_bound, single_bound, CorpusBounds};
use txsched::hierarchy::build_hierarchy;
use txsched::oracle::{optimal_cost_single, replay_witness};
use txsched::schedule::{direct_schedule, schedule_cost};
use txsched::single::schedule_single;
use txsched::tours::TourKind;

fn main() {
    let count = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(8);
    println!(
        "{:<20} {:>4} {:>4} {:>6} {:>6} {:>12} {:>12}",
        "scenario", "C*", "C", "direct", "replay", "thm bound", "direct bound"
    );
    for sc in corpus(11, count, &CorpusBounds::single_object(10, 6)) {
        let h = build_hierarchy(&sc.metric, sc.config.sigma).expect("hierarchy");
        let best = optimal_cost_single(&sc).expect("oracle-sized");
        let out = schedule_single(&sc, &h, TourKind::Mst).expect("single object");
        let direct = schedule_cost(&sc, &direct_schedule(&sc).expect("direct")).expect("valid").total;
        let replay = replay_witness(&sc, &best).expect("replay").map_or("-".to_string(), |c| c.to_string());
        let a = out.tour_ratio().unwrap_or(1.0);
        let d = sc.metric.diameter();
        println!(
            "{:<20} {:>4} {:>4} {:>6} {:>6} {:>12.0} {:>12.1}",
            sc.name,
            best.c_star,
            out.cost.total,
            direct,
            replay,
            single_bound(best.c_star, a, &h.params, d),
            direct_bound(sc.transactions.len(), sc.cost.alpha, d, best.c_star)
        );
    }
}

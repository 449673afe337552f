//! Single-object scheduling on a grid with a crowded corner, showing the
//! elected super-leaders, the pruned levels and the final cost.
//!
//! `cargo run --example single`

use txsched::hierarchy::build_hierarchy;
use txsched::metric::GeneratorSpec;
use txsched::schedule::{
    direct_schedule, schedule_cost, CostModel, GraphSource, ObjectSpec, Scenario, SchedConfig, TransactionSpec,
};
use txsched::single::{election_threshold, pruning_threshold, schedule_single};
use txsched::tours::TourKind;

fn main() {
    // 80 transactions crowd the far corner of a 6x6 grid; the object starts at node 0
    let transactions: Vec<TransactionSpec> = (0..80)
        .map(|i| {
            let (x, y) = (3 + i % 3, 3 + (i / 3) % 3);
            TransactionSpec::new(i, y * 6 + x, &[0])
        })
        .collect();
    let sc = Scenario::new(
        "corner",
        GraphSource::Generated(GeneratorSpec::grid(6, 6)),
        CostModel::new(2, 1).expect("alpha > beta"),
        vec![ObjectSpec::new(0, 0)],
        transactions,
        SchedConfig::default(),
    )
    .expect("valid scenario");
    let h = build_hierarchy(&sc.metric, sc.config.sigma).expect("hierarchy");
    println!(
        "election bar {} transactions, pruning bar {} (I = {})",
        election_threshold(sc.cost),
        pruning_threshold(h.params.intersection, sc.cost),
        h.params.intersection
    );

    let out = schedule_single(&sc, &h, TourKind::Mst).expect("single object");
    for (level, (bound, leaders)) in out.assignment.per_level() {
        let nodes: Vec<String> = leaders.iter().map(|s| s.node.to_string()).collect();
        println!("level {level}: {bound} transactions bound to [{}]", nodes.join(", "));
    }
    println!(
        "pruned levels {:?}, {} transactions redirected home",
        out.prune.pruned_levels,
        out.prune.redirected.len()
    );
    println!("surviving super-leaders {:?}", out.prune.nodes());
    println!("tour {:?} length {} (optimal {:?})", out.tour.visits, out.tour_len, out.tour_star);
    println!("cost {} = transactions {} + object {}", out.cost.total, out.cost.txn_cost, out.cost.object_cost);

    let direct = schedule_cost(&sc, &direct_schedule(&sc).expect("direct")).expect("valid");
    println!("all transactions sent home instead: {}", direct.total);
}

//! Two objects sharing one tour; each object stops only where it is needed.
//!
//! `cargo run --example multi`

use txsched::hierarchy::build_hierarchy;
use txsched::metric::GeneratorSpec;
use txsched::multi::{per_object_single_costs, schedule_multi};
use txsched::schedule::{CostModel, GraphSource, ObjectSpec, Scenario, SchedConfig, TransactionSpec};
use txsched::tours::TourKind;

fn main() {
    let mut transactions = Vec::new();
    for i in 0..180 {
        let (node, objs): (usize, &[usize]) = match i % 3 {
            0 => (4 * 8 + 7, &[0]),
            1 => (7 * 8 + 3, &[1]),
            _ => (7 * 8 + 7, &[0, 1]),
        };
        transactions.push(TransactionSpec::new(i, node, objs));
    }
    let sc = Scenario::new(
        "two-objects",
        GraphSource::Generated(GeneratorSpec::grid(8, 8)),
        CostModel::new(2, 1).expect("alpha > beta"),
        vec![ObjectSpec::new(0, 0), ObjectSpec::new(1, 0)],
        transactions,
        SchedConfig::default(),
    )
    .expect("valid scenario");
    let h = build_hierarchy(&sc.metric, sc.config.sigma).expect("hierarchy");

    let out = schedule_multi(&sc, &h, TourKind::Mst).expect("common home");
    println!("shared tour {:?}", out.tour.visits);
    for (obj, route) in &out.routes {
        println!("{obj}: stops {:?}, distance {}", route.stops, route.distance);
    }
    let singles = per_object_single_costs(&sc, &h, TourKind::Mst).expect("per object");
    let sum: u64 = singles.values().sum();
    println!("cost {} (k = {}, per-object sum {sum}, k * sum = {})", out.cost.total, sc.k(), sc.k() as u64 * sum);
}

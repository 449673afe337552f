//! Runs the message-passing protocol phase by phase and compares it with
//! the centrally computed schedule.
//!
//! `cargo run --example distributed -- [trace]`

use txsched::distsim::{CostClass, DistConfig, DistributedRun, Phase};
use txsched::hierarchy::build_hierarchy;
use txsched::metric::GeneratorSpec;
use txsched::schedule::{CostModel, GraphSource, ObjectSpec, Scenario, SchedConfig, TransactionSpec};
use txsched::single::schedule_single;
use txsched::tours::TourKind;

fn main() {
    let transactions: Vec<TransactionSpec> =
        (0..120).map(|i| TransactionSpec::new(i, [17, 18, 23, 24, 5][i % 5], &[0])).collect();
    let sc = Scenario::new(
        "protocol",
        GraphSource::Generated(GeneratorSpec::grid(6, 5)),
        CostModel::new(2, 1).expect("alpha > beta"),
        vec![ObjectSpec::new(0, 0)],
        transactions,
        SchedConfig::default(),
    )
    .expect("valid scenario");
    let h = build_hierarchy(&sc.metric, sc.config.sigma).expect("hierarchy");

    let mut run = DistributedRun::new(&sc, &h, TourKind::Mst, DistConfig::default()).expect("common home");
    let p1 = run.run_phase1();
    println!("phase 1 after round {}: super-leaders {:?}", run.rounds(), p1.super_leaders);
    let p2 = run.run_phase2();
    println!("phase 2 after round {}: pruned levels {:?}", run.rounds(), p2.pruned_levels);
    let p3 = run.run_phase3();
    println!("phase 3 after round {}: tour {:?}", run.rounds(), p3.tour.visits);

    let log = run.log();
    for phase in Phase::ALL {
        println!("phase {} message cost {}", phase.number(), log.phase_cost(phase));
    }
    println!(
        "control {} transactions {} objects {}",
        log.class_cost(CostClass::Control),
        log.class_cost(CostClass::Txn),
        log.class_cost(CostClass::Object)
    );

    let global = schedule_single(&sc, &h, TourKind::Mst).expect("single object");
    println!("same schedule as the central algorithm: {}", global.schedule == p3.schedule);
    println!("C = {}, C' = {}", global.cost.total, log.total());
    if std::env::args().nth(1).is_some_and(|a| a == "trace") {
        print!("{}", log.trace());
    }
}

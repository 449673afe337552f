use proptest::prelude::*;

use txsched::distsim::{run_distributed_multi, run_distributed_single, DistConfig};
use txsched::harness::{corpus, direct_bound, parse_scenario_str, serialize_scenario, CorpusBounds};
use txsched::hierarchy::build_hierarchy;
use txsched::metric::NodeId;
use txsched::multi::{per_object_single_costs, schedule_multi};
use txsched::oracle::{optimal_cost_multi, optimal_cost_single};
use txsched::schedule::{
    direct_schedule, schedule_cost, validate_schedule, CostModel, GraphSource, ObjectSpec, Scenario, SchedConfig,
    TransactionSpec, TxnId,
};
use txsched::single::schedule_single;
use txsched::tours::TourKind;

fn single(seed: u64) -> Scenario {
    corpus(seed, 1, &CorpusBounds::single_object(10, 6)).remove(0)
}

fn multi(seed: u64) -> Scenario {
    corpus(seed, 1, &CorpusBounds::multi_object(8, 4, 2)).remove(0)
}

fn tour() -> impl Strategy<Value = TourKind> {
    prop_oneof![Just(TourKind::Mst), Just(TourKind::Universal)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn single_schedules_are_valid_and_above_optimum(seed in any::<u64>(), kind in tour()) {
        let sc = single(seed);
        let h = build_hierarchy(&sc.metric, sc.config.sigma).unwrap();
        let out = schedule_single(&sc, &h, kind).unwrap();
        prop_assert!(validate_schedule(&sc, &out.schedule).is_ok());
        prop_assert!(out.cost.total >= optimal_cost_single(&sc).unwrap().c_star);
    }

    #[test]
    fn direct_cost_is_sum_of_distances(seed in any::<u64>()) {
        let sc = single(seed);
        let home = sc.objects[0].home;
        let expected: u64 = sc.transactions.iter().map(|t| sc.cost.beta * sc.metric.dist(t.home, home)).sum();
        prop_assert_eq!(schedule_cost(&sc, &direct_schedule(&sc).unwrap()).unwrap().total, expected);
    }

    #[test]
    fn extra_transaction_never_lowers_optimum(seed in any::<u64>(), at in any::<prop::sample::Index>()) {
        let sc = single(seed);
        let before = optimal_cost_single(&sc).unwrap().c_star;
        let mut txns = sc.transactions.clone();
        let id = txns.iter().map(|t| t.id.0).max().unwrap() + 1;
        txns.push(TransactionSpec { id: TxnId(id), home: NodeId(at.index(sc.graph.n())), objs: vec![sc.objects[0].id] });
        let more = Scenario::new("more", sc.source.clone(), sc.cost, sc.objects.clone(), txns, sc.config).unwrap();
        prop_assert!(optimal_cost_single(&more).unwrap().c_star >= before);
    }

    #[test]
    fn oracles_agree_on_one_object(seed in any::<u64>()) {
        let sc = corpus(seed, 1, &CorpusBounds::single_object(8, 4)).remove(0);
        prop_assert_eq!(optimal_cost_multi(&sc).unwrap().c_star, optimal_cost_single(&sc).unwrap().c_star);
    }

    #[test]
    fn distributed_single_matches_global(seed in any::<u64>(), kind in tour()) {
        let sc = single(seed);
        let h = build_hierarchy(&sc.metric, sc.config.sigma).unwrap();
        let g = schedule_single(&sc, &h, kind).unwrap();
        let d = run_distributed_single(&sc, &h, kind, DistConfig::default()).unwrap();
        prop_assert_eq!(d.schedule(), &g.schedule);
        prop_assert_eq!(d.log.movement_cost(), g.cost.total);
    }

    #[test]
    fn free_control_messages_leave_only_movement(seed in any::<u64>()) {
        let sc = multi(seed);
        let h = build_hierarchy(&sc.metric, sc.config.sigma).unwrap();
        let d = run_distributed_multi(&sc, &h, TourKind::Mst, DistConfig { control_weight: 0 }).unwrap();
        prop_assert_eq!(d.c_prime(), d.cost.total);
    }

    #[test]
    fn multi_schedules_respect_k_factor(seed in any::<u64>(), kind in tour()) {
        let sc = multi(seed);
        let h = build_hierarchy(&sc.metric, sc.config.sigma).unwrap();
        let out = schedule_multi(&sc, &h, kind).unwrap();
        prop_assert!(validate_schedule(&sc, &out.schedule).is_ok());
        let sum: u64 = per_object_single_costs(&sc, &h, kind).unwrap().values().sum();
        prop_assert!(out.cost.total <= sc.k() as u64 * sum);
        prop_assert!(out.cost.total >= optimal_cost_multi(&sc).unwrap().c_star);
        for route in out.routes.values() {
            prop_assert!(route.stops.iter().all(|s| out.tour.visits.contains(s)));
        }
    }

    #[test]
    fn scenario_documents_round_trip(seed in any::<u64>()) {
        let sc = multi(seed);
        let text = serialize_scenario(&sc).unwrap();
        prop_assert_eq!(parse_scenario_str(&text).unwrap(), sc);
    }
}

#[test]
fn direct_bound_fails_at_unit_diameter() {
    let sc = Scenario::new(
        "edge",
        GraphSource::Explicit { n: 2, edges: vec![(0, 1, 1)] },
        CostModel::new(8, 1).unwrap(),
        vec![ObjectSpec::new(0, 0)],
        vec![TransactionSpec::new(0, 1, &[0])],
        SchedConfig::default(),
    )
    .unwrap();
    let c_direct = schedule_cost(&sc, &direct_schedule(&sc).unwrap()).unwrap().total;
    let c_star = optimal_cost_single(&sc).unwrap().c_star;
    assert_eq!((c_direct, c_star), (1, 1));
    assert!((c_direct as f64) > direct_bound(1, 8, 1, c_star));
}

//! Multi-object scheduling. Each object runs its own election over the
//! transactions that need it; a transaction then executes at the closest of
//! its surviving dedicated super-leaders (or the common home), and all
//! objects follow one shared tour, each skipping stops it is not needed at.

use std::collections::{BTreeMap, BTreeSet};

use crate::hierarchy::PartitionHierarchy;
use crate::metric::{DistanceOracle, Length, NodeId};
use crate::schedule::{
    assemble_schedule, required_stops, schedule_cost, CostBreakdown, ObjectId, Scenario, Schedule, TransactionSpec,
    TxnId,
};
use crate::single::{
    elect, election_threshold, optimal_tour_len, prune_levels, schedule_single, Disposition, PruneReport,
    SchedulerError, SuperLeader, SuperLeaderAssignment,
};
use crate::tours::{tour_length, tour_of_kind, TourKind, TourOrder};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectElection {
    pub assignment: SuperLeaderAssignment,
    pub prune: PruneReport,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiAssignment {
    pub home: NodeId,
    pub per_object: BTreeMap<ObjectId, ObjectElection>,
    /// `None` means the common home.
    pub per_txn: BTreeMap<TxnId, Option<SuperLeader>>,
}

impl MultiAssignment {
    pub fn destinations(&self) -> BTreeMap<TxnId, NodeId> {
        self.per_txn.iter().map(|(&t, c)| (t, c.map_or(self.home, |s| s.node))).collect()
    }

    /// Distinct chosen nodes other than the home.
    pub fn stop_nodes(&self) -> Vec<NodeId> {
        self.per_txn
            .values()
            .flatten()
            .map(|s| s.node)
            .filter(|&v| v != self.home)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }
}

/// Closest candidate by distance from `from`, then level, then node id.
pub fn closest_leader(
    d: &DistanceOracle,
    from: NodeId,
    candidates: impl IntoIterator<Item = SuperLeader>,
) -> Option<SuperLeader> {
    candidates.into_iter().min_by_key(|s| (d.dist(from, s.node), s.level, s.node))
}

/// Surviving dedicated super-leaders of `t` across its objects.
pub fn dedicated_leaders(per_object: &BTreeMap<ObjectId, ObjectElection>, t: &TransactionSpec) -> Vec<SuperLeader> {
    t.objs
        .iter()
        .filter_map(|o| match per_object.get(o)?.prune.dispositions.get(&t.id)? {
            Disposition::Leader(s) => Some(*s),
            Disposition::DirectToHome => None,
        })
        .collect()
}

/// Per-object elections with pruning, then the closest-choice per transaction.
pub fn assign_multi(sc: &Scenario, h: &PartitionHierarchy) -> Result<MultiAssignment, SchedulerError> {
    let home = sc.common_home()?;
    let threshold = election_threshold(sc.cost);
    let mut per_object = BTreeMap::new();
    for o in &sc.objects {
        let txns: Vec<(TxnId, NodeId)> =
            sc.transactions.iter().filter(|t| t.needs(o.id)).map(|t| (t.id, t.home)).collect();
        let assignment = elect(h, threshold, &txns);
        let prune = prune_levels(&assignment, h.params.intersection, sc.cost);
        per_object.insert(o.id, ObjectElection { assignment, prune });
    }
    let per_txn = sc
        .transactions
        .iter()
        .map(|t| (t.id, closest_leader(&sc.metric, t.home, dedicated_leaders(&per_object, t))))
        .collect();
    Ok(MultiAssignment { home, per_object, per_txn })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectRoute {
    /// Home first, then the required stops in tour order.
    pub stops: Vec<NodeId>,
    pub distance: Length,
}

#[derive(Debug, Clone)]
pub struct MultiOutcome {
    pub assignment: MultiAssignment,
    pub tour: TourOrder,
    pub schedule: Schedule,
    pub cost: CostBreakdown,
    pub routes: BTreeMap<ObjectId, ObjectRoute>,
    pub tour_len: Length,
    pub tour_star: Option<Length>,
}

impl MultiOutcome {
    pub fn tour_ratio(&self) -> Option<f64> {
        self.tour_star.map(|star| if star == 0 { 1.0 } else { self.tour_len as f64 / star as f64 })
    }
}

/// Subsequence of `tour` each object visits.
pub fn object_routes(
    sc: &Scenario,
    home: NodeId,
    destinations: &BTreeMap<TxnId, NodeId>,
    tour: &TourOrder,
) -> BTreeMap<ObjectId, ObjectRoute> {
    required_stops(sc, home, destinations)
        .into_iter()
        .map(|(o, needed)| {
            let stops: Vec<NodeId> =
                std::iter::once(home).chain(tour.visits.iter().copied().filter(|v| needed.contains(v))).collect();
            let distance = sc.metric.walk_length(&stops);
            (o, ObjectRoute { stops, distance })
        })
        .collect()
}

pub fn schedule_multi(sc: &Scenario, h: &PartitionHierarchy, kind: TourKind) -> Result<MultiOutcome, SchedulerError> {
    let assignment = assign_multi(sc, h)?;
    let home = assignment.home;
    let stops = assignment.stop_nodes();
    let tour = tour_of_kind(kind, h, &sc.metric, &stops, home);
    let dest = assignment.destinations();
    let schedule = assemble_schedule(sc, home, &dest, &tour);
    let cost = schedule_cost(sc, &schedule)?;
    let routes = object_routes(sc, home, &dest, &tour);
    let tour_len = tour_length(&sc.metric, &tour);
    let tour_star = optimal_tour_len(sc, &stops, home);
    Ok(MultiOutcome { assignment, tour, schedule, cost, routes, tour_len, tour_star })
}

/// Single-object cost of every object over the transactions that need it.
pub fn per_object_single_costs(
    sc: &Scenario,
    h: &PartitionHierarchy,
    kind: TourKind,
) -> Result<BTreeMap<ObjectId, u64>, SchedulerError> {
    let mut out = BTreeMap::new();
    for o in &sc.objects {
        let total = match sc.restricted_to(o.id) {
            Some(sub) => schedule_single(&sub, h, kind)?.cost.total,
            None => 0,
        };
        out.insert(o.id, total);
    }
    Ok(out)
}

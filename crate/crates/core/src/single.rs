//! Single-object scheduling through super-leaders.
//!
//! Levels are swept bottom-up; a cluster holding at least `2 gamma` still
//! unassigned transactions promotes its leader to super-leader and binds
//! them. Levels whose bound total stays below `8 I alpha` are dropped and
//! their transactions go straight to the object's home. The object then
//! tours the surviving super-leaders.

use std::collections::{BTreeMap, BTreeSet};

use crate::hierarchy::{ClusterId, PartitionHierarchy};
use crate::metric::{Length, NodeId};
use crate::schedule::{
    assemble_schedule, schedule_cost, CostBreakdown, CostModel, Scenario, ScenarioError, Schedule, ScheduleError, TxnId,
};
use crate::tours::{exact_tour, tour_length, tour_of_kind, TourKind, TourOrder, EXACT_TOUR_LIMIT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SuperLeader {
    pub node: NodeId,
    pub level: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Disposition {
    Leader(SuperLeader),
    DirectToHome,
}

/// One cluster visited by the sweep with a non-zero count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ElectionStep {
    pub cluster: ClusterId,
    pub leader: NodeId,
    /// Unassigned transactions homed in the cluster when it was visited.
    pub count: usize,
    pub elected: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SuperLeaderAssignment {
    /// Election order.
    pub super_leaders: Vec<SuperLeader>,
    pub dedicated: BTreeMap<TxnId, Disposition>,
    /// Transactions bound to each super-leader, ascending.
    pub per_leader: BTreeMap<SuperLeader, Vec<TxnId>>,
    pub trace: Vec<ElectionStep>,
}

impl SuperLeaderAssignment {
    /// Per level: number of bound transactions and the super-leaders.
    pub fn per_level(&self) -> BTreeMap<i32, (usize, Vec<SuperLeader>)> {
        let mut out: BTreeMap<i32, (usize, Vec<SuperLeader>)> = BTreeMap::new();
        for (s, txns) in &self.per_leader {
            let e = out.entry(s.level).or_default();
            e.0 += txns.len();
            e.1.push(*s);
        }
        out
    }
}

/// Sweeps levels `0..=h+1` over `txns` (id, home), clusters by ascending
/// leader id.
pub fn elect(h: &PartitionHierarchy, threshold: usize, txns: &[(TxnId, NodeId)]) -> SuperLeaderAssignment {
    let mut out = SuperLeaderAssignment::default();
    let mut unassigned: BTreeSet<usize> = (0..txns.len()).collect();
    for l in 0..=h.last_level() {
        let lvl = h.level(l);
        let mut by_cluster: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &i in &unassigned {
            by_cluster.entry(lvl.cluster_index_of(txns[i].1)).or_default().push(i);
        }
        for (ci, members) in by_cluster {
            let c = &lvl.clusters[ci];
            let elected = members.len() >= threshold;
            out.trace.push(ElectionStep { cluster: c.id, leader: c.leader, count: members.len(), elected });
            if !elected {
                continue;
            }
            let s = SuperLeader { node: c.leader, level: l };
            out.super_leaders.push(s);
            let mut bound: Vec<TxnId> = members.iter().map(|&i| txns[i].0).collect();
            bound.sort();
            for &i in &members {
                unassigned.remove(&i);
                out.dedicated.insert(txns[i].0, Disposition::Leader(s));
            }
            out.per_leader.insert(s, bound);
        }
    }
    for i in unassigned {
        out.dedicated.insert(txns[i].0, Disposition::DirectToHome);
    }
    out
}

/// Election for the single object of `sc` with threshold `2 gamma`.
pub fn elect_super_leaders(sc: &Scenario, h: &PartitionHierarchy) -> SuperLeaderAssignment {
    let txns: Vec<(TxnId, NodeId)> = sc.transactions.iter().map(|t| (t.id, t.home)).collect();
    elect(h, election_threshold(sc.cost), &txns)
}

pub fn election_threshold(cost: CostModel) -> usize {
    (2 * cost.gamma()) as usize
}

/// `8 I alpha`; a level survives when its total reaches it.
pub fn pruning_threshold(intersection: usize, cost: CostModel) -> u64 {
    8 * intersection as u64 * cost.alpha
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PruneReport {
    pub pruned_levels: Vec<i32>,
    /// Ascending.
    pub redirected: Vec<TxnId>,
    /// Surviving super-leaders, election order.
    pub survivors: Vec<SuperLeader>,
    /// Final disposition of every transaction.
    pub dispositions: BTreeMap<TxnId, Disposition>,
}

impl PruneReport {
    /// Distinct nodes of the surviving super-leaders.
    pub fn nodes(&self) -> Vec<NodeId> {
        self.survivors.iter().map(|s| s.node).collect::<BTreeSet<_>>().into_iter().collect()
    }
}

/// Drops every level whose bound total is below `8 I alpha`.
pub fn prune_levels(a: &SuperLeaderAssignment, intersection: usize, cost: CostModel) -> PruneReport {
    let threshold = pruning_threshold(intersection, cost);
    let mut report = PruneReport { dispositions: a.dedicated.clone(), ..Default::default() };
    let mut dropped = BTreeSet::new();
    for (level, (count, leaders)) in a.per_level() {
        if (count as u64) < threshold {
            report.pruned_levels.push(level);
            for s in leaders {
                dropped.insert(s);
                for t in &a.per_leader[&s] {
                    report.redirected.push(*t);
                    report.dispositions.insert(*t, Disposition::DirectToHome);
                }
            }
        }
    }
    report.redirected.sort();
    report.survivors = a.super_leaders.iter().copied().filter(|s| !dropped.contains(s)).collect();
    report
}

/// Execution node per transaction.
pub fn destinations(dispositions: &BTreeMap<TxnId, Disposition>, home: NodeId) -> BTreeMap<TxnId, NodeId> {
    dispositions
        .iter()
        .map(|(&t, d)| {
            let node = match d {
                Disposition::Leader(s) => s.node,
                Disposition::DirectToHome => home,
            };
            (t, node)
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct SingleOutcome {
    pub assignment: SuperLeaderAssignment,
    pub prune: PruneReport,
    pub tour: TourOrder,
    pub schedule: Schedule,
    pub cost: CostBreakdown,
    /// Length of the tour actually used.
    pub tour_len: Length,
    /// Optimal open walk over the same stops, when small enough.
    pub tour_star: Option<Length>,
}

impl SingleOutcome {
    /// `Tour / Tour*`, 1 when both are zero.
    pub fn tour_ratio(&self) -> Option<f64> {
        self.tour_star.map(|star| if star == 0 { 1.0 } else { self.tour_len as f64 / star as f64 })
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SchedulerError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
}

/// Full single-object pipeline: election, pruning, tour and schedule.
pub fn schedule_single(sc: &Scenario, h: &PartitionHierarchy, kind: TourKind) -> Result<SingleOutcome, SchedulerError> {
    let home = sc.single_object()?.home;
    let assignment = elect_super_leaders(sc, h);
    let prune = prune_levels(&assignment, h.params.intersection, sc.cost);
    let stops = prune.nodes();
    let tour = tour_of_kind(kind, h, &sc.metric, &stops, home);
    let dest = destinations(&prune.dispositions, home);
    let schedule = assemble_schedule(sc, home, &dest, &tour);
    let cost = schedule_cost(sc, &schedule)?;
    let tour_len = tour_length(&sc.metric, &tour);
    let tour_star = optimal_tour_len(sc, &stops, home);
    Ok(SingleOutcome { assignment, prune, tour, schedule, cost, tour_len, tour_star })
}

pub(crate) fn optimal_tour_len(sc: &Scenario, stops: &[NodeId], home: NodeId) -> Option<Length> {
    let count = stops.iter().filter(|&&v| v != home).count() + 1;
    if count > EXACT_TOUR_LIMIT {
        return None;
    }
    exact_tour(&sc.metric, stops, home).ok().map(|t| t.1)
}

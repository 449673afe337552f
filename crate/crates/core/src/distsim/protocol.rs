//! The three-phase protocol.
//!
//! Phase 1: every node reports its (transaction, object) records to its
//! level-0 leader. A level-`l` leader either elects itself for an object
//! (enough records) and notifies the records' homes back down the route
//! they came up, or forwards them to the level-`l+1` leaders of the
//! clusters holding their homes.
//!
//! Phase 2: super-leaders announce themselves to the root leader, which
//! returns the roster of each (object, level) with its lowest-id member as
//! reference. Members report their counts to the reference, which sends the
//! sum back; members of a level below the pruning bar release their
//! transactions with a redirect to the homes.
//!
//! Phase 3: each transaction moves to the closest super-leader it still
//! holds, or to the object home. Nodes with waiting transactions report to
//! the home, which computes the tour and sends the objects along it, each
//! carrying the stops it still has to visit.

use std::collections::{BTreeMap, BTreeSet};

use super::{Ctx, DistConfig, Engine, Item, MessageKind, MessageLog, Outbox, Phase, Process, Record};
use crate::hierarchy::PartitionHierarchy;
use crate::metric::NodeId;
use crate::schedule::{schedule_cost, CostBreakdown, Event, ObjectId, Scenario, Schedule, TxnId};
use crate::single::{election_threshold, pruning_threshold, Disposition, SchedulerError, SuperLeader};
use crate::tours::{tour_of_kind, TourKind, TourOrder};

#[derive(Debug, Default)]
pub(crate) struct NodeProcess {
    id: NodeId,
    /// Transactions homed here: id and objects.
    local: Vec<(TxnId, Vec<ObjectId>)>,

    /// Records that arrived this round, by the level they are counted on.
    arrivals: BTreeMap<i32, Vec<(NodeId, Record)>>,
    /// Who sent a record up on a level, for routing notifications back.
    routes: BTreeMap<(i32, ObjectId, TxnId), NodeId>,
    /// Super-leader roles held, with their bound records.
    roles: BTreeMap<(ObjectId, i32), Vec<Record>>,
    /// Dedicated super-leader of each local (transaction, object).
    dedicated: BTreeMap<(TxnId, ObjectId), SuperLeader>,

    announcements: BTreeMap<(ObjectId, i32), Vec<NodeId>>,
    rosters: BTreeMap<(ObjectId, i32), (NodeId, Vec<NodeId>)>,
    tallies: BTreeMap<(ObjectId, i32), Vec<u64>>,
    pruned: BTreeSet<(ObjectId, i32)>,

    /// Where each local transaction went.
    choices: BTreeMap<TxnId, Option<SuperLeader>>,
    waiting: Vec<(TxnId, Vec<ObjectId>)>,
    reports: BTreeMap<NodeId, Vec<ObjectId>>,
    /// Objects here and the stops ahead of each.
    present: BTreeMap<ObjectId, Vec<NodeId>>,
    tour: Option<TourOrder>,
}

impl NodeProcess {
    fn level_arrivals(&mut self, ctx: &Ctx, level: i32, arrivals: Vec<(NodeId, Record)>, out: &mut Outbox) {
        let mut by_obj: BTreeMap<ObjectId, Vec<(NodeId, Record)>> = BTreeMap::new();
        for (src, r) in arrivals {
            by_obj.entry(r.obj).or_default().push((src, r));
        }
        for (obj, recs) in by_obj {
            if recs.len() >= ctx.election_threshold {
                let leader = SuperLeader { node: self.id, level };
                let mut per_sender: BTreeMap<NodeId, Vec<TxnId>> = BTreeMap::new();
                for (src, r) in &recs {
                    per_sender.entry(*src).or_default().push(r.txn);
                }
                for (src, mut txns) in per_sender {
                    txns.sort();
                    out.send(
                        src,
                        MessageKind::SuperLeaderNotify,
                        Item::Notify { obj, leader, txns, role_level: level - 1 },
                    );
                }
                let mut bound: Vec<Record> = recs.into_iter().map(|(_, r)| r).collect();
                bound.sort();
                self.roles.insert((obj, level), bound);
            } else if level < ctx.h.last_level() {
                for (_, r) in recs {
                    let next = ctx.h.level(level + 1).cluster_of(r.home).leader;
                    out.send(next, MessageKind::CountUp, Item::Record { level: level + 1, record: r });
                }
            }
        }
    }

    fn execute_and_forward(&mut self, out: &mut Outbox) {
        let needed: BTreeSet<ObjectId> = self.waiting.iter().flat_map(|(_, objs)| objs.iter().copied()).collect();
        if !needed.iter().all(|o| self.present.contains_key(o)) {
            return;
        }
        self.waiting.sort();
        for (txn, _) in self.waiting.drain(..) {
            out.emit(Event::Execute { txn, node: self.id });
        }
        let leaving: Vec<ObjectId> =
            self.present.iter().filter(|(_, plan)| !plan.is_empty()).map(|(o, _)| *o).collect();
        for obj in leaving {
            let plan = self.present.remove(&obj).expect("present");
            let next = plan[0];
            out.send(next, MessageKind::ObjectTransfer, Item::Object { obj, plan: plan[1..].to_vec() });
        }
    }

    fn start_phase1(&mut self, ctx: &Ctx, out: &mut Outbox) {
        let leader = ctx.h.level(0).cluster_of(self.id).leader;
        for (txn, objs) in &self.local {
            for &obj in objs {
                let record = Record { txn: *txn, home: self.id, obj };
                out.send(leader, MessageKind::TxnInfo, Item::Record { level: 0, record });
            }
        }
    }

    fn start_phase2(&mut self, ctx: &Ctx, out: &mut Outbox) {
        for &(obj, level) in self.roles.keys() {
            out.send(ctx.root, MessageKind::LevelAnnounce, Item::Announce { obj, level });
        }
    }

    fn start_transfers(&mut self, ctx: &Ctx, out: &mut Outbox) {
        for (txn, objs) in self.local.clone() {
            let candidates = objs.iter().filter_map(|&o| self.dedicated.get(&(txn, o)).copied());
            let choice = candidates.min_by_key(|s| (ctx.metric.dist(self.id, s.node), s.level, s.node));
            self.choices.insert(txn, choice);
            let dest = choice.map_or(ctx.home, |s| s.node);
            if dest == self.id {
                self.waiting.push((txn, objs));
            } else {
                out.send(dest, MessageKind::TxnTransfer, Item::Txn { id: txn, objs });
            }
        }
    }

    fn report_stop(&mut self, ctx: &Ctx, out: &mut Outbox) {
        if self.id == ctx.home || self.waiting.is_empty() {
            return;
        }
        let objs: BTreeSet<ObjectId> = self.waiting.iter().flat_map(|(_, o)| o.iter().copied()).collect();
        out.send(ctx.home, MessageKind::StopReport, Item::Stop { objs: objs.into_iter().collect() });
    }

    fn start_tour(&mut self, ctx: &Ctx, objects: &[ObjectId], out: &mut Outbox) {
        if self.id != ctx.home {
            return;
        }
        let stops: Vec<NodeId> = self.reports.keys().copied().collect();
        let tour = tour_of_kind(ctx.tour, ctx.h, ctx.metric, &stops, ctx.home);
        for &o in objects {
            let plan =
                tour.visits[1..].iter().copied().filter(|v| self.reports.get(v).is_some_and(|objs| objs.contains(&o)));
            self.present.insert(o, plan.collect());
        }
        self.tour = Some(tour);
        self.execute_and_forward(out);
    }
}

impl Process for NodeProcess {
    fn on_message(&mut self, ctx: &Ctx, src: NodeId, kind: MessageKind, item: &Item, out: &mut Outbox) {
        match item {
            Item::Record { level, record } => {
                self.routes.insert((*level, record.obj, record.txn), src);
                self.arrivals.entry(*level).or_default().push((src, *record));
            }
            Item::Notify { obj, leader, txns, role_level } => {
                if *role_level < 0 {
                    for &t in txns {
                        self.dedicated.insert((t, *obj), *leader);
                    }
                    return;
                }
                let mut per_sender: BTreeMap<NodeId, Vec<TxnId>> = BTreeMap::new();
                for &t in txns {
                    let from = self.routes[&(*role_level, *obj, t)];
                    per_sender.entry(from).or_default().push(t);
                }
                for (to, txns) in per_sender {
                    let item = Item::Notify { obj: *obj, leader: *leader, txns, role_level: role_level - 1 };
                    out.send(to, MessageKind::SuperLeaderNotify, item);
                }
            }
            Item::Announce { obj, level } => self.announcements.entry((*obj, *level)).or_default().push(src),
            Item::Roster { obj, level, reference, members } => {
                self.rosters.insert((*obj, *level), (*reference, members.clone()));
                let count = self.roles[&(*obj, *level)].len() as u64;
                out.send(*reference, MessageKind::TallyReport, Item::Tally { obj: *obj, level: *level, count });
            }
            Item::Tally { obj, level, count } => self.tallies.entry((*obj, *level)).or_default().push(*count),
            Item::Sum { obj, level, sum } => {
                if *sum < ctx.pruning_threshold {
                    self.pruned.insert((*obj, *level));
                    let mut per_home: BTreeMap<NodeId, Vec<TxnId>> = BTreeMap::new();
                    for r in &self.roles[&(*obj, *level)] {
                        per_home.entry(r.home).or_default().push(r.txn);
                    }
                    for (home, txns) in per_home {
                        out.send(home, MessageKind::Redirect, Item::Redirect { obj: *obj, txns });
                    }
                }
            }
            Item::Redirect { obj, txns } => {
                for t in txns {
                    self.dedicated.remove(&(*t, *obj));
                }
            }
            Item::Txn { id, objs } => {
                out.emit(Event::MoveTransaction { txn: *id, from: src, to: self.id });
                self.waiting.push((*id, objs.clone()));
            }
            Item::Stop { objs } => {
                self.reports.insert(src, objs.clone());
            }
            Item::Object { obj, plan } => {
                out.emit(Event::MoveObject { obj: *obj, from: src, to: self.id });
                self.present.insert(*obj, plan.clone());
            }
        }
        debug_assert_eq!(kind, kind_of(item));
    }

    fn on_round_end(&mut self, ctx: &Ctx, out: &mut Outbox) {
        for (level, arrivals) in std::mem::take(&mut self.arrivals) {
            self.level_arrivals(ctx, level, arrivals, out);
        }
        for (key, members) in std::mem::take(&mut self.announcements) {
            let mut members = members;
            members.sort();
            members.dedup();
            let reference = members[0];
            for &m in &members {
                let item = Item::Roster { obj: key.0, level: key.1, reference, members: members.clone() };
                out.send(m, MessageKind::LevelRoster, item);
            }
        }
        let complete: Vec<(ObjectId, i32)> = self
            .tallies
            .iter()
            .filter(|(k, v)| self.rosters.get(k).is_some_and(|(_, members)| members.len() == v.len()))
            .map(|(k, _)| *k)
            .collect();
        for key in complete {
            let sum: u64 = self.tallies.remove(&key).expect("complete").iter().sum();
            for &m in &self.rosters[&key].1 {
                out.send(m, MessageKind::TallySum, Item::Sum { obj: key.0, level: key.1, sum });
            }
        }
        if !self.present.is_empty() {
            self.execute_and_forward(out);
        }
    }
}

fn kind_of(item: &Item) -> MessageKind {
    match item {
        Item::Record { level: 0, .. } => MessageKind::TxnInfo,
        Item::Record { .. } => MessageKind::CountUp,
        Item::Notify { .. } => MessageKind::SuperLeaderNotify,
        Item::Announce { .. } => MessageKind::LevelAnnounce,
        Item::Roster { .. } => MessageKind::LevelRoster,
        Item::Tally { .. } => MessageKind::TallyReport,
        Item::Sum { .. } => MessageKind::TallySum,
        Item::Redirect { .. } => MessageKind::Redirect,
        Item::Txn { .. } => MessageKind::TxnTransfer,
        Item::Stop { .. } => MessageKind::StopReport,
        Item::Object { .. } => MessageKind::ObjectTransfer,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Phase1Output {
    /// Per object, ascending (level, node).
    pub super_leaders: BTreeMap<ObjectId, Vec<SuperLeader>>,
    /// Per object, over the transactions needing it.
    pub dedicated: BTreeMap<ObjectId, BTreeMap<TxnId, Disposition>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Phase2Output {
    pub survivors: BTreeMap<ObjectId, Vec<SuperLeader>>,
    pub pruned_levels: BTreeMap<ObjectId, Vec<i32>>,
    pub dispositions: BTreeMap<ObjectId, BTreeMap<TxnId, Disposition>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Phase3Output {
    /// `None` means the object home.
    pub choices: BTreeMap<TxnId, Option<SuperLeader>>,
    pub tour: TourOrder,
    pub schedule: Schedule,
}

/// A protocol run driven phase by phase.
pub struct DistributedRun<'a> {
    sc: &'a Scenario,
    engine: Engine<'a, NodeProcess>,
}

impl<'a> DistributedRun<'a> {
    pub fn new(
        sc: &'a Scenario,
        h: &'a PartitionHierarchy,
        tour: TourKind,
        cfg: DistConfig,
    ) -> Result<Self, SchedulerError> {
        let home = sc.common_home()?;
        let ctx = Ctx {
            h,
            metric: &sc.metric,
            cost: sc.cost,
            home,
            root: h.root(),
            tour,
            election_threshold: election_threshold(sc.cost),
            pruning_threshold: pruning_threshold(h.params.intersection, sc.cost),
        };
        let mut procs: Vec<NodeProcess> =
            (0..sc.graph.n()).map(|i| NodeProcess { id: NodeId(i), ..Default::default() }).collect();
        for t in &sc.transactions {
            procs[t.home.index()].local.push((t.id, t.objs.clone()));
        }
        Ok(DistributedRun { sc, engine: Engine::new(ctx, procs, cfg.control_weight) })
    }

    fn roles(&self) -> BTreeMap<ObjectId, Vec<(SuperLeader, bool)>> {
        let mut out: BTreeMap<ObjectId, Vec<(SuperLeader, bool)>> =
            self.sc.objects.iter().map(|o| (o.id, Vec::new())).collect();
        for p in &self.engine.procs {
            for &(obj, level) in p.roles.keys() {
                let alive = !p.pruned.contains(&(obj, level));
                out.get_mut(&obj).expect("known object").push((SuperLeader { node: p.id, level }, alive));
            }
        }
        for v in out.values_mut() {
            v.sort_by_key(|(s, _)| (s.level, s.node));
        }
        out
    }

    fn dispositions(&self) -> BTreeMap<ObjectId, BTreeMap<TxnId, Disposition>> {
        let mut out: BTreeMap<ObjectId, BTreeMap<TxnId, Disposition>> =
            self.sc.objects.iter().map(|o| (o.id, BTreeMap::new())).collect();
        for t in &self.sc.transactions {
            let p = &self.engine.procs[t.home.index()];
            for &o in &t.objs {
                let d = p.dedicated.get(&(t.id, o)).map_or(Disposition::DirectToHome, |s| Disposition::Leader(*s));
                out.get_mut(&o).expect("known object").insert(t.id, d);
            }
        }
        out
    }

    pub fn run_phase1(&mut self) -> Phase1Output {
        self.engine.phase = Phase::One;
        self.engine.step(|p, ctx, out| p.start_phase1(ctx, out));
        self.engine.run_until_quiet();
        let super_leaders =
            self.roles().into_iter().map(|(o, v)| (o, v.into_iter().map(|(s, _)| s).collect())).collect();
        Phase1Output { super_leaders, dedicated: self.dispositions() }
    }

    pub fn run_phase2(&mut self) -> Phase2Output {
        self.engine.phase = Phase::Two;
        self.engine.step(|p, ctx, out| p.start_phase2(ctx, out));
        self.engine.run_until_quiet();
        let roles = self.roles();
        let survivors =
            roles.iter().map(|(o, v)| (*o, v.iter().filter(|(_, alive)| *alive).map(|(s, _)| *s).collect())).collect();
        let pruned_levels = roles
            .iter()
            .map(|(o, v)| {
                let levels: BTreeSet<i32> = v.iter().filter(|(_, alive)| !alive).map(|(s, _)| s.level).collect();
                (*o, levels.into_iter().collect())
            })
            .collect();
        Phase2Output { survivors, pruned_levels, dispositions: self.dispositions() }
    }

    pub fn run_phase3(&mut self) -> Phase3Output {
        self.engine.phase = Phase::Three;
        self.engine.step(|p, ctx, out| p.start_transfers(ctx, out));
        self.engine.run_until_quiet();
        self.engine.step(|p, ctx, out| p.report_stop(ctx, out));
        self.engine.run_until_quiet();
        let objects: Vec<ObjectId> = self.sc.objects.iter().map(|o| o.id).collect();
        self.engine.step(|p, ctx, out| p.start_tour(ctx, &objects, out));
        self.engine.run_until_quiet();
        let mut choices = BTreeMap::new();
        for p in &self.engine.procs {
            choices.extend(p.choices.iter().map(|(t, c)| (*t, *c)));
        }
        let tour = self.engine.procs[self.engine.ctx.home.index()].tour.clone().expect("home computed the tour");
        Phase3Output { choices, tour, schedule: Schedule { events: self.engine.events.clone() } }
    }

    pub fn log(&self) -> &MessageLog {
        &self.engine.log
    }

    pub fn rounds(&self) -> u64 {
        self.engine.round
    }
}

#[derive(Debug, Clone)]
pub struct DistOutcome {
    pub phase1: Phase1Output,
    pub phase2: Phase2Output,
    pub phase3: Phase3Output,
    pub log: MessageLog,
    pub rounds: u64,
    /// Movement cost of the emitted schedule.
    pub cost: CostBreakdown,
}

impl DistOutcome {
    pub fn schedule(&self) -> &Schedule {
        &self.phase3.schedule
    }

    /// Total message cost over all phases.
    pub fn c_prime(&self) -> u64 {
        self.log.total()
    }

    pub fn phase_cost(&self, phase: Phase) -> u64 {
        self.log.phase_cost(phase)
    }
}

fn run_all(
    sc: &Scenario,
    h: &PartitionHierarchy,
    kind: TourKind,
    cfg: DistConfig,
) -> Result<DistOutcome, SchedulerError> {
    let mut run = DistributedRun::new(sc, h, kind, cfg)?;
    let phase1 = run.run_phase1();
    let phase2 = run.run_phase2();
    let phase3 = run.run_phase3();
    let cost = schedule_cost(sc, &phase3.schedule)?;
    Ok(DistOutcome { phase1, phase2, phase3, log: run.log().clone(), rounds: run.rounds(), cost })
}

/// All three phases for a single-object scenario.
pub fn run_distributed_single(
    sc: &Scenario,
    h: &PartitionHierarchy,
    kind: TourKind,
    cfg: DistConfig,
) -> Result<DistOutcome, SchedulerError> {
    sc.single_object()?;
    run_all(sc, h, kind, cfg)
}

/// All three phases with per-object elections and one shared tour.
pub fn run_distributed_multi(
    sc: &Scenario,
    h: &PartitionHierarchy,
    kind: TourKind,
    cfg: DistConfig,
) -> Result<DistOutcome, SchedulerError> {
    run_all(sc, h, kind, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distsim::CostClass;
    use crate::hierarchy::build_hierarchy;
    use crate::metric::GeneratorSpec;
    use crate::multi::schedule_multi;
    use crate::schedule::tests::path_scenario;
    use crate::schedule::{validate_schedule, CostModel, GraphSource, ObjectSpec, SchedConfig, TransactionSpec};
    use crate::single::schedule_single;

    fn grid(w: usize, alpha: u64, objects: usize, txns: Vec<TransactionSpec>) -> Scenario {
        Scenario::new(
            "grid",
            GraphSource::Generated(GeneratorSpec::grid(w, w)),
            CostModel { alpha, beta: 1 },
            (0..objects).map(|o| ObjectSpec { id: ObjectId(o), home: NodeId(0) }).collect(),
            txns,
            SchedConfig::default(),
        )
        .unwrap()
    }

    fn check_single(sc: &Scenario, kind: TourKind) -> DistOutcome {
        let h = build_hierarchy(&sc.metric, 2.0).unwrap();
        let global = schedule_single(sc, &h, kind).unwrap();
        let dist = run_distributed_single(sc, &h, kind, DistConfig::default()).unwrap();
        let obj = sc.objects[0].id;
        let mut elected = global.assignment.super_leaders.clone();
        elected.sort_by_key(|s| (s.level, s.node));
        assert_eq!(dist.phase1.super_leaders[&obj], elected);
        assert_eq!(dist.phase1.dedicated[&obj], global.assignment.dedicated);
        assert_eq!(dist.phase2.survivors[&obj], global.prune.survivors);
        assert_eq!(dist.phase2.pruned_levels[&obj], global.prune.pruned_levels);
        assert_eq!(dist.phase2.dispositions[&obj], global.prune.dispositions);
        assert_eq!(dist.phase3.tour, global.tour);
        assert_eq!(dist.phase3.schedule, global.schedule);
        assert_eq!(dist.log.movement_cost(), global.cost.total);
        dist
    }

    #[test]
    fn small_scenario_matches_global() {
        let sc = path_scenario(6, 2, 0, &[(5, &[0]), (4, &[0]), (1, &[0]), (0, &[0])]);
        let d = check_single(&sc, TourKind::Mst);
        assert_eq!(d.log.count(MessageKind::ObjectTransfer), 0);
    }

    #[test]
    fn surviving_leaders_match_global() {
        let homes = [35, 34, 29, 28, 5, 4, 11, 10, 21];
        let txns = (0..170).map(|i| TransactionSpec::new(i, homes[i % 9], &[0])).collect();
        let sc = grid(6, 2, 1, txns);
        for kind in [TourKind::Mst, TourKind::Universal] {
            let d = check_single(&sc, kind);
            assert!(d.log.count(MessageKind::ObjectTransfer) > 0);
        }
    }

    #[test]
    fn one_cluster_notifies_only_its_members() {
        // gamma = 2: four transactions on node 1 of a path, node 0 leads
        // its level-0 cluster
        let sc = path_scenario(9, 2, 8, &[(1, &[0]), (1, &[0]), (1, &[0]), (1, &[0])]);
        let h = build_hierarchy(&sc.metric, 2.0).unwrap();
        let mut run = DistributedRun::new(&sc, &h, TourKind::Mst, DistConfig::default()).unwrap();
        let p1 = run.run_phase1();
        assert_eq!(p1.super_leaders[&ObjectId(0)], vec![SuperLeader { node: NodeId(0), level: 0 }]);
        let notifies: Vec<_> = run.log().messages.iter().filter(|m| m.kind == MessageKind::SuperLeaderNotify).collect();
        assert_eq!(notifies.len(), 1);
        assert_eq!((notifies[0].src, notifies[0].dst), (NodeId(0), NodeId(1)));
        assert_eq!(run.log().count(MessageKind::CountUp), 0);
    }

    #[test]
    fn lone_reference_tallies_for_free() {
        let sc = path_scenario(9, 2, 8, &[(1, &[0]), (1, &[0]), (1, &[0]), (1, &[0])]);
        let h = build_hierarchy(&sc.metric, 2.0).unwrap();
        let mut run = DistributedRun::new(&sc, &h, TourKind::Mst, DistConfig::default()).unwrap();
        run.run_phase1();
        run.run_phase2();
        let log = run.log();
        assert_eq!(log.count(MessageKind::TallyReport), 1);
        assert_eq!(log.kind_cost(MessageKind::TallyReport), 0);
        assert_eq!(log.kind_cost(MessageKind::TallySum), 0);
    }

    #[test]
    fn phase_costs_add_up() {
        let sc = path_scenario(7, 2, 3, &[(0, &[0]), (6, &[0]), (6, &[0])]);
        let d = check_single(&sc, TourKind::Mst);
        let sum: u64 = Phase::ALL.iter().map(|&p| d.phase_cost(p)).sum();
        assert_eq!(sum, d.c_prime());
        assert_eq!(d.log.phase_class_cost(Phase::One, CostClass::Txn), 0);
    }

    #[test]
    fn control_weight_scales_control_only() {
        let sc = path_scenario(7, 2, 3, &[(0, &[0]), (6, &[0]), (6, &[0])]);
        let h = build_hierarchy(&sc.metric, 2.0).unwrap();
        let a = run_distributed_single(&sc, &h, TourKind::Mst, DistConfig { control_weight: 1 }).unwrap();
        let b = run_distributed_single(&sc, &h, TourKind::Mst, DistConfig { control_weight: 3 }).unwrap();
        assert_eq!(b.log.class_cost(CostClass::Control), 3 * a.log.class_cost(CostClass::Control));
        assert_eq!(a.log.movement_cost(), b.log.movement_cost());
    }

    #[test]
    fn multi_matches_global_structure() {
        let homes = [35, 34, 29, 28, 5, 4, 11, 10];
        let txns = (0..160).map(|i| TransactionSpec::new(i, homes[i % 8], &[i % 3, (i / 3) % 3])).collect();
        let sc = grid(6, 2, 3, txns);
        let h = build_hierarchy(&sc.metric, 2.0).unwrap();
        for kind in [TourKind::Mst, TourKind::Universal] {
            let global = schedule_multi(&sc, &h, kind).unwrap();
            let dist = run_distributed_multi(&sc, &h, kind, DistConfig::default()).unwrap();
            assert_eq!(validate_schedule(&sc, dist.schedule()), Ok(()));
            assert_eq!(dist.phase3.choices, global.assignment.per_txn);
            assert_eq!(dist.phase3.tour, global.tour);
            assert_eq!(dist.schedule().structure(&sc), global.schedule.structure(&sc));
            assert_eq!(dist.cost, global.cost);
            for (o, e) in &global.assignment.per_object {
                assert_eq!(dist.phase2.survivors[o], e.prune.survivors);
                assert_eq!(dist.phase2.dispositions[o], e.prune.dispositions);
            }
        }
    }

    #[test]
    fn single_object_multi_run_is_the_single_run() {
        let homes = [35, 34, 29, 28, 5];
        let txns = (0..90).map(|i| TransactionSpec::new(i, homes[i % 5], &[0])).collect();
        let sc = grid(6, 2, 1, txns);
        let h = build_hierarchy(&sc.metric, 2.0).unwrap();
        let a = run_distributed_single(&sc, &h, TourKind::Mst, DistConfig::default()).unwrap();
        let b = run_distributed_multi(&sc, &h, TourKind::Mst, DistConfig::default()).unwrap();
        assert_eq!(a.log, b.log);
        assert_eq!(a.phase3, b.phase3);
    }
}

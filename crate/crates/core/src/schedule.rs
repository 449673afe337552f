//! Problem instances, the dual-flow cost model and schedules.
//!
//! Objects move at `alpha` per unit of distance, transactions at `beta`.
//! Moves declare their endpoints and are charged the metric distance.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metric::{generate, DistanceOracle, GeneratorSpec, GraphError, Length, NodeId, WeightedGraph};
use crate::tours::{TourKind, TourOrder};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjectId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TxnId(pub usize);

impl fmt::Display for ObjectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "o{}", self.0)
    }
}

impl fmt::Display for TxnId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("cost model needs alpha > beta >= 1 (alpha={alpha}, beta={beta})")]
    InvalidCost { alpha: u64, beta: u64 },
    #[error("scenario has no transactions")]
    NoTransactions,
    #[error("scenario has no objects")]
    NoObjects,
    #[error("{what} home {home} is outside the graph (n={n})")]
    BadHome { what: String, home: usize, n: usize },
    #[error("duplicate {0}")]
    DuplicateId(String),
    #[error("transaction {txn} references unknown object {obj}")]
    UnknownObject { txn: TxnId, obj: ObjectId },
    #[error("transaction {0} requests no objects")]
    EmptyObjectSet(TxnId),
    #[error("stretch factor sigma must be at least 2, got {0}")]
    InvalidSigma(f64),
    #[error("objects do not share a common home node")]
    DistinctObjectHomes,
    #[error("expected exactly one object, scenario has {0}")]
    NotSingleObject(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostModel {
    pub alpha: u64,
    pub beta: u64,
}

impl CostModel {
    pub fn new(alpha: u64, beta: u64) -> Result<Self, ScenarioError> {
        if beta < 1 || alpha <= beta {
            return Err(ScenarioError::InvalidCost { alpha, beta });
        }
        Ok(CostModel { alpha, beta })
    }

    /// `ceil(alpha / beta)`.
    pub fn gamma(&self) -> u64 {
        self.alpha.div_ceil(self.beta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectSpec {
    pub id: ObjectId,
    pub home: NodeId,
}

impl ObjectSpec {
    pub fn new(id: usize, home: usize) -> Self {
        ObjectSpec { id: ObjectId(id), home: NodeId(home) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransactionSpec {
    pub id: TxnId,
    pub home: NodeId,
    /// Ascending, no duplicates.
    pub objs: Vec<ObjectId>,
}

impl TransactionSpec {
    pub fn new(id: usize, home: usize, objs: &[usize]) -> Self {
        let set: BTreeSet<ObjectId> = objs.iter().map(|&o| ObjectId(o)).collect();
        TransactionSpec { id: TxnId(id), home: NodeId(home), objs: set.into_iter().collect() }
    }

    pub fn needs(&self, o: ObjectId) -> bool {
        self.objs.binary_search(&o).is_ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SchedConfig {
    pub sigma: f64,
    pub tour: TourKind,
    pub seed: u64,
}

impl Default for SchedConfig {
    fn default() -> Self {
        SchedConfig { sigma: 2.0, tour: TourKind::Mst, seed: 0 }
    }
}

/// Where a scenario's graph came from; kept so files round-trip.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphSource {
    Explicit { n: usize, edges: Vec<(usize, usize, Length)> },
    Generated(GeneratorSpec),
}

impl GraphSource {
    pub fn build(&self) -> Result<WeightedGraph, GraphError> {
        match self {
            GraphSource::Explicit { n, edges } => WeightedGraph::new(*n, edges),
            GraphSource::Generated(spec) => generate(spec),
        }
    }
}

/// One problem instance: network, cost model, objects and transactions.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub source: GraphSource,
    pub graph: WeightedGraph,
    pub metric: DistanceOracle,
    pub cost: CostModel,
    /// Ascending id.
    pub objects: Vec<ObjectSpec>,
    /// Ascending id.
    pub transactions: Vec<TransactionSpec>,
    pub config: SchedConfig,
}

impl PartialEq for Scenario {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.source == other.source
            && self.cost == other.cost
            && self.objects == other.objects
            && self.transactions == other.transactions
            && self.config == other.config
    }
}

impl Scenario {
    pub fn new(
        name: impl Into<String>,
        source: GraphSource,
        cost: CostModel,
        mut objects: Vec<ObjectSpec>,
        mut transactions: Vec<TransactionSpec>,
        config: SchedConfig,
    ) -> Result<Self, ScenarioError> {
        let graph = source.build()?;
        let cost = CostModel::new(cost.alpha, cost.beta)?;
        if config.sigma.is_nan() || config.sigma < 2.0 || !config.sigma.is_finite() {
            return Err(ScenarioError::InvalidSigma(config.sigma));
        }
        if objects.is_empty() {
            return Err(ScenarioError::NoObjects);
        }
        if transactions.is_empty() {
            return Err(ScenarioError::NoTransactions);
        }
        let n = graph.n();
        objects.sort_by_key(|o| o.id);
        transactions.sort_by_key(|t| t.id);
        for pair in objects.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(ScenarioError::DuplicateId(format!("object {}", pair[0].id)));
            }
        }
        for pair in transactions.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(ScenarioError::DuplicateId(format!("transaction {}", pair[0].id)));
            }
        }
        for o in &objects {
            if o.home.index() >= n {
                return Err(ScenarioError::BadHome { what: format!("object {}", o.id), home: o.home.0, n });
            }
        }
        for t in &mut transactions {
            if t.home.index() >= n {
                return Err(ScenarioError::BadHome { what: format!("transaction {}", t.id), home: t.home.0, n });
            }
            t.objs.sort();
            t.objs.dedup();
            if t.objs.is_empty() {
                return Err(ScenarioError::EmptyObjectSet(t.id));
            }
            for &o in &t.objs {
                if objects.binary_search_by_key(&o, |x| x.id).is_err() {
                    return Err(ScenarioError::UnknownObject { txn: t.id, obj: o });
                }
            }
        }
        let metric = DistanceOracle::new(&graph);
        Ok(Scenario { name: name.into(), source, graph, metric, cost, objects, transactions, config })
    }

    /// Object home shared by every object, if there is one.
    pub fn common_home(&self) -> Result<NodeId, ScenarioError> {
        let home = self.objects[0].home;
        if self.objects.iter().all(|o| o.home == home) {
            Ok(home)
        } else {
            Err(ScenarioError::DistinctObjectHomes)
        }
    }

    /// The object of a single-object scenario.
    pub fn single_object(&self) -> Result<ObjectSpec, ScenarioError> {
        match self.objects.as_slice() {
            [o] => Ok(*o),
            other => Err(ScenarioError::NotSingleObject(other.len())),
        }
    }

    /// Largest object set of any transaction.
    pub fn k(&self) -> usize {
        self.transactions.iter().map(|t| t.objs.len()).max().unwrap_or(0)
    }

    pub fn transaction(&self, id: TxnId) -> Option<&TransactionSpec> {
        self.transactions.binary_search_by_key(&id, |t| t.id).ok().map(|i| &self.transactions[i])
    }

    pub fn object(&self, id: ObjectId) -> Option<&ObjectSpec> {
        self.objects.binary_search_by_key(&id, |o| o.id).ok().map(|i| &self.objects[i])
    }

    /// Copy restricted to the transactions needing `obj`, with `obj` as the
    /// only object. `None` if no transaction needs it.
    pub fn restricted_to(&self, obj: ObjectId) -> Option<Scenario> {
        let spec = *self.object(obj)?;
        let transactions: Vec<TransactionSpec> = self
            .transactions
            .iter()
            .filter(|t| t.needs(obj))
            .map(|t| TransactionSpec { id: t.id, home: t.home, objs: vec![obj] })
            .collect();
        if transactions.is_empty() {
            return None;
        }
        Some(Scenario {
            name: format!("{}/{}", self.name, obj),
            source: self.source.clone(),
            graph: self.graph.clone(),
            metric: self.metric.clone(),
            cost: self.cost,
            objects: vec![spec],
            transactions,
            config: self.config,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Event {
    MoveObject { obj: ObjectId, from: NodeId, to: NodeId },
    MoveTransaction { txn: TxnId, from: NodeId, to: NodeId },
    Execute { txn: TxnId, node: NodeId },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Schedule {
    pub events: Vec<Event>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Entity {
    Object(ObjectId),
    Transaction(TxnId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    MissingExecution { txn: TxnId },
    DoubleExecution { txn: TxnId, event: usize },
    NotColocated { txn: TxnId, node: NodeId, absent: Vec<Entity>, event: usize },
    BrokenContinuity { entity: Entity, expected: NodeId, found: NodeId, event: usize },
    UnknownEntity { entity: Entity, event: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingExecution { txn } => write!(f, "{txn} never executes"),
            Violation::DoubleExecution { txn, event } => write!(f, "{txn} executes again at event {event}"),
            Violation::NotColocated { txn, node, absent, event } => {
                write!(f, "{txn} executes at {node} (event {event}) without {absent:?}")
            }
            Violation::BrokenContinuity { entity, expected, found, event } => {
                write!(f, "{entity:?} moves from {found} at event {event} but is at {expected}")
            }
            Violation::UnknownEntity { entity, event } => write!(f, "unknown {entity:?} at event {event}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScheduleError {
    #[error("invalid schedule: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidSchedule(Vec<Violation>),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CostBreakdown {
    pub object_distance: Length,
    pub txn_distance: Length,
    pub object_cost: u64,
    pub txn_cost: u64,
    pub total: u64,
}

impl CostBreakdown {
    pub fn from_distances(cost: CostModel, object_distance: Length, txn_distance: Length) -> Self {
        let object_cost = cost.alpha * object_distance;
        let txn_cost = cost.beta * txn_distance;
        CostBreakdown { object_distance, txn_distance, object_cost, txn_cost, total: object_cost + txn_cost }
    }
}

/// Replays the events and reports every violated schedule invariant.
pub fn validate_schedule(sc: &Scenario, s: &Schedule) -> Result<(), Vec<Violation>> {
    let mut obj_at: BTreeMap<ObjectId, NodeId> = sc.objects.iter().map(|o| (o.id, o.home)).collect();
    let mut txn_at: BTreeMap<TxnId, NodeId> = sc.transactions.iter().map(|t| (t.id, t.home)).collect();
    let mut executed: BTreeSet<TxnId> = BTreeSet::new();
    let mut violations = Vec::new();
    for (i, ev) in s.events.iter().enumerate() {
        match *ev {
            Event::MoveObject { obj, from, to } => match obj_at.get_mut(&obj) {
                None => violations.push(Violation::UnknownEntity { entity: Entity::Object(obj), event: i }),
                Some(at) => {
                    if *at != from {
                        violations.push(Violation::BrokenContinuity {
                            entity: Entity::Object(obj),
                            expected: *at,
                            found: from,
                            event: i,
                        });
                    }
                    *at = to;
                }
            },
            Event::MoveTransaction { txn, from, to } => match txn_at.get_mut(&txn) {
                None => violations.push(Violation::UnknownEntity { entity: Entity::Transaction(txn), event: i }),
                Some(at) => {
                    if *at != from {
                        violations.push(Violation::BrokenContinuity {
                            entity: Entity::Transaction(txn),
                            expected: *at,
                            found: from,
                            event: i,
                        });
                    }
                    *at = to;
                }
            },
            Event::Execute { txn, node } => {
                let Some(spec) = sc.transaction(txn) else {
                    violations.push(Violation::UnknownEntity { entity: Entity::Transaction(txn), event: i });
                    continue;
                };
                if !executed.insert(txn) {
                    violations.push(Violation::DoubleExecution { txn, event: i });
                }
                let mut absent = Vec::new();
                if txn_at[&txn] != node {
                    absent.push(Entity::Transaction(txn));
                }
                for o in &spec.objs {
                    if obj_at[o] != node {
                        absent.push(Entity::Object(*o));
                    }
                }
                if !absent.is_empty() {
                    violations.push(Violation::NotColocated { txn, node, absent, event: i });
                }
            }
        }
    }
    for t in &sc.transactions {
        if !executed.contains(&t.id) {
            violations.push(Violation::MissingExecution { txn: t.id });
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

/// Validates, then charges `alpha` per unit of object travel and `beta` per
/// unit of transaction travel.
pub fn schedule_cost(sc: &Scenario, s: &Schedule) -> Result<CostBreakdown, ScheduleError> {
    validate_schedule(sc, s).map_err(ScheduleError::InvalidSchedule)?;
    Ok(movement_cost(sc, s))
}

/// Cost accounting without validation.
pub fn movement_cost(sc: &Scenario, s: &Schedule) -> CostBreakdown {
    let mut object_distance = 0;
    let mut txn_distance = 0;
    for ev in &s.events {
        match *ev {
            Event::MoveObject { from, to, .. } => object_distance += sc.metric.dist(from, to),
            Event::MoveTransaction { from, to, .. } => txn_distance += sc.metric.dist(from, to),
            Event::Execute { .. } => {}
        }
    }
    CostBreakdown::from_distances(sc.cost, object_distance, txn_distance)
}

/// Baseline: every transaction travels to the objects' home and executes
/// there in id order; objects never move.
pub fn direct_schedule(sc: &Scenario) -> Result<Schedule, ScenarioError> {
    let home = sc.common_home()?;
    let destinations = sc.transactions.iter().map(|t| (t.id, home)).collect();
    let tour = TourOrder { anchor: home, visits: vec![home], kind: TourKind::Mst };
    Ok(assemble_schedule(sc, home, &destinations, &tour))
}

/// Stops each object must visit: the destinations of the transactions that
/// need it, other than the home.
pub fn required_stops(
    sc: &Scenario,
    home: NodeId,
    destinations: &BTreeMap<TxnId, NodeId>,
) -> BTreeMap<ObjectId, BTreeSet<NodeId>> {
    let mut stops: BTreeMap<ObjectId, BTreeSet<NodeId>> = sc.objects.iter().map(|o| (o.id, BTreeSet::new())).collect();
    for t in &sc.transactions {
        let dest = destinations[&t.id];
        if dest != home {
            for o in &t.objs {
                stops.get_mut(o).expect("known object").insert(dest);
            }
        }
    }
    stops
}

/// Canonical event order shared by every scheduler in the crate:
///
/// 1. transactions not already at their destination move there, by id;
/// 2. walking the tour (home first), every object required at the stop
///    comes in from its previous stop, by object id, then the transactions
///    waiting there execute by id.
///
/// Every destination must lie on the tour.
pub fn assemble_schedule(
    sc: &Scenario,
    home: NodeId,
    destinations: &BTreeMap<TxnId, NodeId>,
    tour: &TourOrder,
) -> Schedule {
    let mut events = Vec::new();
    for t in &sc.transactions {
        let dest = destinations[&t.id];
        if dest != t.home {
            events.push(Event::MoveTransaction { txn: t.id, from: t.home, to: dest });
        }
    }
    let stops = required_stops(sc, home, destinations);
    let mut waiting: BTreeMap<NodeId, Vec<TxnId>> = BTreeMap::new();
    for (&txn, &dest) in destinations {
        waiting.entry(dest).or_default().push(txn);
    }
    let mut at: BTreeMap<ObjectId, NodeId> = sc.objects.iter().map(|o| (o.id, o.home)).collect();
    for &stop in &tour.visits {
        for (obj, needed) in &stops {
            if needed.contains(&stop) {
                let from = at[obj];
                if from != stop {
                    events.push(Event::MoveObject { obj: *obj, from, to: stop });
                    at.insert(*obj, stop);
                }
            }
        }
        if let Some(txns) = waiting.remove(&stop) {
            events.extend(txns.into_iter().map(|txn| Event::Execute { txn, node: stop }));
        }
    }
    debug_assert!(waiting.is_empty(), "destinations off the tour: {waiting:?}");
    Schedule { events }
}

impl Schedule {
    /// Per-entity move sequences, per-transaction execution nodes and the
    /// per-object order of the transactions it serves. Two schedules with
    /// the same structure differ only in how independent events interleave.
    pub fn structure(&self, sc: &Scenario) -> ScheduleStructure {
        let mut moves: BTreeMap<Entity, Vec<(NodeId, NodeId)>> = BTreeMap::new();
        let mut executions = BTreeMap::new();
        let mut access: BTreeMap<ObjectId, Vec<TxnId>> = BTreeMap::new();
        for ev in &self.events {
            match *ev {
                Event::MoveObject { obj, from, to } => moves.entry(Entity::Object(obj)).or_default().push((from, to)),
                Event::MoveTransaction { txn, from, to } => {
                    moves.entry(Entity::Transaction(txn)).or_default().push((from, to))
                }
                Event::Execute { txn, node } => {
                    executions.insert(txn, node);
                    if let Some(spec) = sc.transaction(txn) {
                        for o in &spec.objs {
                            access.entry(*o).or_default().push(txn);
                        }
                    }
                }
            }
        }
        ScheduleStructure { moves, executions, access }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleStructure {
    pub moves: BTreeMap<Entity, Vec<(NodeId, NodeId)>>,
    pub executions: BTreeMap<TxnId, NodeId>,
    pub access: BTreeMap<ObjectId, Vec<TxnId>>,
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn path_scenario(n: usize, alpha: u64, obj_home: usize, txns: &[(usize, &[usize])]) -> Scenario {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i, 1)).collect();
        let objects: BTreeSet<usize> = txns.iter().flat_map(|t| t.1.iter().copied()).collect();
        Scenario::new(
            "path",
            GraphSource::Explicit { n, edges },
            CostModel { alpha, beta: 1 },
            objects.into_iter().map(|o| ObjectSpec { id: ObjectId(o), home: NodeId(obj_home) }).collect(),
            txns.iter().enumerate().map(|(i, (home, objs))| TransactionSpec::new(i, *home, objs)).collect(),
            SchedConfig::default(),
        )
        .unwrap()
    }

    #[test]
    fn gamma_rounds_up() {
        assert_eq!(CostModel::new(4, 1).unwrap().gamma(), 4);
        assert_eq!(CostModel::new(5, 2).unwrap().gamma(), 3);
        assert!(CostModel::new(1, 1).is_err());
        assert!(CostModel::new(3, 0).is_err());
    }

    #[test]
    fn scenario_validation() {
        let src = GraphSource::Explicit { n: 2, edges: vec![(0, 1, 1)] };
        let obj = vec![ObjectSpec { id: ObjectId(0), home: NodeId(0) }];
        let cost = CostModel { alpha: 2, beta: 1 };
        let cfg = SchedConfig::default();
        let mk = |objects: Vec<ObjectSpec>, txns: Vec<TransactionSpec>| {
            Scenario::new("x", src.clone(), cost, objects, txns, cfg)
        };
        assert_eq!(mk(obj.clone(), vec![]).unwrap_err(), ScenarioError::NoTransactions);
        assert!(matches!(mk(obj.clone(), vec![TransactionSpec::new(0, 5, &[0])]), Err(ScenarioError::BadHome { .. })));
        assert!(matches!(
            mk(obj.clone(), vec![TransactionSpec::new(0, 1, &[3])]),
            Err(ScenarioError::UnknownObject { .. })
        ));
        assert!(matches!(
            mk(obj.clone(), vec![TransactionSpec::new(0, 1, &[0]), TransactionSpec::new(0, 0, &[0])]),
            Err(ScenarioError::DuplicateId(_))
        ));
        assert_eq!(
            mk(obj.clone(), vec![TransactionSpec::new(0, 1, &[])]).unwrap_err(),
            ScenarioError::EmptyObjectSet(TxnId(0))
        );
        let bad = Scenario::new(
            "x",
            src.clone(),
            CostModel { alpha: 1, beta: 1 },
            obj,
            vec![TransactionSpec::new(0, 1, &[0])],
            cfg,
        );
        assert!(matches!(bad, Err(ScenarioError::InvalidCost { .. })));
    }

    #[test]
    fn colocated_execute_is_valid_and_free() {
        let sc = path_scenario(3, 2, 1, &[(1, &[0])]);
        let s = Schedule { events: vec![Event::Execute { txn: TxnId(0), node: NodeId(1) }] };
        assert_eq!(validate_schedule(&sc, &s), Ok(()));
        assert_eq!(schedule_cost(&sc, &s).unwrap().total, 0);
    }

    #[test]
    fn missing_execution() {
        let sc = path_scenario(3, 2, 1, &[(1, &[0])]);
        let errs = validate_schedule(&sc, &Schedule::default()).unwrap_err();
        assert_eq!(errs, vec![Violation::MissingExecution { txn: TxnId(0) }]);
    }

    #[test]
    fn execute_before_arrival() {
        let sc = path_scenario(4, 2, 0, &[(3, &[0])]);
        let s = Schedule {
            events: vec![
                Event::Execute { txn: TxnId(0), node: NodeId(3) },
                Event::MoveObject { obj: ObjectId(0), from: NodeId(0), to: NodeId(3) },
            ],
        };
        let errs = validate_schedule(&sc, &s).unwrap_err();
        assert!(matches!(errs[0], Violation::NotColocated { .. }));
        assert!(matches!(schedule_cost(&sc, &s), Err(ScheduleError::InvalidSchedule(_))));
    }

    #[test]
    fn broken_continuity_and_double_execution() {
        let sc = path_scenario(4, 2, 0, &[(0, &[0])]);
        let s = Schedule {
            events: vec![
                Event::Execute { txn: TxnId(0), node: NodeId(0) },
                Event::MoveObject { obj: ObjectId(0), from: NodeId(2), to: NodeId(3) },
                Event::Execute { txn: TxnId(0), node: NodeId(0) },
            ],
        };
        let errs = validate_schedule(&sc, &s).unwrap_err();
        assert!(errs.iter().any(|v| matches!(v, Violation::BrokenContinuity { .. })));
        assert!(errs.iter().any(|v| matches!(v, Violation::DoubleExecution { .. })));
    }

    #[test]
    fn object_cost_arithmetic() {
        let sc = path_scenario(4, 5, 0, &[(3, &[0])]);
        let s = Schedule {
            events: vec![
                Event::MoveObject { obj: ObjectId(0), from: NodeId(0), to: NodeId(3) },
                Event::Execute { txn: TxnId(0), node: NodeId(3) },
            ],
        };
        let c = schedule_cost(&sc, &s).unwrap();
        assert_eq!(c.object_cost, 15);
        assert_eq!(c.total, 15);
    }

    #[test]
    fn direct_schedule_costs() {
        let sc = path_scenario(4, 2, 1, &[(1, &[0]), (1, &[0])]);
        let s = direct_schedule(&sc).unwrap();
        assert_eq!(schedule_cost(&sc, &s).unwrap().total, 0);

        let sc = path_scenario(6, 2, 0, &[(4, &[0])]);
        let s = direct_schedule(&sc).unwrap();
        assert_eq!(schedule_cost(&sc, &s).unwrap().total, 4);
        assert_eq!(
            s.events,
            vec![
                Event::MoveTransaction { txn: TxnId(0), from: NodeId(4), to: NodeId(0) },
                Event::Execute { txn: TxnId(0), node: NodeId(0) }
            ]
        );
    }

    #[test]
    fn cost_ignores_valid_reordering() {
        let sc = path_scenario(5, 3, 0, &[(4, &[0]), (2, &[0])]);
        let a = Schedule {
            events: vec![
                Event::MoveTransaction { txn: TxnId(0), from: NodeId(4), to: NodeId(0) },
                Event::MoveTransaction { txn: TxnId(1), from: NodeId(2), to: NodeId(0) },
                Event::Execute { txn: TxnId(0), node: NodeId(0) },
                Event::Execute { txn: TxnId(1), node: NodeId(0) },
            ],
        };
        let mut b = a.clone();
        b.events.swap(0, 1);
        b.events.swap(2, 3);
        assert_eq!(schedule_cost(&sc, &a).unwrap(), schedule_cost(&sc, &b).unwrap());
        assert_eq!(a.structure(&sc).executions, b.structure(&sc).executions);
    }
}

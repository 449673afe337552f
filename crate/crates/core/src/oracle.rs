//! Exhaustive optimal costs for small instances.
//!
//! Single object: every subset `M` of nodes the object might visit, priced as
//! the shortest open walk over `M` from the home plus each transaction's
//! distance to its nearest node of `M ∪ {home}`.
//!
//! Multiple objects: every assignment of execution nodes to transactions,
//! priced as one shortest open walk per object over the nodes it is needed
//! at plus the transaction distances. Walks are chosen per object, so the
//! minimum is a lower bound that a single schedule may not attain when two
//! objects would need to cross in opposite orders; [`replay_witness`] says
//! whether it does.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::metric::{Length, NodeId};
use crate::schedule::{schedule_cost, Event, ObjectId, Scenario, ScenarioError, Schedule, ScheduleError, TxnId};
use crate::tours::HeldKarp;

pub const SINGLE_ORACLE_MAX_NODES: usize = 10;
pub const MULTI_ORACLE_MAX_NODES: usize = 8;
pub const MULTI_ORACLE_MAX_TXNS: usize = 5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("instance too large for the oracle: {what} = {value} exceeds {limit}")]
    TooLarge { what: &'static str, value: usize, limit: usize },
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("witness replay failed: {0}")]
    Replay(#[from] ScheduleError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    /// Execution node per transaction.
    pub meeting: BTreeMap<TxnId, NodeId>,
    /// Per object, the open walk from the home.
    pub walks: BTreeMap<ObjectId, Vec<NodeId>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub c_star: u64,
    pub witness: Witness,
}

/// Held-Karp over all nodes with `home` first.
fn full_table(sc: &Scenario, home: NodeId) -> HeldKarp {
    let nodes: Vec<NodeId> = std::iter::once(home).chain(sc.metric.nodes().filter(|&v| v != home)).collect();
    HeldKarp::new(&sc.metric, nodes)
}

fn check(what: &'static str, value: usize, limit: usize) -> Result<(), OracleError> {
    if value > limit {
        return Err(OracleError::TooLarge { what, value, limit });
    }
    Ok(())
}

pub fn optimal_cost_single(sc: &Scenario) -> Result<OracleResult, OracleError> {
    let obj = sc.single_object()?;
    let n = sc.graph.n();
    check("nodes", n, SINGLE_ORACLE_MAX_NODES)?;
    let hk = full_table(sc, obj.home);
    let nodes = hk.nodes().to_vec();
    let (alpha, beta) = (sc.cost.alpha, sc.cost.beta);

    let mut best: Option<(u64, usize)> = None;
    for mask in (1..1usize << n).step_by(2) {
        let (walk, _) = hk.best(mask);
        let mut txn: Length = 0;
        for t in &sc.transactions {
            txn += (0..n).filter(|i| mask >> i & 1 == 1).map(|i| sc.metric.dist(t.home, nodes[i])).min().expect("home");
        }
        let total = alpha * walk + beta * txn;
        if best.is_none_or(|(b, _)| total < b) {
            best = Some((total, mask));
        }
    }
    let (c_star, mask) = best.expect("at least the home subset");
    let members: Vec<NodeId> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| nodes[i]).collect();
    let meeting = sc
        .transactions
        .iter()
        .map(|t| {
            let at = *members.iter().min_by_key(|&&u| (sc.metric.dist(t.home, u), u)).expect("non-empty");
            (t.id, at)
        })
        .collect();
    let walks = BTreeMap::from([(obj.id, hk.path(mask))]);
    Ok(OracleResult { c_star, witness: Witness { meeting, walks } })
}

pub fn optimal_cost_multi(sc: &Scenario) -> Result<OracleResult, OracleError> {
    let home = sc.common_home()?;
    let n = sc.graph.n();
    check("nodes", n, MULTI_ORACLE_MAX_NODES)?;
    check("transactions", sc.transactions.len(), MULTI_ORACLE_MAX_TXNS)?;
    let hk = full_table(sc, home);
    let nodes = hk.nodes().to_vec();
    let (alpha, beta) = (sc.cost.alpha, sc.cost.beta);
    let m = sc.transactions.len();
    let obj_index: BTreeMap<ObjectId, usize> = sc.objects.iter().enumerate().map(|(i, o)| (o.id, i)).collect();
    let needs: Vec<Vec<usize>> =
        sc.transactions.iter().map(|t| t.objs.iter().map(|o| obj_index[o]).collect()).collect();
    let txn_dist: Vec<Vec<Length>> =
        sc.transactions.iter().map(|t| nodes.iter().map(|&u| sc.metric.dist(t.home, u)).collect()).collect();

    // assignment digits are indices into `nodes`
    let mut assign = vec![0usize; m];
    let mut best: Option<(u64, Vec<usize>)> = None;
    loop {
        let mut masks = vec![1usize; sc.objects.len()];
        let mut total = 0u64;
        for (ti, &at) in assign.iter().enumerate() {
            total += beta * txn_dist[ti][at];
            for &o in &needs[ti] {
                masks[o] |= 1 << at;
            }
        }
        for &mask in &masks {
            total += alpha * hk.best(mask).0;
        }
        if best.as_ref().is_none_or(|(b, _)| total < *b) {
            best = Some((total, assign.clone()));
        }
        // next assignment in lexicographic order
        let mut i = 0;
        while i < m {
            assign[i] += 1;
            if assign[i] < n {
                break;
            }
            assign[i] = 0;
            i += 1;
        }
        if i == m {
            break;
        }
    }
    let (c_star, assign) = best.expect("at least one assignment");
    let meeting = sc.transactions.iter().zip(&assign).map(|(t, &at)| (t.id, nodes[at])).collect();
    let mut walks = BTreeMap::new();
    for (oi, o) in sc.objects.iter().enumerate() {
        let mut mask = 1usize;
        for (ti, &at) in assign.iter().enumerate() {
            if needs[ti].contains(&oi) {
                mask |= 1 << at;
            }
        }
        walks.insert(o.id, hk.path(mask));
    }
    Ok(OracleResult { c_star, witness: Witness { meeting, walks } })
}

/// Builds a schedule that moves every transaction to its meeting node and
/// every object along its walk, executing as soon as a transaction has all
/// its objects. `None` when the walks block each other.
pub fn witness_schedule(sc: &Scenario, w: &Witness) -> Option<Schedule> {
    let mut events = Vec::new();
    for t in &sc.transactions {
        let at = w.meeting[&t.id];
        if at != t.home {
            events.push(Event::MoveTransaction { txn: t.id, from: t.home, to: at });
        }
    }
    let mut pos: BTreeMap<ObjectId, usize> = w.walks.keys().map(|&o| (o, 0)).collect();
    let here = |pos: &BTreeMap<ObjectId, usize>, o: ObjectId| w.walks[&o][pos[&o]];
    let mut pending: Vec<TxnId> = sc.transactions.iter().map(|t| t.id).collect();
    loop {
        let ready = pending.iter().position(|&t| {
            let spec = sc.transaction(t).expect("known");
            spec.objs.iter().all(|&o| here(&pos, o) == w.meeting[&t])
        });
        if let Some(i) = ready {
            let t = pending.remove(i);
            events.push(Event::Execute { txn: t, node: w.meeting[&t] });
            continue;
        }
        let movable = w.walks.keys().copied().find(|&o| {
            pos[&o] + 1 < w.walks[&o].len()
                && !pending
                    .iter()
                    .any(|&t| sc.transaction(t).expect("known").needs(o) && w.meeting[&t] == here(&pos, o))
        });
        match movable {
            Some(o) => {
                let from = here(&pos, o);
                *pos.get_mut(&o).expect("known") += 1;
                events.push(Event::MoveObject { obj: o, from, to: here(&pos, o) });
            }
            None => break,
        }
    }
    pending.is_empty().then_some(Schedule { events })
}

/// Replays the witness through the validator and accountant. `Ok(None)`
/// when the per-object walks cannot be combined into one schedule.
pub fn replay_witness(sc: &Scenario, r: &OracleResult) -> Result<Option<u64>, OracleError> {
    match witness_schedule(sc, &r.witness) {
        None => Ok(None),
        Some(s) => Ok(Some(schedule_cost(sc, &s)?.total)),
    }
}

//! Deterministic synchronous message-passing simulator.
//!
//! Every node runs a [`protocol::NodeProcess`] that sees only its own state,
//! the messages it receives and the static configuration (hierarchy, metric,
//! cost model, object home). Messages sent in round `r` are delivered in
//! round `r + 1`, ordered by destination, sender, kind and send order. After
//! a round's deliveries each receiving node gets an end-of-round callback.
//!
//! Control messages between the same pair of nodes in the same round are
//! coalesced into one message; transaction and object transfers are always
//! sent one entity per message. A message costs its class weight times the
//! metric distance between its endpoints.

mod protocol;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use crate::hierarchy::PartitionHierarchy;
use crate::metric::{DistanceOracle, NodeId};
use crate::schedule::{CostModel, Entity, Event, ObjectId, TxnId};
use crate::single::SuperLeader;
use crate::tours::TourKind;

pub use protocol::{
    run_distributed_multi, run_distributed_single, DistOutcome, DistributedRun, Phase1Output, Phase2Output,
    Phase3Output,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Phase {
    One,
    Two,
    Three,
}

impl Phase {
    pub const ALL: [Phase; 3] = [Phase::One, Phase::Two, Phase::Three];

    pub fn number(self) -> u8 {
        match self {
            Phase::One => 1,
            Phase::Two => 2,
            Phase::Three => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MessageKind {
    TxnInfo,
    CountUp,
    SuperLeaderNotify,
    LevelAnnounce,
    LevelRoster,
    TallyReport,
    TallySum,
    Redirect,
    TxnTransfer,
    StopReport,
    ObjectTransfer,
}

impl MessageKind {
    pub fn class(self) -> CostClass {
        match self {
            MessageKind::TxnTransfer => CostClass::Txn,
            MessageKind::ObjectTransfer => CostClass::Object,
            _ => CostClass::Control,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MessageKind::TxnInfo => "TxnInfo",
            MessageKind::CountUp => "CountUp",
            MessageKind::SuperLeaderNotify => "SuperLeaderNotify",
            MessageKind::LevelAnnounce => "LevelAnnounce",
            MessageKind::LevelRoster => "LevelRoster",
            MessageKind::TallyReport => "TallyReport",
            MessageKind::TallySum => "TallySum",
            MessageKind::Redirect => "Redirect",
            MessageKind::TxnTransfer => "TxnTransfer",
            MessageKind::StopReport => "StopReport",
            MessageKind::ObjectTransfer => "ObjectTransfer",
        }
    }
}

impl fmt::Display for MessageKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CostClass {
    Control,
    Txn,
    Object,
}

/// One (transaction, object) pair travelling up the hierarchy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Record {
    pub txn: TxnId,
    pub home: NodeId,
    pub obj: ObjectId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    /// Unassigned record for the receiver's cluster on `level`.
    Record {
        level: i32,
        record: Record,
    },
    /// `role_level` is the level on which the receiver forwarded the
    /// records, `-1` when it is their home.
    Notify {
        obj: ObjectId,
        leader: SuperLeader,
        txns: Vec<TxnId>,
        role_level: i32,
    },
    Announce {
        obj: ObjectId,
        level: i32,
    },
    Roster {
        obj: ObjectId,
        level: i32,
        reference: NodeId,
        members: Vec<NodeId>,
    },
    Tally {
        obj: ObjectId,
        level: i32,
        count: u64,
    },
    Sum {
        obj: ObjectId,
        level: i32,
        sum: u64,
    },
    Redirect {
        obj: ObjectId,
        txns: Vec<TxnId>,
    },
    Txn {
        id: TxnId,
        objs: Vec<ObjectId>,
    },
    Stop {
        objs: Vec<ObjectId>,
    },
    /// `plan` lists the stops still ahead after the receiver.
    Object {
        obj: ObjectId,
        plan: Vec<NodeId>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Message {
    pub round: u64,
    pub phase: Phase,
    pub src: NodeId,
    pub dst: NodeId,
    pub kind: MessageKind,
    pub items: Vec<Item>,
    pub cost: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MessageLog {
    pub messages: Vec<Message>,
}

impl MessageLog {
    pub fn phase_cost(&self, phase: Phase) -> u64 {
        self.messages.iter().filter(|m| m.phase == phase).map(|m| m.cost).sum()
    }

    pub fn class_cost(&self, class: CostClass) -> u64 {
        self.messages.iter().filter(|m| m.kind.class() == class).map(|m| m.cost).sum()
    }

    pub fn phase_class_cost(&self, phase: Phase, class: CostClass) -> u64 {
        self.messages.iter().filter(|m| m.phase == phase && m.kind.class() == class).map(|m| m.cost).sum()
    }

    pub fn kind_cost(&self, kind: MessageKind) -> u64 {
        self.messages.iter().filter(|m| m.kind == kind).map(|m| m.cost).sum()
    }

    pub fn total(&self) -> u64 {
        self.messages.iter().map(|m| m.cost).sum()
    }

    /// Transaction and object transfer cost.
    pub fn movement_cost(&self) -> u64 {
        self.class_cost(CostClass::Txn) + self.class_cost(CostClass::Object)
    }

    pub fn count(&self, kind: MessageKind) -> usize {
        self.messages.iter().filter(|m| m.kind == kind).count()
    }

    /// One line per message: round, phase, src, dst, kind, items, cost.
    pub fn trace(&self) -> String {
        let mut out = String::from("round,phase,src,dst,kind,items,cost\n");
        for m in &self.messages {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                m.round,
                m.phase.number(),
                m.src,
                m.dst,
                m.kind,
                m.items.len(),
                m.cost
            );
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DistConfig {
    /// Cost per unit distance of a control message.
    pub control_weight: u64,
}

impl Default for DistConfig {
    fn default() -> Self {
        DistConfig { control_weight: 1 }
    }
}

/// Read-only knowledge shared by every node.
pub(crate) struct Ctx<'a> {
    pub h: &'a PartitionHierarchy,
    pub metric: &'a DistanceOracle,
    pub cost: CostModel,
    pub home: NodeId,
    pub root: NodeId,
    pub tour: TourKind,
    pub election_threshold: usize,
    pub pruning_threshold: u64,
}

/// What a handler produces: messages to send and schedule events.
pub(crate) struct Outbox {
    pub me: NodeId,
    sends: Vec<(NodeId, MessageKind, Item)>,
    events: Vec<Event>,
}

impl Outbox {
    fn new(me: NodeId) -> Self {
        Outbox { me, sends: Vec::new(), events: Vec::new() }
    }

    pub fn send(&mut self, dst: NodeId, kind: MessageKind, item: Item) {
        self.sends.push((dst, kind, item));
    }

    pub fn emit(&mut self, e: Event) {
        self.events.push(e);
    }
}

fn event_key(e: &Event) -> Entity {
    match *e {
        Event::MoveObject { obj, .. } => Entity::Object(obj),
        Event::MoveTransaction { txn, .. } | Event::Execute { txn, .. } => Entity::Transaction(txn),
    }
}

pub(crate) struct Engine<'a, P> {
    pub ctx: Ctx<'a>,
    pub procs: Vec<P>,
    pub round: u64,
    pub phase: Phase,
    pub control_weight: u64,
    in_flight: Vec<Message>,
    pending: Vec<(NodeId, NodeId, MessageKind, Item)>,
    pub log: MessageLog,
    pub events: Vec<Event>,
}

pub(crate) trait Process {
    fn on_message(&mut self, ctx: &Ctx, src: NodeId, kind: MessageKind, item: &Item, out: &mut Outbox);
    fn on_round_end(&mut self, ctx: &Ctx, out: &mut Outbox);
}

impl<'a, P: Process> Engine<'a, P> {
    pub fn new(ctx: Ctx<'a>, procs: Vec<P>, control_weight: u64) -> Self {
        Engine {
            ctx,
            procs,
            round: 0,
            phase: Phase::One,
            control_weight,
            in_flight: Vec::new(),
            pending: Vec::new(),
            log: MessageLog::default(),
            events: Vec::new(),
        }
    }

    fn absorb(&mut self, out: Outbox) {
        let me = out.me;
        self.pending.extend(out.sends.into_iter().map(|(dst, kind, item)| (me, dst, kind, item)));
        self.events.extend(out.events);
    }

    fn weight(&self, class: CostClass) -> u64 {
        match class {
            CostClass::Control => self.control_weight,
            CostClass::Txn => self.ctx.cost.beta,
            CostClass::Object => self.ctx.cost.alpha,
        }
    }

    /// Turns this round's sends into messages and logs them.
    fn flush(&mut self) {
        let mut control: BTreeMap<(NodeId, NodeId, MessageKind), Vec<Item>> = BTreeMap::new();
        let mut single = Vec::new();
        for (src, dst, kind, item) in self.pending.drain(..) {
            if kind.class() == CostClass::Control {
                control.entry((src, dst, kind)).or_default().push(item);
            } else {
                single.push((src, dst, kind, vec![item]));
            }
        }
        let batches = control.into_iter().map(|((s, d, k), items)| (s, d, k, items)).chain(single);
        let batches: Vec<_> = batches.collect();
        for (src, dst, kind, items) in batches {
            let cost = self.weight(kind.class()) * self.ctx.metric.dist(src, dst);
            let m = Message { round: self.round, phase: self.phase, src, dst, kind, items, cost };
            self.log.messages.push(m.clone());
            self.in_flight.push(m);
        }
    }

    /// Runs `f` on every node in id order, then sends what it produced.
    pub fn step(&mut self, mut f: impl FnMut(&mut P, &Ctx, &mut Outbox)) {
        for i in 0..self.procs.len() {
            let mut out = Outbox::new(NodeId(i));
            f(&mut self.procs[i], &self.ctx, &mut out);
            self.absorb(out);
        }
        self.flush();
    }

    /// Delivers rounds until nothing is in flight.
    pub fn run_until_quiet(&mut self) {
        while !self.in_flight.is_empty() {
            self.round += 1;
            let mut batch = std::mem::take(&mut self.in_flight);
            // stable: equal keys keep send order
            batch.sort_by_key(|m| (m.dst, m.src, m.kind));
            let mut receivers = BTreeSet::new();
            let mut delivered_events = Vec::new();
            for m in &batch {
                receivers.insert(m.dst);
                let mut out = Outbox::new(m.dst);
                for item in &m.items {
                    self.procs[m.dst.index()].on_message(&self.ctx, m.src, m.kind, item, &mut out);
                }
                delivered_events.append(&mut out.events);
                let me = out.me;
                self.pending.extend(out.sends.into_iter().map(|(dst, kind, item)| (me, dst, kind, item)));
            }
            // deliveries in one round are concurrent; list them by entity
            delivered_events.sort_by_key(event_key);
            self.events.extend(delivered_events);
            for v in receivers {
                let mut out = Outbox::new(v);
                self.procs[v.index()].on_round_end(&self.ctx, &mut out);
                self.absorb(out);
            }
            self.flush();
        }
    }
}

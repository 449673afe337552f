//! Runs schedulers over scenarios and tabulates one record per
//! (scenario, algorithm, tour).

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use super::{direct_bound, single_bound, multi_bound, tour_ratio};
use crate::distsim::{run_distributed_multi, run_distributed_single, DistConfig, DistOutcome, Phase};
use crate::hierarchy::{build_hierarchy, PartitionHierarchy};
use crate::metric::Length;
use crate::multi::{per_object_single_costs, schedule_multi};
use crate::oracle::{
    optimal_cost_multi, optimal_cost_single, MULTI_ORACLE_MAX_NODES, MULTI_ORACLE_MAX_TXNS, SINGLE_ORACLE_MAX_NODES,
};
use crate::schedule::{direct_schedule, schedule_cost, validate_schedule, Scenario, ScenarioError, Schedule};
use crate::single::{schedule_single, SchedulerError};
use crate::tours::TourKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algorithm {
    SingleGlobal,
    MultiGlobal,
    SingleDist,
    MultiDist,
    Direct,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::SingleGlobal,
        Algorithm::MultiGlobal,
        Algorithm::SingleDist,
        Algorithm::MultiDist,
        Algorithm::Direct,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::SingleGlobal => "single-global",
            Algorithm::MultiGlobal => "multi-global",
            Algorithm::SingleDist => "single-dist",
            Algorithm::MultiDist => "multi-dist",
            Algorithm::Direct => "direct",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm `{s}` (expected one of single-global, multi-global, single-dist, multi-dist, direct)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExperimentOptions {
    /// Compute the optimal cost when the instance is small enough.
    pub oracle: bool,
    pub dist: DistConfig,
    /// Fill the runtime column (makes the CSV non-reproducible).
    pub timing: bool,
}

impl Default for ExperimentOptions {
    fn default() -> Self {
        ExperimentOptions { oracle: true, dist: DistConfig::default(), timing: false }
    }
}

/// One row of the results table. Empty cells are `None`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunRecord {
    pub scenario: String,
    pub algorithm: String,
    pub tour: String,
    pub n: usize,
    pub diameter: Length,
    pub txns: usize,
    pub objects: usize,
    pub k: usize,
    pub alpha: u64,
    pub beta: u64,
    pub h: u32,
    pub measured_i: usize,
    pub delta: u32,
    pub zeta: f64,
    pub c: Option<u64>,
    pub c_star: Option<u64>,
    pub ratio: Option<f64>,
    pub tour_len: Option<Length>,
    pub tour_star: Option<Length>,
    pub c_prime: Option<u64>,
    pub c_prime_p1: Option<u64>,
    pub c_prime_p2: Option<u64>,
    pub c_prime_p3: Option<u64>,
    pub rhs: Option<f64>,
    /// Names of failed checks, `;`-separated.
    pub failed: Vec<&'static str>,
    pub note: String,
    pub runtime_ms: Option<f64>,
}

impl RunRecord {
    pub fn ok(&self) -> bool {
        self.failed.is_empty()
    }

    pub fn skipped(&self) -> bool {
        self.note.starts_with("skipped")
    }
}

pub const CSV_COLUMNS: [&str; 28] = [
    "scenario",
    "algorithm",
    "tour",
    "n",
    "diameter",
    "txns",
    "objects",
    "k",
    "alpha",
    "beta",
    "h",
    "measured_i",
    "delta",
    "zeta",
    "c",
    "c_star",
    "ratio",
    "tour_len",
    "tour_star",
    "c_prime",
    "c_prime_p1",
    "c_prime_p2",
    "c_prime_p3",
    "rhs",
    "ok",
    "failed_checks",
    "note",
    "runtime_ms",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

fn fixed(v: Option<f64>, digits: usize) -> String {
    v.map_or_else(String::new, |x| format!("{x:.digits$}"))
}

impl RunRecord {
    pub fn csv_row(&self) -> Vec<String> {
        vec![
            self.scenario.clone(),
            self.algorithm.clone(),
            self.tour.clone(),
            self.n.to_string(),
            self.diameter.to_string(),
            self.txns.to_string(),
            self.objects.to_string(),
            self.k.to_string(),
            self.alpha.to_string(),
            self.beta.to_string(),
            self.h.to_string(),
            self.measured_i.to_string(),
            self.delta.to_string(),
            format!("{:.3}", self.zeta),
            opt(self.c),
            opt(self.c_star),
            fixed(self.ratio, 6),
            opt(self.tour_len),
            opt(self.tour_star),
            opt(self.c_prime),
            opt(self.c_prime_p1),
            opt(self.c_prime_p2),
            opt(self.c_prime_p3),
            fixed(self.rhs, 3),
            self.ok().to_string(),
            self.failed.join(";"),
            self.note.clone(),
            fixed(self.runtime_ms, 3),
        ]
    }
}

#[derive(Debug, Clone, Default)]
pub struct ExperimentReport {
    pub records: Vec<RunRecord>,
}

impl ExperimentReport {
    pub fn failures(&self) -> usize {
        self.records.iter().filter(|r| !r.ok()).count()
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), csv::Error> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(CSV_COLUMNS)?;
        for r in &self.records {
            out.write_record(r.csv_row())?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }
}

/// The optimal cost of a scenario, when the oracle can handle it.
pub fn oracle_cost(sc: &Scenario) -> Option<u64> {
    let n = sc.graph.n();
    if sc.objects.len() == 1 && n <= SINGLE_ORACLE_MAX_NODES {
        return optimal_cost_single(sc).ok().map(|r| r.c_star);
    }
    if n <= MULTI_ORACLE_MAX_NODES && sc.transactions.len() <= MULTI_ORACLE_MAX_TXNS {
        return optimal_cost_multi(sc).ok().map(|r| r.c_star);
    }
    None
}

/// Scenarios an algorithm does not apply to are skipped; anything else is
/// recorded as an error.
fn failure_note(failed: &mut Vec<&'static str>, e: &SchedulerError) -> String {
    match e {
        SchedulerError::Scenario(ScenarioError::NotSingleObject(_)) => format!("skipped: {e}"),
        _ => {
            failed.push("error");
            format!("error: {e}")
        }
    }
}

struct Context<'a> {
    sc: &'a Scenario,
    h: &'a PartitionHierarchy,
    c_star: Option<u64>,
}

impl Context<'_> {
    fn base(&self, algorithm: Algorithm, tour: TourKind) -> RunRecord {
        let p = &self.h.params;
        RunRecord {
            scenario: self.sc.name.clone(),
            algorithm: algorithm.to_string(),
            tour: tour.to_string(),
            n: self.sc.graph.n(),
            diameter: self.sc.metric.diameter(),
            txns: self.sc.transactions.len(),
            objects: self.sc.objects.len(),
            k: self.sc.k(),
            alpha: self.sc.cost.alpha,
            beta: self.sc.cost.beta,
            h: p.h,
            measured_i: p.intersection,
            delta: p.delta,
            zeta: p.zeta,
            c_star: self.c_star,
            ..Default::default()
        }
    }

    /// Shared checks once `c` is known.
    fn finish(&self, r: &mut RunRecord, schedule: &Schedule, c: u64) {
        if validate_schedule(self.sc, schedule).is_err() {
            r.failed.push("valid_schedule");
        }
        r.c = Some(c);
        if let Some(star) = self.c_star {
            r.ratio = Some(if star == 0 {
                if c == 0 {
                    1.0
                } else {
                    f64::INFINITY
                }
            } else {
                c as f64 / star as f64
            });
            if c < star {
                r.failed.push("lower_bound");
            }
        }
        if let Some(rhs) = r.rhs {
            if c as f64 > rhs {
                r.failed.push("upper_bound");
            }
        }
    }

    fn bound(&self, tour_len: Length, tour_star: Option<Length>, multi: bool) -> Option<f64> {
        let star = self.c_star?;
        let a = tour_ratio(tour_len, tour_star?);
        let d = self.sc.metric.diameter();
        Some(if multi {
            multi_bound(self.sc.k(), star, a, &self.h.params, d)
        } else {
            single_bound(star, a, &self.h.params, d)
        })
    }

    /// Records the message costs; the cost bounds are only checked for the
    /// single-object protocol.
    fn dist_checks(&self, r: &mut RunRecord, d: &DistOutcome, global_c: u64, bounded: bool) {
        let p1 = d.phase_cost(Phase::One);
        r.c_prime = Some(d.c_prime());
        r.c_prime_p1 = Some(p1);
        r.c_prime_p2 = Some(d.phase_cost(Phase::Two));
        r.c_prime_p3 = Some(d.phase_cost(Phase::Three));
        if d.log.movement_cost() != global_c {
            r.failed.push("movement_equals_c");
        }
        if bounded {
            if d.c_prime() >= 3 * global_c {
                r.failed.push("c_prime_lt_3c");
            }
            if p1 >= 2 * global_c {
                r.failed.push("p1_lt_2c");
            }
        }
    }

    fn run(&self, algorithm: Algorithm, tour: TourKind, opts: &ExperimentOptions) -> RunRecord {
        let mut r = self.base(algorithm, tour);
        let started = Instant::now();
        match algorithm {
            Algorithm::Direct => match direct_schedule(self.sc) {
                Ok(s) => {
                    let c = match schedule_cost(self.sc, &s) {
                        Ok(c) => c.total,
                        Err(e) => {
                            r.note = failure_note(&mut r.failed, &e.into());
                            return r;
                        }
                    };
                    r.rhs = self.c_star.map(|star| {
                        direct_bound(self.sc.transactions.len(), self.sc.cost.alpha, self.sc.metric.diameter(), star)
                    });
                    self.finish(&mut r, &s, c);
                }
                Err(e) => r.note = failure_note(&mut r.failed, &e.into()),
            },
            Algorithm::SingleGlobal => match schedule_single(self.sc, self.h, tour) {
                Ok(out) => {
                    r.tour_len = Some(out.tour_len);
                    r.tour_star = out.tour_star;
                    r.rhs = self.bound(out.tour_len, out.tour_star, false);
                    self.finish(&mut r, &out.schedule, out.cost.total);
                }
                Err(e) => r.note = failure_note(&mut r.failed, &e),
            },
            Algorithm::MultiGlobal => match schedule_multi(self.sc, self.h, tour) {
                Ok(out) => {
                    r.tour_len = Some(out.tour_len);
                    r.tour_star = out.tour_star;
                    r.rhs = self.bound(out.tour_len, out.tour_star, true);
                    self.finish(&mut r, &out.schedule, out.cost.total);
                    match per_object_single_costs(self.sc, self.h, tour) {
                        Ok(costs) => {
                            let sum: u64 = costs.values().sum();
                            if out.cost.total > self.sc.k() as u64 * sum {
                                r.failed.push("k_factor");
                            }
                        }
                        Err(e) => r.note = format!("per-object costs unavailable: {e}"),
                    }
                }
                Err(e) => r.note = failure_note(&mut r.failed, &e),
            },
            Algorithm::SingleDist => {
                let global = schedule_single(self.sc, self.h, tour);
                let dist = run_distributed_single(self.sc, self.h, tour, opts.dist);
                match (global, dist) {
                    (Ok(g), Ok(d)) => {
                        r.tour_len = Some(g.tour_len);
                        r.tour_star = g.tour_star;
                        r.rhs = self.bound(g.tour_len, g.tour_star, false);
                        self.finish(&mut r, d.schedule(), d.cost.total);
                        let obj = self.sc.objects[0].id;
                        let same = d.schedule() == &g.schedule
                            && d.phase2.survivors[&obj] == g.prune.survivors
                            && d.phase2.dispositions[&obj] == g.prune.dispositions;
                        if !same {
                            r.failed.push("matches_global");
                        }
                        self.dist_checks(&mut r, &d, g.cost.total, true);
                    }
                    (Err(e), _) | (_, Err(e)) => r.note = failure_note(&mut r.failed, &e),
                }
            }
            Algorithm::MultiDist => {
                let global = schedule_multi(self.sc, self.h, tour);
                let dist = run_distributed_multi(self.sc, self.h, tour, opts.dist);
                match (global, dist) {
                    (Ok(g), Ok(d)) => {
                        r.tour_len = Some(g.tour_len);
                        r.tour_star = g.tour_star;
                        r.rhs = self.bound(g.tour_len, g.tour_star, true);
                        self.finish(&mut r, d.schedule(), d.cost.total);
                        let same = d.schedule().structure(self.sc) == g.schedule.structure(self.sc)
                            && d.phase3.choices == g.assignment.per_txn;
                        if !same {
                            r.failed.push("matches_global");
                        }
                        self.dist_checks(&mut r, &d, g.cost.total, false);
                    }
                    (Err(e), _) | (_, Err(e)) => r.note = failure_note(&mut r.failed, &e),
                }
            }
        }
        if opts.timing {
            r.runtime_ms = Some(started.elapsed().as_secs_f64() * 1e3);
        }
        r
    }
}

fn run_scenario(
    sc: &Scenario,
    algorithms: &[Algorithm],
    tours: &[TourKind],
    opts: &ExperimentOptions,
) -> Vec<RunRecord> {
    let h = match build_hierarchy(&sc.metric, sc.config.sigma) {
        Ok(h) => h,
        Err(e) => {
            let mut r = RunRecord { scenario: sc.name.clone(), note: format!("hierarchy: {e}"), ..Default::default() };
            r.failed.push("hierarchy");
            return vec![r];
        }
    };
    let c_star = if opts.oracle { oracle_cost(sc) } else { None };
    let ctx = Context { sc, h: &h, c_star };
    let mut out = Vec::new();
    for &a in algorithms {
        for &t in tours {
            out.push(ctx.run(a, t, opts));
        }
    }
    out
}

/// One record per (scenario, algorithm, tour), in input order whatever
/// the worker scheduling.
pub fn run_experiment(
    scenarios: &[Scenario],
    algorithms: &[Algorithm],
    tours: &[TourKind],
    opts: &ExperimentOptions,
) -> ExperimentReport {
    let records = scenarios.par_iter().map(|sc| run_scenario(sc, algorithms, tours, opts)).collect::<Vec<_>>();
    ExperimentReport { records: records.into_iter().flatten().collect() }
}

//! The command-line operations, independent of argument parsing.
//!
//! Each command returns the text it would print and a process exit code:
//! 0 on success, 1 when an invariant fails, 2 on a usage or input error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::corpus::{corpus, CorpusBounds};
use super::experiment::{run_experiment, Algorithm, ExperimentOptions, ExperimentReport};
use super::scenario_file::{parse_scenario, write_scenario};
use crate::distsim::{run_distributed_multi, run_distributed_single};
use crate::hierarchy::{build_hierarchy, verify_partition};
use crate::oracle::{optimal_cost_multi, optimal_cost_single, replay_witness};
use crate::schedule::Scenario;
use crate::tours::TourKind;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVARIANT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutput {
    pub stdout: String,
    pub code: i32,
}

impl CommandOutput {
    fn ok(stdout: String) -> Self {
        CommandOutput { stdout, code: EXIT_OK }
    }

    fn usage(msg: impl Into<String>) -> Self {
        CommandOutput { stdout: msg.into(), code: EXIT_USAGE }
    }
}

/// Where scenarios come from: files (a directory means every `*.toml`
/// inside it, by name) or a generated corpus.
#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioInput {
    Paths(Vec<PathBuf>),
    Corpus { seed: u64, count: usize, bounds: CorpusBounds },
}

fn expand(path: &Path) -> std::io::Result<Vec<PathBuf>> {
    if !path.is_dir() {
        return Ok(vec![path.to_path_buf()]);
    }
    let mut files: Vec<PathBuf> = fs::read_dir(path)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    files.sort();
    Ok(files)
}

pub fn load_scenarios(input: &ScenarioInput) -> Result<Vec<Scenario>, String> {
    match input {
        ScenarioInput::Corpus { seed, count, bounds } => Ok(corpus(*seed, *count, bounds)),
        ScenarioInput::Paths(paths) => {
            let mut out = Vec::new();
            for p in paths {
                for file in expand(p).map_err(|e| format!("{}: {e}", p.display()))? {
                    let mut sc = parse_scenario(&file).map_err(|e| format!("{}: {e}", file.display()))?;
                    if sc.name.is_empty() {
                        sc.name = file.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                    }
                    out.push(sc);
                }
            }
            if out.is_empty() {
                return Err("no scenarios found".to_string());
            }
            Ok(out)
        }
    }
}

/// Writes `count` corpus scenarios into `dir` as `<name>.toml`.
pub fn gen(seed: u64, count: usize, bounds: &CorpusBounds, dir: &Path) -> CommandOutput {
    if let Err(e) = fs::create_dir_all(dir) {
        return CommandOutput::usage(format!("{}: {e}", dir.display()));
    }
    let mut out = String::new();
    for sc in corpus(seed, count, bounds) {
        let path = dir.join(format!("{}.toml", sc.name));
        if let Err(e) = write_scenario(&sc, &path) {
            return CommandOutput::usage(e.to_string());
        }
        let _ = writeln!(out, "{}", path.display());
    }
    CommandOutput::ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunArgs {
    pub input: ScenarioInput,
    pub algorithms: Vec<Algorithm>,
    pub tours: Vec<TourKind>,
    pub options: ExperimentOptions,
    /// Abort on the first scheduler error instead of recording it.
    pub strict: bool,
    /// Per-message trace of the distributed runs.
    pub trace: Option<PathBuf>,
    /// CSV destination; stdout when absent.
    pub out: Option<PathBuf>,
}

fn exit_code(report: &ExperimentReport, strict: bool) -> i32 {
    let errored = report.records.iter().any(|r| r.failed.contains(&"error"));
    let violated = report.records.iter().any(|r| r.failed.iter().any(|f| *f != "error"));
    if violated || (strict && errored) {
        EXIT_INVARIANT
    } else {
        EXIT_OK
    }
}

fn message_trace(scenarios: &[Scenario], args: &RunArgs) -> String {
    let mut out = String::from("scenario,algorithm,tour,round,phase,src,dst,kind,items,cost\n");
    for sc in scenarios {
        let Ok(h) = build_hierarchy(&sc.metric, sc.config.sigma) else { continue };
        for &a in &args.algorithms {
            for &t in &args.tours {
                let run = match a {
                    Algorithm::SingleDist => run_distributed_single(sc, &h, t, args.options.dist),
                    Algorithm::MultiDist => run_distributed_multi(sc, &h, t, args.options.dist),
                    _ => continue,
                };
                let Ok(run) = run else { continue };
                for line in run.log.trace().lines().skip(1) {
                    let _ = writeln!(out, "{},{a},{t},{line}", sc.name);
                }
            }
        }
    }
    out
}

fn emit(report: &ExperimentReport, out: Option<&Path>) -> Result<String, String> {
    let csv = report.to_csv();
    match out {
        Some(path) => {
            fs::write(path, &csv).map_err(|e| format!("{}: {e}", path.display()))?;
            Ok(String::new())
        }
        None => Ok(csv),
    }
}

/// Runs the chosen algorithms and writes one CSV row per run.
pub fn run(args: &RunArgs) -> CommandOutput {
    let scenarios = match load_scenarios(&args.input) {
        Ok(s) => s,
        Err(e) => return CommandOutput::usage(e),
    };
    let report = run_experiment(&scenarios, &args.algorithms, &args.tours, &args.options);
    if args.strict {
        if let Some(r) = report.records.iter().find(|r| r.failed.contains(&"error")) {
            return CommandOutput { stdout: format!("{}: {}\n", r.scenario, r.note), code: EXIT_INVARIANT };
        }
    }
    if let Some(path) = &args.trace {
        if let Err(e) = fs::write(path, message_trace(&scenarios, args)) {
            return CommandOutput::usage(format!("{}: {e}", path.display()));
        }
    }
    match emit(&report, args.out.as_deref()) {
        Ok(stdout) => CommandOutput { stdout, code: exit_code(&report, args.strict) },
        Err(e) => CommandOutput::usage(e),
    }
}

/// Every algorithm on both tours against the oracle, followed by a
/// summary of the cost ratios.
pub fn compare(input: &ScenarioInput, out: Option<&Path>, strict: bool) -> CommandOutput {
    let scenarios = match load_scenarios(input) {
        Ok(s) => s,
        Err(e) => return CommandOutput::usage(e),
    };
    let opts = ExperimentOptions::default();
    let report = run_experiment(&scenarios, &Algorithm::ALL, &[TourKind::Mst, TourKind::Universal], &opts);
    let mut text = match emit(&report, out) {
        Ok(t) => t,
        Err(e) => return CommandOutput::usage(e),
    };
    for a in Algorithm::ALL {
        let mut ratios: Vec<f64> =
            report.records.iter().filter(|r| r.algorithm == a.name()).filter_map(|r| r.ratio).collect();
        if ratios.is_empty() {
            continue;
        }
        ratios.sort_by(f64::total_cmp);
        let median = ratios[ratios.len() / 2];
        let worst = ratios[ratios.len() - 1];
        let _ = writeln!(text, "# {a}: runs={} median_ratio={median:.3} max_ratio={worst:.3}", ratios.len());
    }
    let _ = writeln!(text, "# failed_runs={}", report.failures());
    CommandOutput { stdout: text, code: exit_code(&report, strict) }
}

/// Optimal cost of each scenario, with the witness walks and whether they
/// can be replayed as a schedule.
pub fn oracle(input: &ScenarioInput) -> CommandOutput {
    let scenarios = match load_scenarios(input) {
        Ok(s) => s,
        Err(e) => return CommandOutput::usage(e),
    };
    let mut out = String::from("scenario,c_star,meeting,replayed_cost\n");
    for sc in &scenarios {
        let res = if sc.objects.len() == 1 { optimal_cost_single(sc) } else { optimal_cost_multi(sc) };
        let res = match res {
            Ok(r) => r,
            Err(e) => return CommandOutput::usage(format!("{}: {e}", sc.name)),
        };
        let meeting: Vec<String> = res.witness.meeting.iter().map(|(t, v)| format!("{t}@{v}")).collect();
        let replayed = match replay_witness(sc, &res) {
            Ok(Some(c)) => c.to_string(),
            Ok(None) => "unrealizable".to_string(),
            Err(e) => return CommandOutput { stdout: format!("{}: {e}\n", sc.name), code: EXIT_INVARIANT },
        };
        let _ = writeln!(out, "{},{},{},{}", sc.name, res.c_star, meeting.join(" "), replayed);
    }
    CommandOutput::ok(out)
}

/// Per level: radius, cluster count, largest cluster diameter against
/// `sigma * r`, and the measured intersection count.
pub fn verify_partitions(input: &ScenarioInput) -> CommandOutput {
    let scenarios = match load_scenarios(input) {
        Ok(s) => s,
        Err(e) => return CommandOutput::usage(e),
    };
    let mut out = String::from("scenario,level,radius,clusters,max_diameter,bound,measured_i,covers,ok\n");
    let mut code = EXIT_OK;
    for sc in &scenarios {
        let h = match build_hierarchy(&sc.metric, sc.config.sigma) {
            Ok(h) => h,
            Err(e) => return CommandOutput::usage(format!("{}: {e}", sc.name)),
        };
        for lvl in h.levels() {
            let rep = verify_partition(&sc.metric, lvl);
            let bound = h.params.sigma * lvl.radius;
            let mut seen = vec![0usize; sc.graph.n()];
            for c in &lvl.clusters {
                for m in &c.members {
                    seen[m.index()] += 1;
                }
            }
            let covers = seen.iter().all(|&k| k == 1);
            let ok = covers && rep.max_diameter as f64 <= bound;
            if !ok {
                code = EXIT_INVARIANT;
            }
            let _ = writeln!(
                out,
                "{},{},{:.3},{},{},{:.3},{},{},{}",
                sc.name,
                lvl.level,
                lvl.radius,
                lvl.clusters.len(),
                rep.max_diameter,
                bound,
                rep.measured_i,
                covers,
                ok
            );
        }
    }
    CommandOutput { stdout: out, code }
}

pub fn dump_hierarchy(input: &ScenarioInput) -> CommandOutput {
    let scenarios = match load_scenarios(input) {
        Ok(s) => s,
        Err(e) => return CommandOutput::usage(e),
    };
    let mut out = String::new();
    for sc in &scenarios {
        match build_hierarchy(&sc.metric, sc.config.sigma) {
            Ok(h) => {
                let p = &h.params;
                let _ = writeln!(
                    out,
                    "# {} n={} D={} sigma={} rho={} h={} I={} delta={} zeta={:.3}",
                    sc.name,
                    sc.graph.n(),
                    h.diameter(),
                    p.sigma,
                    p.rho,
                    p.h,
                    p.intersection,
                    p.delta,
                    p.zeta
                );
                out.push_str(&h.dump());
            }
            Err(e) => return CommandOutput::usage(format!("{}: {e}", sc.name)),
        }
    }
    CommandOutput::ok(out)
}

//! Scenario files, generated corpora, experiment runs and the theoretical
//! bounds they are checked against.

pub mod commands;
pub mod corpus;
pub mod experiment;
pub mod scenario_file;

use crate::hierarchy::PartitionParams;
use crate::metric::Length;

pub use corpus::{corpus, CorpusBounds};
pub use experiment::{run_experiment, Algorithm, ExperimentOptions, ExperimentReport, RunRecord, CSV_COLUMNS};
pub use scenario_file::{parse_scenario, parse_scenario_str, serialize_scenario, write_scenario, ScenarioFileError};

/// Upper bound on the single-object cost:
/// `74 A (h+1) zeta I sigma rho C* + 36 (h+2) I C* + 4 C* log2 D`.
/// `a` is the tour ratio `Tour / Tour*`.
pub fn single_bound(c_star: u64, a: f64, p: &PartitionParams, diameter: Length) -> f64 {
    if c_star == 0 {
        return 0.0;
    }
    let c = c_star as f64;
    let h = p.h as f64;
    let i = p.intersection as f64;
    let log_d = (diameter as f64).log2();
    74.0 * a * (h + 1.0) * p.zeta * i * p.sigma * p.rho * c + 36.0 * (h + 2.0) * i * c + 4.0 * c * log_d
}

/// Multi-object bound: `k` times the single-object bound.
pub fn multi_bound(k: usize, c_star: u64, a: f64, p: &PartitionParams, diameter: Length) -> f64 {
    k as f64 * single_bound(c_star, a, p, diameter)
}

/// Bound on sending every transaction home: `4 (|Z| / alpha + log2 D) C*`.
pub fn direct_bound(txns: usize, alpha: u64, diameter: Length, c_star: u64) -> f64 {
    if c_star == 0 {
        return 0.0;
    }
    4.0 * (txns as f64 / alpha as f64 + (diameter as f64).log2()) * c_star as f64
}

/// `Tour / Tour*`, 1 when the optimal tour is empty.
pub fn tour_ratio(tour: Length, star: Length) -> f64 {
    if star == 0 {
        1.0
    } else {
        tour as f64 / star as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> PartitionParams {
        PartitionParams { sigma: 2.0, rho: 8.0, h: 1, intersection: 3, delta: 2, zeta: 256.0 }
    }

    #[test]
    fn single_bound_arithmetic() {
        let rhs = single_bound(10, 1.5, &params(), 4);
        let expected = 74.0 * 1.5 * 2.0 * 256.0 * 3.0 * 2.0 * 8.0 * 10.0 + 36.0 * 3.0 * 3.0 * 10.0 + 4.0 * 10.0 * 2.0;
        assert!((rhs - expected).abs() < 1e-6);
        assert_eq!(single_bound(0, 2.0, &params(), 4), 0.0);
        assert!((multi_bound(2, 10, 1.5, &params(), 4) - 2.0 * expected).abs() < 1e-6);
    }

    #[test]
    fn direct_bound_arithmetic() {
        assert!((direct_bound(6, 4, 8, 5) - 4.0 * (1.5 + 3.0) * 5.0).abs() < 1e-9);
        assert_eq!(direct_bound(6, 4, 8, 0), 0.0);
    }
}

//! Experiment harness: runs the three schedulers over a seeded grid of
//! (overhead, case) cells and aggregates approximation ratios against the
//! W + d·Δ lower bound.
//!
//! Every cell's instance derives from `derive_case_seed(base, d, case)`, so
//! all algorithms see the same instance, results are independent of worker
//! scheduling, and a rerun with the same configuration reproduces the same
//! rows byte for byte (solve_ms excepted; that column is wall clock).
//!
//! The ratio denominator is the lower bound, not the (intractable) true
//! optimum, so reported ratios upper-bound the true approximation ratios;
//! the same denominator is used for every algorithm, which keeps the
//! comparison fair.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::baselines::{run_a1, run_apbs};
use crate::gen::{derive_case_seed, generate_instance, GenError, GenSpec};
use crate::model::{lower_bound, makespan, validate_schedule, Instance, Schedule};
use crate::sga::run_sga;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Sga,
    A1,
    Apbs,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Sga, Algorithm::A1, Algorithm::Apbs];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Sga => "sga",
            Algorithm::A1 => "a1",
            Algorithm::Apbs => "apbs",
        }
    }

    pub fn solve(self, instance: &Instance) -> Schedule {
        match self {
            Algorithm::Sga => run_sga(instance),
            Algorithm::A1 => run_a1(instance),
            Algorithm::Apbs => run_apbs(instance),
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
        match s {
            "sga" => Ok(Algorithm::Sga),
            "a1" => Ok(Algorithm::A1),
            "apbs" => Ok(Algorithm::Apbs),
            other => Err(format!(
                "unknown algorithm '{other}' (expected sga, a1 or apbs)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub algorithms: Vec<Algorithm>,
    pub d_list: Vec<u64>,
    pub cases_per_d: usize,
    pub n_tx: usize,
    pub n_rx: usize,
    pub w_max: u64,
    pub density: f64,
    pub base_seed: u64,
}

impl ExperimentConfig {
    /// The published experiment shape: 15×15 stations, weights 1..=50,
    /// complete demand matrix, overheads from 1 to 200, 1000 cases per
    /// overhead.
    pub fn paper(base_seed: u64) -> Self {
        ExperimentConfig {
            cases_per_d: 1000,
            ..Self::quick(base_seed)
        }
    }

    /// Same grid as `paper` with 100 cases per overhead; sized for CI.
    pub fn quick(base_seed: u64) -> Self {
        ExperimentConfig {
            algorithms: Algorithm::ALL.to_vec(),
            d_list: vec![1, 2, 5, 10, 20, 50, 100, 150, 200],
            cases_per_d: 100,
            n_tx: 15,
            n_rx: 15,
            w_max: 50,
            density: 1.0,
            base_seed,
        }
    }
}

/// Aggregate over one (overhead, algorithm) stripe of the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub d: u64,
    pub algorithm: Algorithm,
    pub cases: usize,
    pub mean_ratio: f64,
    pub worst_ratio: f64,
    pub mean_makespan: f64,
    pub mean_lower_bound: f64,
    /// Summed wall-clock solve time, milliseconds. The one nondeterministic
    /// column.
    pub solve_ms: u128,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BenchError {
    NoAlgorithms,
    NoCases,
    BadGenSpec(GenError),
    /// A solver produced an invalid schedule; this is a solver bug, and the
    /// cell coordinates identify the reproducer.
    SolverViolation {
        algorithm: Algorithm,
        d: u64,
        case: usize,
        seed: u64,
        detail: String,
    },
}

impl fmt::Display for BenchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BenchError::NoAlgorithms => write!(f, "at least one algorithm is required"),
            BenchError::NoCases => write!(f, "cases per overhead must be ≥ 1"),
            BenchError::BadGenSpec(e) => write!(f, "bad generator parameters: {e}"),
            BenchError::SolverViolation {
                algorithm,
                d,
                case,
                seed,
                detail,
            } => write!(
                f,
                "{algorithm} produced an invalid schedule at d={d} case={case} seed={seed}: {detail}"
            ),
        }
    }
}

impl std::error::Error for BenchError {}

struct CellOutcome {
    /// Per algorithm, in config order: (makespan, lower bound, ratio, nanos).
    per_algorithm: Vec<(u64, u64, f64, u128)>,
}

fn run_cell(cfg: &ExperimentConfig, d: u64, case: usize) -> Result<CellOutcome, BenchError> {
    let seed = derive_case_seed(cfg.base_seed, d, case as u64);
    let spec = GenSpec {
        n_tx: cfg.n_tx,
        n_rx: cfg.n_rx,
        w_max: cfg.w_max,
        density: cfg.density,
        d,
        seed,
    };
    let instance = generate_instance(&spec).map_err(BenchError::BadGenSpec)?;
    let lb = lower_bound(&instance);

    let mut per_algorithm = Vec::with_capacity(cfg.algorithms.len());
    for &alg in &cfg.algorithms {
        let start = Instant::now();
        let schedule = alg.solve(&instance);
        let nanos = start.elapsed().as_nanos();
        if let Err(report) = validate_schedule(&instance, &schedule) {
            return Err(BenchError::SolverViolation {
                algorithm: alg,
                d,
                case,
                seed,
                detail: report.to_string(),
            });
        }
        let ms = makespan(&schedule, d);
        let ratio = if lb == 0 { 1.0 } else { ms as f64 / lb as f64 };
        per_algorithm.push((ms, lb, ratio, nanos));
    }
    Ok(CellOutcome { per_algorithm })
}

/// Runs the full grid. Cells are solved in parallel; aggregation happens in
/// (d, algorithm, case) order so the output is deterministic.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<BenchRow>, BenchError> {
    if cfg.algorithms.is_empty() {
        return Err(BenchError::NoAlgorithms);
    }
    if cfg.cases_per_d == 0 {
        return Err(BenchError::NoCases);
    }

    let mut rows = Vec::with_capacity(cfg.d_list.len() * cfg.algorithms.len());
    for &d in &cfg.d_list {
        // Indexed parallel collect keeps case order, so the f64 sums below
        // accumulate in the same order on every run.
        let cell_results: Vec<Result<CellOutcome, BenchError>> = (0..cfg.cases_per_d)
            .into_par_iter()
            .map(|case| run_cell(cfg, d, case))
            .collect();
        let mut cells = Vec::with_capacity(cell_results.len());
        for cell in cell_results {
            cells.push(cell?);
        }

        for (ai, &alg) in cfg.algorithms.iter().enumerate() {
            let mut ratio_sum = 0.0;
            let mut worst: f64 = 0.0;
            let mut makespan_sum: u64 = 0;
            let mut lb_sum: u64 = 0;
            let mut nanos_sum: u128 = 0;
            for cell in &cells {
                let (ms, lb, ratio, nanos) = cell.per_algorithm[ai];
                ratio_sum += ratio;
                worst = worst.max(ratio);
                makespan_sum += ms;
                lb_sum += lb;
                nanos_sum += nanos;
            }
            let cases = cfg.cases_per_d;
            rows.push(BenchRow {
                d,
                algorithm: alg,
                cases,
                mean_ratio: ratio_sum / cases as f64,
                worst_ratio: worst,
                mean_makespan: makespan_sum as f64 / cases as f64,
                mean_lower_bound: lb_sum as f64 / cases as f64,
                solve_ms: nanos_sum / 1_000_000,
            });
        }
    }
    Ok(rows)
}

pub const CSV_HEADER: &str = "d,alg,cases,mean_ratio,worst_ratio,mean_makespan,mean_lb,solve_ms";

/// Serializes rows with ratios at 6 decimal places (Rust's formatter rounds
/// ties to even) and means at 3.
pub fn rows_to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{:.6},{:.6},{:.3},{:.3},{}\n",
            r.d,
            r.algorithm,
            r.cases,
            r.mean_ratio,
            r.worst_ratio,
            r.mean_makespan,
            r.mean_lower_bound,
            r.solve_ms
        ));
    }
    out
}

/// The CSV with the wall-clock column removed, for byte-identical
/// determinism comparisons.
pub fn csv_without_solve_ms(csv: &str) -> String {
    csv.lines()
        .map(|line| match line.rfind(',') {
            Some(idx) => &line[..idx],
            None => line,
        })
        .map(|l| format!("{l}\n"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_config() -> ExperimentConfig {
        ExperimentConfig {
            algorithms: Algorithm::ALL.to_vec(),
            d_list: vec![1, 3],
            cases_per_d: 4,
            n_tx: 4,
            n_rx: 4,
            w_max: 9,
            density: 1.0,
            base_seed: 11,
        }
    }

    #[test]
    fn ratios_at_least_one() {
        let rows = run_experiment(&tiny_config()).unwrap();
        assert_eq!(rows.len(), 6);
        for r in &rows {
            assert!(r.mean_ratio >= 1.0);
            assert!(r.worst_ratio >= r.mean_ratio);
        }
    }

    #[test]
    fn single_edge_template_is_exactly_optimal() {
        let cfg = ExperimentConfig {
            algorithms: Algorithm::ALL.to_vec(),
            d_list: vec![1],
            cases_per_d: 1,
            n_tx: 1,
            n_rx: 1,
            w_max: 20,
            density: 1.0,
            base_seed: 5,
        };
        let rows = run_experiment(&cfg).unwrap();
        for r in &rows {
            assert_eq!(r.mean_ratio, 1.0);
            assert_eq!(r.worst_ratio, 1.0);
        }
    }

    #[test]
    fn csv_shape_and_determinism() {
        let cfg = tiny_config();
        let a = rows_to_csv(&run_experiment(&cfg).unwrap());
        let b = rows_to_csv(&run_experiment(&cfg).unwrap());
        assert!(a.starts_with("d,alg,cases,"));
        assert_eq!(csv_without_solve_ms(&a), csv_without_solve_ms(&b));
        let first_row = a.lines().nth(1).unwrap();
        assert!(first_row.starts_with("1,sga,4,"));
        // 6-decimal ratios, 3-decimal means.
        let cols: Vec<&str> = first_row.split(',').collect();
        assert_eq!(cols.len(), 8);
        assert_eq!(cols[3].split('.').nth(1).unwrap().len(), 6);
        assert_eq!(cols[5].split('.').nth(1).unwrap().len(), 3);
    }

    #[test]
    fn all_algorithms_see_identical_instances() {
        // The per-cell lower bound depends only on the instance, so equal
        // mean_lb across single-algorithm runs proves every algorithm was
        // handed the same instances.
        let mut solo = tiny_config();
        let lbs: Vec<Vec<f64>> = Algorithm::ALL
            .iter()
            .map(|&alg| {
                solo.algorithms = vec![alg];
                run_experiment(&solo)
                    .unwrap()
                    .iter()
                    .map(|r| r.mean_lower_bound)
                    .collect()
            })
            .collect();
        assert_eq!(lbs[0], lbs[1]);
        assert_eq!(lbs[0], lbs[2]);
    }

    #[test]
    fn empty_config_rejected() {
        let mut cfg = tiny_config();
        cfg.algorithms.clear();
        assert_eq!(run_experiment(&cfg), Err(BenchError::NoAlgorithms));
        let mut cfg = tiny_config();
        cfg.cases_per_d = 0;
        assert_eq!(run_experiment(&cfg), Err(BenchError::NoCases));
    }
}

//! `pbs`: generate, solve, verify and benchmark preemptive bipartite
//! scheduling instances.
//!
//! Exit codes: 0 success, 1 schedule validation failure, 2 usage or file
//! parse error, 3 exact-solver limit exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pbs_core::bench::{rows_to_csv, run_experiment, Algorithm, ExperimentConfig};
use pbs_core::exact::{optimal_makespan, SearchLimits};
use pbs_core::gen::{generate_instance, GenSpec};
use pbs_core::model::{lower_bound, makespan, validate_schedule, Instance, Schedule};
use pbs_core::textio::{emit_instance, emit_schedule, parse_instance, parse_schedule};

const EXIT_INVALID: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_ORACLE_LIMIT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "pbs",
    version,
    about = "Preemptive bipartite scheduling with reconfiguration overhead"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded random instance file.
    Gen(GenArgs),
    /// Solve an instance with one scheduler and report makespan and bound.
    Solve(SolveArgs),
    /// Exact optimal makespan of a tiny instance (branch and bound).
    Exact(ExactArgs),
    /// Check a schedule file against an instance file.
    Validate(ValidateArgs),
    /// Run the approximation-ratio experiment grid and write a CSV.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Transmitter count.
    #[arg(long)]
    n: usize,
    /// Receiver count.
    #[arg(long)]
    m: usize,
    /// Setup overhead d.
    #[arg(long)]
    d: u64,
    /// Largest message weight.
    #[arg(long)]
    wmax: u64,
    /// Probability that a pair carries a message, in (0, 1].
    #[arg(long, default_value_t = 1.0)]
    density: f64,
    #[arg(long)]
    seed: u64,
    /// Output instance file.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    /// Scheduler: sga, a1 or apbs.
    #[arg(long)]
    alg: Algorithm,
    /// Instance file.
    #[arg(long = "in")]
    input: PathBuf,
    /// Optional schedule output file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExactArgs {
    /// Instance file.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    max_edges: Option<usize>,
    #[arg(long)]
    node_budget: Option<usize>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Instance file.
    #[arg(long = "in")]
    input: PathBuf,
    /// Schedule file.
    #[arg(long)]
    sched: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Published shape: 15×15, weights 1..=50, 1000 cases per overhead.
    #[arg(long, conflicts_with = "quick")]
    paper: bool,
    /// Same grid with 100 cases per overhead.
    #[arg(long)]
    quick: bool,
    /// Overheads to sweep, comma separated.
    #[arg(long = "d-list", value_delimiter = ',')]
    d_list: Option<Vec<u64>>,
    #[arg(long)]
    cases: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    wmax: Option<u64>,
    #[arg(long)]
    density: Option<f64>,
    #[arg(long)]
    seed: u64,
    /// Output CSV file.
    #[arg(long)]
    csv: PathBuf,
}

fn read_to_string(path: &Path) -> Result<String, ExitCode> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        ExitCode::from(EXIT_USAGE)
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), ExitCode> {
    std::fs::write(path, contents).map_err(|e| {
        eprintln!("error: cannot write {}: {e}", path.display());
        ExitCode::from(EXIT_USAGE)
    })
}

fn load_instance(path: &Path) -> Result<Instance, ExitCode> {
    let text = read_to_string(path)?;
    parse_instance(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        ExitCode::from(EXIT_USAGE)
    })
}

fn load_schedule(path: &Path) -> Result<Schedule, ExitCode> {
    let text = read_to_string(path)?;
    parse_schedule(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        ExitCode::from(EXIT_USAGE)
    })
}

fn cmd_gen(args: &GenArgs) -> Result<(), ExitCode> {
    let spec = GenSpec {
        n_tx: args.n,
        n_rx: args.m,
        w_max: args.wmax,
        density: args.density,
        d: args.d,
        seed: args.seed,
    };
    let instance = generate_instance(&spec).map_err(|e| {
        eprintln!("error: {e}");
        ExitCode::from(EXIT_USAGE)
    })?;
    write_file(&args.output, &emit_instance(&instance))?;
    println!(
        "wrote {} ({} edges, d={})",
        args.output.display(),
        instance.edges().len(),
        instance.overhead()
    );
    Ok(())
}

fn cmd_solve(args: &SolveArgs) -> Result<(), ExitCode> {
    let instance = load_instance(&args.input)?;
    let schedule = args.alg.solve(&instance);
    if let Err(report) = validate_schedule(&instance, &schedule) {
        eprintln!(
            "internal error: {} produced an invalid schedule\n{report}",
            args.alg
        );
        return Err(ExitCode::from(EXIT_INVALID));
    }
    println!("makespan: {}", makespan(&schedule, instance.overhead()));
    println!("lower_bound: {}", lower_bound(&instance));
    if let Some(out) = &args.out {
        write_file(out, &emit_schedule(&schedule))?;
    }
    Ok(())
}

fn cmd_exact(args: &ExactArgs) -> Result<(), ExitCode> {
    let instance = load_instance(&args.input)?;
    let mut limits = SearchLimits::default();
    if let Some(max_edges) = args.max_edges {
        limits.max_edges = max_edges;
    }
    if let Some(node_budget) = args.node_budget {
        limits.node_budget = node_budget;
    }
    match optimal_makespan(&instance, &limits) {
        Ok((best, _witness)) => {
            println!("optimal_makespan: {best}");
            println!("lower_bound: {}", lower_bound(&instance));
            Ok(())
        }
        Err(e) => {
            eprintln!("error: {e}");
            Err(ExitCode::from(EXIT_ORACLE_LIMIT))
        }
    }
}

fn cmd_validate(args: &ValidateArgs) -> Result<(), ExitCode> {
    let instance = load_instance(&args.input)?;
    let schedule = load_schedule(&args.sched)?;
    match validate_schedule(&instance, &schedule) {
        Ok(()) => {
            println!(
                "valid: {} packets, makespan {}",
                schedule.packets().len(),
                makespan(&schedule, instance.overhead())
            );
            Ok(())
        }
        Err(report) => {
            print!("invalid: {report}");
            Err(ExitCode::from(EXIT_INVALID))
        }
    }
}

fn cmd_bench(args: &BenchArgs) -> Result<(), ExitCode> {
    let mut cfg = if args.paper {
        ExperimentConfig::paper(args.seed)
    } else {
        ExperimentConfig::quick(args.seed)
    };
    if let Some(d_list) = &args.d_list {
        cfg.d_list = d_list.clone();
    }
    if let Some(cases) = args.cases {
        cfg.cases_per_d = cases;
    }
    if let Some(n) = args.n {
        cfg.n_tx = n;
    }
    if let Some(m) = args.m {
        cfg.n_rx = m;
    }
    if let Some(wmax) = args.wmax {
        cfg.w_max = wmax;
    }
    if let Some(density) = args.density {
        cfg.density = density;
    }

    let rows = run_experiment(&cfg).map_err(|e| {
        eprintln!("error: {e}");
        ExitCode::from(EXIT_USAGE)
    })?;
    let csv = rows_to_csv(&rows);
    write_file(&args.csv, &csv)?;

    for row in &rows {
        println!(
            "d={:<4} {:<5} mean_ratio={:.6} worst_ratio={:.6} ({} cases, {} ms)",
            row.d,
            row.algorithm.name(),
            row.mean_ratio,
            row.worst_ratio,
            row.cases,
            row.solve_ms
        );
    }
    println!("wrote {}", args.csv.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Exact(args) => cmd_exact(args),
        Command::Validate(args) => cmd_validate(args),
        Command::Bench(args) => cmd_bench(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => code,
    }
}

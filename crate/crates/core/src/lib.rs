//! Preemptive bipartite scheduling with reconfiguration overhead.
//!
//! A demand matrix between transmitters and receivers must be decomposed
//! into a sequence of matchings (packets), each transmitted for some
//! duration, with a constant setup cost `d` charged before every packet.
//! The goal is to minimize the makespan Σ(duration + d).
//!
//! This crate provides:
//!
//! - [`sga::run_sga`] — the split-graph heuristic: large edges are drained
//!   by load-greedy matchings with a W-preserving removal weight, small
//!   edges ride along or are decomposed into Δ rounds at the end;
//! - [`baselines::run_apbs`] and [`baselines::run_a1`] — the two published
//!   comparison schedulers;
//! - [`exact::optimal_makespan`] — a branch-and-bound ground truth for tiny
//!   instances, plus the polynomial zero-overhead decomposition;
//! - [`bench::run_experiment`] — the seeded benchmark grid with CSV output;
//! - [`textio`] — the plain-text instance and schedule formats.
//!
//! Everything on the schedule path is integer arithmetic; ratios appear
//! only in the benchmark aggregation.

pub mod baselines;
pub mod bench;
pub mod exact;
pub mod gen;
pub mod graph;
pub mod matching;
pub mod model;
pub mod sga;
pub mod textio;

pub use graph::BipGraph;
pub use model::{
    lower_bound, makespan, node_metrics, validate_schedule, Edge, Instance, ModelError,
    NodeMetrics, Packet, PacketItem, Schedule, ValidationReport, Violation,
};

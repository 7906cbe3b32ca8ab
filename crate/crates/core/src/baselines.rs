//! The two published comparison algorithms, reimplemented from their
//! one-line descriptions: a rounding scheduler that quantizes every message
//! to multiples of d+1 and decomposes the resulting unit multigraph, and a
//! max-cardinality scheduler that picks each round's preemption point by
//! minimizing a lower bound on the remaining cost.

use std::collections::BTreeMap;

use crate::graph::BipGraph;
use crate::matching::{max_cardinality_matching, regular_decomposition, regularize, Matching};
use crate::model::{Edge, Instance, Packet, PacketItem, Schedule};

/// An edge with its weight rounded up to a multiple of d+1 and the number of
/// (d+1)-slices that rounding implies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoundedEdge {
    pub edge: Edge,
    pub rounded: u64,
    pub units: u64,
}

/// The rounded view of an instance: slice size d+1 and one entry per edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundedInstance {
    pub slice: u64,
    pub edges: Vec<RoundedEdge>,
}

/// Rounds every weight up to the closest multiple of d+1.
pub fn round_up_weights(instance: &Instance) -> RoundedInstance {
    let slice = instance.overhead() + 1;
    let edges = instance
        .edges()
        .iter()
        .map(|&edge| {
            let units = edge.weight.div_ceil(slice);
            RoundedEdge {
                edge,
                rounded: units * slice,
                units,
            }
        })
        .collect();
    RoundedInstance { slice, edges }
}

/// Rounding scheduler: replicates each edge into its (d+1)-slices, pads the
/// resulting unit multigraph to regularity, and emits one packet per perfect
/// matching of the decomposition. Amounts are assigned slice by slice
/// against the original weight, so an edge's final slice may carry less than
/// d+1; every packet duration is therefore at most d+1.
pub fn run_apbs(instance: &Instance) -> Schedule {
    let rounded = round_up_weights(instance);
    let mut units: Vec<Edge> = Vec::new();
    for re in &rounded.edges {
        for _ in 0..re.units {
            units.push(Edge::new(re.edge.tx, re.edge.rx, rounded.slice));
        }
    }
    if units.is_empty() {
        return Schedule::default();
    }

    let rg = regularize(&units);
    let mut remaining: BTreeMap<(usize, usize), u64> = instance
        .edges()
        .iter()
        .map(|e| ((e.tx, e.rx), e.weight))
        .collect();

    let mut packets = Vec::new();
    for matching in regular_decomposition(&rg) {
        let mut items = Vec::new();
        for e in &matching {
            let Some((tx, rx)) = e.source else { continue };
            let rem = remaining.get_mut(&(tx, rx)).unwrap();
            let amount = (*rem).min(rounded.slice);
            debug_assert!(amount > 0, "every slice of a rounded edge carries work");
            *rem -= amount;
            items.push(PacketItem::new(tx, rx, amount));
        }
        if !items.is_empty() {
            packets.push(Packet::from_items(items));
        }
    }
    debug_assert!(remaining.values().all(|&r| r == 0));
    Schedule::new(packets)
}

/// Picks the duration of the next max-cardinality round: over the distinct
/// matched weights t, minimize (t + d) plus the W + d·Δ bound of the residual
/// left after cutting every matched edge by t. Ties prefer the larger t,
/// which removes more work.
pub fn a1_packet_choice(residual: &BipGraph, matching: &Matching, d: u64) -> u64 {
    assert!(!matching.is_empty(), "packet choice needs a matched round");
    let matched: Vec<((usize, usize), u64)> = matching
        .edges()
        .iter()
        .map(|&(tx, rx)| {
            let w = residual
                .weight(tx, rx)
                .expect("matching references a residual edge");
            ((tx, rx), w)
        })
        .collect();

    let (tx_loads, rx_loads) = residual.loads();
    let (tx_deg, rx_deg) = residual.degrees();

    let mut candidates: Vec<u64> = matched.iter().map(|&(_, w)| w).collect();
    candidates.sort_unstable();
    candidates.dedup();

    let mut best: Option<(u64, u64)> = None;
    for &t in &candidates {
        let mut tx_l = tx_loads.clone();
        let mut rx_l = rx_loads.clone();
        let mut tx_d = tx_deg.clone();
        let mut rx_d = rx_deg.clone();
        for &((tx, rx), w) in &matched {
            let cut = w.min(t);
            tx_l[tx] -= cut;
            rx_l[rx] -= cut;
            if w <= t {
                tx_d[tx] -= 1;
                rx_d[rx] -= 1;
            }
        }
        let w_after = tx_l.iter().chain(rx_l.iter()).copied().max().unwrap_or(0);
        let deg_after = tx_d.iter().chain(rx_d.iter()).copied().max().unwrap_or(0) as u64;
        let objective = (t + d) + w_after + d * deg_after;
        // Ascending candidates with non-strict improvement: ties keep the
        // larger t.
        if best.is_none_or(|(obj, _)| objective <= obj) {
            best = Some((objective, t));
        }
    }
    best.unwrap().1
}

/// Max-cardinality scheduler: each round transmits a maximum matching for
/// the duration `a1_packet_choice` picks, cutting matched edges by that
/// amount.
pub fn run_a1(instance: &Instance) -> Schedule {
    let d = instance.overhead();
    let mut residual = BipGraph::from_instance(instance);
    let mut packets = Vec::new();

    while !residual.is_empty() {
        let matching = max_cardinality_matching(&residual);
        let t = a1_packet_choice(&residual, &matching, d);

        let mut items = Vec::with_capacity(matching.len());
        for &(tx, rx) in matching.edges() {
            let c = residual.weight(tx, rx).unwrap();
            items.push(PacketItem::new(tx, rx, c.min(t)));
            if c <= t {
                residual.remove(tx, rx);
            } else {
                residual.set_weight(tx, rx, c - t);
            }
        }
        packets.push(Packet::from_items(items));
    }

    Schedule::new(packets)
}

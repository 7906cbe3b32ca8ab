//! The split-graph scheduling heuristic.
//!
//! The instance is split by the overhead threshold: edges of weight at least
//! `d` form the large graph, the rest the small graph. Long messages are
//! drained by repeated maximal matchings whose removal weight is the largest
//! reduction that provably lowers W by the same amount; short messages are
//! saved for the end and emitted with the minimum possible number of rounds
//! via regular decomposition. Matched rounds also opportunistically carry
//! whole small messages on stations the matching leaves idle.

use crate::graph::BipGraph;
use crate::matching::{
    augment_with_small_edges, load_greedy_maximal_matching, regular_decomposition, regularize,
    Matching,
};
use crate::model::{Instance, Packet, PacketItem, Schedule};

/// The pair of residual subgraphs the algorithm evolves: `large` holds edges
/// of weight ≥ d, `small` edges of weight in [1, d−1]. A pair appears in at
/// most one of the two.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitState {
    pub large: BipGraph,
    pub small: BipGraph,
    pub d: u64,
}

/// Partitions the instance's edges by the weight-d threshold. Weight exactly
/// d goes to the large graph.
pub fn split_graph(instance: &Instance) -> SplitState {
    let d = instance.overhead();
    let mut large = BipGraph::new(instance.n_transmitters(), instance.n_receivers());
    let mut small = BipGraph::new(instance.n_transmitters(), instance.n_receivers());
    for e in instance.edges() {
        if e.weight >= d {
            large.insert(e.tx, e.rx, e.weight);
        } else {
            small.insert(e.tx, e.rx, e.weight);
        }
    }
    SplitState { large, small, d }
}

/// Per-edge removal credits and the round's removal weight R.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemovalWeight {
    /// r(e) for every matched edge, in matching order: the edge's own weight
    /// if removing that much from every matched edge drops W by exactly that
    /// much, otherwise 0.
    pub per_edge: Vec<((usize, usize), u64)>,
    /// R: the duration of this round's packet.
    pub value: u64,
    /// True when every r(e) was 0 and R fell back to the lightest matched
    /// edge, which still guarantees one full edge removal this round.
    pub fallback: bool,
}

/// For each matched edge e with weight c(e), simulates reducing every matched
/// edge by c(e) (capped at each edge's own weight) and credits r(e) = c(e)
/// exactly when the graph's W drops by c(e). R is the largest credit, or the
/// smallest matched weight when no edge earns a credit.
///
/// All matched weights are ≥ d in the large graph, so R ≥ d either way.
pub fn removal_weight(large: &BipGraph, matching: &Matching) -> RemovalWeight {
    assert!(!matching.is_empty(), "removal weight needs a matched round");
    let (tx_loads, rx_loads) = large.loads();
    let w_before = tx_loads
        .iter()
        .chain(rx_loads.iter())
        .copied()
        .max()
        .unwrap_or(0);

    let matched: Vec<((usize, usize), u64)> = matching
        .edges()
        .iter()
        .map(|&(tx, rx)| {
            let w = large
                .weight(tx, rx)
                .expect("matching references a large-graph edge");
            ((tx, rx), w)
        })
        .collect();

    let mut per_edge = Vec::with_capacity(matched.len());
    for &(pair, c) in &matched {
        // Loads after reducing every matched edge by min(c, its weight).
        let mut tx_after = tx_loads.clone();
        let mut rx_after = rx_loads.clone();
        for &((tx, rx), w) in &matched {
            let cut = w.min(c);
            tx_after[tx] -= cut;
            rx_after[rx] -= cut;
        }
        let w_after = tx_after
            .iter()
            .chain(rx_after.iter())
            .copied()
            .max()
            .unwrap_or(0);
        let r = if w_after == w_before - c { c } else { 0 };
        per_edge.push((pair, r));
    }

    let best = per_edge.iter().map(|&(_, r)| r).max().unwrap_or(0);
    if best > 0 {
        RemovalWeight {
            per_edge,
            value: best,
            fallback: false,
        }
    } else {
        let value = matched.iter().map(|&(_, w)| w).min().unwrap();
        RemovalWeight {
            per_edge,
            value,
            fallback: true,
        }
    }
}

/// Runs the full heuristic and returns a schedule that always validates
/// against the instance.
pub fn run_sga(instance: &Instance) -> Schedule {
    let mut state = split_graph(instance);
    let d = state.d;
    let mut packets = Vec::new();

    // Large-edge rounds: drain the large graph, shrinking matched edges by R
    // per round and migrating edges that fall below d into the small graph.
    // Every round fully removes the edge whose weight R is, so the round
    // count never exceeds the initial large-edge count.
    let max_rounds = state.large.edge_count();
    let mut rounds = 0;
    while !state.large.is_empty() {
        rounds += 1;
        assert!(rounds <= max_rounds, "large phase failed to make progress");
        let matching = load_greedy_maximal_matching(&state.large);
        let removal = removal_weight(&state.large, &matching);
        let r = removal.value;

        let (_, riders) = augment_with_small_edges(&matching, &state.small);

        let mut items = Vec::with_capacity(matching.len() + riders.len());
        for &(tx, rx) in matching.edges() {
            let c = state.large.weight(tx, rx).unwrap();
            items.push(PacketItem::new(tx, rx, c.min(r)));
        }
        // Riders are whole small messages; their weight < d ≤ R keeps them
        // inside the round.
        for e in &riders {
            items.push(PacketItem::new(e.tx, e.rx, e.weight));
            state.small.remove(e.tx, e.rx);
        }
        packets.push(Packet::from_items(items));

        for &(tx, rx) in matching.edges() {
            let c = state.large.weight(tx, rx).unwrap();
            if c <= r {
                state.large.remove(tx, rx);
            } else {
                let rest = c - r;
                if rest < d {
                    state.large.remove(tx, rx);
                    state.small.insert(tx, rx, rest);
                } else {
                    state.large.set_weight(tx, rx, rest);
                }
            }
        }
    }

    // Small-edge rounds: decompose what is left of the small graph into
    // exactly Δ matchings, one packet each, short messages at full weight.
    if !state.small.is_empty() {
        let rg = regularize(&state.small.edge_vec());
        for matching in regular_decomposition(&rg) {
            let items: Vec<PacketItem> = matching
                .iter()
                .filter_map(|e| e.source.map(|(tx, rx)| PacketItem::new(tx, rx, e.weight)))
                .collect();
            if !items.is_empty() {
                packets.push(Packet::from_items(items));
            }
        }
    }

    Schedule::new(packets)
}

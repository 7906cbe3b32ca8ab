//! Matching primitives: the load-greedy maximal matching used by the main
//! loop, augmenting-path maximum-cardinality matching, greedy augmentation
//! with small edges, and the regularize-then-decompose machinery that turns
//! a bipartite (multi)graph into Δ perfect matchings.

use std::collections::BTreeMap;

use crate::graph::BipGraph;
use crate::model::Edge;

/// A station on either side of the bipartition. The derived order (all
/// transmitters before all receivers, ids ascending within a side) is the
/// tie-break order used wherever stations are ranked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeRef {
    Tx(usize),
    Rx(usize),
}

/// Stations of both sides ranked by workload, heaviest first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadOrder {
    nodes: Vec<NodeRef>,
}

impl LoadOrder {
    pub fn nodes(&self) -> &[NodeRef] {
        &self.nodes
    }
}

/// Ranks every station with at least one incident edge by decreasing
/// workload; ties resolve by the `NodeRef` order.
pub fn load_order(graph: &BipGraph) -> LoadOrder {
    let (tx_loads, rx_loads) = graph.loads();
    let mut nodes: Vec<(u64, NodeRef)> = Vec::new();
    for (tx, &load) in tx_loads.iter().enumerate() {
        if load > 0 {
            nodes.push((load, NodeRef::Tx(tx)));
        }
    }
    for (rx, &load) in rx_loads.iter().enumerate() {
        if load > 0 {
            nodes.push((load, NodeRef::Rx(rx)));
        }
    }
    nodes.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    LoadOrder {
        nodes: nodes.into_iter().map(|(_, n)| n).collect(),
    }
}

/// A node-disjoint set of (tx, rx) pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Matching {
    edges: Vec<(usize, usize)>,
}

impl Matching {
    pub fn new(edges: Vec<(usize, usize)>) -> Self {
        Matching { edges }
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Edges sorted by (tx, rx), for order-insensitive comparison.
    pub fn sorted_edges(&self) -> Vec<(usize, usize)> {
        let mut v = self.edges.clone();
        v.sort_unstable();
        v
    }
}

/// Builds a maximal matching by repeatedly taking the heaviest remaining
/// station `w0` in the load order and pairing it with its first remaining
/// neighbor in that same order; stations left without neighbors are dropped.
///
/// Workloads are computed once up front: matching construction removes no
/// weight, so re-deriving them between picks would yield the same order.
pub fn load_greedy_maximal_matching(graph: &BipGraph) -> Matching {
    let order = load_order(graph);
    let nodes = order.nodes();
    let mut alive = vec![true; nodes.len()];
    let mut edges = Vec::new();

    for i in 0..nodes.len() {
        if !alive[i] {
            continue;
        }
        let w0 = nodes[i];
        let mut partner = None;
        for (j, &w1) in nodes.iter().enumerate() {
            if j == i || !alive[j] {
                continue;
            }
            let pair = match (w0, w1) {
                (NodeRef::Tx(tx), NodeRef::Rx(rx)) => Some((tx, rx)),
                (NodeRef::Rx(rx), NodeRef::Tx(tx)) => Some((tx, rx)),
                _ => None,
            };
            if let Some((tx, rx)) = pair {
                if graph.weight(tx, rx).is_some() {
                    partner = Some((j, (tx, rx)));
                    break;
                }
            }
        }
        alive[i] = false;
        if let Some((j, edge)) = partner {
            alive[j] = false;
            edges.push(edge);
        }
    }

    Matching { edges }
}

/// Maximum-cardinality matching via augmenting paths (Kuhn's algorithm).
/// Any maximum matching is acceptable downstream; this one is deterministic:
/// transmitters are processed in ascending id, neighbors in ascending id.
pub fn max_cardinality_matching(graph: &BipGraph) -> Matching {
    let adj = graph.tx_adjacency();
    let mut rx_match: Vec<Option<usize>> = vec![None; graph.n_rx()];

    fn try_augment(
        tx: usize,
        adj: &[Vec<usize>],
        rx_match: &mut [Option<usize>],
        visited: &mut [bool],
    ) -> bool {
        for &rx in &adj[tx] {
            if visited[rx] {
                continue;
            }
            visited[rx] = true;
            match rx_match[rx] {
                None => {
                    rx_match[rx] = Some(tx);
                    return true;
                }
                Some(other) => {
                    if try_augment(other, adj, rx_match, visited) {
                        rx_match[rx] = Some(tx);
                        return true;
                    }
                }
            }
        }
        false
    }

    for tx in 0..graph.n_tx() {
        let mut visited = vec![false; graph.n_rx()];
        try_augment(tx, &adj, &mut rx_match, &mut visited);
    }

    let mut edges: Vec<(usize, usize)> = rx_match
        .iter()
        .enumerate()
        .filter_map(|(rx, tx)| tx.map(|tx| (tx, rx)))
        .collect();
    edges.sort_unstable();
    Matching { edges }
}

/// Greedily extends `matching` with small-graph edges whose endpoints are
/// both still free, scanning candidates by decreasing weight (ties by ids).
/// Existing matched edges are never moved. Returns the extended matching and
/// the consumed small edges, which the caller removes from its small graph.
pub fn augment_with_small_edges(
    matching: &Matching,
    small_graph: &BipGraph,
) -> (Matching, Vec<Edge>) {
    let mut tx_used = vec![false; small_graph.n_tx()];
    let mut rx_used = vec![false; small_graph.n_rx()];
    for &(tx, rx) in matching.edges() {
        if tx < tx_used.len() {
            tx_used[tx] = true;
        }
        if rx < rx_used.len() {
            rx_used[rx] = true;
        }
    }

    let mut candidates = small_graph.edge_vec();
    candidates.sort_by(|a, b| {
        b.weight
            .cmp(&a.weight)
            .then(a.tx.cmp(&b.tx))
            .then(a.rx.cmp(&b.rx))
    });

    let mut extended = matching.clone();
    let mut consumed = Vec::new();
    for e in candidates {
        if !tx_used[e.tx] && !rx_used[e.rx] {
            tx_used[e.tx] = true;
            rx_used[e.rx] = true;
            extended.edges.push((e.tx, e.rx));
            consumed.push(e);
        }
    }
    (extended, consumed)
}

/// One edge instance of a regularized graph. `source` is the originating
/// instance edge for real instances and `None` for zero-weight padding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegEdge {
    pub left: usize,
    pub right: usize,
    pub source: Option<(usize, usize)>,
    pub weight: u64,
}

impl RegEdge {
    pub fn is_dummy(&self) -> bool {
        self.source.is_none()
    }
}

/// A bipartite multigraph padded until every node has the same degree.
/// `left[i]` / `right[j]` give the original station id at each position, or
/// `None` for padding nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularizedGraph {
    pub left: Vec<Option<usize>>,
    pub right: Vec<Option<usize>>,
    pub edges: Vec<RegEdge>,
    pub degree: usize,
}

impl RegularizedGraph {
    fn empty() -> Self {
        RegularizedGraph {
            left: Vec::new(),
            right: Vec::new(),
            edges: Vec::new(),
            degree: 0,
        }
    }
}

/// Pads a bipartite multigraph (repeated (tx, rx) entries allowed) into a
/// Δ-regular one. Both sides are padded to equal node count, then dummy
/// zero-weight edges connect a minimum-degree deficient left node to a
/// minimum-degree deficient right node until every node reaches degree Δ.
/// Parallel dummy edges are permitted.
pub fn regularize(edges: &[Edge]) -> RegularizedGraph {
    if edges.is_empty() {
        return RegularizedGraph::empty();
    }

    let mut left_ids: Vec<usize> = edges.iter().map(|e| e.tx).collect();
    left_ids.sort_unstable();
    left_ids.dedup();
    let mut right_ids: Vec<usize> = edges.iter().map(|e| e.rx).collect();
    right_ids.sort_unstable();
    right_ids.dedup();

    let n = left_ids.len().max(right_ids.len());
    let mut left: Vec<Option<usize>> = left_ids.iter().copied().map(Some).collect();
    let mut right: Vec<Option<usize>> = right_ids.iter().copied().map(Some).collect();
    left.resize(n, None);
    right.resize(n, None);

    let left_pos: BTreeMap<usize, usize> = left_ids
        .iter()
        .enumerate()
        .map(|(i, &id)| (id, i))
        .collect();
    let right_pos: BTreeMap<usize, usize> = right_ids
        .iter()
        .enumerate()
        .map(|(i, &id)| (id, i))
        .collect();

    let mut reg_edges: Vec<RegEdge> = Vec::with_capacity(edges.len());
    let mut left_deg = vec![0usize; n];
    let mut right_deg = vec![0usize; n];
    for e in edges {
        let li = left_pos[&e.tx];
        let ri = right_pos[&e.rx];
        left_deg[li] += 1;
        right_deg[ri] += 1;
        reg_edges.push(RegEdge {
            left: li,
            right: ri,
            source: Some((e.tx, e.rx)),
            weight: e.weight,
        });
    }

    let degree = left_deg
        .iter()
        .chain(right_deg.iter())
        .copied()
        .max()
        .unwrap_or(0);

    // Total deficiency is identical on both sides (every edge instance
    // contributes one degree to each), so the pairing below always finds a
    // partner and terminates exactly when the graph is regular.
    loop {
        let li = (0..n)
            .filter(|&i| left_deg[i] < degree)
            .min_by_key(|&i| (left_deg[i], i));
        let Some(li) = li else { break };
        let ri = (0..n)
            .filter(|&j| right_deg[j] < degree)
            .min_by_key(|&j| (right_deg[j], j))
            .expect("left and right deficiency totals match");
        left_deg[li] += 1;
        right_deg[ri] += 1;
        reg_edges.push(RegEdge {
            left: li,
            right: ri,
            source: None,
            weight: 0,
        });
    }

    RegularizedGraph {
        left,
        right,
        edges: reg_edges,
        degree,
    }
}

/// Splits a k-regular bipartite multigraph into exactly k perfect matchings
/// that partition its edge multiset: each round finds a perfect matching
/// (guaranteed to exist while the graph stays regular), removes it, and
/// repeats.
///
/// Panics if a round's maximum matching is not perfect — that means the
/// input was not regular, i.e. a `regularize` bug.
pub fn regular_decomposition(rg: &RegularizedGraph) -> Vec<Vec<RegEdge>> {
    let n = rg.left.len();
    if n == 0 || rg.degree == 0 {
        return Vec::new();
    }

    // Remaining instances per distinct (left, right) pair, in insertion
    // order; real edges precede dummies so reals are consumed first.
    let mut pair_instances: BTreeMap<(usize, usize), std::collections::VecDeque<usize>> =
        BTreeMap::new();
    for (idx, e) in rg.edges.iter().enumerate() {
        pair_instances
            .entry((e.left, e.right))
            .or_default()
            .push_back(idx);
    }

    fn try_augment(
        li: usize,
        adj: &[Vec<usize>],
        right_match: &mut [Option<usize>],
        visited: &mut [bool],
    ) -> bool {
        for &ri in &adj[li] {
            if visited[ri] {
                continue;
            }
            visited[ri] = true;
            match right_match[ri] {
                None => {
                    right_match[ri] = Some(li);
                    return true;
                }
                Some(other) => {
                    if try_augment(other, adj, right_match, visited) {
                        right_match[ri] = Some(li);
                        return true;
                    }
                }
            }
        }
        false
    }

    let mut matchings = Vec::with_capacity(rg.degree);
    for _round in 0..rg.degree {
        let mut adj = vec![Vec::new(); n];
        for (&(li, ri), insts) in &pair_instances {
            if !insts.is_empty() {
                adj[li].push(ri);
            }
        }

        let mut right_match: Vec<Option<usize>> = vec![None; n];
        let mut size = 0;
        for li in 0..n {
            let mut visited = vec![false; n];
            if try_augment(li, &adj, &mut right_match, &mut visited) {
                size += 1;
            }
        }
        assert_eq!(
            size, n,
            "regular bipartite multigraph must admit a perfect matching"
        );

        let mut matching = Vec::with_capacity(n);
        for (ri, matched) in right_match.iter().enumerate() {
            let li = matched.unwrap();
            let insts = pair_instances.get_mut(&(li, ri)).unwrap();
            let idx = insts.pop_front().unwrap();
            matching.push(rg.edges[idx]);
        }
        matchings.push(matching);
    }

    debug_assert!(pair_instances.values().all(|v| v.is_empty()));
    matchings
}

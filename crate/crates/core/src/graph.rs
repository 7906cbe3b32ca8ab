//! Residual weighted bipartite graph, the working representation shared by
//! the matching primitives and the solvers.
//!
//! Edges live in a `BTreeMap` keyed by (tx, rx) so that every iteration order
//! is deterministic; solvers rely on that for reproducible tie-breaking.

use std::collections::BTreeMap;

use crate::model::{Edge, Instance};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BipGraph {
    n_tx: usize,
    n_rx: usize,
    edges: BTreeMap<(usize, usize), u64>,
}

impl BipGraph {
    pub fn new(n_tx: usize, n_rx: usize) -> Self {
        BipGraph {
            n_tx,
            n_rx,
            edges: BTreeMap::new(),
        }
    }

    /// All edges of an instance, weights intact.
    pub fn from_instance(instance: &Instance) -> Self {
        let mut g = BipGraph::new(instance.n_transmitters(), instance.n_receivers());
        for e in instance.edges() {
            g.insert(e.tx, e.rx, e.weight);
        }
        g
    }

    pub fn n_tx(&self) -> usize {
        self.n_tx
    }

    pub fn n_rx(&self) -> usize {
        self.n_rx
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Inserts or overwrites the edge (tx, rx). Weight must be positive.
    pub fn insert(&mut self, tx: usize, rx: usize, weight: u64) {
        debug_assert!(tx < self.n_tx && rx < self.n_rx);
        debug_assert!(weight > 0, "zero-weight edges are never stored");
        self.edges.insert((tx, rx), weight);
    }

    pub fn remove(&mut self, tx: usize, rx: usize) -> Option<u64> {
        self.edges.remove(&(tx, rx))
    }

    pub fn weight(&self, tx: usize, rx: usize) -> Option<u64> {
        self.edges.get(&(tx, rx)).copied()
    }

    pub fn set_weight(&mut self, tx: usize, rx: usize, weight: u64) {
        debug_assert!(weight > 0);
        self.edges.insert((tx, rx), weight);
    }

    /// (tx, rx, weight) triples in ascending (tx, rx) order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.edges.iter().map(|(&(tx, rx), &w)| (tx, rx, w))
    }

    pub fn edge_vec(&self) -> Vec<Edge> {
        self.iter()
            .map(|(tx, rx, w)| Edge::new(tx, rx, w))
            .collect()
    }

    /// Per-side workloads t(v), t(u).
    pub fn loads(&self) -> (Vec<u64>, Vec<u64>) {
        let mut tx_loads = vec![0u64; self.n_tx];
        let mut rx_loads = vec![0u64; self.n_rx];
        for (&(tx, rx), &w) in &self.edges {
            tx_loads[tx] += w;
            rx_loads[rx] += w;
        }
        (tx_loads, rx_loads)
    }

    /// Per-side degrees (message counts).
    pub fn degrees(&self) -> (Vec<usize>, Vec<usize>) {
        let mut tx_deg = vec![0usize; self.n_tx];
        let mut rx_deg = vec![0usize; self.n_rx];
        for &(tx, rx) in self.edges.keys() {
            tx_deg[tx] += 1;
            rx_deg[rx] += 1;
        }
        (tx_deg, rx_deg)
    }

    /// W of the residual graph.
    pub fn max_load(&self) -> u64 {
        let (t, r) = self.loads();
        t.into_iter().chain(r).max().unwrap_or(0)
    }

    /// Δ of the residual graph.
    pub fn max_degree(&self) -> usize {
        let (t, r) = self.degrees();
        t.into_iter().chain(r).max().unwrap_or(0)
    }

    /// Smallest edge weight, if any edge remains.
    pub fn min_weight(&self) -> Option<u64> {
        self.edges.values().copied().min()
    }

    /// Adjacency of the transmitter side: for each tx, its receivers in
    /// ascending order.
    pub fn tx_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n_tx];
        for &(tx, rx) in self.edges.keys() {
            adj[tx].push(rx);
        }
        adj
    }
}

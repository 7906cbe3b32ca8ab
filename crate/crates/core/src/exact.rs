//! Ground-truth solvers for testing: an exhaustive branch-and-bound that
//! finds the true optimal makespan of tiny instances, and the polynomial
//! zero-overhead decomposition whose durations sum to exactly W.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::model::{Instance, Packet, PacketItem, Schedule};

/// Hard caps that keep the exhaustive search tractable. Exceeding any of
/// them yields an error, never a wrong answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_edges: usize,
    pub max_nodes_per_side: usize,
    pub max_total_weight: u64,
    /// Explored search operations (states plus enumerated matchings).
    pub node_budget: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_edges: 6,
            max_nodes_per_side: 4,
            max_total_weight: 30,
            node_budget: 10_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    TooManyEdges { edges: usize, max: usize },
    TooManyNodes { nodes: usize, max: usize },
    TotalWeightTooLarge { total: u64, max: u64 },
    BudgetExhausted { budget: usize },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::TooManyEdges { edges, max } => {
                write!(f, "instance has {edges} edges, oracle limit is {max}")
            }
            OracleError::TooManyNodes { nodes, max } => {
                write!(
                    f,
                    "instance uses {nodes} nodes on a side, oracle limit is {max}"
                )
            }
            OracleError::TotalWeightTooLarge { total, max } => {
                write!(f, "total weight {total} exceeds oracle limit {max}")
            }
            OracleError::BudgetExhausted { budget } => {
                write!(f, "search exceeded its budget of {budget} operations")
            }
        }
    }
}

impl std::error::Error for OracleError {}

type State = BTreeMap<(usize, usize), u64>;
/// A matching as (pair, weight) entries.
type MatchedEdges = Vec<((usize, usize), u64)>;

/// How packet durations are enumerated at each branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum DurationRule {
    /// Distinct weights of the chosen matching plus the globally smallest
    /// residual weight. Cross-validated against `FullRange` by the test
    /// suite on all instances with up to 3 edges; whether the restriction is
    /// always optimal in general is not proven, hence that suite.
    MatchedWeights,
    /// Every integer from 1 to the largest matched weight. Slow reference.
    FullRange,
}

struct Searcher {
    d: u64,
    rule: DurationRule,
    memo: HashMap<Vec<(usize, usize, u64)>, u64>,
    ops: usize,
    budget: usize,
}

#[derive(Debug, Clone)]
struct Branch {
    matched: MatchedEdges,
    t: u64,
    child: State,
    projected: u64,
}

fn state_lower_bound(state: &State, d: u64) -> u64 {
    let mut loads: BTreeMap<(bool, usize), u64> = BTreeMap::new();
    let mut degrees: BTreeMap<(bool, usize), u64> = BTreeMap::new();
    for (&(tx, rx), &w) in state {
        *loads.entry((false, tx)).or_insert(0) += w;
        *loads.entry((true, rx)).or_insert(0) += w;
        *degrees.entry((false, tx)).or_insert(0) += 1;
        *degrees.entry((true, rx)).or_insert(0) += 1;
    }
    let w = loads.values().copied().max().unwrap_or(0);
    let delta = degrees.values().copied().max().unwrap_or(0);
    w + d * delta
}

/// Memo key: the residual relabeled into canonical node order. For up to
/// four used nodes per side the minimum over all relabelings is taken, which
/// collapses symmetric residuals; larger states fall back to the identity
/// labeling (still correct, just fewer memo hits).
fn canonical_key(state: &State) -> Vec<(usize, usize, u64)> {
    let mut txs: Vec<usize> = state.keys().map(|&(tx, _)| tx).collect();
    txs.sort_unstable();
    txs.dedup();
    let mut rxs: Vec<usize> = state.keys().map(|&(_, rx)| rx).collect();
    rxs.sort_unstable();
    rxs.dedup();

    if txs.len() > 4 || rxs.len() > 4 {
        return state.iter().map(|(&(tx, rx), &w)| (tx, rx, w)).collect();
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        let mut result = Vec::new();
        let mut items: Vec<usize> = (0..n).collect();
        fn rec(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
            if k == items.len() {
                out.push(items.clone());
                return;
            }
            for i in k..items.len() {
                items.swap(k, i);
                rec(items, k + 1, out);
                items.swap(k, i);
            }
        }
        rec(&mut items, 0, &mut result);
        result
    }

    let tx_perms = permutations(txs.len());
    let rx_perms = permutations(rxs.len());
    let tx_index: BTreeMap<usize, usize> = txs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let rx_index: BTreeMap<usize, usize> = rxs.iter().enumerate().map(|(i, &v)| (v, i)).collect();

    let mut best: Option<Vec<(usize, usize, u64)>> = None;
    for tp in &tx_perms {
        for rp in &rx_perms {
            let mut relabeled: Vec<(usize, usize, u64)> = state
                .iter()
                .map(|(&(tx, rx), &w)| (tp[tx_index[&tx]], rp[rx_index[&rx]], w))
                .collect();
            relabeled.sort_unstable();
            if best.as_ref().is_none_or(|b| relabeled < *b) {
                best = Some(relabeled);
            }
        }
    }
    best.unwrap_or_default()
}

impl Searcher {
    fn charge(&mut self, amount: usize) -> Result<(), OracleError> {
        self.ops += amount;
        if self.ops > self.budget {
            Err(OracleError::BudgetExhausted {
                budget: self.budget,
            })
        } else {
            Ok(())
        }
    }

    /// All maximal matchings of the residual, as (pair, weight) lists in
    /// deterministic order.
    fn maximal_matchings(&mut self, state: &State) -> Result<Vec<MatchedEdges>, OracleError> {
        let edges: MatchedEdges = state.iter().map(|(&pair, &w)| (pair, w)).collect();
        let mut result = Vec::new();
        let mut current: MatchedEdges = Vec::new();

        fn compatible(current: &[((usize, usize), u64)], pair: (usize, usize)) -> bool {
            current
                .iter()
                .all(|&((tx, rx), _)| tx != pair.0 && rx != pair.1)
        }

        fn rec(
            idx: usize,
            edges: &[((usize, usize), u64)],
            current: &mut MatchedEdges,
            result: &mut Vec<MatchedEdges>,
        ) {
            if idx == edges.len() {
                let maximal = edges.iter().all(|&(pair, _)| {
                    !compatible(current, pair) || current.iter().any(|&(p, _)| p == pair)
                });
                if maximal && !current.is_empty() {
                    result.push(current.clone());
                }
                return;
            }
            let (pair, w) = edges[idx];
            if compatible(current, pair) {
                current.push((pair, w));
                rec(idx + 1, edges, current, result);
                current.pop();
            }
            rec(idx + 1, edges, current, result);
        }

        rec(0, &edges, &mut current, &mut result);
        self.charge(result.len().max(1))?;
        Ok(result)
    }

    fn duration_candidates(&self, state: &State, matched: &[((usize, usize), u64)]) -> Vec<u64> {
        match self.rule {
            DurationRule::MatchedWeights => {
                let mut ts: Vec<u64> = matched.iter().map(|&(_, w)| w).collect();
                if let Some(&global_min) = state.values().min() {
                    ts.push(global_min);
                }
                ts.sort_unstable();
                ts.dedup();
                ts
            }
            DurationRule::FullRange => {
                let max_w = matched.iter().map(|&(_, w)| w).max().unwrap_or(0);
                (1..=max_w).collect()
            }
        }
    }

    fn branches(&mut self, state: &State) -> Result<Vec<Branch>, OracleError> {
        let mut branches = Vec::new();
        for matched in self.maximal_matchings(state)? {
            for t in self.duration_candidates(state, &matched) {
                let mut child = state.clone();
                for &((tx, rx), w) in &matched {
                    if w <= t {
                        child.remove(&(tx, rx));
                    } else {
                        child.insert((tx, rx), w - t);
                    }
                }
                let projected = t + self.d + state_lower_bound(&child, self.d);
                branches.push(Branch {
                    matched: matched.clone(),
                    t,
                    child,
                    projected,
                });
            }
        }
        // Most promising first; the stable sort keeps enumeration order on
        // ties so the witness replay is reproducible.
        branches.sort_by_key(|b| b.projected);
        Ok(branches)
    }

    /// Exact optimal cost of finishing `state`. Branches whose projected cost
    /// cannot beat the best sibling found so far are skipped; the memoized
    /// value is exact either way.
    fn solve(&mut self, state: &State) -> Result<u64, OracleError> {
        if state.is_empty() {
            return Ok(0);
        }
        let key = canonical_key(state);
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        self.charge(1)?;

        let mut best = u64::MAX;
        for branch in self.branches(state)? {
            if branch.projected >= best {
                continue;
            }
            let value = branch.t + self.d + self.solve(&branch.child)?;
            best = best.min(value);
        }
        debug_assert!(best < u64::MAX);
        self.memo.insert(key, best);
        Ok(best)
    }

    /// Walks the memo back into an explicit packet sequence achieving `total`.
    fn reconstruct(&mut self, start: &State, total: u64) -> Result<Vec<Packet>, OracleError> {
        let mut packets = Vec::new();
        let mut state = start.clone();
        let mut remaining = total;
        while !state.is_empty() {
            let mut advanced = false;
            for branch in self.branches(&state)? {
                let child_value = if branch.child.is_empty() {
                    Some(0)
                } else {
                    self.memo.get(&canonical_key(&branch.child)).copied()
                };
                let Some(v) = child_value else { continue };
                if branch.t + self.d + v == remaining {
                    let items = branch
                        .matched
                        .iter()
                        .map(|&((tx, rx), w)| PacketItem::new(tx, rx, w.min(branch.t)))
                        .collect();
                    packets.push(Packet::from_items(items));
                    remaining = v;
                    state = branch.child;
                    advanced = true;
                    break;
                }
            }
            assert!(advanced, "memo must contain an optimal branch");
        }
        Ok(packets)
    }
}

fn check_limits(instance: &Instance, limits: &SearchLimits) -> Result<(), OracleError> {
    let edges = instance.edges().len();
    if edges > limits.max_edges {
        return Err(OracleError::TooManyEdges {
            edges,
            max: limits.max_edges,
        });
    }
    let mut txs: Vec<usize> = instance.edges().iter().map(|e| e.tx).collect();
    txs.sort_unstable();
    txs.dedup();
    let mut rxs: Vec<usize> = instance.edges().iter().map(|e| e.rx).collect();
    rxs.sort_unstable();
    rxs.dedup();
    let nodes = txs.len().max(rxs.len());
    if nodes > limits.max_nodes_per_side {
        return Err(OracleError::TooManyNodes {
            nodes,
            max: limits.max_nodes_per_side,
        });
    }
    let total: u64 = instance.edges().iter().map(|e| e.weight).sum();
    if total > limits.max_total_weight {
        return Err(OracleError::TotalWeightTooLarge {
            total,
            max: limits.max_total_weight,
        });
    }
    Ok(())
}

/// Exact minimum makespan with a witness schedule, by branch-and-bound over
/// (maximal matching, duration) moves with memoization on the canonical
/// residual and W + d·Δ pruning.
pub fn optimal_makespan(
    instance: &Instance,
    limits: &SearchLimits,
) -> Result<(u64, Schedule), OracleError> {
    check_limits(instance, limits)?;
    let start: State = instance.weight_map();
    let mut searcher = Searcher {
        d: instance.overhead(),
        rule: DurationRule::MatchedWeights,
        memo: HashMap::new(),
        ops: 0,
        budget: limits.node_budget,
    };
    let best = searcher.solve(&start)?;
    // Replaying the memo is bounded by the schedule length; give it fresh
    // budget headroom rather than failing a solved instance.
    searcher.ops = 0;
    let packets = searcher.reconstruct(&start, best)?;
    Ok((best, Schedule::new(packets)))
}

/// The slow reference search trying every integer duration up to the largest
/// matched weight. Used to cross-validate the restricted candidate set.
pub fn optimal_makespan_full_range(
    instance: &Instance,
    limits: &SearchLimits,
) -> Result<u64, OracleError> {
    check_limits(instance, limits)?;
    let start: State = instance.weight_map();
    let mut searcher = Searcher {
        d: instance.overhead(),
        rule: DurationRule::FullRange,
        memo: HashMap::new(),
        ops: 0,
        budget: limits.node_budget,
    };
    searcher.solve(&start)
}

/// Zero-overhead optimum: decomposes the demand into matchings whose
/// durations sum to exactly W, the classic critical-load decomposition. The
/// demand matrix is padded square and doubly balanced with zero-cost slack,
/// after which every round holds a perfect matching; taking each round's
/// largest consistent duration (the minimum matched entry) keeps all row and
/// column sums falling in lockstep.
pub fn min_total_duration_decomposition(instance: &Instance) -> Schedule {
    let n = instance.n_transmitters().max(instance.n_receivers());
    let mut real = vec![vec![0u64; n]; n];
    for e in instance.edges() {
        real[e.tx][e.rx] = e.weight;
    }

    let mut row_sum = vec![0u64; n];
    let mut col_sum = vec![0u64; n];
    for i in 0..n {
        for j in 0..n {
            row_sum[i] += real[i][j];
            col_sum[j] += real[i][j];
        }
    }
    let w = row_sum
        .iter()
        .chain(col_sum.iter())
        .copied()
        .max()
        .unwrap_or(0);
    if w == 0 {
        return Schedule::default();
    }

    // Slack entries bring every row and column sum up to W. Row and column
    // deficits always total the same, so the two-pointer fill closes both.
    let mut slack = vec![vec![0u64; n]; n];
    let (mut i, mut j) = (0, 0);
    while i < n && j < n {
        let need_row = w - row_sum[i];
        if need_row == 0 {
            i += 1;
            continue;
        }
        let need_col = w - col_sum[j];
        if need_col == 0 {
            j += 1;
            continue;
        }
        let add = need_row.min(need_col);
        slack[i][j] += add;
        row_sum[i] += add;
        col_sum[j] += add;
    }

    fn try_augment(
        row: usize,
        adj: &[Vec<usize>],
        col_match: &mut [Option<usize>],
        visited: &mut [bool],
    ) -> bool {
        for &col in &adj[row] {
            if visited[col] {
                continue;
            }
            visited[col] = true;
            match col_match[col] {
                None => {
                    col_match[col] = Some(row);
                    return true;
                }
                Some(other) => {
                    if try_augment(other, adj, col_match, visited) {
                        col_match[col] = Some(row);
                        return true;
                    }
                }
            }
        }
        false
    }

    let mut packets = Vec::new();
    let mut remaining = w;
    while remaining > 0 {
        let adj: Vec<Vec<usize>> = (0..n)
            .map(|i| (0..n).filter(|&j| real[i][j] + slack[i][j] > 0).collect())
            .collect();
        let mut col_match: Vec<Option<usize>> = vec![None; n];
        let mut size = 0;
        for row in 0..n {
            let mut visited = vec![false; n];
            if try_augment(row, &adj, &mut col_match, &mut visited) {
                size += 1;
            }
        }
        assert_eq!(size, n, "balanced matrix must admit a perfect matching");

        let t = (0..n)
            .map(|col| {
                let row = col_match[col].unwrap();
                real[row][col] + slack[row][col]
            })
            .min()
            .unwrap();
        debug_assert!(t >= 1);

        let mut items = Vec::new();
        for col in 0..n {
            let row = col_match[col].unwrap();
            let from_real = real[row][col].min(t);
            if from_real > 0 {
                items.push(PacketItem::new(row, col, from_real));
                real[row][col] -= from_real;
            }
            slack[row][col] -= t - from_real;
        }
        if !items.is_empty() {
            packets.push(Packet::from_items(items));
        }
        remaining -= t;
    }

    Schedule::new(packets)
}

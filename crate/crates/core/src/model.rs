//! Problem instance and schedule data model.
//!
//! An [`Instance`] is a weighted bipartite demand graph: transmitters on one
//! side, receivers on the other, and one message (edge) per communicating
//! pair. A solver turns an instance into a [`Schedule`]: an ordered sequence
//! of [`Packet`]s, where each packet is a matching transmitted simultaneously
//! for its duration and every packet restart costs a fixed setup overhead `d`.
//!
//! All quantities on the schedule path (weights, amounts, durations, the
//! overhead) are integers; nothing here touches floating point.

use std::collections::BTreeMap;
use std::fmt;

/// One message: transmitter `tx` sends `weight` time units to receiver `rx`.
///
/// Node ids are zero-based indices into the instance's station ranges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub tx: usize,
    pub rx: usize,
    pub weight: u64,
}

impl Edge {
    pub fn new(tx: usize, rx: usize, weight: u64) -> Self {
        Edge { tx, rx, weight }
    }
}

/// Errors rejected at instance construction time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelError {
    /// A side of the bipartition has no stations.
    NoStations,
    /// The setup overhead must be a positive integer.
    ZeroOverhead,
    /// An edge references a station id outside the declared ranges.
    IdOutOfRange { tx: usize, rx: usize },
    /// A message of length zero is an absent message, not a valid edge.
    ZeroWeight { tx: usize, rx: usize },
    /// At most one message per (transmitter, receiver) pair.
    DuplicateEdge { tx: usize, rx: usize },
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::NoStations => write!(f, "station counts must be ≥ 1"),
            ModelError::ZeroOverhead => write!(f, "overhead must be ≥ 1"),
            ModelError::IdOutOfRange { tx, rx } => {
                write!(f, "edge ({tx}, {rx}) references a station out of range")
            }
            ModelError::ZeroWeight { tx, rx } => {
                write!(f, "edge ({tx}, {rx}) has zero weight")
            }
            ModelError::DuplicateEdge { tx, rx } => {
                write!(f, "duplicate edge ({tx}, {rx})")
            }
        }
    }
}

impl std::error::Error for ModelError {}

/// A validated scheduling instance.
///
/// Immutable after construction; cheap to clone and safe to share across
/// threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    n_tx: usize,
    n_rx: usize,
    d: u64,
    edges: Vec<Edge>,
}

impl Instance {
    /// Builds an instance, enforcing every structural invariant: positive
    /// station counts, `d ≥ 1`, ids in range, weights ≥ 1, no duplicate
    /// (tx, rx) pairs.
    pub fn new(n_tx: usize, n_rx: usize, d: u64, edges: Vec<Edge>) -> Result<Self, ModelError> {
        if n_tx == 0 || n_rx == 0 {
            return Err(ModelError::NoStations);
        }
        if d == 0 {
            return Err(ModelError::ZeroOverhead);
        }
        let mut seen = std::collections::BTreeSet::new();
        for e in &edges {
            if e.tx >= n_tx || e.rx >= n_rx {
                return Err(ModelError::IdOutOfRange { tx: e.tx, rx: e.rx });
            }
            if e.weight == 0 {
                return Err(ModelError::ZeroWeight { tx: e.tx, rx: e.rx });
            }
            if !seen.insert((e.tx, e.rx)) {
                return Err(ModelError::DuplicateEdge { tx: e.tx, rx: e.rx });
            }
        }
        Ok(Instance {
            n_tx,
            n_rx,
            d,
            edges,
        })
    }

    pub fn n_transmitters(&self) -> usize {
        self.n_tx
    }

    pub fn n_receivers(&self) -> usize {
        self.n_rx
    }

    /// The setup overhead charged before every packet.
    pub fn overhead(&self) -> u64 {
        self.d
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Weight lookup keyed by (tx, rx).
    pub fn weight_map(&self) -> BTreeMap<(usize, usize), u64> {
        self.edges
            .iter()
            .map(|e| ((e.tx, e.rx), e.weight))
            .collect()
    }

    /// The same demand with transmitter and receiver roles swapped.
    pub fn transposed(&self) -> Instance {
        Instance {
            n_tx: self.n_rx,
            n_rx: self.n_tx,
            d: self.d,
            edges: self
                .edges
                .iter()
                .map(|e| Edge::new(e.rx, e.tx, e.weight))
                .collect(),
        }
    }
}

/// One entry of a packet: `amount` time units of edge (tx, rx).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PacketItem {
    pub tx: usize,
    pub rx: usize,
    pub amount: u64,
}

impl PacketItem {
    pub fn new(tx: usize, rx: usize, amount: u64) -> Self {
        PacketItem { tx, rx, amount }
    }
}

/// One switching round: a set of simultaneous transmissions plus the round
/// duration. For a well-formed packet the items are node-disjoint and the
/// duration equals the largest amount carried.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Packet {
    duration: u64,
    items: Vec<PacketItem>,
}

impl Packet {
    /// Packet with duration derived from its items (max amount, 0 if empty).
    /// This is the only constructor solvers use.
    pub fn from_items(items: Vec<PacketItem>) -> Self {
        let duration = items.iter().map(|it| it.amount).max().unwrap_or(0);
        Packet { duration, items }
    }

    /// Packet with an explicit duration, as read from a schedule file. The
    /// duration may disagree with the items; `validate_schedule` reports the
    /// mismatch rather than this constructor rejecting it.
    pub fn with_duration(duration: u64, items: Vec<PacketItem>) -> Self {
        Packet { duration, items }
    }

    pub fn duration(&self) -> u64 {
        self.duration
    }

    pub fn items(&self) -> &[PacketItem] {
        &self.items
    }
}

/// An ordered sequence of packets.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Schedule {
    packets: Vec<Packet>,
}

impl Schedule {
    pub fn new(packets: Vec<Packet>) -> Self {
        Schedule { packets }
    }

    pub fn packets(&self) -> &[Packet] {
        &self.packets
    }

    pub fn is_empty(&self) -> bool {
        self.packets.is_empty()
    }
}

/// Per-station workloads and degrees, with their maxima.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeMetrics {
    /// t(v): total outgoing weight per transmitter.
    pub tx_loads: Vec<u64>,
    /// t(u): total incoming weight per receiver.
    pub rx_loads: Vec<u64>,
    /// Message count per transmitter.
    pub tx_degrees: Vec<usize>,
    /// Message count per receiver.
    pub rx_degrees: Vec<usize>,
    /// W: the heaviest station workload on either side.
    pub max_load: u64,
    /// Δ: the largest station degree on either side.
    pub max_degree: usize,
}

/// Computes per-station loads and degrees and their maxima W and Δ.
pub fn node_metrics(instance: &Instance) -> NodeMetrics {
    let mut tx_loads = vec![0u64; instance.n_transmitters()];
    let mut rx_loads = vec![0u64; instance.n_receivers()];
    let mut tx_degrees = vec![0usize; instance.n_transmitters()];
    let mut rx_degrees = vec![0usize; instance.n_receivers()];
    for e in instance.edges() {
        tx_loads[e.tx] += e.weight;
        rx_loads[e.rx] += e.weight;
        tx_degrees[e.tx] += 1;
        rx_degrees[e.rx] += 1;
    }
    let max_load = tx_loads
        .iter()
        .chain(rx_loads.iter())
        .copied()
        .max()
        .unwrap_or(0);
    let max_degree = tx_degrees
        .iter()
        .chain(rx_degrees.iter())
        .copied()
        .max()
        .unwrap_or(0);
    NodeMetrics {
        tx_loads,
        rx_loads,
        tx_degrees,
        rx_degrees,
        max_load,
        max_degree,
    }
}

/// W + d·Δ: durations must sum to at least W, and at least Δ packets are
/// needed since edges sharing a station cannot share a packet. Every valid
/// schedule's makespan is at least this.
pub fn lower_bound(instance: &Instance) -> u64 {
    let m = node_metrics(instance);
    m.max_load + instance.overhead() * m.max_degree as u64
}

/// Total schedule time: Σ over packets of (duration + d). 0 for an empty
/// schedule.
pub fn makespan(schedule: &Schedule, d: u64) -> u64 {
    schedule.packets().iter().map(|p| p.duration() + d).sum()
}

/// One way a schedule can fail against its instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A transmitter appears in two items of the same packet.
    TransmitterConflict { packet: usize, tx: usize },
    /// A receiver appears in two items of the same packet.
    ReceiverConflict { packet: usize, rx: usize },
    /// An item references a (tx, rx) pair that is not an instance edge.
    UnknownEdge { packet: usize, tx: usize, rx: usize },
    /// The packet's stated duration differs from its largest amount.
    DurationMismatch {
        packet: usize,
        duration: u64,
        max_amount: u64,
    },
    /// The schedule ships less than the edge's weight.
    UnderCoverage {
        tx: usize,
        rx: usize,
        required: u64,
        sent: u64,
    },
    /// The schedule ships more than the edge's weight.
    OverCoverage {
        tx: usize,
        rx: usize,
        required: u64,
        sent: u64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TransmitterConflict { packet, tx } => {
                write!(f, "packet {packet}: transmitter {tx} used twice")
            }
            Violation::ReceiverConflict { packet, rx } => {
                write!(f, "packet {packet}: receiver {rx} used twice")
            }
            Violation::UnknownEdge { packet, tx, rx } => {
                write!(f, "packet {packet}: ({tx}, {rx}) is not an instance edge")
            }
            Violation::DurationMismatch {
                packet,
                duration,
                max_amount,
            } => write!(
                f,
                "packet {packet}: duration {duration} but largest amount is {max_amount}"
            ),
            Violation::UnderCoverage {
                tx,
                rx,
                required,
                sent,
            } => write!(f, "edge ({tx}, {rx}): sent {sent} of required {required}"),
            Violation::OverCoverage {
                tx,
                rx,
                required,
                sent,
            } => write!(
                f,
                "edge ({tx}, {rx}): sent {sent}, exceeding required {required}"
            ),
        }
    }
}

/// Everything wrong with a schedule, in packet order then coverage order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} violation(s):", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationReport {}

/// Checks a schedule against an instance: every packet must be a matching
/// with duration equal to its largest amount, every item must reference an
/// instance edge, and per-edge amounts must sum to exactly the edge weight.
///
/// Total: never panics, reports every violation it finds.
pub fn validate_schedule(instance: &Instance, schedule: &Schedule) -> Result<(), ValidationReport> {
    let weights = instance.weight_map();
    let mut violations = Vec::new();
    let mut sent: BTreeMap<(usize, usize), u64> = BTreeMap::new();

    for (pi, packet) in schedule.packets().iter().enumerate() {
        let mut tx_seen = std::collections::BTreeSet::new();
        let mut rx_seen = std::collections::BTreeSet::new();
        let mut max_amount = 0u64;
        for item in packet.items() {
            if !tx_seen.insert(item.tx) {
                violations.push(Violation::TransmitterConflict {
                    packet: pi,
                    tx: item.tx,
                });
            }
            if !rx_seen.insert(item.rx) {
                violations.push(Violation::ReceiverConflict {
                    packet: pi,
                    rx: item.rx,
                });
            }
            if weights.contains_key(&(item.tx, item.rx)) {
                *sent.entry((item.tx, item.rx)).or_insert(0) += item.amount;
            } else {
                violations.push(Violation::UnknownEdge {
                    packet: pi,
                    tx: item.tx,
                    rx: item.rx,
                });
            }
            max_amount = max_amount.max(item.amount);
        }
        if packet.duration() != max_amount {
            violations.push(Violation::DurationMismatch {
                packet: pi,
                duration: packet.duration(),
                max_amount,
            });
        }
    }

    for (&(tx, rx), &required) in &weights {
        let delivered = sent.get(&(tx, rx)).copied().unwrap_or(0);
        if delivered < required {
            violations.push(Violation::UnderCoverage {
                tx,
                rx,
                required,
                sent: delivered,
            });
        } else if delivered > required {
            violations.push(Violation::OverCoverage {
                tx,
                rx,
                required,
                sent: delivered,
            });
        }
    }

    if violations.is_empty() {
        Ok(())
    } else {
        Err(ValidationReport { violations })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(n_tx: usize, n_rx: usize, d: u64, edges: &[(usize, usize, u64)]) -> Instance {
        Instance::new(
            n_tx,
            n_rx,
            d,
            edges.iter().map(|&(v, u, w)| Edge::new(v, u, w)).collect(),
        )
        .unwrap()
    }

    // edges {(1,1,3),(1,2,2),(2,1,2)} in the text format's 1-based ids.
    fn three_edge() -> Instance {
        inst(2, 2, 1, &[(0, 0, 3), (0, 1, 2), (1, 0, 2)])
    }

    #[test]
    fn metrics_three_edge() {
        let m = node_metrics(&three_edge());
        assert_eq!(m.tx_loads, vec![5, 2]);
        assert_eq!(m.rx_loads, vec![5, 2]);
        assert_eq!(m.max_load, 5);
        assert_eq!(m.max_degree, 2);
    }

    #[test]
    fn metrics_single_edge() {
        let m = node_metrics(&inst(1, 1, 1, &[(0, 0, 4)]));
        assert_eq!(m.max_load, 4);
        assert_eq!(m.max_degree, 1);
    }

    #[test]
    fn metrics_empty() {
        let m = node_metrics(&inst(2, 2, 1, &[]));
        assert_eq!(m.max_load, 0);
        assert_eq!(m.max_degree, 0);
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(lower_bound(&three_edge()), 7);
        assert_eq!(lower_bound(&inst(1, 1, 3, &[(0, 0, 4)])), 7);
        assert_eq!(lower_bound(&inst(1, 2, 1, &[(0, 0, 2), (0, 1, 2)])), 6);
        assert_eq!(lower_bound(&inst(3, 3, 5, &[])), 0);
    }

    #[test]
    fn makespan_examples() {
        let s = Schedule::new(vec![
            Packet::from_items(vec![PacketItem::new(0, 0, 3)]),
            Packet::from_items(vec![PacketItem::new(0, 1, 2)]),
        ]);
        assert_eq!(makespan(&s, 1), 7);
        assert_eq!(makespan(&Schedule::default(), 5), 0);
        let s3 = Schedule::new(vec![
            Packet::from_items(vec![PacketItem::new(0, 0, 2)]),
            Packet::from_items(vec![PacketItem::new(0, 0, 2)]),
            Packet::from_items(vec![PacketItem::new(0, 0, 2)]),
        ]);
        assert_eq!(makespan(&s3, 2), 12);
    }

    #[test]
    fn validate_exact_coverage_ok() {
        let i = inst(1, 1, 1, &[(0, 0, 3)]);
        let s = Schedule::new(vec![Packet::from_items(vec![PacketItem::new(0, 0, 3)])]);
        assert!(validate_schedule(&i, &s).is_ok());
    }

    #[test]
    fn validate_under_coverage() {
        let i = inst(1, 1, 1, &[(0, 0, 3)]);
        let s = Schedule::new(vec![Packet::from_items(vec![PacketItem::new(0, 0, 2)])]);
        let report = validate_schedule(&i, &s).unwrap_err();
        assert_eq!(
            report.violations,
            vec![Violation::UnderCoverage {
                tx: 0,
                rx: 0,
                required: 3,
                sent: 2
            }]
        );
    }

    #[test]
    fn validate_transmitter_conflict() {
        let i = inst(1, 2, 1, &[(0, 0, 1), (0, 1, 1)]);
        let s = Schedule::new(vec![Packet::from_items(vec![
            PacketItem::new(0, 0, 1),
            PacketItem::new(0, 1, 1),
        ])]);
        let report = validate_schedule(&i, &s).unwrap_err();
        assert!(report
            .violations
            .contains(&Violation::TransmitterConflict { packet: 0, tx: 0 }));
    }

    #[test]
    fn validate_duration_mismatch_and_unknown_edge() {
        let i = inst(2, 2, 1, &[(0, 0, 2)]);
        let s = Schedule::new(vec![Packet::with_duration(
            5,
            vec![PacketItem::new(0, 0, 2), PacketItem::new(1, 1, 1)],
        )]);
        let report = validate_schedule(&i, &s).unwrap_err();
        assert!(report.violations.contains(&Violation::DurationMismatch {
            packet: 0,
            duration: 5,
            max_amount: 2
        }));
        assert!(report.violations.contains(&Violation::UnknownEdge {
            packet: 0,
            tx: 1,
            rx: 1
        }));
    }

    #[test]
    fn validate_over_coverage() {
        let i = inst(1, 1, 1, &[(0, 0, 2)]);
        let s = Schedule::new(vec![
            Packet::from_items(vec![PacketItem::new(0, 0, 2)]),
            Packet::from_items(vec![PacketItem::new(0, 0, 1)]),
        ]);
        let report = validate_schedule(&i, &s).unwrap_err();
        assert_eq!(
            report.violations,
            vec![Violation::OverCoverage {
                tx: 0,
                rx: 0,
                required: 2,
                sent: 3
            }]
        );
    }

    #[test]
    fn metrics_side_agnostic() {
        let i = inst(3, 2, 2, &[(0, 0, 3), (1, 0, 4), (2, 1, 9), (0, 1, 1)]);
        let t = i.transposed();
        let (a, b) = (node_metrics(&i), node_metrics(&t));
        assert_eq!(a.max_load, b.max_load);
        assert_eq!(a.max_degree, b.max_degree);
        assert_eq!(lower_bound(&i), lower_bound(&t));
    }

    #[test]
    fn construction_rejects_bad_instances() {
        assert_eq!(Instance::new(0, 1, 1, vec![]), Err(ModelError::NoStations));
        assert_eq!(
            Instance::new(1, 1, 0, vec![]),
            Err(ModelError::ZeroOverhead)
        );
        assert_eq!(
            Instance::new(1, 1, 1, vec![Edge::new(0, 1, 2)]),
            Err(ModelError::IdOutOfRange { tx: 0, rx: 1 })
        );
        assert_eq!(
            Instance::new(1, 1, 1, vec![Edge::new(0, 0, 0)]),
            Err(ModelError::ZeroWeight { tx: 0, rx: 0 })
        );
        assert_eq!(
            Instance::new(2, 2, 1, vec![Edge::new(0, 0, 1), Edge::new(0, 0, 2)]),
            Err(ModelError::DuplicateEdge { tx: 0, rx: 0 })
        );
    }
}

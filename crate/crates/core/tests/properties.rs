//! Property tests over random instances: structural invariants of the
//! matching primitives and the validity of every solver's output.

use std::collections::BTreeSet;

use proptest::prelude::*;

use pbs_core::baselines::{round_up_weights, run_a1, run_apbs};
use pbs_core::exact::min_total_duration_decomposition;
use pbs_core::gen::{generate_instance, GenSpec};
use pbs_core::graph::BipGraph;
use pbs_core::matching::{
    load_greedy_maximal_matching, max_cardinality_matching, regular_decomposition, regularize,
    Matching,
};
use pbs_core::model::{
    lower_bound, makespan, node_metrics, validate_schedule, Edge, Instance, Schedule,
};
use pbs_core::sga::{run_sga, split_graph};
use pbs_core::textio::{emit_instance, emit_schedule, parse_instance, parse_schedule};

fn arb_instance() -> impl Strategy<Value = Instance> {
    (1usize..=6, 1usize..=6, 1u64..=8).prop_flat_map(|(n, m, d)| {
        proptest::collection::vec(((0..n, 0..m), 1u64..=12), 0..=(n * m).min(18)).prop_map(
            move |pairs| {
                let mut seen = BTreeSet::new();
                let edges: Vec<Edge> = pairs
                    .into_iter()
                    .filter(|((tx, rx), _)| seen.insert((*tx, *rx)))
                    .map(|((tx, rx), w)| Edge::new(tx, rx, w))
                    .collect();
                Instance::new(n, m, d, edges).unwrap()
            },
        )
    })
}

fn graph_of(instance: &Instance) -> BipGraph {
    BipGraph::from_instance(instance)
}

/// Exhaustive maximum-matching size, the independent reference for Kuhn.
fn brute_force_max_matching(edges: &[(usize, usize)]) -> usize {
    fn rec(idx: usize, edges: &[(usize, usize)], used: &mut Vec<(usize, usize)>) -> usize {
        if idx == edges.len() {
            return used.len();
        }
        let (tx, rx) = edges[idx];
        let mut best = rec(idx + 1, edges, used);
        if used.iter().all(|&(a, b)| a != tx && b != rx) {
            used.push((tx, rx));
            best = best.max(rec(idx + 1, edges, used));
            used.pop();
        }
        best
    }
    rec(0, edges, &mut Vec::new())
}

fn assert_valid_and_bounded(instance: &Instance, schedule: &Schedule) {
    if let Err(report) = validate_schedule(instance, schedule) {
        panic!("invalid schedule for {instance:?}: {report}");
    }
    let ms = makespan(schedule, instance.overhead());
    assert!(ms >= lower_bound(instance));
    // Makespan decomposes exactly into durations plus per-packet overhead.
    let durations: u64 = schedule.packets().iter().map(|p| p.duration()).sum();
    assert_eq!(
        ms,
        durations + instance.overhead() * schedule.packets().len() as u64
    );
}

proptest! {
    #[test]
    fn solvers_produce_valid_schedules(instance in arb_instance()) {
        assert_valid_and_bounded(&instance, &run_sga(&instance));
        assert_valid_and_bounded(&instance, &run_a1(&instance));
        assert_valid_and_bounded(&instance, &run_apbs(&instance));
    }

    #[test]
    fn metrics_transpose_invariant(instance in arb_instance()) {
        let t = instance.transposed();
        let (a, b) = (node_metrics(&instance), node_metrics(&t));
        prop_assert_eq!(a.max_load, b.max_load);
        prop_assert_eq!(a.max_degree, b.max_degree);
    }

    #[test]
    fn load_greedy_is_maximal(instance in arb_instance()) {
        let g = graph_of(&instance);
        let m = load_greedy_maximal_matching(&g);
        let mut tx_used = vec![false; g.n_tx()];
        let mut rx_used = vec![false; g.n_rx()];
        for &(tx, rx) in m.edges() {
            prop_assert!(!tx_used[tx] && !rx_used[rx], "not a matching");
            tx_used[tx] = true;
            rx_used[rx] = true;
        }
        for (tx, rx, _) in g.iter() {
            prop_assert!(tx_used[tx] || rx_used[rx], "edge ({}, {}) extends it", tx, rx);
        }
    }

    #[test]
    fn kuhn_matches_brute_force(
        (n, m, pairs) in (1usize..=8, 1usize..=8).prop_flat_map(|(n, m)| {
            let pair_set = proptest::collection::btree_set((0..n, 0..m), 0..=14);
            (Just(n), Just(m), pair_set)
        })
    ) {
        let mut g = BipGraph::new(n, m);
        for &(tx, rx) in &pairs {
            g.insert(tx, rx, 1);
        }
        let pairs: Vec<(usize, usize)> = pairs.into_iter().collect();
        let found = max_cardinality_matching(&g);
        prop_assert_eq!(found.len(), brute_force_max_matching(&pairs));
    }

    #[test]
    fn regularize_then_decompose(instance in arb_instance()) {
        let g = graph_of(&instance);
        prop_assume!(!g.is_empty());
        let edges = g.edge_vec();
        let rg = regularize(&edges);

        // Exact degree everywhere, real edges preserved.
        let n = rg.left.len();
        let mut ld = vec![0usize; n];
        let mut rd = vec![0usize; n];
        let mut reals = 0;
        for e in &rg.edges {
            ld[e.left] += 1;
            rd[e.right] += 1;
            if !e.is_dummy() {
                reals += 1;
            }
        }
        prop_assert!(ld.iter().chain(rd.iter()).all(|&deg| deg == rg.degree));
        prop_assert_eq!(reals, edges.len());

        // Exactly k perfect matchings partitioning the multiset.
        let ms = regular_decomposition(&rg);
        prop_assert_eq!(ms.len(), rg.degree);
        let mut consumed = Vec::new();
        for m in &ms {
            prop_assert_eq!(m.len(), n);
            let lefts: BTreeSet<usize> = m.iter().map(|e| e.left).collect();
            let rights: BTreeSet<usize> = m.iter().map(|e| e.right).collect();
            prop_assert_eq!(lefts.len(), n);
            prop_assert_eq!(rights.len(), n);
            consumed.extend(m.iter().map(|e| (e.left, e.right, e.source, e.weight)));
        }
        let mut expected: Vec<_> = rg
            .edges
            .iter()
            .map(|e| (e.left, e.right, e.source, e.weight))
            .collect();
        consumed.sort();
        expected.sort();
        prop_assert_eq!(consumed, expected);
    }

    #[test]
    fn split_partitions_edges(instance in arb_instance()) {
        let st = split_graph(&instance);
        let d = instance.overhead();
        for (_, _, w) in st.large.iter() {
            prop_assert!(w >= d);
        }
        for (_, _, w) in st.small.iter() {
            prop_assert!(w >= 1 && w < d);
        }
        prop_assert_eq!(
            st.large.edge_count() + st.small.edge_count(),
            instance.edges().len()
        );
    }

    #[test]
    fn sga_packets_split_by_duration_class(instance in arb_instance()) {
        let d = instance.overhead();
        let s = run_sga(&instance);
        let durations: Vec<u64> = s.packets().iter().map(|p| p.duration()).collect();
        let boundary = durations
            .iter()
            .position(|&x| x < d)
            .unwrap_or(durations.len());
        prop_assert!(durations[..boundary].iter().all(|&x| x >= d));
        prop_assert!(durations[boundary..].iter().all(|&x| x >= 1 && x < d));
    }

    #[test]
    fn apbs_durations_capped_at_slice(instance in arb_instance()) {
        let s = run_apbs(&instance);
        let slice = instance.overhead() + 1;
        prop_assert!(s.packets().iter().all(|p| p.duration() <= slice));
        // Packet count equals the unit multigraph's maximum degree.
        let rounded = round_up_weights(&instance);
        let mut tx_units = vec![0u64; instance.n_transmitters()];
        let mut rx_units = vec![0u64; instance.n_receivers()];
        for re in &rounded.edges {
            tx_units[re.edge.tx] += re.units;
            rx_units[re.edge.rx] += re.units;
        }
        let k = tx_units.iter().chain(rx_units.iter()).copied().max().unwrap_or(0);
        prop_assert_eq!(s.packets().len() as u64, k);
    }

    #[test]
    fn zero_overhead_decomposition_reaches_w(instance in arb_instance()) {
        let s = min_total_duration_decomposition(&instance);
        prop_assert!(validate_schedule(&instance, &s).is_ok());
        let total: u64 = s.packets().iter().map(|p| p.duration()).sum();
        prop_assert_eq!(total, node_metrics(&instance).max_load);
    }

    #[test]
    fn instance_text_round_trip(instance in arb_instance()) {
        prop_assert_eq!(parse_instance(&emit_instance(&instance)).unwrap(), instance);
    }

    #[test]
    fn schedule_text_round_trip(instance in arb_instance()) {
        let s = run_sga(&instance);
        prop_assert_eq!(parse_schedule(&emit_schedule(&s)).unwrap(), s);
    }

    #[test]
    fn generator_is_deterministic(seed in any::<u64>()) {
        let spec = GenSpec {
            n_tx: 5,
            n_rx: 4,
            w_max: 17,
            density: 0.7,
            d: 3,
            seed,
        };
        let a = generate_instance(&spec).unwrap();
        let b = generate_instance(&spec).unwrap();
        prop_assert_eq!(emit_instance(&a), emit_instance(&b));
    }
}

/// Augmentation never rematches an existing edge and only consumes free
/// endpoints. Deterministic scan, so plain tests suffice alongside the
/// proptest coverage above.
#[test]
fn augmentation_preserves_base_matching() {
    let mut small = BipGraph::new(3, 3);
    small.insert(1, 1, 2);
    small.insert(1, 2, 3);
    small.insert(2, 2, 1);
    let base = Matching::new(vec![(0, 0)]);
    let (extended, consumed) = pbs_core::matching::augment_with_small_edges(&base, &small);
    // (1,2) is heaviest and free; (2,2) then blocked on rx2; (1,1) on tx1.
    assert_eq!(extended.sorted_edges(), vec![(0, 0), (1, 2)]);
    assert_eq!(consumed, vec![Edge::new(1, 2, 3)]);
}

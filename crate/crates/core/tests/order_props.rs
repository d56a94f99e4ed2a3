use std::collections::BTreeSet;

use proptest::prelude::*;

use hyperlag::enumeration::{count_left_compressed, enumerate_left_compressed, enumerate_removals};
use hyperlag::tuple_order::{
    all_tuples, binomial, colex_less, colex_less_by_symmetric_difference, colex_rank, colex_unrank,
    descendants, direct_descendants, is_descendant,
};
use hyperlag::{Hypergraph, RTuple};

fn tuple(r: usize, max: u32) -> impl Strategy<Value = RTuple> {
    proptest::sample::subsequence((1..=max).collect::<Vec<_>>(), r)
        .prop_map(|v| RTuple::new(v).unwrap())
}

fn graph(r: usize, n: u32) -> impl Strategy<Value = Hypergraph> {
    let all = all_tuples(r, n).unwrap();
    let len = all.len();
    proptest::sample::subsequence(all, 0..=len).prop_map(move |e| Hypergraph::new(r, n, e).unwrap())
}

/// Reference: largest element of the symmetric difference decides.
fn colex_reference(a: &RTuple, b: &RTuple) -> bool {
    let sa: BTreeSet<u32> = a.elems().iter().copied().collect();
    let sb: BTreeSet<u32> = b.elems().iter().copied().collect();
    sa.symmetric_difference(&sb)
        .max()
        .is_some_and(|m| sb.contains(m))
}

proptest! {
    #[test]
    fn colex_is_a_strict_total_order((r, a, b, c) in (2usize..=5).prop_flat_map(|r| (Just(r), tuple(r, 12), tuple(r, 12), tuple(r, 12)))) {
        let _ = r;
        let ab = colex_less(&a, &b).unwrap();
        let ba = colex_less(&b, &a).unwrap();
        prop_assert_eq!([ab, ba, a == b].iter().filter(|&&x| x).count(), 1);
        if ab && colex_less(&b, &c).unwrap() {
            prop_assert!(colex_less(&a, &c).unwrap());
        }
        prop_assert_eq!(ab, colex_less_by_symmetric_difference(&a, &b).unwrap());
        prop_assert_eq!(ab, colex_reference(&a, &b));
        prop_assert_eq!(ab, colex_rank(&a) < colex_rank(&b));
    }

    #[test]
    fn rank_unrank_round_trip(r in 2usize..=5, k in 1u64..=100_000) {
        let t = colex_unrank(r, k).unwrap();
        prop_assert_eq!(t.r(), r);
        prop_assert_eq!(colex_rank(&t), k);
    }

    #[test]
    fn descendants_are_dominated(a in (2usize..=4).prop_flat_map(|r| tuple(r, 9))) {
        for d in descendants(&a) {
            prop_assert!(is_descendant(&d, &a).unwrap());
            prop_assert!(d.elems().iter().zip(a.elems()).all(|(x, y)| x <= y));
            prop_assert!(d.sum() < a.sum());
        }
        for d in direct_descendants(&a, a.max_elem()) {
            prop_assert_eq!(d.sum() + 1, a.sum());
        }
    }

    #[test]
    fn left_compression_characterisations_agree(g in (2usize..=3).prop_flat_map(|r| graph(r, 6))) {
        prop_assert_eq!(g.is_left_compressed(), g.is_left_compressed_by_descendants());
        let closed = g.edges().iter().all(|e| descendants(e).iter().all(|d| g.has_edge(d)));
        prop_assert_eq!(g.is_left_compressed(), closed);
    }

    #[test]
    fn compress_preserves_size_and_compresses(g in (2usize..=4).prop_flat_map(|r| graph(r, 6))) {
        let c = g.compress();
        prop_assert_eq!(c.edge_count(), g.edge_count());
        prop_assert!(c.is_left_compressed());
        prop_assert_eq!(c.compress(), c.clone());
    }

    #[test]
    fn edge_list_round_trip(g in (2usize..=4).prop_flat_map(|r| graph(r, 7))) {
        let text = g.to_edge_list();
        let back: Hypergraph = text.parse().unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(back.to_edge_list(), text);
    }
}

#[test]
fn descendant_relation_is_a_strict_partial_order() {
    for r in 2..=4 {
        for t in (r as u32)..=7 {
            let all = all_tuples(r, t).unwrap();
            for a in &all {
                assert!(!is_descendant(a, a).unwrap());
                for b in &all {
                    let ab = is_descendant(a, b).unwrap();
                    if ab {
                        assert!(!is_descendant(b, a).unwrap());
                    }
                    if t <= 6 {
                        // transitive closure of direct descendants
                        assert_eq!(ab, descendants(b).contains(a), "{a} {b}");
                    }
                }
            }
        }
    }
}

/// Brute force: every k-subset of `[t]^(r)` whose complement is
/// left-compressed, as sorted removal lists.
fn brute_force_removals(r: usize, t: u32, k: usize) -> BTreeSet<Vec<RTuple>> {
    let all = all_tuples(r, t).unwrap();
    let mut out = BTreeSet::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let removed: Vec<RTuple> = idx.iter().map(|&i| all[i].clone()).collect();
        let g =
            Hypergraph::new(r, t, all.iter().filter(|e| !removed.contains(e)).cloned()).unwrap();
        if g.is_left_compressed() {
            out.insert(removed);
        }
        // next k-combination of 0..all.len()
        let Some(pos) = (0..k).rev().find(|&p| idx[p] < all.len() - k + p) else {
            break;
        };
        idx[pos] += 1;
        for q in pos + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
    out
}

#[test]
fn enumeration_matches_brute_force() {
    for t in 3..=5u32 {
        let total = binomial(t as u64, 3) as usize;
        for k in 0..=total {
            let got: BTreeSet<Vec<RTuple>> = enumerate_removals(3, t, k as u64)
                .unwrap()
                .map(|s| s.removed.into_iter().collect())
                .collect();
            assert_eq!(got, brute_force_removals(3, t, k), "t = {t}, k = {k}");
            let m = (total - k) as u64;
            assert_eq!(count_left_compressed(3, t, m).unwrap(), got.len() as u64);
        }
    }
}

#[test]
fn enumerated_graphs_are_distinct_and_compressed() {
    let graphs: Vec<Hypergraph> = enumerate_left_compressed(3, 7, 25).unwrap().collect();
    let distinct: BTreeSet<String> = graphs.iter().map(Hypergraph::to_edge_list).collect();
    assert_eq!(distinct.len(), graphs.len());
    assert!(graphs
        .iter()
        .all(|g| g.is_left_compressed() && g.edge_count() == 25));
}

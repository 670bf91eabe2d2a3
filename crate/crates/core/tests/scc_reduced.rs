#![allow(clippy::needless_range_loop)]

mod common;

use atsp_core::scc::tarjan_scc;
use atsp_core::structural::propagate_reduced_path;
use atsp_core::{GraphVar, ReducedState};
use proptest::prelude::*;

/// Reachability by Floyd–Warshall closure.
fn reach(gv: &GraphVar) -> Vec<Vec<bool>> {
    let n = gv.n();
    let mut r = vec![vec![false; n]; n];
    for (u, row) in r.iter_mut().enumerate() {
        row[u] = true;
        for &v in gv.succ(u) {
            row[v as usize] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            if r[i][k] {
                for j in 0..n {
                    if r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
    }
    r
}

fn graph(n: usize, bits: &[bool]) -> GraphVar {
    let arcs = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|&(u, v)| bits[(u * n + v) % bits.len()]);
    GraphVar::new(n, 0, n - 1, arcs)
}

#[test]
fn single_node_components_on_a_chain() {
    let gv = GraphVar::new(4, 0, 3, [(0, 1), (1, 2), (2, 3)]);
    let st = ReducedState::build(&gv);
    assert_eq!(st.n_r(), 4);
    assert!(st.reduced_is_acyclic());
}

#[test]
fn transitive_closure_needs_a_path() {
    let gv = GraphVar::new(4, 0, 3, [(0, 1), (0, 2), (1, 3), (2, 3)]);
    let st = ReducedState::build(&gv);
    assert!(st.transitive_closure().is_err());
}

#[test]
fn doors_on_the_transitive_fixture() {
    let inst = common::load_fixture("transitive_shortcuts.txt");
    let st = ReducedState::build(&inst.graph_var());
    assert_eq!(st.n_r(), 4);
    let def = st.scc_of(3);
    assert_eq!(st.size(def), 3);
    // D and E receive arcs from outside (C->D, A->E); D and F leave it.
    assert_eq!(st.indoor_count(def), 2);
    assert_eq!(st.outdoor_count(def), 1);
    assert!(st.is_indoor(3) && st.is_indoor(4) && !st.is_indoor(5));
    assert!(st.is_outdoor(5));
}

proptest! {
    #[test]
    fn components_match_mutual_reachability(n in 3usize..10, bits in proptest::collection::vec(prop::bool::weighted(0.3), 100)) {
        let gv = graph(n, &bits);
        let r = reach(&gv);
        let st = ReducedState::build(&gv);
        for u in 0..n {
            for v in 0..n {
                prop_assert_eq!(st.scc_of(u) == st.scc_of(v), r[u][v] && r[v][u]);
            }
        }
        prop_assert!(st.reduced_is_acyclic());
        prop_assert!(st.check_consistency(&gv));
        let all: Vec<usize> = (0..n).collect();
        prop_assert_eq!(tarjan_scc(&gv, &all).len(), st.n_r());
    }

    #[test]
    fn repair_equals_rebuild(
        n in 4usize..12,
        bits in proptest::collection::vec(prop::bool::weighted(0.6), 144),
        picks in proptest::collection::vec(proptest::collection::vec(0usize..1000, 1..4), 1..30),
    ) {
        let mut gv = graph(n, &bits);
        let mut st = ReducedState::build(&gv);
        for batch in picks {
            let arcs = gv.arcs();
            if arcs.is_empty() { break; }
            let mut removed = Vec::new();
            for p in batch {
                let (u, v) = arcs[p % arcs.len()];
                if gv.remove_arc(u, v).unwrap() { removed.push((u, v)); }
            }
            st.repair_after_deletions(&gv, &removed);
            prop_assert_eq!(st.canonical_form(), ReducedState::build(&gv).canonical_form());
            prop_assert!(st.check_consistency(&gv));
        }
    }

    #[test]
    fn closure_matches_reachability_on_paths(seed in 0u64..500) {
        let inst = atsp_core::generate::gen_random(8, seed, (1, 9), 0.5, 3);
        let mut gv = inst.graph_var();
        let mut st = ReducedState::new(inst.n, inst.s, inst.e);
        if propagate_reduced_path(&mut gv, &mut st).is_ok() {
            let r = reach(&gv);
            let tc = st.transitive_closure().unwrap();
            for u in 0..inst.n {
                let want: Vec<usize> = (0..inst.n).filter(|&v| v != u && r[u][v]).collect();
                prop_assert_eq!(&tc[u], &want);
            }
        }
    }
}

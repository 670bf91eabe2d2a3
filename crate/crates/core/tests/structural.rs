#![allow(clippy::needless_range_loop)]

mod common;

use std::collections::BTreeSet;

use atsp_core::generate::gen_random;
use atsp_core::structural::alldifferent::AllDifferent;
use atsp_core::structural::arborescence::{arborescence_infeasible, dominators, DomTree};
use atsp_core::structural::{apply_door_rules, bounds_consistent_alldiff, propagate_reduced_path};
use atsp_core::structural::{Degree, Direction, NoCycle, Positions};
use atsp_core::{GraphVar, Instance, Outcome, Propagator, ReducedState, Scheduler, Store, INFINITE};
use common::enumerate_paths;
use proptest::prelude::*;

type ArcSet = BTreeSet<(usize, usize)>;

fn hamiltonian_arcs(inst: &Instance) -> (ArcSet, Option<ArcSet>) {
    let mut some = BTreeSet::new();
    let mut all: Option<ArcSet> = None;
    for (_, p) in enumerate_paths(inst, i64::MAX) {
        let arcs: BTreeSet<_> = p.windows(2).map(|w| (w[0], w[1])).collect();
        some.extend(arcs.iter().copied());
        all = Some(match all {
            None => arcs,
            Some(a) => a.intersection(&arcs).copied().collect(),
        });
    }
    (some, all)
}

fn run_alone(inst: &Instance, make: impl FnOnce(&mut GraphVar) -> Box<dyn Propagator>) -> (Outcome, GraphVar) {
    let mut st = Store::new(inst, INFINITE);
    let p = make(&mut st.gv);
    let mut sched = Scheduler::new();
    sched.add(p);
    let out = sched.run_fixpoint(&mut st);
    (out, st.gv)
}

fn random_instance(seed: u64, n: usize) -> Instance {
    gen_random(n, seed, (1, 20), 0.45, 1 + (seed % 3) as usize)
}

#[test]
fn degree_enforces_a_lone_successor() {
    let f = atsp_core::FORBIDDEN;
    let m = vec![f, 1, 1, f, f, f, f, 1, f, 1, f, 1, f, f, f, f];
    let inst = Instance::from_matrix("d", 4, 0, 3, m);
    let (out, gv) = run_alone(&inst, |_| Box::new(Degree));
    assert_eq!(out, Outcome::Fixpoint);
    assert!(gv.is_mandatory(1, 3));
}

#[test]
fn degree_fails_without_successor() {
    let f = atsp_core::FORBIDDEN;
    let m = vec![f, 1, f, f, f, f, f, f, f];
    let inst = Instance::from_matrix("d", 3, 0, 2, m);
    let (out, _) = run_alone(&inst, |_| Box::new(Degree));
    assert_eq!(out, Outcome::Contradiction);
}

#[test]
fn nocycle_closes_reverse_arc() {
    let inst = Instance::from_matrix("c", 5, 0, 4, vec![1; 25]);
    let mut st = Store::new(&inst, INFINITE);
    let nc = NoCycle::new(&mut st.gv);
    let mut sched = Scheduler::new();
    sched.add(Box::new(nc));
    st.gv.enforce_arc(1, 2).unwrap();
    st.gv.enforce_arc(2, 3).unwrap();
    assert_eq!(sched.run_fixpoint(&mut st), Outcome::Fixpoint);
    assert!(!st.gv.has_arc(3, 1));
}

#[test]
fn nocycle_rejects_early_s_to_e_path() {
    let inst = Instance::from_matrix("c", 4, 0, 3, vec![1; 16]);
    let mut st = Store::new(&inst, INFINITE);
    let nc = NoCycle::new(&mut st.gv);
    let mut sched = Scheduler::new();
    sched.add(Box::new(nc));
    st.gv.enforce_arc(0, 1).unwrap();
    st.gv.enforce_arc(1, 3).unwrap();
    assert_eq!(sched.run_fixpoint(&mut st), Outcome::Contradiction);
}

#[test]
fn bc_alldiff_pigeonhole() {
    let mut lo = vec![0, 0, 0];
    let mut hi = vec![1, 1, 1];
    assert!(bounds_consistent_alldiff(&mut lo, &mut hi).is_err());
}

#[test]
fn bc_alldiff_hall_interval() {
    let mut lo = vec![0, 0, 0];
    let mut hi = vec![1, 1, 3];
    assert_eq!(bounds_consistent_alldiff(&mut lo, &mut hi), Ok(true));
    assert_eq!((lo[2], hi[2]), (2, 3));
}

#[test]
fn door_rules_drop_arcs_into_a_lone_indoor() {
    let inst = common::load_fixture("transitive_shortcuts.txt");
    let mut gv = inst.graph_var();
    let mut st = ReducedState::new(inst.n, inst.s, inst.e);
    propagate_reduced_path(&mut gv, &mut st).unwrap();
    // After A->E goes, D is the only indoor of {D,E,F}: F->D must go. F is
    // the only outdoor, so D->E->F is forced.
    apply_door_rules(&mut gv, &st).unwrap();
    assert!(!gv.has_arc(5, 3));
}

/// Brute-force bounds support over all assignments of distinct values.
fn bc_oracle(lo: &[i64], hi: &[i64]) -> Option<(Vec<i64>, Vec<i64>)> {
    fn go(i: usize, lo: &[i64], hi: &[i64], cur: &mut Vec<i64>, acc: &mut Option<(Vec<i64>, Vec<i64>)>) {
        if i == lo.len() {
            let (mn, mx) = acc.get_or_insert_with(|| (cur.clone(), cur.clone()));
            for k in 0..cur.len() {
                mn[k] = mn[k].min(cur[k]);
                mx[k] = mx[k].max(cur[k]);
            }
            return;
        }
        for v in lo[i]..=hi[i] {
            if !cur.contains(&v) {
                cur.push(v);
                go(i + 1, lo, hi, cur, acc);
                cur.pop();
            }
        }
    }
    let mut acc = None;
    go(0, lo, hi, &mut Vec::new(), &mut acc);
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bc_alldiff_matches_brute_force(iv in proptest::collection::vec((0i64..7, 0i64..4), 1..6)) {
        let mut lo: Vec<i64> = iv.iter().map(|&(a, _)| a).collect();
        let mut hi: Vec<i64> = iv.iter().map(|&(a, w)| a + w).collect();
        let want = bc_oracle(&lo, &hi);
        match bounds_consistent_alldiff(&mut lo, &mut hi) {
            Err(_) => prop_assert!(want.is_none()),
            Ok(_) => {
                let (mn, mx) = want.expect("filter succeeded on an infeasible set");
                prop_assert_eq!(lo, mn);
                prop_assert_eq!(hi, mx);
            }
        }
    }

    #[test]
    fn dominators_match_reachability_cuts(n in 3usize..9, bits in proptest::collection::vec(prop::bool::weighted(0.4), 81)) {
        let arcs = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|&(u, v)| bits[u * n + v]);
        let gv = GraphVar::new(n, 0, n - 1, arcs);
        let reachable = |skip: Option<usize>| {
            let mut seen = vec![false; n];
            let mut stack = vec![0];
            seen[0] = true;
            while let Some(u) = stack.pop() {
                for &v in gv.succ(u) {
                    let v = v as usize;
                    if !seen[v] && Some(v) != skip {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            seen
        };
        let base = reachable(None);
        if let Some(idom) = dominators(n, 0, |v| gv.succ(v), |v| gv.pred(v)) {
            prop_assert!(base.iter().all(|&b| b));
            let dt = DomTree::new(&idom, 0);
            for d in 1..n {
                let cut = reachable(Some(d));
                for u in 0..n {
                    if u != d {
                        prop_assert_eq!(dt.dominates(d, u), !cut[u], "d={} u={}", d, u);
                    }
                }
            }
        } else {
            prop_assert!(!base.iter().all(|&b| b));
        }
    }

    #[test]
    fn arborescence_removals_are_sound(seed in 0u64..400, n in 4usize..8) {
        let inst = random_instance(seed, n);
        let (some, _) = hamiltonian_arcs(&inst);
        let gv = inst.graph_var();
        for dir in [Direction::Forward, Direction::Backward] {
            if let Some(arcs) = arborescence_infeasible(&gv, dir) {
                for a in arcs {
                    prop_assert!(!some.contains(&a), "{:?} removed {:?}", dir, a);
                }
            }
        }
    }

    #[test]
    fn alldifferent_matches_brute_force(seed in 0u64..400, n in 3usize..7) {
        let inst = random_instance(seed, n);
        let gv = inst.graph_var();
        // Arcs in some bijection rows V\{e} -> cols V\{s}.
        let rows: Vec<usize> = (0..n).filter(|&v| v != inst.e).collect();
        let mut supported = BTreeSet::new();
        let mut perm: Vec<usize> = (0..n).filter(|&v| v != inst.s).collect();
        fn permute(k: usize, perm: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
            if k == perm.len() { f(perm); return; }
            for i in k..perm.len() {
                perm.swap(k, i);
                permute(k + 1, perm, f);
                perm.swap(k, i);
            }
        }
        permute(0, &mut perm, &mut |p| {
            if rows.iter().zip(p).all(|(&r, &c)| gv.has_arc(r, c)) {
                supported.extend(rows.iter().copied().zip(p.iter().copied()));
            }
        });
        let mut ad = AllDifferent::new(n);
        match ad.infeasible_arcs(&gv) {
            Err(_) => prop_assert!(supported.is_empty()),
            Ok(bad) => {
                let bad: BTreeSet<_> = bad.into_iter().collect();
                let want: BTreeSet<_> = gv.arcs().into_iter().filter(|a| !supported.contains(a)).collect();
                prop_assert_eq!(bad, want);
            }
        }
    }

    #[test]
    fn positions_and_reduced_path_are_sound(seed in 0u64..400, n in 4usize..9) {
        let inst = random_instance(seed, n);
        let (some, all) = hamiltonian_arcs(&inst);
        let all = all.unwrap_or_default();
        let initial: BTreeSet<_> = inst.graph_var().arcs().into_iter().collect();
        let mut gv = inst.graph_var();
        let pos = Positions::new(&mut gv);
        prop_assert!(pos.filter(&mut gv, None).is_ok());
        for a in initial.difference(&gv.arcs().into_iter().collect()) {
            prop_assert!(!some.contains(a), "positions removed {:?}", a);
        }
        let mut gv = inst.graph_var();
        let mut st = ReducedState::new(inst.n, inst.s, inst.e);
        prop_assert!(propagate_reduced_path(&mut gv, &mut st).is_ok());
        prop_assert!(apply_door_rules(&mut gv, &st).is_ok());
        for a in initial.difference(&gv.arcs().into_iter().collect()) {
            prop_assert!(!some.contains(a), "reduced path removed {:?}", a);
        }
        for a in gv.mandatory_arcs() {
            prop_assert!(all.contains(&a), "reduced path enforced {:?}", a);
        }
    }
}

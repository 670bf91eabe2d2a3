mod common;

use atsp_core::oracle::{dp_oracle, INFEASIBLE};
use atsp_core::par;
use atsp_core::search::heuristics::sparse_choice;
use atsp_core::search::{decide, Decision};
use atsp_core::{solve, Heuristic, Instance, Mode, ModelConfig, Relax, SolveConfig, Status, Store, FORBIDDEN, INFINITE};
use common::random_suite;
use proptest::prelude::*;

fn cfg(h: Heuristic, model: ModelConfig, relax: Relax, mode: Mode) -> SolveConfig {
    SolveConfig { mode, heuristic: h, model, relax, ..SolveConfig::default() }
}

fn graph(n: usize, arcs: &[(usize, usize)]) -> Instance {
    let mut m = vec![FORBIDDEN; n * n];
    for &(u, v) in arcs {
        m[u * n + v] = 1;
    }
    Instance::from_matrix("g", n, 0, n - 1, m)
}

#[test]
fn sparse_picks_min_degree_with_most_shared_successors() {
    // 1 and 2 both have out-degree 2; 2 shares both successors with 1.
    let inst = graph(6, &[(0, 1), (0, 2), (0, 3), (1, 3), (1, 4), (2, 3), (2, 4), (3, 1), (3, 2), (3, 4), (3, 5), (4, 5), (4, 1), (4, 2)]);
    let gv = inst.graph_var();
    let (x, succ) = sparse_choice(&gv).unwrap();
    assert_eq!(x, 1);
    assert_eq!(succ, vec![(3, 2), (4, 2)]);
    let st = Store::new(&inst, INFINITE);
    assert_eq!(decide(Heuristic::EnforceSparse, &st).unwrap(), Decision::Enforce(1, 3));
    assert_eq!(decide(Heuristic::Sparse, &st).unwrap(), Decision::Enforce(1, 3));
}

#[test]
fn sparse_splits_wide_domains_in_half() {
    let n = 8;
    let mut arcs = Vec::new();
    for u in 0..n - 1 {
        for v in 1..n {
            if u != v && !(u == 0 && v == n - 1) {
                arcs.push((u, v));
            }
        }
    }
    let inst = graph(n, &arcs);
    let st = Store::new(&inst, INFINITE);
    match decide(Heuristic::Sparse, &st).unwrap() {
        Decision::SplitSuccessors { node, keep } => {
            let d = st.gv.out_degree(node);
            assert_eq!(keep.len(), d / 2);
            let mut left = st.gv.clone();
            let mut right = st.gv.clone();
            Decision::SplitSuccessors { node, keep: keep.clone() }.apply(&mut left).unwrap();
            Decision::SplitSuccessors { node, keep: keep.clone() }.apply_negation(&mut right).unwrap();
            let mut l: Vec<u32> = left.succ(node).to_vec();
            let r: Vec<u32> = right.succ(node).to_vec();
            assert!(l.iter().all(|y| !r.contains(y)));
            l.extend(r);
            l.sort_unstable();
            let mut all = st.gv.succ(node).to_vec();
            all.sort_unstable();
            assert_eq!(l, all);
        }
        d => panic!("expected a split, got {d:?}"),
    }
}

#[test]
fn prove_mode_brackets_the_optimum() {
    for inst in random_suite(40, &[5, 6, 7, 8], 11) {
        let opt = dp_oracle(&inst).unwrap();
        for h in Heuristic::ALL {
            if opt == INFEASIBLE {
                let r = solve(&inst, &cfg(h, ModelConfig::Basic, Relax::Tree, Mode::Optimize));
                assert_eq!(r.status, Status::Infeasible, "{}", inst.name);
                continue;
            }
            let r = solve(&inst, &cfg(h, ModelConfig::Basic, Relax::Tree, Mode::Prove(opt)));
            assert_eq!(r.status, Status::Proven, "{} {h}", inst.name);
            let path = r.path.unwrap();
            assert!(inst.is_hamiltonian_path(&path));
            assert!(inst.path_cost(&path).unwrap() <= opt);
            let r = solve(&inst, &cfg(h, ModelConfig::Basic, Relax::Tree, Mode::Prove(opt - 1)));
            assert_eq!(r.status, Status::Infeasible, "{} {h}", inst.name);
        }
    }
}

#[test]
fn every_configuration_finds_the_optimum() {
    let suite = random_suite(200, &[5, 6, 7, 8], 23);
    let failures: Vec<String> = par::map(&suite, |inst| {
        let opt = dp_oracle(inst).unwrap();
        let mut bad = Vec::new();
        for h in Heuristic::ALL {
            for m in ModelConfig::ALL {
                for rx in Relax::ALL {
                    let r = solve(inst, &cfg(h, m, rx, Mode::Optimize));
                    let got = if r.status == Status::Infeasible { INFEASIBLE } else { r.objective.unwrap_or(-1) };
                    let path_ok = r.path.as_ref().is_none_or(|p| inst.path_cost(p) == r.objective);
                    if got != opt || !path_ok {
                        bad.push(format!("{} {h} {m} {rx}: got {got} want {opt}", inst.name));
                    }
                }
            }
        }
        bad
    })
    .into_iter()
    .flatten()
    .collect();
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn node_limit_stops_search() {
    let inst = atsp_core::generate::gen_random(12, 5, (1, 100), 1.0, 1);
    let r = solve(&inst, &SolveConfig { node_limit: Some(3), ..SolveConfig::default() });
    assert!(r.nodes <= 3);
    if r.status == Status::NodeLimit {
        assert!(r.status.is_limit());
    }
}

#[test]
fn root_counts_as_a_node() {
    let inst = graph(3, &[(0, 1), (1, 2)]);
    let r = solve(&inst, &SolveConfig::default());
    assert_eq!(r.status, Status::Optimal);
    assert_eq!(r.objective, Some(2));
    assert_eq!(r.path, Some(vec![0, 1, 2]));
    assert_eq!(r.nodes, 1);
}

#[test]
fn exhausted_trees_are_full_binary_trees() {
    for inst in random_suite(30, &[6, 7, 8], 5) {
        for h in Heuristic::ALL {
            let r = solve(&inst, &cfg(h, ModelConfig::Basic, Relax::Tree, Mode::Optimize));
            assert!(!r.status.is_limit());
            assert_eq!(r.nodes % 2, 1, "{} {h}: {} nodes", inst.name, r.nodes);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn solving_is_deterministic(seed in 0u64..5000, n in 5usize..10, hi in 0usize..5) {
        let inst = atsp_core::generate::gen_random(n, seed, (1, 50), 0.7, 1 + (seed % 3) as usize);
        let c = cfg(Heuristic::ALL[hi], ModelConfig::All, Relax::Both, Mode::Optimize);
        let a = solve(&inst, &c);
        let b = solve(&inst, &c);
        prop_assert_eq!(a.status, b.status);
        prop_assert_eq!(a.nodes, b.nodes);
        prop_assert_eq!(a.path, b.path);
        prop_assert_eq!(a.objective, b.objective);
    }
}


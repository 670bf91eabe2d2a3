mod common;

use std::collections::BTreeMap;

use atsp_core::bench::{append_csv, bench_instances, bench_suite, read_csv, write_csv, BenchConfig, BenchOptions, CSV_HEADER};
use atsp_core::generate::gen_random;
use atsp_core::oracle::{dp_oracle, dp_oracle_path, INFEASIBLE};
use atsp_core::search::build_model;
use atsp_core::tsplib::{path_to_circuit, write_full_matrix};
use atsp_core::{Heuristic, ModelConfig, Outcome, ReducedState, Relax, Store, INFINITE};
use common::{brute_force_opt, random_suite};

fn configs() -> Vec<BenchConfig> {
    vec![
        BenchConfig { heuristic: Heuristic::EnforceSparse, model: ModelConfig::Basic, relax: Relax::Tree },
        BenchConfig { heuristic: Heuristic::RemoveMaxRc, model: ModelConfig::All, relax: Relax::Both },
    ]
}

#[test]
fn dp_matches_brute_force() {
    for inst in random_suite(100, &[9], 41) {
        let want = brute_force_opt(&inst).unwrap_or(INFEASIBLE);
        assert_eq!(dp_oracle(&inst).unwrap(), want, "{}", inst.name);
        if let Some((c, p)) = dp_oracle_path(&inst).unwrap() {
            assert_eq!(inst.path_cost(&p), Some(c));
            assert!(inst.is_hamiltonian_path(&p));
        }
    }
}

#[test]
fn generator_is_deterministic_per_seed() {
    let a = gen_random(11, 77, (1, 100), 0.6, 2);
    let b = gen_random(11, 77, (1, 100), 0.6, 2);
    let c = gen_random(11, 78, (1, 100), 0.6, 2);
    assert_eq!(a.matrix(), b.matrix());
    assert_ne!(a.matrix(), c.matrix());
    assert!(a.arcs().all(|(u, v)| (1..=100).contains(&a.raw_cost(u, v))));
}

#[test]
fn clustered_instances_keep_several_components_at_the_root() {
    for seed in 0..20 {
        let inst = gen_random(9, seed, (1, 100), 0.6, 3);
        let mut st = Store::new(&inst, INFINITE);
        let mut sched = build_model(&mut st, ModelConfig::Basic, Relax::Tree);
        if sched.run_fixpoint(&mut st) == Outcome::Contradiction {
            continue;
        }
        assert!(ReducedState::build(&st.gv).n_r() >= 2, "seed {seed}");
    }
}

#[test]
fn bench_rows_follow_input_order() {
    let insts = random_suite(4, &[6, 7], 3);
    let mut bounds = BTreeMap::new();
    bounds.insert(insts[0].name.clone(), dp_oracle(&insts[0]).unwrap());
    let opts = BenchOptions { bounds, ..BenchOptions::default() };
    let rows = bench_instances(&configs(), &insts, &opts);
    assert_eq!(rows.len(), 8);
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(r.instance, insts[i / 2].name);
        assert!(r.nodes >= 1);
    }
    assert_eq!(rows[1].model, "all+both");
    assert_eq!(rows[0].model, "basic");
    assert!(matches!(rows[0].status.as_str(), "Proven" | "Infeasible"));
    assert!(rows[2..].iter().all(|r| matches!(r.status.as_str(), "Optimal" | "Infeasible")));
}

#[test]
fn csv_appends_and_reparses() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let insts = random_suite(2, &[6], 9);
    let rows = bench_instances(&configs(), &insts, &BenchOptions::default());
    append_csv(&path, &rows, false).unwrap();
    append_csv(&path, &rows, false).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
    assert_eq!(text.lines().filter(|l| l.starts_with("instance,")).count(), 1);
    let back = read_csv(&path).unwrap();
    assert_eq!(back.len(), 2 * rows.len());
    assert!(back.iter().all(|r| r.time_s.is_none()));
    let mut buf = Vec::new();
    write_csv(&mut buf, &rows, false).unwrap();
    let mut again = Vec::new();
    write_csv(&mut again, &bench_instances(&configs(), &insts, &BenchOptions::default()), false).unwrap();
    assert_eq!(buf, again);
}

#[test]
fn suite_reports_unreadable_files() {
    let dir = tempfile::tempdir().unwrap();
    let inst = gen_random(6, 1, (1, 9), 1.0, 1);
    std::fs::write(dir.path().join("a.atsp"), write_full_matrix(&path_to_circuit(&inst))).unwrap();
    std::fs::write(dir.path().join("b.atsp"), "NAME: b\nTYPE: ATSP\nEOF\n").unwrap();
    std::fs::write(dir.path().join("notes.txt"), "ignored").unwrap();
    let rows = bench_suite(&configs(), dir.path(), &BenchOptions::default()).unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows[..2].iter().all(|r| r.status == "Optimal"));
    assert!(rows[2..].iter().all(|r| r.status.starts_with("Error: ") && r.instance == "b"));
}

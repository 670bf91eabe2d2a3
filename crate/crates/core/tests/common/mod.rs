//! Test oracles and fixtures shared by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use atsp_core::generate::gen_random;
use atsp_core::{Instance, FORBIDDEN};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures").join(name)
}

/// Reads a fixture matrix: `name`, `n`, `s`, `e` header lines, then `n`
/// rows where `-` marks an absent arc. `#` starts a comment.
pub fn load_fixture(file: &str) -> Instance {
    let text = std::fs::read_to_string(fixture_path(file)).expect("fixture exists");
    let mut name = String::new();
    let (mut n, mut s, mut e) = (0, 0, 0);
    let mut costs = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let mut toks = line.split_whitespace();
        match toks.next().unwrap() {
            "name" => name = toks.next().unwrap().to_string(),
            "n" => n = toks.next().unwrap().parse().unwrap(),
            "s" => s = toks.next().unwrap().parse().unwrap(),
            "e" => e = toks.next().unwrap().parse().unwrap(),
            first => {
                for t in std::iter::once(first).chain(toks) {
                    costs.push(if t == "-" { FORBIDDEN } else { t.parse().unwrap() });
                }
            }
        }
    }
    Instance::from_matrix(name, n, s, e, costs)
}

/// Every s→e Hamiltonian path of cost at most `ub`, by depth-first
/// enumeration.
pub fn enumerate_paths(inst: &Instance, ub: i64) -> Vec<(i64, Vec<usize>)> {
    fn go(inst: &Instance, ub: i64, path: &mut Vec<usize>, used: &mut [bool], cost: i64, out: &mut Vec<(i64, Vec<usize>)>) {
        let u = *path.last().unwrap();
        if path.len() == inst.n {
            if u == inst.e && cost <= ub {
                out.push((cost, path.clone()));
            }
            return;
        }
        for v in 0..inst.n {
            if used[v] || (v == inst.e && path.len() + 1 != inst.n) {
                continue;
            }
            if let Some(c) = inst.cost(u, v) {
                if cost + c > ub {
                    continue;
                }
                used[v] = true;
                path.push(v);
                go(inst, ub, path, used, cost + c, out);
                path.pop();
                used[v] = false;
            }
        }
    }
    let mut used = vec![false; inst.n];
    used[inst.s] = true;
    let mut out = Vec::new();
    go(inst, ub, &mut vec![inst.s], &mut used, 0, &mut out);
    out
}

/// Optimum by trying every node order (no pruning besides forbidden arcs).
pub fn brute_force_opt(inst: &Instance) -> Option<i64> {
    let mids: Vec<usize> = (0..inst.n).filter(|&v| v != inst.s && v != inst.e).collect();
    let mut perm = mids.clone();
    let mut best: Option<i64> = None;
    let mut eval = |p: &[usize]| {
        let mut order = Vec::with_capacity(inst.n);
        order.push(inst.s);
        order.extend_from_slice(p);
        order.push(inst.e);
        if let Some(c) = inst.path_cost(&order) {
            best = Some(best.map_or(c, |b: i64| b.min(c)));
        }
    };
    // Heap's algorithm.
    let k = perm.len();
    let mut c = vec![0usize; k];
    eval(&perm);
    let mut i = 0;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            eval(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    best
}

/// Mixed random suite: sizes cycle through `sizes`, densities through
/// {1.0, 0.7, 0.5} and cluster counts through {1, 2, 3}.
pub fn random_suite(count: usize, sizes: &[usize], seed: u64) -> Vec<Instance> {
    const DENSITIES: [f64; 3] = [1.0, 0.7, 0.5];
    (0..count)
        .map(|i| {
            let n = sizes[i % sizes.len()];
            let density = DENSITIES[(i / sizes.len()) % 3];
            let clusters = 1 + (i / (3 * sizes.len())) % 3;
            gen_random(n, seed.wrapping_mul(1_000_003).wrapping_add(i as u64), (1, 100), density, clusters)
        })
        .collect()
}

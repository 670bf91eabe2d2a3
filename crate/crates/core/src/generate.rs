//! Reproducible random instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instance::{Instance, FORBIDDEN};
use crate::oracle::{dp_oracle, INFEASIBLE};

/// Instances up to this size are checked for feasibility with the oracle;
/// larger ones get a planted Hamiltonian path.
const CHECK_LIMIT: usize = 12;

/// Random asymmetric instance with `s = 0` and `e = n - 1`.
///
/// Nodes are split into `clusters` contiguous blocks. Arcs inside a block
/// are kept with probability `density`; arcs between blocks only go from
/// one block to the next, so the root graph has several SCCs when
/// `clusters > 1`.
pub fn gen_random(n: usize, seed: u64, cost_range: (i64, i64), density: f64, clusters: usize) -> Instance {
    assert!(n >= 3, "need at least 3 nodes");
    assert!(density > 0.0 && density <= 1.0, "density must lie in (0, 1]");
    assert!(cost_range.0 <= cost_range.1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = clusters.clamp(1, n);
    let block = |v: usize| v * k / n;
    let name = format!("rand-n{n}-s{seed}-k{k}");
    let mut costs = vec![FORBIDDEN; n * n];
    let mut full = vec![FORBIDDEN; n * n];
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            let c = rng.gen_range(cost_range.0..=cost_range.1);
            full[u * n + v] = c;
            let (bu, bv) = (block(u), block(v));
            let allowed = bu == bv || bv == bu + 1;
            if allowed && (density >= 1.0 || rng.gen_bool(density)) {
                costs[u * n + v] = c;
            }
        }
    }
    if n > CHECK_LIMIT {
        let mut order = Vec::with_capacity(n);
        for b in 0..k {
            let mut part: Vec<usize> = (1..n - 1).filter(|&v| block(v) == b).collect();
            part.shuffle(&mut rng);
            order.extend(part);
        }
        order.insert(0, 0);
        order.push(n - 1);
        for w in order.windows(2) {
            costs[w[0] * n + w[1]] = full[w[0] * n + w[1]];
        }
        return Instance::from_matrix(name, n, 0, n - 1, costs);
    }
    let inst = Instance::from_matrix(name.clone(), n, 0, n - 1, costs);
    if dp_oracle(&inst).is_ok_and(|c| c != INFEASIBLE) {
        inst
    } else {
        Instance::from_matrix(name, n, 0, n - 1, full)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let a = gen_random(8, 42, (1, 100), 0.5, 2);
        let b = gen_random(8, 42, (1, 100), 0.5, 2);
        assert_eq!(a.matrix(), b.matrix());
    }

    #[test]
    fn full_density_is_complete() {
        let inst = gen_random(7, 1, (1, 10), 1.0, 1);
        assert_eq!(inst.arcs().count(), 6 + 5 * 5);
    }

    #[test]
    fn large_has_planted_path() {
        let inst = gen_random(16, 3, (1, 50), 0.2, 3);
        assert!(dp_oracle(&inst).unwrap() != INFEASIBLE);
    }
}

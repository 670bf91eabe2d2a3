//! Exact subset dynamic program, used as ground truth on small instances.

use crate::error::{Error, Result};
use crate::instance::Instance;

/// Largest instance the oracle accepts.
pub const ORACLE_LIMIT: usize = 20;

/// Returned when no s→e Hamiltonian path exists.
pub const INFEASIBLE: i64 = i64::MAX;

/// Optimal s→e Hamiltonian path cost, or [`INFEASIBLE`].
pub fn dp_oracle(inst: &Instance) -> Result<i64> {
    dp_oracle_path(inst).map(|r| r.map_or(INFEASIBLE, |(c, _)| c))
}

/// Optimal cost together with one optimal node order.
pub fn dp_oracle_path(inst: &Instance) -> Result<Option<(i64, Vec<usize>)>> {
    let n = inst.n;
    if n > ORACLE_LIMIT {
        return Err(Error::SizeLimit { n, limit: ORACLE_LIMIT });
    }
    let (s, e) = (inst.s, inst.e);
    let mids: Vec<usize> = (0..n).filter(|&v| v != s && v != e).collect();
    let k = mids.len();
    if k == 0 {
        return Ok(inst.cost(s, e).map(|c| (c, vec![s, e])));
    }
    let full = (1usize << k) - 1;
    let mut dp = vec![INFEASIBLE; (full + 1) * k];
    for (i, &v) in mids.iter().enumerate() {
        if let Some(c) = inst.cost(s, v) {
            dp[(1 << i) * k + i] = c;
        }
    }
    for mask in 1..=full {
        for i in 0..k {
            let cur = dp[mask * k + i];
            if cur == INFEASIBLE || mask & (1 << i) == 0 {
                continue;
            }
            let u = mids[i];
            let mut rest = full & !mask;
            while rest != 0 {
                let j = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if let Some(c) = inst.cost(u, mids[j]) {
                    let slot = &mut dp[(mask | (1 << j)) * k + j];
                    *slot = (*slot).min(cur + c);
                }
            }
        }
    }
    let mut best: Option<(i64, usize)> = None;
    for i in 0..k {
        let cur = dp[full * k + i];
        if cur == INFEASIBLE {
            continue;
        }
        if let Some(c) = inst.cost(mids[i], e) {
            if best.is_none_or(|(b, _)| cur + c < b) {
                best = Some((cur + c, i));
            }
        }
    }
    let Some((opt, mut last)) = best else { return Ok(None) };
    let mut order = vec![e];
    let mut mask = full;
    loop {
        order.push(mids[last]);
        let here = dp[mask * k + last];
        let prev_mask = mask & !(1 << last);
        if prev_mask == 0 {
            break;
        }
        last = (0..k)
            .find(|&j| {
                prev_mask & (1 << j) != 0
                    && dp[prev_mask * k + j] != INFEASIBLE
                    && inst.cost(mids[j], mids[last]).is_some_and(|c| dp[prev_mask * k + j] + c == here)
            })
            .expect("dp table is consistent");
        mask = prev_mask;
    }
    order.push(s);
    order.reverse();
    Ok(Some((opt, order)))
}

/// Optimal Hamiltonian circuit cost of a dense matrix (diagonal ignored,
/// `i64::MAX` for missing arcs). Used to check circuit-to-path splits.
pub fn dp_circuit(d: usize, cost: impl Fn(usize, usize) -> i64) -> Result<i64> {
    if d + 1 > ORACLE_LIMIT {
        return Err(Error::SizeLimit { n: d + 1, limit: ORACLE_LIMIT });
    }
    let mut costs = vec![i64::MAX; (d + 1) * (d + 1)];
    for u in 0..d {
        for v in 1..d {
            if u != v {
                costs[u * (d + 1) + v] = cost(u, v);
            }
        }
        if u != 0 {
            costs[u * (d + 1) + d] = cost(u, 0);
        }
    }
    dp_oracle(&Instance::from_matrix("circuit", d + 1, 0, d, costs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::FORBIDDEN;

    #[test]
    fn single_feasible_order() {
        let f = FORBIDDEN;
        let inst = Instance::from_matrix("t", 3, 0, 2, vec![f, 4, f, f, f, 6, f, f, f]);
        assert_eq!(dp_oracle(&inst).unwrap(), 10);
        assert_eq!(dp_oracle_path(&inst).unwrap().unwrap().1, vec![0, 1, 2]);
    }

    #[test]
    fn no_arc_out_of_start() {
        let f = FORBIDDEN;
        let inst = Instance::from_matrix("t", 3, 0, 2, vec![f, f, f, f, f, 6, f, f, f]);
        assert_eq!(dp_oracle(&inst).unwrap(), INFEASIBLE);
    }

    #[test]
    fn rejects_large() {
        let inst = Instance::from_matrix("t", 21, 0, 20, vec![1; 441]);
        assert!(matches!(dp_oracle(&inst), Err(Error::SizeLimit { n: 21, .. })));
    }
}

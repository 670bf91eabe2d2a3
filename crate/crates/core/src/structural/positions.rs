use std::collections::VecDeque;

use crate::error::{Contradiction, PropResult};
use crate::graph::{Event, GraphVar, IntId};
use crate::scc::ReducedState;
use crate::scheduler::{Priority, Propagator, Store};

const UNREACHED: i64 = i64::MAX;

fn path_max(t: &[i64], mut i: i64) -> i64 {
    while t[i as usize] > i {
        i = t[i as usize];
    }
    i
}

fn path_min(t: &[i64], mut i: i64) -> i64 {
    while t[i as usize] < i {
        i = t[i as usize];
    }
    i
}

fn path_set(t: &mut [i64], start: i64, end: i64, to: i64) {
    let mut l = start;
    while l != end {
        let k = l as usize;
        l = t[k];
        t[k] = to;
    }
}

/// Bounds consistency for all-different over integer intervals, with the
/// union-find style Hall interval sweep. Tightens `lo`/`hi` in place and
/// returns whether anything changed.
pub fn bounds_consistent_alldiff(lo: &mut [i64], hi: &mut [i64]) -> Result<bool, Contradiction> {
    let n = lo.len();
    if (0..n).any(|i| lo[i] > hi[i]) {
        return Err(Contradiction);
    }
    if n == 0 {
        return Ok(false);
    }
    let mut any = false;
    loop {
        let mut minsorted: Vec<usize> = (0..n).collect();
        minsorted.sort_by_key(|&i| lo[i]);
        let mut maxsorted: Vec<usize> = (0..n).collect();
        maxsorted.sort_by_key(|&i| hi[i]);
        let mut minrank = vec![0i64; n];
        let mut maxrank = vec![0i64; n];
        let mut bounds = vec![0i64; 2 * n + 2];

        let mut min = lo[minsorted[0]];
        let mut max = hi[maxsorted[0]] + 1;
        let mut last = min - 2;
        let mut nb = 0usize;
        bounds[0] = last;
        let (mut i, mut j) = (0, 0);
        loop {
            if i < n && min <= max {
                if min != last {
                    nb += 1;
                    last = min;
                    bounds[nb] = min;
                }
                minrank[minsorted[i]] = nb as i64;
                i += 1;
                if i < n {
                    min = lo[minsorted[i]];
                }
            } else {
                if max != last {
                    nb += 1;
                    last = max;
                    bounds[nb] = max;
                }
                maxrank[maxsorted[j]] = nb as i64;
                j += 1;
                if j == n {
                    break;
                }
                max = hi[maxsorted[j]] + 1;
            }
        }
        bounds[nb + 1] = bounds[nb] + 2;

        let mut changed = false;
        let mut t = vec![0i64; nb + 2];
        let mut h = vec![0i64; nb + 2];
        let mut d = vec![0i64; nb + 2];

        for i in 1..=nb + 1 {
            t[i] = i as i64 - 1;
            h[i] = i as i64 - 1;
            d[i] = bounds[i] - bounds[i - 1];
        }
        for &v in &maxsorted {
            let x = minrank[v];
            let y = maxrank[v];
            let mut z = path_max(&t, x + 1);
            let jj = t[z as usize];
            d[z as usize] -= 1;
            if d[z as usize] == 0 {
                t[z as usize] = z + 1;
                z = path_max(&t, t[z as usize]);
                t[z as usize] = jj;
            }
            path_set(&mut t, x + 1, z, z);
            if d[z as usize] < bounds[z as usize] - bounds[y as usize] {
                return Err(Contradiction);
            }
            if h[x as usize] > x {
                let w = path_max(&h, h[x as usize]);
                if bounds[w as usize] > lo[v] {
                    lo[v] = bounds[w as usize];
                    changed = true;
                }
                path_set(&mut h, x, w, w);
            }
            if d[z as usize] == bounds[z as usize] - bounds[y as usize] {
                let hy = h[y as usize];
                path_set(&mut h, hy, jj - 1, y);
                h[y as usize] = jj - 1;
            }
        }

        for i in 0..=nb {
            t[i] = i as i64 + 1;
            h[i] = i as i64 + 1;
            d[i] = bounds[i + 1] - bounds[i];
        }
        for &v in minsorted.iter().rev() {
            let x = maxrank[v];
            let y = minrank[v];
            let mut z = path_min(&t, x - 1);
            let jj = t[z as usize];
            d[z as usize] -= 1;
            if d[z as usize] == 0 {
                t[z as usize] = z - 1;
                z = path_min(&t, t[z as usize]);
                t[z as usize] = jj;
            }
            path_set(&mut t, x - 1, z, z);
            if d[z as usize] < bounds[y as usize] - bounds[z as usize] {
                return Err(Contradiction);
            }
            if h[x as usize] < x {
                let w = path_min(&h, h[x as usize]);
                if bounds[w as usize] - 1 < hi[v] {
                    hi[v] = bounds[w as usize] - 1;
                    changed = true;
                }
                path_set(&mut h, x, w, w);
            }
            if d[z as usize] == bounds[y as usize] - bounds[z as usize] {
                let hy = h[y as usize];
                path_set(&mut h, hy, jj + 1, y);
                h[y as usize] = jj + 1;
            }
        }
        if (0..n).any(|i| lo[i] > hi[i]) {
            return Err(Contradiction);
        }
        if !changed {
            return Ok(any);
        }
        any = true;
    }
}

/// Multi-source BFS over `nodes` (as a membership predicate) following
/// `next`, from `sources`.
fn bfs<'a, N, M>(n: usize, sources: &[usize], next: N, member: M) -> Vec<i64>
where
    N: Fn(usize) -> &'a [u32],
    M: Fn(usize) -> bool,
{
    let mut dist = vec![UNREACHED; n];
    let mut q = VecDeque::new();
    for &s in sources {
        dist[s] = 0;
        q.push_back(s);
    }
    while let Some(u) = q.pop_front() {
        for &v in next(u) {
            let v = v as usize;
            if dist[v] == UNREACHED && member(v) {
                dist[v] = dist[u] + 1;
                q.push_back(v);
            }
        }
    }
    dist
}

/// Position bounds implied by reachability alone: BFS depth from `s` and
/// from `e` backwards.
pub fn bfs_bounds(gv: &GraphVar) -> (Vec<i64>, Vec<i64>) {
    let n = gv.n();
    let d = bfs(n, &[gv.start()], |v| gv.succ(v), |_| true);
    let r = bfs(n, &[gv.end()], |v| gv.pred(v), |_| true);
    let lo = d;
    let hi = r.iter().map(|&x| if x == UNREACHED { -1 } else { n as i64 - 1 - x }).collect();
    (lo, hi)
}

/// Position bounds when the reduced graph is a path: a node of the k-th
/// component sits after every node of the earlier components, at least as
/// far into its own component as its BFS depth from the component's indoors.
pub fn reduced_bounds(gv: &GraphVar, st: &ReducedState) -> Option<(Vec<i64>, Vec<i64>)> {
    let order = st.path_order()?;
    let n = gv.n();
    let mut lo = vec![UNREACHED; n];
    let mut hi = vec![-1; n];
    let mut offset = 0i64;
    for &x in &order {
        let nodes = st.nodes_of(x);
        let size = nodes.len() as i64;
        let member = |v: usize| st.scc_of(v) == x;
        // The path enters the component of s at s and leaves that of e at e.
        let ins: Vec<usize> = if member(gv.start()) {
            vec![gv.start()]
        } else {
            nodes.iter().copied().filter(|&v| st.is_indoor(v)).collect()
        };
        let outs: Vec<usize> = if member(gv.end()) {
            vec![gv.end()]
        } else {
            nodes.iter().copied().filter(|&v| st.is_outdoor(v)).collect()
        };
        let din = bfs(n, &ins, |v| gv.succ(v), member);
        let dout = bfs(n, &outs, |v| gv.pred(v), member);
        for &v in &nodes {
            if din[v] != UNREACHED {
                lo[v] = offset + din[v];
            }
            if dout[v] != UNREACHED {
                hi[v] = offset + size - 1 - dout[v];
            }
        }
        offset += size;
    }
    Some((lo, hi))
}

/// Position of each node along the path, as trailed intervals, channelled
/// with the successor graph.
#[derive(Debug)]
pub struct Positions {
    lb: Vec<IntId>,
    ub: Vec<IntId>,
}

impl Positions {
    pub fn new(gv: &mut GraphVar) -> Self {
        let n = gv.n();
        let lb = (0..n).map(|v| gv.new_int(if v == gv.end() { n as i64 - 1 } else { 0 })).collect();
        let ub = (0..n).map(|v| gv.new_int(if v == gv.start() { 0 } else { n as i64 - 1 })).collect();
        Positions { lb, ub }
    }

    pub fn bounds(&self, gv: &GraphVar, v: usize) -> (i64, i64) {
        (gv.int(self.lb[v]), gv.int(self.ub[v]))
    }

    /// Narrows the intervals and removes arcs incompatible with them, until
    /// nothing changes.
    pub fn filter(&self, gv: &mut GraphVar, reduced: Option<&ReducedState>) -> PropResult {
        let n = gv.n();
        let mut lo: Vec<i64> = (0..n).map(|v| gv.int(self.lb[v])).collect();
        let mut hi: Vec<i64> = (0..n).map(|v| gv.int(self.ub[v])).collect();
        let mut use_reduced = reduced;
        loop {
            let (blo, bhi) = use_reduced.and_then(|st| reduced_bounds(gv, st)).unwrap_or_else(|| bfs_bounds(gv));
            use_reduced = None;
            for v in 0..n {
                lo[v] = lo[v].max(blo[v]);
                hi[v] = hi[v].min(bhi[v]);
            }
            let mut tightened = true;
            while tightened {
                tightened = false;
                for v in 0..n {
                    if lo[v] > hi[v] {
                        return Err(Contradiction);
                    }
                    let (mut nlo, mut nhi) = (lo[v], hi[v]);
                    if v != gv.start() {
                        let p = gv.pred(v);
                        let plo = p.iter().map(|&u| lo[u as usize]).min().unwrap_or(UNREACHED);
                        let phi = p.iter().map(|&u| hi[u as usize]).max().unwrap_or(-1);
                        nlo = nlo.max(plo.saturating_add(1));
                        nhi = nhi.min(phi + 1);
                    }
                    if v != gv.end() {
                        let s = gv.succ(v);
                        let slo = s.iter().map(|&w| lo[w as usize]).min().unwrap_or(UNREACHED);
                        let shi = s.iter().map(|&w| hi[w as usize]).max().unwrap_or(-1);
                        nlo = nlo.max(slo.saturating_sub(1));
                        nhi = nhi.min(shi - 1);
                    }
                    if nlo > nhi {
                        return Err(Contradiction);
                    }
                    if (nlo, nhi) != (lo[v], hi[v]) {
                        lo[v] = nlo;
                        hi[v] = nhi;
                        tightened = true;
                    }
                }
                if bounds_consistent_alldiff(&mut lo, &mut hi)? {
                    tightened = true;
                }
            }
            let mut removed = false;
            for u in 0..n {
                let doomed: Vec<usize> = gv
                    .succ(u)
                    .iter()
                    .map(|&v| v as usize)
                    .filter(|&v| lo[u] + 1 > hi[v] || hi[u] + 1 < lo[v])
                    .collect();
                for v in doomed {
                    gv.remove_arc(u, v)?;
                    removed = true;
                }
            }
            if !removed {
                break;
            }
        }
        for v in 0..n {
            gv.set_int(self.lb[v], lo[v]);
            gv.set_int(self.ub[v], hi[v]);
        }
        Ok(())
    }
}

impl Propagator for Positions {
    fn name(&self) -> &'static str {
        "positions"
    }

    fn priority(&self) -> Priority {
        Priority::Quadratic
    }

    fn propagate(&mut self, st: &mut Store<'_>, _: &[Event], _: bool) -> PropResult {
        let reduced = if st.synced_path().is_some() { st.reduced.take() } else { None };
        let res = self.filter(&mut st.gv, reduced.as_ref());
        if reduced.is_some() {
            st.reduced = reduced;
        }
        res
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hall_interval_pushes_bounds() {
        let mut lo = vec![1, 1, 1];
        let mut hi = vec![2, 2, 3];
        assert_eq!(bounds_consistent_alldiff(&mut lo, &mut hi), Ok(true));
        assert_eq!((lo[2], hi[2]), (3, 3));
    }

    #[test]
    fn pigeonhole_fails() {
        let mut lo = vec![0, 0, 0];
        let mut hi = vec![1, 1, 1];
        assert!(bounds_consistent_alldiff(&mut lo, &mut hi).is_err());
    }

    #[test]
    fn simple_path_fixes_positions() {
        let mut gv = GraphVar::new(4, 0, 3, [(0, 1), (1, 2), (2, 3)]);
        let p = Positions::new(&mut gv);
        p.filter(&mut gv, None).unwrap();
        for v in 0..4 {
            assert_eq!(p.bounds(&gv, v), (v as i64, v as i64));
        }
    }
}

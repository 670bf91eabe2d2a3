use crate::error::{Contradiction, PropResult};
use crate::graph::{Event, GraphVar, NONE};
use crate::scc::Tarjan;
use crate::scheduler::{Priority, Propagator, Store};

/// Successors form a perfect matching between `V∖{e}` and `V∖{s}`. Arcs in
/// no perfect matching are removed.
///
/// The matching is kept between calls (untrailed) and repaired by
/// augmenting paths, since after a backtrack it is still a valid matching
/// of a larger graph.
#[derive(Debug)]
pub struct AllDifferent {
    mate_l: Vec<u32>,
    mate_r: Vec<u32>,
    tarjan: Tarjan,
}

impl AllDifferent {
    pub fn new(n: usize) -> Self {
        AllDifferent { mate_l: vec![NONE; n], mate_r: vec![NONE; n], tarjan: Tarjan::new(2 * n) }
    }

    fn augment(&mut self, gv: &GraphVar, root: usize, seen: &mut [u32], stamp: u32) -> bool {
        // Iterative DFS over alternating paths from a free left node.
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        let mut via: Vec<usize> = Vec::new();
        while let Some(&mut (u, ref mut i)) = stack.last_mut() {
            let succ = gv.succ(u);
            if *i >= succ.len() {
                stack.pop();
                via.pop();
                continue;
            }
            let v = succ[*i] as usize;
            *i += 1;
            if seen[v] == stamp {
                continue;
            }
            seen[v] = stamp;
            let m = self.mate_r[v];
            via.push(v);
            if m == NONE {
                for (k, &(l, _)) in stack.iter().enumerate() {
                    let r = via[k];
                    self.mate_l[l] = r as u32;
                    self.mate_r[r] = l as u32;
                }
                return true;
            }
            stack.push((m as usize, 0));
        }
        false
    }

    /// Repairs the matching; fails when no perfect matching exists.
    pub fn match_all(&mut self, gv: &GraphVar) -> PropResult {
        let n = gv.n();
        for u in 0..n {
            let v = self.mate_l[u];
            if v != NONE && !gv.has_arc(u, v as usize) {
                self.mate_l[u] = NONE;
                self.mate_r[v as usize] = NONE;
            }
        }
        let mut seen = vec![0u32; n];
        let mut stamp = 0;
        for u in 0..n {
            if u == gv.end() || self.mate_l[u] != NONE {
                continue;
            }
            stamp += 1;
            if !self.augment(gv, u, &mut seen, stamp) {
                return Err(Contradiction);
            }
        }
        Ok(())
    }

    /// Arcs belonging to no perfect matching.
    pub fn infeasible_arcs(&mut self, gv: &GraphVar) -> Result<Vec<(usize, usize)>, Contradiction> {
        self.match_all(gv)?;
        let n = gv.n();
        // Residual graph: left u -> right n+v for unmatched arcs, right -> mate.
        let mut start = vec![0u32; 2 * n + 1];
        let mut adj: Vec<u32> = Vec::with_capacity(gv.arc_count() + n);
        for (u, slot) in start.iter_mut().enumerate().take(n) {
            *slot = adj.len() as u32;
            adj.extend(gv.succ(u).iter().filter(|&&v| v != self.mate_l[u]).map(|&v| n as u32 + v));
        }
        for v in 0..n {
            start[n + v] = adj.len() as u32;
            if self.mate_r[v] != NONE {
                adj.push(self.mate_r[v]);
            }
        }
        start[2 * n] = adj.len() as u32;
        let roots: Vec<usize> = (0..2 * n).collect();
        let mut work = 0;
        let comps = self.tarjan.run(
            &roots,
            |x| &adj[start[x] as usize..start[x + 1] as usize],
            |_| true,
            &mut work,
        );
        let mut comp = vec![0u32; 2 * n];
        for (i, c) in comps.iter().enumerate() {
            for &x in c {
                comp[x] = i as u32;
            }
        }
        let mut out = Vec::new();
        for u in 0..n {
            for &v in gv.succ(u) {
                if v != self.mate_l[u] && comp[u] != comp[n + v as usize] {
                    out.push((u, v as usize));
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }
}

impl Propagator for AllDifferent {
    fn name(&self) -> &'static str {
        "alldifferent"
    }

    fn priority(&self) -> Priority {
        Priority::Quadratic
    }

    fn propagate(&mut self, st: &mut Store<'_>, _: &[Event], _: bool) -> PropResult {
        for (u, v) in self.infeasible_arcs(&st.gv)? {
            st.gv.remove_arc(u, v)?;
        }
        Ok(())
    }
}

//! Minimum-cost assignment of successors (rows `V∖{e}`, columns `V∖{s}`)
//! by the Hungarian method with dual potentials kept between calls.

use crate::error::{Contradiction, PropResult};
use crate::graph::{Event, GraphVar};
use crate::instance::Instance;
use crate::scheduler::{ArcScores, Priority, Propagator, Store, INFINITE};

/// Cost standing in for an absent arc.
const ABSENT: i64 = 1 << 40;
/// Potentials drifting beyond this trigger a fresh solve.
const DRIFT: i64 = 1 << 56;

#[derive(Debug, Clone)]
pub struct Hungarian {
    size: usize,
    rows: Vec<usize>,
    cols: Vec<usize>,
    u: Vec<i64>,
    v: Vec<i64>,
    /// Row matched to each column, 0 when free (1-based, index 0 is a dummy).
    p: Vec<usize>,
    way: Vec<usize>,
    /// Column matched to each row, 0 when free.
    assign: Vec<usize>,
    pub augmentations: u64,
}

impl Hungarian {
    pub fn new(n: usize, s: usize, e: usize) -> Self {
        let rows: Vec<usize> = std::iter::once(usize::MAX).chain((0..n).filter(|&v| v != e)).collect();
        let cols: Vec<usize> = std::iter::once(usize::MAX).chain((0..n).filter(|&v| v != s)).collect();
        let size = n - 1;
        Hungarian {
            size,
            rows,
            cols,
            u: vec![0; size + 1],
            v: vec![0; size + 1],
            p: vec![0; size + 1],
            way: vec![0; size + 1],
            assign: vec![0; size + 1],
            augmentations: 0,
        }
    }

    fn reset(&mut self) {
        self.u.iter_mut().for_each(|x| *x = 0);
        self.v.iter_mut().for_each(|x| *x = 0);
        self.p.iter_mut().for_each(|x| *x = 0);
        self.assign.iter_mut().for_each(|x| *x = 0);
    }

    #[inline]
    fn a(&self, gv: &GraphVar, inst: &Instance, i: usize, j: usize) -> i64 {
        let (x, y) = (self.rows[i], self.cols[j]);
        if gv.has_arc(x, y) {
            inst.raw_cost(x, y)
        } else {
            ABSENT
        }
    }

    fn augment(&mut self, gv: &GraphVar, inst: &Instance, i: usize) {
        self.augmentations += 1;
        let m = self.size;
        let mut minv = vec![i64::MAX; m + 1];
        let mut used = vec![false; m + 1];
        self.p[0] = i;
        let mut j0 = 0;
        loop {
            used[j0] = true;
            let i0 = self.p[j0];
            let mut delta = i64::MAX;
            let mut j1 = 0;
            for j in 1..=m {
                if !used[j] {
                    let cur = self.a(gv, inst, i0, j) - self.u[i0] - self.v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        self.way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=m {
                if used[j] {
                    self.u[self.p[j]] += delta;
                    self.v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if self.p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = self.way[j0];
            self.p[j0] = self.p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
        self.p[0] = 0;
        for j in 1..=m {
            if self.p[j] != 0 {
                self.assign[self.p[j]] = j;
            }
        }
    }

    /// Restores dual feasibility for the current domain, drops assignment
    /// pairs that are no longer tight, and re-augments the free rows.
    /// Returns the assignment cost.
    pub fn solve(&mut self, gv: &GraphVar, inst: &Instance) -> Result<i64, Contradiction> {
        let m = self.size;
        if self.u.iter().chain(&self.v).any(|x| x.abs() > DRIFT) {
            self.reset();
        }
        for i in 1..=m {
            let j = self.assign[i];
            if j == 0 {
                continue;
            }
            let row_min = (1..=m).map(|k| self.a(gv, inst, i, k) - self.v[k]).min().unwrap();
            if row_min < self.u[i] {
                self.u[i] = row_min;
            }
            if self.a(gv, inst, i, j) - self.u[i] - self.v[j] != 0 {
                self.assign[i] = 0;
                self.p[j] = 0;
            }
        }
        for i in 1..=m {
            if self.assign[i] == 0 {
                self.augment(gv, inst, i);
            }
        }
        let mut total = 0;
        for i in 1..=m {
            let c = self.a(gv, inst, i, self.assign[i]);
            if c >= ABSENT {
                self.reset();
                return Err(Contradiction);
            }
            total += c;
        }
        Ok(total)
    }

    /// Successor of each node in the current assignment.
    pub fn successor(&self, node: usize) -> Option<usize> {
        let i = self.rows.iter().position(|&r| r == node)?;
        Some(self.cols[self.assign[i]])
    }

    /// Reduced cost of arc (x, y); zero on assignment arcs.
    pub fn reduced_cost(&self, gv: &GraphVar, inst: &Instance, x: usize, y: usize) -> Option<i64> {
        let i = self.rows.iter().position(|&r| r == x)?;
        let j = self.cols.iter().position(|&c| c == y)?;
        gv.has_arc(x, y).then(|| self.a(gv, inst, i, j) - self.u[i] - self.v[j])
    }

    /// Arcs whose reduced cost lifts the bound above `ub`, plus scores.
    pub fn filter(&self, gv: &GraphVar, inst: &Instance, lb: i64, ub: i64) -> (Vec<(usize, usize)>, ArcScores) {
        let m = self.size;
        let mut col_of = vec![0; gv.n()];
        for (j, &c) in self.cols.iter().enumerate().skip(1) {
            col_of[c] = j;
        }
        let mut rc = vec![i64::MAX; (m + 1) * (m + 1)];
        for i in 1..=m {
            for &y in gv.succ(self.rows[i]) {
                let j = col_of[y as usize];
                rc[i * (m + 1) + j] = self.a(gv, inst, i, j) - self.u[i] - self.v[j];
            }
        }
        let mut remove = Vec::new();
        let mut scores = ArcScores::default();
        for i in 1..=m {
            let ja = self.assign[i];
            for j in 1..=m {
                let r = rc[i * (m + 1) + j];
                if r == i64::MAX {
                    continue;
                }
                let (x, y) = (self.rows[i], self.cols[j]);
                if j == ja {
                    let row_alt = (1..=m).filter(|&k| k != j).map(|k| rc[i * (m + 1) + k]).min().unwrap_or(i64::MAX);
                    let col_alt = (1..=m).filter(|&k| k != i).map(|k| rc[k * (m + 1) + j]).min().unwrap_or(i64::MAX);
                    let alt = row_alt.min(col_alt);
                    let score = if alt == i64::MAX { f64::INFINITY } else { alt as f64 };
                    scores.solution.push((x, y, score));
                    continue;
                }
                scores.others.push((x, y, r as f64));
                if ub != INFINITE && !gv.is_mandatory(x, y) && lb.saturating_add(r) > ub {
                    remove.push((x, y));
                }
            }
        }
        (remove, scores)
    }
}

#[derive(Debug)]
pub struct HungarianProp {
    inner: Hungarian,
}

impl HungarianProp {
    pub fn new(n: usize, s: usize, e: usize) -> Self {
        HungarianProp { inner: Hungarian::new(n, s, e) }
    }
}

impl Propagator for HungarianProp {
    fn name(&self) -> &'static str {
        "hungarian"
    }

    fn priority(&self) -> Priority {
        Priority::Cubic
    }

    fn propagate(&mut self, st: &mut Store<'_>, _: &[Event], _: bool) -> PropResult {
        let lb = self.inner.solve(&st.gv, st.inst)?;
        st.raise_lb(lb)?;
        let (remove, scores) = self.inner.filter(&st.gv, st.inst, lb, st.ub);
        for (x, y) in remove {
            st.gv.remove_arc(x, y)?;
        }
        st.scores.map = Some(scores);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forced_permutation() {
        let f = crate::instance::FORBIDDEN;
        let m = vec![f, 4, f, f, f, f, 7, f, f, f, f, 2, f, f, f, f];
        let inst = Instance::from_matrix("p", 4, 0, 3, m);
        let gv = inst.graph_var();
        let mut h = Hungarian::new(4, 0, 3);
        assert_eq!(h.solve(&gv, &inst), Ok(13));
        assert_eq!(h.successor(1), Some(2));
    }

    #[test]
    fn repair_after_removal_matches_fresh_solve() {
        let n = 6;
        let costs: Vec<i64> = (0..n * n).map(|k| ((k * 37) % 11 + 1) as i64).collect();
        let inst = Instance::from_matrix("r", n, 0, n - 1, costs);
        let mut gv = inst.graph_var();
        let mut h = Hungarian::new(n, 0, n - 1);
        h.solve(&gv, &inst).unwrap();
        gv.push_world();
        let s1 = h.successor(1).unwrap();
        gv.remove_arc(1, s1).unwrap();
        let repaired = h.solve(&gv, &inst).unwrap();
        let fresh = Hungarian::new(n, 0, n - 1).solve(&gv, &inst).unwrap();
        assert_eq!(repaired, fresh);
        gv.pop_world();
        let back = h.solve(&gv, &inst).unwrap();
        assert_eq!(back, Hungarian::new(n, 0, n - 1).solve(&gv, &inst).unwrap());
    }
}

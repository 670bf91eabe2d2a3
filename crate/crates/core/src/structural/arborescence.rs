use crate::error::{Contradiction, PropResult};
use crate::graph::{Event, GraphVar, NONE};
use crate::scheduler::{Priority, Propagator, Store};

/// Immediate dominators of a flow graph, by the semidominator algorithm with
/// path compression. Returns `None` if some node is unreachable from `root`.
pub fn dominators<'a, S, P>(n: usize, root: usize, succ: S, pred: P) -> Option<Vec<usize>>
where
    S: Fn(usize) -> &'a [u32],
    P: Fn(usize) -> &'a [u32],
{
    let mut dfnum = vec![NONE; n];
    let mut vertex = Vec::with_capacity(n);
    let mut parent = vec![NONE; n];
    let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
    dfnum[root] = 0;
    vertex.push(root);
    while let Some(&mut (v, ref mut i)) = stack.last_mut() {
        let out = succ(v);
        if *i < out.len() {
            let w = out[*i] as usize;
            *i += 1;
            if dfnum[w] == NONE {
                dfnum[w] = vertex.len() as u32;
                vertex.push(w);
                parent[w] = v as u32;
                stack.push((w, 0));
            }
        } else {
            stack.pop();
        }
    }
    if vertex.len() < n {
        return None;
    }

    let mut semi: Vec<u32> = dfnum.clone();
    let mut label: Vec<u32> = (0..n as u32).collect();
    let mut ancestor = vec![NONE; n];
    let mut idom = vec![NONE; n];
    let mut bucket: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut path = Vec::new();

    let eval = |v: usize, ancestor: &mut [u32], label: &mut [u32], semi: &[u32], path: &mut Vec<usize>| -> usize {
        if ancestor[v] == NONE {
            return v;
        }
        let mut x = v;
        while ancestor[ancestor[x] as usize] != NONE {
            path.push(x);
            x = ancestor[x] as usize;
        }
        while let Some(y) = path.pop() {
            let a = ancestor[y] as usize;
            if semi[label[a] as usize] < semi[label[y] as usize] {
                label[y] = label[a];
            }
            ancestor[y] = ancestor[a];
        }
        label[v] as usize
    };

    for i in (1..n).rev() {
        let w = vertex[i];
        for &v in pred(w) {
            let v = v as usize;
            let u = eval(v, &mut ancestor, &mut label, &semi, &mut path);
            if semi[u] < semi[w] {
                semi[w] = semi[u];
            }
        }
        bucket[vertex[semi[w] as usize]].push(w as u32);
        let p = parent[w] as usize;
        ancestor[w] = p as u32;
        for v in std::mem::take(&mut bucket[p]) {
            let v = v as usize;
            let u = eval(v, &mut ancestor, &mut label, &semi, &mut path);
            idom[v] = if semi[u] < semi[v] { u as u32 } else { p as u32 };
        }
    }
    for &w in &vertex[1..] {
        if idom[w] != vertex[semi[w] as usize] as u32 {
            idom[w] = idom[idom[w] as usize];
        }
    }
    idom[root] = root as u32;
    Some(idom.into_iter().map(|d| d as usize).collect())
}

/// Pre/post numbering of a dominator tree for O(1) ancestry queries.
pub struct DomTree {
    pre: Vec<u32>,
    post: Vec<u32>,
}

impl DomTree {
    pub fn new(idom: &[usize], root: usize) -> Self {
        let n = idom.len();
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
        for v in 0..n {
            if v != root {
                children[idom[v]].push(v);
            }
        }
        let mut pre = vec![0; n];
        let mut post = vec![0; n];
        let mut clock = 0;
        let mut stack = vec![(root, 0usize)];
        pre[root] = 0;
        while let Some(&mut (v, ref mut i)) = stack.last_mut() {
            if *i < children[v].len() {
                let c = children[v][*i];
                *i += 1;
                clock += 1;
                pre[c] = clock;
                stack.push((c, 0));
            } else {
                post[v] = clock;
                stack.pop();
            }
        }
        DomTree { pre, post }
    }

    /// Whether `a` dominates `b` (reflexive).
    pub fn dominates(&self, a: usize, b: usize) -> bool {
        self.pre[a] <= self.pre[b] && self.post[b] <= self.post[a]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Rooted at `s` over the potential graph.
    Forward,
    /// Rooted at `e` over the reversed potential graph.
    Backward,
}

/// Keeps only arcs that lie on some spanning arborescence rooted at an
/// endpoint: every node must be reachable, and an arc into a dominator of
/// its tail is removed.
#[derive(Debug)]
pub struct Arborescence {
    dir: Direction,
}

impl Arborescence {
    pub fn new(dir: Direction) -> Self {
        Arborescence { dir }
    }
}

/// Arcs of `gv` that the arborescence rule removes, or `None` when some node
/// cannot be reached from the root.
pub fn arborescence_infeasible(gv: &GraphVar, dir: Direction) -> Option<Vec<(usize, usize)>> {
    let n = gv.n();
    let mut out = Vec::new();
    match dir {
        Direction::Forward => {
            let idom = dominators(n, gv.start(), |v| gv.succ(v), |v| gv.pred(v))?;
            let dt = DomTree::new(&idom, gv.start());
            for u in 0..n {
                for &v in gv.succ(u) {
                    if dt.dominates(v as usize, u) {
                        out.push((u, v as usize));
                    }
                }
            }
        }
        Direction::Backward => {
            let idom = dominators(n, gv.end(), |v| gv.pred(v), |v| gv.succ(v))?;
            let dt = DomTree::new(&idom, gv.end());
            for u in 0..n {
                for &v in gv.succ(u) {
                    if dt.dominates(u, v as usize) {
                        out.push((u, v as usize));
                    }
                }
            }
        }
    }
    Some(out)
}

impl Propagator for Arborescence {
    fn name(&self) -> &'static str {
        match self.dir {
            Direction::Forward => "arborescence",
            Direction::Backward => "antiarborescence",
        }
    }

    fn priority(&self) -> Priority {
        Priority::Quadratic
    }

    fn propagate(&mut self, st: &mut Store<'_>, _: &[Event], _: bool) -> PropResult {
        let arcs = arborescence_infeasible(&st.gv, self.dir).ok_or(Contradiction)?;
        for (u, v) in arcs {
            st.gv.remove_arc(u, v)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diamond_dominators() {
        let gv = GraphVar::new(4, 0, 3, [(0, 1), (0, 2), (1, 3), (2, 3)]);
        let idom = dominators(4, 0, |v| gv.succ(v), |v| gv.pred(v)).unwrap();
        assert_eq!(idom, vec![0, 0, 0, 0]);
    }

    #[test]
    fn chain_dominators() {
        let gv = GraphVar::new(4, 0, 3, [(0, 1), (1, 2), (2, 3), (2, 1)]);
        let idom = dominators(4, 0, |v| gv.succ(v), |v| gv.pred(v)).unwrap();
        assert_eq!(idom, vec![0, 0, 1, 2]);
        assert_eq!(arborescence_infeasible(&gv, Direction::Forward).unwrap(), vec![(2, 1)]);
    }

    #[test]
    fn unreachable_fails() {
        let gv = GraphVar::new(4, 0, 3, [(0, 1), (1, 3), (2, 3)]);
        assert!(arborescence_infeasible(&gv, Direction::Forward).is_none());
    }
}

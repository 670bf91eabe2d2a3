//! Strongly connected components of the potential graph and the reduced
//! graph (condensation) built on top of them.
//!
//! [`ReducedState`] is maintained under arc deletions only: a deleted arc
//! between two components just leaves its `out_arcs` list, while deletions
//! inside a component re-run Tarjan once on that component. Backtracking is
//! not undone incrementally; owners rebuild when [`GraphVar::backtracks`]
//! moved since the last build.

use crate::error::{Error, Result};
use crate::graph::{GraphVar, NONE};

/// Reusable Tarjan scratch space. Visited marks are generation-stamped so a
/// run over a subset costs O(subset) and not O(n).
#[derive(Debug, Clone)]
pub(crate) struct Tarjan {
    stamp: Vec<u32>,
    gen: u32,
    index: Vec<u32>,
    low: Vec<u32>,
    on_stack: Vec<bool>,
    stack: Vec<u32>,
    call: Vec<(u32, u32)>,
}

impl Tarjan {
    pub(crate) fn new(n: usize) -> Self {
        Tarjan {
            stamp: vec![0; n],
            gen: 0,
            index: vec![0; n],
            low: vec![0; n],
            on_stack: vec![false; n],
            stack: Vec::new(),
            call: Vec::new(),
        }
    }

    fn bump(&mut self) {
        self.gen = self.gen.wrapping_add(1);
        if self.gen == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.gen = 1;
        }
    }

    /// Components of the subgraph induced by `roots` (nodes accepted by
    /// `allowed`), in completion order: every arc between two returned
    /// components goes from a later one to an earlier one.
    pub(crate) fn run<'a, S, A>(&mut self, roots: &[usize], succ: S, allowed: A, work: &mut u64) -> Vec<Vec<usize>>
    where
        S: Fn(usize) -> &'a [u32],
        A: Fn(usize) -> bool,
    {
        self.bump();
        let gen = self.gen;
        let mut comps = Vec::new();
        let mut counter = 0u32;
        for &r in roots {
            if self.stamp[r] == gen {
                continue;
            }
            self.enter(r, &mut counter);
            *work += 1;
            while let Some(&mut (v, ref mut ei)) = self.call.last_mut() {
                let v = v as usize;
                let succs = succ(v);
                if (*ei as usize) < succs.len() {
                    let w = succs[*ei as usize] as usize;
                    *ei += 1;
                    *work += 1;
                    if !allowed(w) {
                        continue;
                    }
                    if self.stamp[w] != gen {
                        self.enter(w, &mut counter);
                        *work += 1;
                    } else if self.on_stack[w] {
                        self.low[v] = self.low[v].min(self.index[w]);
                    }
                } else {
                    self.call.pop();
                    if let Some(&(p, _)) = self.call.last() {
                        let p = p as usize;
                        self.low[p] = self.low[p].min(self.low[v]);
                    }
                    if self.low[v] == self.index[v] {
                        let mut comp = Vec::new();
                        loop {
                            let w = self.stack.pop().unwrap() as usize;
                            self.on_stack[w] = false;
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        comps.push(comp);
                    }
                }
            }
        }
        comps
    }

    fn enter(&mut self, v: usize, counter: &mut u32) {
        self.stamp[v] = self.gen;
        self.index[v] = *counter;
        self.low[v] = *counter;
        *counter += 1;
        self.stack.push(v as u32);
        self.on_stack[v] = true;
        self.call.push((v as u32, 0));
    }
}

/// Strongly connected components of `gv`'s potential graph restricted to
/// `nodes`.
pub fn tarjan_scc(gv: &GraphVar, nodes: &[usize]) -> Vec<Vec<usize>> {
    let mut inside = vec![false; gv.n()];
    for &v in nodes {
        inside[v] = true;
    }
    let mut t = Tarjan::new(gv.n());
    let mut work = 0;
    t.run(nodes, |v| gv.succ(v), |v| inside[v], &mut work)
}

/// Result of re-running Tarjan on one component after deletions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub old: usize,
    /// New component ids; `old` is reused for the largest fragment.
    pub parts: Vec<usize>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SccStats {
    pub rebuilds: u64,
    pub tarjan_runs: u64,
    /// Nodes and arcs scanned by the last repair.
    pub last_repair_work: u64,
    /// Nodes and arcs scanned by the last reduced-path walk.
    pub last_visit_work: u64,
}

/// SCC partition of the potential graph with its condensation.
#[derive(Debug, Clone)]
pub struct ReducedState {
    n: usize,
    s: usize,
    e: usize,
    scc_of: Vec<u32>,
    canonical: Vec<u32>,
    next_in_scc: Vec<u32>,
    size: Vec<u32>,
    free: Vec<u32>,
    live: usize,
    out_arcs: Vec<Vec<(u32, u32)>>,
    out_pos: Vec<u32>,
    rcount: Vec<u32>,
    r_out: Vec<u32>,
    r_in: Vec<u32>,
    ext_in: Vec<u32>,
    ext_out: Vec<u32>,
    indoors: Vec<u32>,
    outdoors: Vec<u32>,
    pub(crate) path_next: Vec<u32>,
    pub(crate) path_prev: Vec<u32>,
    pub(crate) is_path: bool,
    built_at: Option<u64>,
    pub(crate) sync_mark: Option<(u64, usize)>,
    mark: Vec<u64>,
    epoch: u64,
    in_split: Vec<u64>,
    split_stamp: u64,
    tarjan: Tarjan,
    pub stats: SccStats,
}

impl ReducedState {
    pub fn new(n: usize, s: usize, e: usize) -> Self {
        ReducedState {
            n,
            s,
            e,
            scc_of: vec![NONE; n],
            canonical: vec![NONE; n],
            next_in_scc: vec![NONE; n],
            size: vec![0; n],
            free: Vec::new(),
            live: 0,
            out_arcs: vec![Vec::new(); n],
            out_pos: vec![NONE; n * n],
            rcount: vec![0; n * n],
            r_out: vec![0; n],
            r_in: vec![0; n],
            ext_in: vec![0; n],
            ext_out: vec![0; n],
            indoors: vec![0; n],
            outdoors: vec![0; n],
            path_next: vec![NONE; n],
            path_prev: vec![NONE; n],
            is_path: false,
            built_at: None,
            sync_mark: None,
            mark: vec![0; n],
            epoch: 0,
            in_split: vec![0; n],
            split_stamp: 0,
            tarjan: Tarjan::new(n),
            stats: SccStats::default(),
        }
    }

    /// Fresh state computed from scratch.
    pub fn build(gv: &GraphVar) -> Self {
        let mut st = Self::new(gv.n(), gv.start(), gv.end());
        st.rebuild(gv);
        st
    }

    /// Whether the state was built since the last backtrack of `gv`.
    pub fn is_current(&self, gv: &GraphVar) -> bool {
        self.built_at == Some(gv.backtracks())
    }

    pub(crate) fn invalidate(&mut self) {
        self.built_at = None;
        self.is_path = false;
        self.sync_mark = None;
    }

    /// Full recomputation in O(n + m).
    pub fn rebuild(&mut self, gv: &GraphVar) {
        let n = self.n;
        for x in 0..n {
            if self.canonical[x] == NONE {
                continue;
            }
            for &(u, v) in &self.out_arcs[x] {
                self.out_pos[u as usize * n + v as usize] = NONE;
                self.rcount[x * n + self.scc_of[v as usize] as usize] = 0;
            }
            self.out_arcs[x].clear();
        }
        self.canonical.iter_mut().for_each(|c| *c = NONE);
        self.r_out.iter_mut().for_each(|c| *c = 0);
        self.r_in.iter_mut().for_each(|c| *c = 0);
        self.ext_in.iter_mut().for_each(|c| *c = 0);
        self.ext_out.iter_mut().for_each(|c| *c = 0);
        self.indoors.iter_mut().for_each(|c| *c = 0);
        self.outdoors.iter_mut().for_each(|c| *c = 0);
        self.path_next.iter_mut().for_each(|c| *c = NONE);
        self.path_prev.iter_mut().for_each(|c| *c = NONE);

        let all: Vec<usize> = (0..n).collect();
        let mut work = 0;
        let comps = self.tarjan.run(&all, |v| gv.succ(v), |_| true, &mut work);
        // Completion order is reverse topological; number from the source side.
        self.live = comps.len();
        for (i, comp) in comps.iter().rev().enumerate() {
            self.install_component(i, comp);
        }
        self.free = (self.live..n).rev().map(|x| x as u32).collect();
        for u in 0..n {
            let x = self.scc_of[u] as usize;
            for &v in gv.succ(u) {
                let y = self.scc_of[v as usize] as usize;
                if x != y {
                    self.link(u, v as usize, x, y);
                    self.ext_out[u] += 1;
                    self.ext_in[v as usize] += 1;
                }
            }
        }
        for x in 0..self.live {
            self.recount_doors(x);
        }
        self.is_path = false;
        self.sync_mark = None;
        self.built_at = Some(gv.backtracks());
        self.stats.rebuilds += 1;
    }

    fn install_component(&mut self, id: usize, comp: &[usize]) {
        let mut sorted = comp.to_vec();
        sorted.sort_unstable();
        self.canonical[id] = sorted[0] as u32;
        self.size[id] = sorted.len() as u32;
        for (k, &v) in sorted.iter().enumerate() {
            self.scc_of[v] = id as u32;
            self.next_in_scc[v] = sorted.get(k + 1).map_or(NONE, |&w| w as u32);
        }
    }

    fn recount_doors(&mut self, x: usize) {
        let (mut i, mut o) = (0, 0);
        let mut v = self.canonical[x];
        while v != NONE {
            i += (self.ext_in[v as usize] > 0) as u32;
            o += (self.ext_out[v as usize] > 0) as u32;
            v = self.next_in_scc[v as usize];
        }
        self.indoors[x] = i;
        self.outdoors[x] = o;
    }

    fn link(&mut self, u: usize, v: usize, x: usize, y: usize) {
        let n = self.n;
        self.out_pos[u * n + v] = self.out_arcs[x].len() as u32;
        self.out_arcs[x].push((u as u32, v as u32));
        let c = &mut self.rcount[x * n + y];
        *c += 1;
        if *c == 1 {
            self.r_out[x] += 1;
            self.r_in[y] += 1;
        }
    }

    fn unlink(&mut self, u: usize, v: usize, x: usize, y: usize) {
        let n = self.n;
        let p = self.out_pos[u * n + v] as usize;
        let list = &mut self.out_arcs[x];
        let last = *list.last().unwrap();
        list.swap_remove(p);
        if p < list.len() {
            self.out_pos[last.0 as usize * n + last.1 as usize] = p as u32;
        }
        self.out_pos[u * n + v] = NONE;
        let c = &mut self.rcount[x * n + y];
        *c -= 1;
        if *c == 0 {
            self.r_out[x] -= 1;
            self.r_in[y] -= 1;
        }
    }

    /// Drops a deleted cross-component arc from the bookkeeping. Returns
    /// false if it was not tracked (already dropped, or not cross).
    pub(crate) fn drop_cross(&mut self, u: usize, v: usize) -> bool {
        if self.out_pos[u * self.n + v] == NONE {
            return false;
        }
        let (x, y) = (self.scc_of[u] as usize, self.scc_of[v] as usize);
        self.unlink(u, v, x, y);
        self.ext_out[u] -= 1;
        if self.ext_out[u] == 0 {
            self.outdoors[x] -= 1;
        }
        self.ext_in[v] -= 1;
        if self.ext_in[v] == 0 {
            self.indoors[y] -= 1;
        }
        true
    }

    /// Updates the partition after `removed` arcs left the potential graph.
    /// Each component containing an internal removal is recomputed exactly
    /// once, whatever the number of removals inside it.
    pub fn repair_after_deletions(&mut self, gv: &GraphVar, removed: &[(usize, usize)]) -> Vec<Split> {
        self.epoch += 1;
        let epoch = self.epoch;
        let mut work = 0u64;
        let mut splits = Vec::new();
        // Cross arcs first, while the partition they were recorded under
        // still holds.
        for &(u, v) in removed {
            debug_assert!(!gv.has_arc(u, v));
            work += 1;
            if self.scc_of[u] != self.scc_of[v] {
                self.drop_cross(u, v);
            }
        }
        for &(u, v) in removed {
            let x = self.scc_of[u] as usize;
            if x != self.scc_of[v] as usize {
                continue;
            }
            if self.mark[x] == epoch {
                continue;
            }
            self.mark[x] = epoch;
            if let Some(split) = self.resplit(gv, x, &mut work) {
                for &p in &split.parts {
                    self.mark[p] = epoch;
                }
                splits.push(split);
            }
        }
        self.stats.last_repair_work = work;
        splits
    }

    fn resplit(&mut self, gv: &GraphVar, x: usize, work: &mut u64) -> Option<Split> {
        self.stats.tarjan_runs += 1;
        let members = self.nodes_of(x);
        self.split_stamp += 1;
        let epoch = self.split_stamp;
        for &v in &members {
            self.in_split[v] = epoch;
        }
        let in_split = &self.in_split;
        let comps = self.tarjan.run(&members, |v| gv.succ(v), |w| in_split[w] == epoch, work);
        if comps.len() == 1 {
            return None;
        }
        let largest = (0..comps.len()).max_by_key(|&i| (comps[i].len(), std::cmp::Reverse(i))).unwrap();
        let mut parts = Vec::with_capacity(comps.len());
        // Completion order is reverse topological; keep parts source-first.
        for i in (0..comps.len()).rev() {
            let id = if i == largest { x } else { self.free.pop().expect("id pool exhausted") as usize };
            self.install_component(id, &comps[i]);
            parts.push(id);
        }
        self.live += comps.len() - 1;

        let n = self.n;
        for &u in &members {
            *work += 1;
            let nu = self.scc_of[u] as usize;
            for &v in gv.succ(u) {
                let v = v as usize;
                *work += 1;
                if self.in_split[v] == epoch {
                    let nv = self.scc_of[v] as usize;
                    if nu != nv {
                        self.link(u, v, nu, nv);
                        self.ext_out[u] += 1;
                        self.ext_in[v] += 1;
                    }
                } else if nu != x {
                    let y = self.scc_of[v] as usize;
                    self.unlink(u, v, x, y);
                    self.link(u, v, nu, y);
                }
            }
            for &w in gv.pred(u) {
                let w = w as usize;
                *work += 1;
                if self.in_split[w] != epoch && nu != x {
                    let y = self.scc_of[w] as usize;
                    self.unlink(w, u, y, x);
                    self.link(w, u, y, nu);
                }
            }
        }
        debug_assert!(members.iter().all(|&u| gv.succ(u).iter().all(|&v| {
            let v = v as usize;
            (self.scc_of[u] == self.scc_of[v]) == (self.out_pos[u * n + v] == NONE)
        })));
        for &p in &parts {
            self.recount_doors(p);
        }
        Some(Split { old: x, parts })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn start(&self) -> usize {
        self.s
    }
    pub fn end(&self) -> usize {
        self.e
    }

    /// Number of components.
    pub fn n_r(&self) -> usize {
        self.live
    }

    pub fn scc_of(&self, v: usize) -> usize {
        self.scc_of[v] as usize
    }

    pub fn nodes_of(&self, x: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.size[x] as usize);
        let mut v = self.canonical[x];
        while v != NONE {
            out.push(v as usize);
            v = self.next_in_scc[v as usize];
        }
        out
    }

    pub fn size(&self, x: usize) -> usize {
        self.size[x] as usize
    }

    pub fn canonical(&self, x: usize) -> Option<usize> {
        let c = self.canonical[x];
        (c != NONE).then_some(c as usize)
    }

    pub fn components(&self) -> Vec<usize> {
        (0..self.n).filter(|&x| self.canonical[x] != NONE).collect()
    }

    pub fn out_arcs(&self, x: usize) -> &[(u32, u32)] {
        &self.out_arcs[x]
    }

    /// Number of potential arcs from component `x` to component `y`.
    pub fn arc_count(&self, x: usize, y: usize) -> usize {
        self.rcount[x * self.n + y] as usize
    }

    pub fn reduced_out_degree(&self, x: usize) -> usize {
        self.r_out[x] as usize
    }

    pub fn reduced_in_degree(&self, x: usize) -> usize {
        self.r_in[x] as usize
    }

    /// Distinct successor components of `x`, sorted.
    pub fn reduced_succ(&self, x: usize) -> Vec<usize> {
        let mut ys: Vec<usize> = self.out_arcs[x].iter().map(|&(_, v)| self.scc_of[v as usize] as usize).collect();
        ys.sort_unstable();
        ys.dedup();
        ys
    }

    pub fn indoor_count(&self, x: usize) -> usize {
        self.indoors[x] as usize
    }

    pub fn outdoor_count(&self, x: usize) -> usize {
        self.outdoors[x] as usize
    }

    pub fn is_indoor(&self, v: usize) -> bool {
        self.ext_in[v] > 0
    }

    pub fn is_outdoor(&self, v: usize) -> bool {
        self.ext_out[v] > 0
    }

    /// Whether the condensation is currently known to be a simple path.
    pub fn is_path(&self) -> bool {
        self.is_path
    }

    /// Components along the reduced path from `s_R` to `e_R`.
    pub fn path_order(&self) -> Option<Vec<usize>> {
        if !self.is_path {
            return None;
        }
        let mut out = Vec::with_capacity(self.live);
        let mut x = self.scc_of[self.s];
        while x != NONE {
            out.push(x as usize);
            x = self.path_next[x as usize];
        }
        Some(out)
    }

    /// Whether the condensation has no circuit (checked by DFS).
    pub fn reduced_is_acyclic(&self) -> bool {
        let comps = self.components();
        let mut color = vec![0u8; self.n];
        fn dfs(st: &ReducedState, x: usize, color: &mut [u8]) -> bool {
            color[x] = 1;
            for y in st.reduced_succ(x) {
                if color[y] == 1 || (color[y] == 0 && !dfs(st, y, color)) {
                    return false;
                }
            }
            color[x] = 2;
            true
        }
        comps.iter().all(|&x| color[x] != 0 || dfs(self, x, &mut color))
    }

    /// Id-independent snapshot used to compare two states.
    pub fn canonical_form(&self) -> CanonicalForm {
        let mut comps: Vec<ComponentForm> = self
            .components()
            .into_iter()
            .map(|x| {
                let mut nodes = self.nodes_of(x);
                nodes.sort_unstable();
                let mut out: Vec<(usize, usize)> =
                    self.out_arcs[x].iter().map(|&(u, v)| (u as usize, v as usize)).collect();
                out.sort_unstable();
                let mut succ: Vec<(usize, usize)> = self
                    .reduced_succ(x)
                    .into_iter()
                    .map(|y| (self.canonical[y] as usize, self.rcount[x * self.n + y] as usize))
                    .collect();
                succ.sort_unstable();
                ComponentForm {
                    nodes,
                    out_arcs: out,
                    succ,
                    in_degree: self.r_in[x] as usize,
                    indoors: self.indoors[x] as usize,
                    outdoors: self.outdoors[x] as usize,
                }
            })
            .collect();
        comps.sort_by_key(|c| c.nodes[0]);
        CanonicalForm { components: comps }
    }

    /// Checks that `nodes_of` inverts `scc_of` and that `out_arcs` holds
    /// exactly the cross-component potential arcs.
    pub fn check_consistency(&self, gv: &GraphVar) -> bool {
        let mut count = 0;
        for x in self.components() {
            for v in self.nodes_of(x) {
                if self.scc_of[v] as usize != x {
                    return false;
                }
                count += 1;
            }
            for &(u, v) in &self.out_arcs[x] {
                if self.scc_of[u as usize] as usize != x || self.scc_of[v as usize] as usize == x {
                    return false;
                }
                if !gv.has_arc(u as usize, v as usize) {
                    return false;
                }
            }
        }
        if count != self.n {
            return false;
        }
        (0..self.n).all(|u| {
            gv.succ(u).iter().all(|&v| {
                let cross = self.scc_of[u] != self.scc_of[v as usize];
                cross == (self.out_pos[u * self.n + v as usize] != NONE)
            })
        })
    }

    /// For each node, the nodes reachable from it in the potential graph,
    /// read off the reduced path in O(sum of the answer sizes).
    pub fn transitive_closure(&self) -> Result<Vec<Vec<usize>>> {
        let order = self
            .path_order()
            .ok_or_else(|| Error::PreconditionViolation("reduced graph is not a path".into()))?;
        let mut suffix: Vec<Vec<usize>> = vec![Vec::new(); order.len() + 1];
        for i in (0..order.len()).rev() {
            let mut acc = self.nodes_of(order[i]);
            acc.extend_from_slice(&suffix[i + 1]);
            suffix[i] = acc;
        }
        let mut pos = vec![0; self.n];
        for (i, &x) in order.iter().enumerate() {
            pos[x] = i;
        }
        Ok((0..self.n)
            .map(|v| {
                let x = self.scc_of[v] as usize;
                let mut reach: Vec<usize> = suffix[pos[x]].iter().copied().filter(|&w| w != v).collect();
                reach.sort_unstable();
                reach
            })
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentForm {
    pub nodes: Vec<usize>,
    pub out_arcs: Vec<(usize, usize)>,
    /// (canonical node of successor component, arc count)
    pub succ: Vec<(usize, usize)>,
    pub in_degree: usize,
    pub indoors: usize,
    pub outdoors: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    pub components: Vec<ComponentForm>,
}

//! Spanning trees of the undirected support of the potential graph, and
//! the marginal / replacement cost filtering on top of them.
//!
//! The edge `{u, v}` takes its cost from the cheaper present direction under
//! effective costs; a mandatory arc fixes the direction and is always part of
//! the tree.

use std::cmp::Ordering;
use std::collections::VecDeque;

use super::model::CostModel;
use super::exceeds;
use crate::error::{Contradiction, PropResult};
use crate::graph::{GraphVar, NONE};
use crate::scheduler::ArcScores;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeEdge {
    pub tail: usize,
    pub head: usize,
    pub cost: f64,
    pub mandatory: bool,
}

impl TreeEdge {
    fn key(&self) -> (bool, f64, usize, usize) {
        (!self.mandatory, self.cost, self.tail, self.head)
    }

    fn cmp_key(&self, other: &TreeEdge) -> Ordering {
        let (a, b) = (self.key(), other.key());
        a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.cmp(&b.2)).then(a.3.cmp(&b.3))
    }

    pub fn touches(&self, u: usize, v: usize) -> bool {
        (self.tail == u && self.head == v) || (self.tail == v && self.head == u)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpanningTree {
    pub edges: Vec<TreeEdge>,
    pub cost: f64,
}

impl SpanningTree {
    fn from_edges(edges: Vec<TreeEdge>) -> Self {
        let cost = edges.iter().map(|e| e.cost).sum();
        SpanningTree { edges, cost }
    }

    pub fn contains_arc(&self, u: usize, v: usize) -> bool {
        self.edges.iter().any(|e| e.tail == u && e.head == v)
    }

    /// (in-degree, out-degree) of every node over the oriented edges.
    pub fn degrees(&self, n: usize) -> (Vec<i64>, Vec<i64>) {
        let mut din = vec![0; n];
        let mut dout = vec![0; n];
        for e in &self.edges {
            dout[e.tail] += 1;
            din[e.head] += 1;
        }
        (din, dout)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MstAlgorithm {
    Prim,
    Kruskal,
}

/// The tree representative of the pair `{u, v}`, if either arc is present.
pub fn pair_edge(gv: &GraphVar, cm: &CostModel<'_>, u: usize, v: usize) -> Option<TreeEdge> {
    let fw = gv.has_arc(u, v);
    let bw = gv.has_arc(v, u);
    let mk = |t: usize, h: usize| TreeEdge { tail: t, head: h, cost: cm.effective(t, h), mandatory: gv.is_mandatory(t, h) };
    match (fw, bw) {
        (false, false) => None,
        (true, false) => Some(mk(u, v)),
        (false, true) => Some(mk(v, u)),
        (true, true) => {
            let (a, b) = (mk(u, v), mk(v, u));
            Some(if a.cmp_key(&b) == Ordering::Greater { b } else { a })
        }
    }
}

fn mandatory_inside(gv: &GraphVar, nodes: &[usize], member: &dyn Fn(usize) -> bool) -> usize {
    nodes.iter().map(|&u| gv.mandatory_succ(u).iter().filter(|&&v| member(v as usize)).count()).sum()
}

/// Prim over the subgraph induced by `nodes`.
pub fn prim_on(gv: &GraphVar, cm: &CostModel<'_>, nodes: &[usize], member: &dyn Fn(usize) -> bool) -> Result<SpanningTree, Contradiction> {
    let n = gv.n();
    if nodes.len() <= 1 {
        return Ok(SpanningTree::from_edges(Vec::new()));
    }
    let mut in_tree = vec![false; n];
    let mut best: Vec<Option<TreeEdge>> = vec![None; n];
    let mut edges = Vec::with_capacity(nodes.len() - 1);
    let mut cur = nodes[0];
    in_tree[cur] = true;
    for _ in 1..nodes.len() {
        for &w in gv.succ(cur).iter().chain(gv.pred(cur)) {
            let w = w as usize;
            if in_tree[w] || !member(w) {
                continue;
            }
            let cand = pair_edge(gv, cm, cur, w).unwrap();
            if best[w].is_none_or(|b| cand.cmp_key(&b) == Ordering::Less) {
                best[w] = Some(cand);
            }
        }
        let mut pick: Option<(usize, TreeEdge)> = None;
        for &v in nodes {
            if in_tree[v] {
                continue;
            }
            if let Some(e) = best[v] {
                let better = match pick {
                    None => true,
                    Some((pv, pe)) => match (e.mandatory, pe.mandatory) {
                        (true, false) => true,
                        (false, true) => false,
                        _ => e.cost.total_cmp(&pe.cost).then(v.cmp(&pv)) == Ordering::Less,
                    },
                };
                if better {
                    pick = Some((v, e));
                }
            }
        }
        let (v, e) = pick.ok_or(Contradiction)?;
        in_tree[v] = true;
        edges.push(e);
        cur = v;
    }
    if edges.iter().filter(|e| e.mandatory).count() != mandatory_inside(gv, nodes, member) {
        return Err(Contradiction);
    }
    Ok(SpanningTree::from_edges(edges))
}

pub fn prim(gv: &GraphVar, cm: &CostModel<'_>) -> Result<SpanningTree, Contradiction> {
    let nodes: Vec<usize> = (0..gv.n()).collect();
    prim_on(gv, cm, &nodes, &|_| true)
}

struct Dsu {
    parent: Vec<u32>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu { parent: (0..n as u32).collect() }
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let p = self.parent[x] as usize;
            self.parent[x] = self.parent[p];
            x = p;
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb) as u32;
        true
    }
}

/// Tree representatives of all pairs inside `nodes`, in Kruskal order.
fn sorted_pairs(gv: &GraphVar, cm: &CostModel<'_>, nodes: &[usize], member: &dyn Fn(usize) -> bool) -> Vec<TreeEdge> {
    let mut out = Vec::new();
    for &u in nodes {
        for &v in gv.succ(u) {
            let v = v as usize;
            if !member(v) || (gv.has_arc(v, u) && v < u) {
                continue;
            }
            out.push(pair_edge(gv, cm, u, v).unwrap());
        }
    }
    out.sort_by(|a, b| a.cmp_key(b));
    out
}

/// Kruskal over the subgraph induced by `nodes`; mandatory edges go first.
pub fn kruskal_on(gv: &GraphVar, cm: &CostModel<'_>, nodes: &[usize], member: &dyn Fn(usize) -> bool) -> Result<SpanningTree, Contradiction> {
    let mut dsu = Dsu::new(gv.n());
    let mut edges = Vec::with_capacity(nodes.len().saturating_sub(1));
    for e in sorted_pairs(gv, cm, nodes, member) {
        if dsu.union(e.tail, e.head) {
            edges.push(e);
        } else if e.mandatory {
            return Err(Contradiction);
        }
    }
    if edges.len() + 1 != nodes.len().max(1) {
        return Err(Contradiction);
    }
    Ok(SpanningTree::from_edges(edges))
}

pub fn kruskal(gv: &GraphVar, cm: &CostModel<'_>) -> Result<SpanningTree, Contradiction> {
    let nodes: Vec<usize> = (0..gv.n()).collect();
    kruskal_on(gv, cm, &nodes, &|_| true)
}

/// Minimum spanning tree containing every mandatory arc.
pub fn mst(gv: &GraphVar, cm: &CostModel<'_>, alg: MstAlgorithm) -> Result<SpanningTree, Contradiction> {
    match alg {
        MstAlgorithm::Prim => prim(gv, cm),
        MstAlgorithm::Kruskal => kruskal(gv, cm),
    }
}

/// Arcs to remove or enforce, and branching scores, from one tree.
#[derive(Debug, Clone, Default)]
pub struct FilterOutcome {
    pub remove: Vec<(usize, usize)>,
    pub enforce: Vec<(usize, usize)>,
    pub scores: ArcScores,
}

impl FilterOutcome {
    pub fn apply(&self, gv: &mut GraphVar) -> PropResult {
        for &(u, v) in &self.remove {
            gv.remove_arc(u, v)?;
        }
        for &(u, v) in &self.enforce {
            gv.enforce_arc(u, v)?;
        }
        Ok(())
    }
}

/// Marginal and replacement costs over a spanning forest. Only arcs with
/// both ends in the same forest component are examined. `bound` is the
/// lower bound the forest certifies (its cost minus any penalty offset).
pub(crate) fn forest_filter(gv: &GraphVar, cm: &CostModel<'_>, forest: &[TreeEdge], bound: f64, ub: i64) -> FilterOutcome {
    let n = gv.n();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (i, e) in forest.iter().enumerate() {
        adj[e.tail].push((e.head, i));
        adj[e.head].push((e.tail, i));
    }
    // Root every component; record parent edge and depth.
    let mut comp = vec![NONE; n];
    let mut parent = vec![NONE as usize; n];
    let mut parent_edge = vec![NONE as usize; n];
    let mut depth = vec![0usize; n];
    let mut q = VecDeque::new();
    let mut ncomp = 0u32;
    for r in 0..n {
        if comp[r] != NONE {
            continue;
        }
        comp[r] = ncomp;
        q.push_back(r);
        while let Some(u) = q.pop_front() {
            for &(w, i) in &adj[u] {
                if comp[w] == NONE {
                    comp[w] = ncomp;
                    parent[w] = u;
                    parent_edge[w] = i;
                    depth[w] = depth[u] + 1;
                    q.push_back(w);
                }
            }
        }
        ncomp += 1;
    }

    // Heaviest removable edge on the tree path between every pair.
    let mut maxe = vec![f64::NEG_INFINITY; n * n];
    let mut seen = vec![false; n];
    for r in 0..n {
        if adj[r].is_empty() {
            continue;
        }
        seen.iter_mut().for_each(|s| *s = false);
        seen[r] = true;
        q.push_back(r);
        while let Some(u) = q.pop_front() {
            for &(w, i) in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    let e = &forest[i];
                    let here = if e.mandatory { f64::NEG_INFINITY } else { e.cost };
                    maxe[r * n + w] = maxe[r * n + u].max(here);
                    q.push_back(w);
                }
            }
        }
    }

    let mut out = FilterOutcome::default();
    let mut is_tree_arc = vec![false; n * n];
    for e in forest {
        is_tree_arc[e.tail * n + e.head] = true;
    }
    let mut non_tree_pairs = Vec::new();
    for u in 0..n {
        for &v in gv.succ(u) {
            let v = v as usize;
            if comp[u] != comp[v] || is_tree_arc[u * n + v] || gv.is_mandatory(u, v) {
                continue;
            }
            let c = cm.effective(u, v);
            let heavy = maxe[u * n + v];
            let marginal = if heavy == f64::NEG_INFINITY { f64::INFINITY } else { c - heavy };
            if exceeds(bound + marginal, ub) {
                out.remove.push((u, v));
            }
            out.scores.others.push((u, v, marginal));
            let rev_tree = is_tree_arc[v * n + u];
            if !rev_tree && (!gv.has_arc(v, u) || u < v) {
                non_tree_pairs.push(pair_edge(gv, cm, u, v).unwrap());
            }
        }
    }

    // Replacement costs: cheapest non-tree pair spanning each tree edge,
    // assigned by walking up from both ends with union-find jumps.
    non_tree_pairs.sort_by(|a, b| a.cmp_key(b));
    let mut repl = vec![f64::INFINITY; forest.len()];
    let mut jump: Vec<usize> = (0..n).collect();
    fn top(jump: &mut [usize], mut x: usize) -> usize {
        while jump[x] != x {
            jump[x] = jump[jump[x]];
            x = jump[x];
        }
        x
    }
    for p in &non_tree_pairs {
        let mut a = top(&mut jump, p.tail);
        let mut b = top(&mut jump, p.head);
        while a != b {
            if depth[a] < depth[b] {
                std::mem::swap(&mut a, &mut b);
            }
            repl[parent_edge[a]] = p.cost;
            jump[a] = parent[a];
            a = top(&mut jump, a);
        }
    }
    for (i, e) in forest.iter().enumerate() {
        if e.mandatory {
            continue;
        }
        let rc = repl[i] - e.cost;
        if exceeds(bound + rc, ub) && !gv.has_arc(e.head, e.tail) {
            out.enforce.push((e.tail, e.head));
        }
        out.scores.solution.push((e.tail, e.head, rc));
    }
    out
}

/// Filtering by a minimum spanning tree of effective costs. `offset` is the
/// penalty sum subtracted to obtain the bound (zero without penalties).
pub fn wst_filter(gv: &GraphVar, tree: &SpanningTree, cm: &CostModel<'_>, offset: f64, ub: i64) -> Result<FilterOutcome, Contradiction> {
    let bound = tree.cost - offset;
    if exceeds(bound, ub) {
        return Err(Contradiction);
    }
    Ok(forest_filter(gv, cm, &tree.edges, bound, ub))
}

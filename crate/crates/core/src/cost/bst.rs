//! Spanning tree bound when the components form a path: each component is
//! spanned on its own and consecutive components are linked by their
//! cheapest connecting arc.

use super::exceeds;
use super::model::CostModel;
use super::spanning::{forest_filter, prim_on, FilterOutcome, SpanningTree, TreeEdge};
use crate::error::Contradiction;
use crate::graph::GraphVar;
use crate::scc::ReducedState;

#[derive(Debug, Clone)]
pub struct Bst {
    /// Union of the per-component trees.
    pub forest: Vec<TreeEdge>,
    /// Selected connector per component (all but the last one).
    pub connectors: Vec<(usize, TreeEdge)>,
    /// Cost of each component's own tree, indexed by component id.
    pub component_cost: Vec<(usize, f64)>,
    pub cost: f64,
}

impl Bst {
    pub fn tree(&self) -> SpanningTree {
        let mut edges = self.forest.clone();
        edges.extend(self.connectors.iter().map(|&(_, e)| e));
        SpanningTree { edges, cost: self.cost }
    }
}

fn connector_key(a: &TreeEdge) -> (bool, f64, usize, usize) {
    (!a.mandatory, a.cost, a.tail, a.head)
}

fn cheaper(a: &TreeEdge, b: &TreeEdge) -> bool {
    let (x, y) = (connector_key(a), connector_key(b));
    x.0.cmp(&y.0).then(x.1.total_cmp(&y.1)).then(x.2.cmp(&y.2)).then(x.3.cmp(&y.3)).is_lt()
}

/// Builds the bound. `st` must describe the current potential graph and be
/// a path.
pub fn bst_build(gv: &GraphVar, st: &ReducedState, cm: &CostModel<'_>) -> Result<Bst, Contradiction> {
    let er = st.scc_of(gv.end());
    let mut forest = Vec::new();
    let mut connectors = Vec::new();
    let mut component_cost = Vec::new();
    let mut cost = 0.0;
    for x in st.path_order().ok_or(Contradiction)? {
        let nodes = st.nodes_of(x);
        let tree = prim_on(gv, cm, &nodes, &|v| st.scc_of(v) == x)?;
        cost += tree.cost;
        component_cost.push((x, tree.cost));
        forest.extend(tree.edges);
        if x == er {
            continue;
        }
        let mut best: Option<TreeEdge> = None;
        for &(u, v) in st.out_arcs(x) {
            let (u, v) = (u as usize, v as usize);
            let e = TreeEdge { tail: u, head: v, cost: cm.effective(u, v), mandatory: gv.is_mandatory(u, v) };
            if best.as_ref().is_none_or(|b| cheaper(&e, b)) {
                best = Some(e);
            }
        }
        let e = best.ok_or(Contradiction)?;
        cost += e.cost;
        connectors.push((x, e));
    }
    Ok(Bst { forest, connectors, component_cost, cost })
}

/// Filtering by the bound: intra-component arcs by marginal and replacement
/// costs on their component's tree; a connecting arc can only take the place
/// of the selected connector of the same component.
pub fn bst_filter(
    gv: &GraphVar,
    st: &ReducedState,
    bst: &Bst,
    cm: &CostModel<'_>,
    offset: f64,
    ub: i64,
) -> Result<FilterOutcome, Contradiction> {
    let bound = bst.cost - offset;
    if exceeds(bound, ub) {
        return Err(Contradiction);
    }
    let mut out = forest_filter(gv, cm, &bst.forest, bound, ub);
    // The forest filter sees connector pairs as cross-component; nothing to undo.
    for &(x, sel) in &bst.connectors {
        let mut survivors = Vec::new();
        let mut second = f64::INFINITY;
        for &(u, v) in st.out_arcs(x) {
            let (u, v) = (u as usize, v as usize);
            if (u, v) == (sel.tail, sel.head) {
                survivors.push((u, v));
                continue;
            }
            let c = cm.effective(u, v);
            second = second.min(c);
            let marginal = c - sel.cost;
            out.scores.others.push((u, v, marginal));
            if !gv.is_mandatory(u, v) && exceeds(bound + marginal, ub) {
                out.remove.push((u, v));
            } else {
                survivors.push((u, v));
            }
        }
        if !sel.mandatory {
            out.scores.solution.push((sel.tail, sel.head, second - sel.cost));
        }
        if let [(u, v)] = survivors[..] {
            if !gv.is_mandatory(u, v) {
                out.enforce.push((u, v));
            }
        }
    }
    Ok(out)
}

//! Held–Karp style Lagrangian relaxation of the path by spanning trees,
//! with separate penalties on in- and out-degrees.

use super::bst::{bst_build, bst_filter};
use super::model::CostModel;
use super::spanning::{kruskal, prim, wst_filter, SpanningTree};
use super::trivial::lb_trivial;
use super::{exceeds, round_bound};
use crate::error::{Contradiction, PropResult};
use crate::graph::{Event, GraphVar};
use crate::instance::Instance;
use crate::scc::ReducedState;
use crate::scheduler::{Priority, Propagator, Store, INFINITE};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeMode {
    Mst,
    Bst,
}

/// Multipliers kept across calls and across backtracking.
#[derive(Debug, Clone)]
pub struct LagrangianState {
    pub pi_in: Vec<f64>,
    pub pi_out: Vec<f64>,
    pub best_lb: f64,
    pub iterations: u64,
}

impl LagrangianState {
    pub fn new(n: usize) -> Self {
        LagrangianState { pi_in: vec![0.0; n], pi_out: vec![0.0; n], best_lb: f64::NEG_INFINITY, iterations: 0 }
    }
}

#[derive(Debug, Clone)]
pub struct HeldKarp {
    mode: TreeMode,
    pub state: LagrangianState,
    pub iterations_per_run: usize,
    pub root_runs: usize,
    pub node_runs: usize,
}

impl HeldKarp {
    pub fn new(n: usize, mode: TreeMode) -> Self {
        HeldKarp { mode, state: LagrangianState::new(n), iterations_per_run: 30, root_runs: 2, node_runs: 1 }
    }

    fn tree(&self, gv: &GraphVar, cm: &CostModel<'_>, reduced: Option<&ReducedState>) -> Result<SpanningTree, Contradiction> {
        match self.mode {
            TreeMode::Mst => prim(gv, cm),
            TreeMode::Bst => bst_build(gv, reduced.ok_or(Contradiction)?, cm).map(|b| b.tree()),
        }
    }

    /// Runs the subgradient loop and leaves the multipliers at the best
    /// iterate. Returns the best bound found.
    pub fn optimize(
        &mut self,
        gv: &GraphVar,
        inst: &Instance,
        reduced: Option<&ReducedState>,
        ub: i64,
        runs: usize,
    ) -> Result<f64, Contradiction> {
        let (n, s, e) = (gv.n(), gv.start(), gv.end());
        let target = if ub == INFINITE { 2.0 * lb_trivial(gv, inst).unwrap_or(0) as f64 } else { ub as f64 };
        let mut best = f64::NEG_INFINITY;
        let mut best_pi = (self.state.pi_in.clone(), self.state.pi_out.clone());
        'runs: for _ in 0..runs {
            let mut lambda = 2.0;
            let mut stall = 0;
            let (mut pi_in, mut pi_out) = best_pi.clone();
            for _ in 0..self.iterations_per_run {
                self.state.iterations += 1;
                let cm = CostModel::with_penalties(inst, pi_in.clone(), pi_out.clone());
                let tree = self.tree(gv, &cm, reduced)?;
                let lb = tree.cost - cm.penalty_sum();
                if exceeds(lb, ub) {
                    return Err(Contradiction);
                }
                if lb > best {
                    best = lb;
                    best_pi = (pi_in.clone(), pi_out.clone());
                    stall = 0;
                } else {
                    stall += 1;
                    if stall == 10 {
                        lambda /= 2.0;
                        stall = 0;
                    }
                }
                let (din, dout) = tree.degrees(n);
                let gin = |v: usize| if v == s { 0.0 } else { (din[v] - 1) as f64 };
                let gout = |v: usize| if v == e { 0.0 } else { (dout[v] - 1) as f64 };
                let denom: f64 = (0..n).map(|v| gin(v) * gin(v) + gout(v) * gout(v)).sum();
                if denom == 0.0 {
                    // The tree is itself a Hamiltonian path; nothing to improve.
                    break 'runs;
                }
                let step = lambda * (target - lb).max(1.0) / denom;
                for v in 0..n {
                    pi_in[v] += gin(v) * step;
                    pi_out[v] += gout(v) * step;
                }
            }
        }
        self.state.pi_in = best_pi.0;
        self.state.pi_out = best_pi.1;
        self.state.best_lb = best;
        Ok(best)
    }
}

impl Propagator for HeldKarp {
    fn name(&self) -> &'static str {
        match self.mode {
            TreeMode::Mst => "held_karp",
            TreeMode::Bst => "held_karp_bst",
        }
    }

    fn priority(&self) -> Priority {
        Priority::Last
    }

    fn wakes_on_own_events(&self) -> bool {
        false
    }

    fn propagate(&mut self, st: &mut Store<'_>, _: &[Event], _: bool) -> PropResult {
        if self.mode == TreeMode::Bst && st.synced_path().is_none() {
            return Ok(());
        }
        let runs = if st.at_root() { self.root_runs } else { self.node_runs };
        let reduced = st.reduced.as_ref();
        let best = self.optimize(&st.gv, st.inst, reduced, st.ub, runs)?;
        let cm = CostModel::with_penalties(st.inst, self.state.pi_in.clone(), self.state.pi_out.clone());
        let offset = cm.penalty_sum();
        let outcome = match self.mode {
            TreeMode::Mst => {
                let tree = kruskal(&st.gv, &cm)?;
                wst_filter(&st.gv, &tree, &cm, offset, st.ub)?
            }
            TreeMode::Bst => {
                let red = st.reduced.as_ref().ok_or(Contradiction)?;
                let bst = bst_build(&st.gv, red, &cm)?;
                bst_filter(&st.gv, red, &bst, &cm, offset, st.ub)?
            }
        };
        st.raise_lb(round_bound(best))?;
        outcome.apply(&mut st.gv)?;
        if self.mode == TreeMode::Mst {
            st.scores.tree = Some(outcome.scores);
        }
        Ok(())
    }
}

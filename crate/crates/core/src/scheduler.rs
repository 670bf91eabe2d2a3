//! Propagation queue and the state shared by all propagators.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Contradiction, PropResult};
use crate::graph::{Event, EventKind, GraphVar, IntId};
use crate::instance::Instance;
use crate::scc::ReducedState;

/// Sentinel for an unbounded objective.
pub const INFINITE: i64 = i64::MAX;

/// Queue classes, dequeued in increasing order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Priority {
    Unary = 0,
    Linear = 1,
    Quadratic = 2,
    Cubic = 3,
    /// Lagrangian relaxations: only run once every other class is empty.
    Last = 4,
}

const CLASSES: usize = 5;

/// Per-arc scores published by the cost relaxations for branching.
#[derive(Debug, Clone, Default)]
pub struct ArcScores {
    /// Arcs of the last relaxation solution with their replacement cost.
    pub solution: Vec<(usize, usize, f64)>,
    /// Other arcs with their marginal cost.
    pub others: Vec<(usize, usize, f64)>,
}

#[derive(Debug, Clone, Default)]
pub struct RelaxScores {
    pub tree: Option<ArcScores>,
    pub map: Option<ArcScores>,
}

impl RelaxScores {
    /// Tree scores when available, assignment scores otherwise.
    pub fn preferred(&self) -> Option<&ArcScores> {
        self.tree.as_ref().or(self.map.as_ref())
    }
}

/// Domain, objective and shared derived data for one search.
pub struct Store<'a> {
    pub inst: &'a Instance,
    pub gv: GraphVar,
    lb: IntId,
    pub ub: i64,
    pub reduced: Option<ReducedState>,
    pub scores: RelaxScores,
}

impl<'a> Store<'a> {
    pub fn new(inst: &'a Instance, ub: i64) -> Self {
        let mut gv = inst.graph_var();
        let lb = gv.new_int(0);
        Store { inst, gv, lb, ub, reduced: None, scores: RelaxScores::default() }
    }

    pub fn lb(&self) -> i64 {
        self.gv.int(self.lb)
    }

    /// Raises the objective lower bound; fails once it exceeds `ub`.
    pub fn raise_lb(&mut self, value: i64) -> PropResult {
        if value > self.ub {
            return Err(Contradiction);
        }
        if value > self.lb() {
            self.gv.set_int(self.lb, value);
        }
        Ok(())
    }

    pub fn at_root(&self) -> bool {
        self.gv.depth() == 0
    }

    /// The reduced graph, if it reflects the current potential graph and is
    /// a simple path.
    pub fn synced_path(&self) -> Option<&ReducedState> {
        let st = self.reduced.as_ref()?;
        let mark = (self.gv.backtracks(), self.gv.arc_count());
        (st.sync_mark == Some(mark) && st.is_path()).then_some(st)
    }
}

pub trait Propagator: Send {
    fn name(&self) -> &'static str;
    fn priority(&self) -> Priority;

    /// Whether events produced by this propagator schedule it again.
    fn wakes_on_own_events(&self) -> bool {
        true
    }

    /// Filters the domain. `events` holds the mutations since the previous
    /// call within this fixpoint; `initial` is set on the first call of a
    /// search (and the propagator must then look at the whole domain).
    fn propagate(&mut self, st: &mut Store<'_>, events: &[Event], initial: bool) -> PropResult;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Fixpoint,
    Contradiction,
}

#[derive(Debug, Clone, Default, Serialize, PartialEq, Eq)]
pub struct PropagatorStats {
    pub name: &'static str,
    pub runs: u64,
    pub removals: u64,
    pub enforcements: u64,
    pub failures: u64,
}

pub struct Scheduler {
    props: Vec<Box<dyn Propagator>>,
    cursor: Vec<usize>,
    queued: Vec<bool>,
    initial: Vec<bool>,
    queues: [VecDeque<usize>; CLASSES],
    stats: Vec<PropagatorStats>,
    trace: Option<Vec<&'static str>>,
}

impl Default for Scheduler {
    fn default() -> Self {
        Self::new()
    }
}

impl Scheduler {
    pub fn new() -> Self {
        Scheduler {
            props: Vec::new(),
            cursor: Vec::new(),
            queued: Vec::new(),
            initial: Vec::new(),
            queues: Default::default(),
            stats: Vec::new(),
            trace: None,
        }
    }

    pub fn add(&mut self, p: Box<dyn Propagator>) {
        self.stats.push(PropagatorStats { name: p.name(), ..Default::default() });
        self.props.push(p);
        self.cursor.push(0);
        self.queued.push(false);
        self.initial.push(true);
    }

    pub fn len(&self) -> usize {
        self.props.len()
    }

    pub fn is_empty(&self) -> bool {
        self.props.is_empty()
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.props.iter().map(|p| p.name()).collect()
    }

    pub fn stats(&self) -> &[PropagatorStats] {
        &self.stats
    }

    /// Records the name of every propagator run from now on.
    pub fn enable_trace(&mut self) {
        self.trace = Some(Vec::new());
    }

    pub fn trace(&self) -> &[&'static str] {
        self.trace.as_deref().unwrap_or(&[])
    }

    fn enqueue(&mut self, i: usize) {
        if !self.queued[i] {
            self.queued[i] = true;
            self.queues[self.props[i].priority() as usize].push_back(i);
        }
    }

    fn pop(&mut self) -> Option<usize> {
        let i = self.queues.iter_mut().find_map(|q| q.pop_front())?;
        self.queued[i] = false;
        Some(i)
    }

    /// Runs propagators until none has pending events. Propagators are
    /// scheduled on their first call and whenever the event log grew past
    /// their cursor.
    pub fn run_fixpoint(&mut self, st: &mut Store<'_>) -> Outcome {
        for i in 0..self.props.len() {
            if self.initial[i] || st.gv.events().len() > self.cursor[i] {
                self.enqueue(i);
            }
        }
        let outcome = loop {
            let Some(i) = self.pop() else { break Outcome::Fixpoint };
            let before = st.gv.events().len();
            let events = st.gv.events()[self.cursor[i]..].to_vec();
            self.cursor[i] = before;
            if let Some(t) = self.trace.as_mut() {
                t.push(self.props[i].name());
            }
            let initial = std::mem::replace(&mut self.initial[i], false);
            let res = self.props[i].propagate(st, &events, initial);
            let produced = &st.gv.events()[before..];
            let s = &mut self.stats[i];
            s.runs += 1;
            for ev in produced {
                match ev.kind {
                    EventKind::ArcRemoved => s.removals += 1,
                    EventKind::ArcEnforced => s.enforcements += 1,
                }
            }
            if res.is_err() {
                s.failures += 1;
                break Outcome::Contradiction;
            }
            if !self.props[i].wakes_on_own_events() {
                self.cursor[i] = st.gv.events().len();
            }
            let len = st.gv.events().len();
            for j in 0..self.props.len() {
                if len > self.cursor[j] {
                    self.enqueue(j);
                }
            }
        };
        for q in self.queues.iter_mut() {
            q.clear();
        }
        self.queued.iter_mut().for_each(|q| *q = false);
        self.cursor.iter_mut().for_each(|c| *c = 0);
        st.gv.clear_events();
        outcome
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Probe {
        name: &'static str,
        prio: Priority,
        remove: Vec<(usize, usize)>,
    }

    impl Propagator for Probe {
        fn name(&self) -> &'static str {
            self.name
        }
        fn priority(&self) -> Priority {
            self.prio
        }
        fn propagate(&mut self, st: &mut Store<'_>, _: &[Event], _: bool) -> PropResult {
            if let Some((u, v)) = self.remove.pop() {
                st.gv.remove_arc(u, v)?;
            }
            Ok(())
        }
    }

    #[test]
    fn empty_queue_is_fixpoint() {
        let inst = Instance::from_matrix("t", 3, 0, 2, vec![1; 9]);
        let mut st = Store::new(&inst, INFINITE);
        assert_eq!(Scheduler::new().run_fixpoint(&mut st), Outcome::Fixpoint);
    }

    #[test]
    fn last_class_runs_after_others() {
        let inst = Instance::from_matrix("t", 5, 0, 4, vec![1; 25]);
        let mut st = Store::new(&inst, INFINITE);
        let mut sched = Scheduler::new();
        sched.add(Box::new(Probe { name: "late", prio: Priority::Last, remove: vec![(1, 2)] }));
        sched.add(Box::new(Probe { name: "early", prio: Priority::Unary, remove: vec![(2, 3), (3, 1)] }));
        sched.enable_trace();
        assert_eq!(sched.run_fixpoint(&mut st), Outcome::Fixpoint);
        assert_eq!(sched.trace(), &["early", "early", "early", "late", "early", "late"]);
    }
}

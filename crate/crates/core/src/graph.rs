//! Backtrackable graph variable.
//!
//! The domain is a pair of digraphs over the dense node set `0..n`: the
//! potential graph (arcs that may still appear in a solution) and the
//! mandatory graph (arcs that appear in every solution). Both are stored as
//! sparse sets in each direction so membership is O(1) and iteration is
//! O(degree). Potential sets only shrink and mandatory sets only grow inside
//! a world, so undoing a mutation is a single length bump.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use crate::error::Contradiction;

pub(crate) const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventKind {
    ArcRemoved,
    ArcEnforced,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Event {
    pub kind: EventKind,
    pub tail: usize,
    pub head: usize,
}

/// Handle to a trailed integer registered with [`GraphVar::new_int`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IntId(u32);

#[derive(Debug, Clone)]
struct SparseAdj {
    n: usize,
    list: Vec<u32>,
    pos: Vec<u32>,
    len: Vec<u32>,
}

impl SparseAdj {
    fn new(n: usize, members: &[Vec<u32>], full: bool) -> Self {
        let mut list = vec![NONE; n * n];
        let mut pos = vec![NONE; n * n];
        let mut len = vec![0; n];
        for (u, m) in members.iter().enumerate() {
            for (i, &v) in m.iter().enumerate() {
                list[u * n + i] = v;
                pos[u * n + v as usize] = i as u32;
            }
            if full {
                len[u] = m.len() as u32;
            }
        }
        SparseAdj { n, list, pos, len }
    }

    #[inline]
    fn contains(&self, u: usize, v: usize) -> bool {
        let p = self.pos[u * self.n + v];
        p != NONE && p < self.len[u]
    }

    #[inline]
    fn slice(&self, u: usize) -> &[u32] {
        &self.list[u * self.n..u * self.n + self.len[u] as usize]
    }

    fn swap_to(&mut self, u: usize, v: usize, target: u32) {
        let base = u * self.n;
        let p = self.pos[base + v];
        let w = self.list[base + target as usize];
        self.list.swap(base + p as usize, base + target as usize);
        self.pos[base + w as usize] = p;
        self.pos[base + v] = target;
    }

    /// Moves `v` just past the live prefix.
    fn remove(&mut self, u: usize, v: usize) {
        let last = self.len[u] - 1;
        self.swap_to(u, v, last);
        self.len[u] = last;
    }

    /// Moves a dormant `v` to the end of the live prefix.
    fn add(&mut self, u: usize, v: usize) {
        let at = self.len[u];
        self.swap_to(u, v, at);
        self.len[u] = at + 1;
    }
}

#[derive(Debug, Clone, Copy)]
enum Entry {
    Removed(u32, u32),
    Enforced(u32, u32),
    Int(u32, i64),
}

#[derive(Debug, Clone)]
pub struct GraphVar {
    n: usize,
    s: usize,
    e: usize,
    pot_succ: SparseAdj,
    pot_pred: SparseAdj,
    man_succ: SparseAdj,
    man_pred: SparseAdj,
    arc_count: usize,
    mandatory_count: usize,
    ints: Vec<i64>,
    trail: Vec<Entry>,
    worlds: Vec<usize>,
    events: Vec<Event>,
    backtracks: u64,
}

impl GraphVar {
    /// Builds the initial domain. Self-loops, arcs into `s` and arcs out of `e`
    /// are dropped; duplicate arcs are ignored.
    pub fn new(n: usize, s: usize, e: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        assert!(s < n && e < n && s != e, "invalid endpoints");
        let mut succ: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut pred: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut seen = vec![false; n * n];
        let mut arc_count = 0;
        for (u, v) in arcs {
            assert!(u < n && v < n, "arc ({u},{v}) out of range");
            if u == v || v == s || u == e || seen[u * n + v] {
                continue;
            }
            seen[u * n + v] = true;
            succ[u].push(v as u32);
            pred[v].push(u as u32);
            arc_count += 1;
        }
        GraphVar {
            n,
            s,
            e,
            pot_succ: SparseAdj::new(n, &succ, true),
            pot_pred: SparseAdj::new(n, &pred, true),
            man_succ: SparseAdj::new(n, &succ, false),
            man_pred: SparseAdj::new(n, &pred, false),
            arc_count,
            mandatory_count: 0,
            ints: Vec::new(),
            trail: Vec::new(),
            worlds: Vec::new(),
            events: Vec::new(),
            backtracks: 0,
        }
    }

    /// Complete digraph on `n` nodes (minus the arcs excluded by the endpoints).
    pub fn complete(n: usize, s: usize, e: usize) -> Self {
        Self::new(n, s, e, (0..n).flat_map(|u| (0..n).map(move |v| (u, v))))
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
    pub fn arc_count(&self) -> usize {
        self.arc_count
    }
    pub fn mandatory_count(&self) -> usize {
        self.mandatory_count
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.pot_succ.contains(u, v)
    }
    #[inline]
    pub fn is_mandatory(&self, u: usize, v: usize) -> bool {
        self.man_succ.contains(u, v)
    }

    #[inline]
    pub fn succ(&self, u: usize) -> &[u32] {
        self.pot_succ.slice(u)
    }
    #[inline]
    pub fn pred(&self, v: usize) -> &[u32] {
        self.pot_pred.slice(v)
    }
    #[inline]
    pub fn mandatory_succ(&self, u: usize) -> &[u32] {
        self.man_succ.slice(u)
    }
    #[inline]
    pub fn mandatory_pred(&self, v: usize) -> &[u32] {
        self.man_pred.slice(v)
    }
    #[inline]
    pub fn out_degree(&self, u: usize) -> usize {
        self.pot_succ.len[u] as usize
    }
    #[inline]
    pub fn in_degree(&self, v: usize) -> usize {
        self.pot_pred.len[v] as usize
    }

    /// All potential arcs in (tail, head) lexicographic order.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.arc_count);
        for u in 0..self.n {
            let mut hs: Vec<usize> = self.succ(u).iter().map(|&v| v as usize).collect();
            hs.sort_unstable();
            out.extend(hs.into_iter().map(|v| (u, v)));
        }
        out
    }

    /// All mandatory arcs in (tail, head) lexicographic order.
    pub fn mandatory_arcs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.mandatory_count);
        for u in 0..self.n {
            let mut hs: Vec<usize> = self.mandatory_succ(u).iter().map(|&v| v as usize).collect();
            hs.sort_unstable();
            out.extend(hs.into_iter().map(|v| (u, v)));
        }
        out
    }

    pub fn remove_arc(&mut self, u: usize, v: usize) -> Result<bool, Contradiction> {
        if !self.has_arc(u, v) {
            return Ok(false);
        }
        if self.is_mandatory(u, v) {
            return Err(Contradiction);
        }
        self.pot_succ.remove(u, v);
        self.pot_pred.remove(v, u);
        self.arc_count -= 1;
        self.trail.push(Entry::Removed(u as u32, v as u32));
        self.events.push(Event { kind: EventKind::ArcRemoved, tail: u, head: v });
        Ok(true)
    }

    pub fn enforce_arc(&mut self, u: usize, v: usize) -> Result<bool, Contradiction> {
        if !self.has_arc(u, v) {
            return Err(Contradiction);
        }
        if self.is_mandatory(u, v) {
            return Ok(false);
        }
        self.man_succ.add(u, v);
        self.man_pred.add(v, u);
        self.mandatory_count += 1;
        self.trail.push(Entry::Enforced(u as u32, v as u32));
        self.events.push(Event { kind: EventKind::ArcEnforced, tail: u, head: v });
        Ok(true)
    }

    pub fn is_instantiated(&self) -> bool {
        self.arc_count == self.mandatory_count
    }

    pub fn depth(&self) -> usize {
        self.worlds.len()
    }

    /// Number of `pop_world` calls so far; lets lazily maintained structures
    /// detect that the domain grew back.
    pub fn backtracks(&self) -> u64 {
        self.backtracks
    }

    pub fn push_world(&mut self) -> usize {
        self.worlds.push(self.trail.len());
        self.worlds.len()
    }

    pub fn pop_world(&mut self) -> usize {
        let mark = self.worlds.pop().expect("pop_world at depth 0");
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                Entry::Removed(u, v) => {
                    let (u, v) = (u as usize, v as usize);
                    self.pot_succ.len[u] += 1;
                    self.pot_pred.len[v] += 1;
                    debug_assert!(self.has_arc(u, v));
                    self.arc_count += 1;
                }
                Entry::Enforced(u, v) => {
                    let (u, v) = (u as usize, v as usize);
                    self.man_succ.len[u] -= 1;
                    self.man_pred.len[v] -= 1;
                    debug_assert!(!self.is_mandatory(u, v));
                    self.mandatory_count -= 1;
                }
                Entry::Int(id, old) => self.ints[id as usize] = old,
            }
        }
        self.backtracks += 1;
        self.worlds.len()
    }

    pub fn new_int(&mut self, value: i64) -> IntId {
        self.ints.push(value);
        IntId(self.ints.len() as u32 - 1)
    }

    #[inline]
    pub fn int(&self, id: IntId) -> i64 {
        self.ints[id.0 as usize]
    }

    #[inline]
    pub fn set_int(&mut self, id: IntId, value: i64) {
        let old = self.ints[id.0 as usize];
        if old != value {
            if !self.worlds.is_empty() {
                self.trail.push(Entry::Int(id.0, old));
            }
            self.ints[id.0 as usize] = value;
        }
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn clear_events(&mut self) {
        self.events.clear();
    }

    /// Order-independent digest of both graphs and every trailed integer.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.arcs().hash(&mut h);
        self.mandatory_arcs().hash(&mut h);
        self.ints.hash(&mut h);
        h.finish()
    }

    /// Checks the structural invariants; used by tests and debug builds.
    pub fn check_invariants(&self) -> bool {
        if !self.pred(self.s).is_empty() || !self.succ(self.e).is_empty() {
            return false;
        }
        let mut arcs = 0;
        let mut mand = 0;
        for u in 0..self.n {
            for &v in self.succ(u) {
                arcs += 1;
                if !self.pot_pred.contains(v as usize, u) {
                    return false;
                }
            }
            for &v in self.mandatory_succ(u) {
                mand += 1;
                if !self.has_arc(u, v as usize) || !self.man_pred.contains(v as usize, u) {
                    return false;
                }
            }
        }
        arcs == self.arc_count && mand == self.mandatory_count
    }
}

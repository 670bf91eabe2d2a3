//! The condensation of the potential graph must be a simple path from the
//! component of `s` to the component of `e`.

use crate::error::{Contradiction, PropResult};
use crate::graph::{Event, EventKind, GraphVar, NONE};
use crate::scc::ReducedState;
use crate::scheduler::{Priority, Propagator, Store};

/// A path leaves each component exactly once, so a mandatory cross arc
/// excludes the other arcs of its `out_arcs` list.
fn kill_siblings(gv: &mut GraphVar, st: &mut ReducedState, x: usize) -> PropResult {
    let mandatory: Vec<(u32, u32)> =
        st.out_arcs(x).iter().copied().filter(|&(u, v)| gv.is_mandatory(u as usize, v as usize)).collect();
    match mandatory.as_slice() {
        [] => Ok(()),
        [keep] => {
            let doomed: Vec<(u32, u32)> = st.out_arcs(x).iter().copied().filter(|a| a != keep).collect();
            for (u, v) in doomed {
                gv.remove_arc(u as usize, v as usize)?;
                st.drop_cross(u as usize, v as usize);
            }
            Ok(())
        }
        _ => Err(Contradiction),
    }
}

/// Walks the condensation from `from` until `last`, keeping at each step
/// the only successor whose sole predecessor is the current component and
/// pruning every other outgoing arc. Returns the number of components on
/// the walk, both ends included.
fn visit(gv: &mut GraphVar, st: &mut ReducedState, from: usize, last: usize) -> Result<usize, Contradiction> {
    let mut count = 1;
    let mut cur = from;
    let mut work = 0u64;
    while cur != last {
        work += 1 + st.out_arcs(cur).len() as u64;
        // Predecessor counts are read before any removal of this step.
        let mut next = NONE as usize;
        for y in st.reduced_succ(cur) {
            if st.reduced_in_degree(y) == 1 {
                if next != NONE as usize {
                    return Err(Contradiction);
                }
                next = y;
            }
        }
        if next == NONE as usize {
            return Err(Contradiction);
        }
        let doomed: Vec<(u32, u32)> =
            st.out_arcs(cur).iter().copied().filter(|&(_, v)| st.scc_of(v as usize) != next).collect();
        for (u, v) in doomed {
            gv.remove_arc(u as usize, v as usize)?;
            st.drop_cross(u as usize, v as usize);
        }
        if let [(u, v)] = *st.out_arcs(cur) {
            gv.enforce_arc(u as usize, v as usize)?;
        }
        st.path_next[cur] = next as u32;
        st.path_prev[next] = cur as u32;
        cur = next;
        count += 1;
        if count > st.n() {
            return Err(Contradiction);
        }
    }
    st.stats.last_visit_work += work;
    Ok(count)
}

/// Full filtering from scratch: rebuilds the components, applies mandatory
/// cross arcs, and turns the condensation into a path (or fails). Arcs
/// between non-consecutive components are removed and a lone witness of a
/// path arc is enforced. Door rules are not applied.
pub fn propagate_reduced_path(gv: &mut GraphVar, st: &mut ReducedState) -> PropResult {
    st.rebuild(gv);
    for x in st.components() {
        kill_siblings(gv, st, x)?;
    }
    let (sr, er) = (st.scc_of(gv.start()), st.scc_of(gv.end()));
    st.stats.last_visit_work = 0;
    let expected = st.n_r();
    if visit(gv, st, sr, er)? != expected {
        return Err(Contradiction);
    }
    st.path_prev[sr] = NONE;
    st.path_next[er] = NONE;
    st.is_path = true;
    Ok(())
}

fn door_rules_on(gv: &mut GraphVar, st: &ReducedState, x: usize) -> PropResult {
    let size = st.size(x);
    if size < 2 {
        return Ok(());
    }
    let nodes = st.nodes_of(x);
    let inside = |w: usize| st.scc_of(w) == x;
    if st.indoor_count(x) == 1 {
        let i = *nodes.iter().find(|&&v| st.is_indoor(v)).unwrap();
        let doomed: Vec<usize> = gv.pred(i).iter().map(|&j| j as usize).filter(|&j| inside(j)).collect();
        for j in doomed {
            gv.remove_arc(j, i)?;
        }
    }
    if st.outdoor_count(x) == 1 {
        let o = *nodes.iter().find(|&&v| st.is_outdoor(v)).unwrap();
        let doomed: Vec<usize> = gv.succ(o).iter().map(|&j| j as usize).filter(|&j| inside(j)).collect();
        for j in doomed {
            gv.remove_arc(o, j)?;
        }
    }
    if size > 2 && st.indoor_count(x) <= 2 && st.outdoor_count(x) <= 2 {
        let doors: Vec<usize> = nodes.iter().copied().filter(|&v| st.is_indoor(v) || st.is_outdoor(v)).collect();
        if let [i, j] = doors[..] {
            gv.remove_arc(i, j)?;
            gv.remove_arc(j, i)?;
        }
    }
    Ok(())
}

/// Door rules on every component: a lone indoor has no internal
/// predecessor, a lone outdoor no internal successor, and the two doors of a
/// component of three or more nodes are not adjacent.
pub fn apply_door_rules(gv: &mut GraphVar, st: &ReducedState) -> PropResult {
    for x in st.components() {
        door_rules_on(gv, st, x)?;
    }
    Ok(())
}

/// Incremental step: repairs the components after the removals in
/// `events`, re-walks each run of consecutive split components between its
/// unchanged neighbours, and checks the touched `out_arcs` lists.
fn incremental(gv: &mut GraphVar, st: &mut ReducedState, events: &[Event]) -> PropResult {
    let removed: Vec<(usize, usize)> =
        events.iter().filter(|e| e.kind == EventKind::ArcRemoved).map(|e| (e.tail, e.head)).collect();
    let splits = st.repair_after_deletions(gv, &removed);
    st.stats.last_visit_work = 0;

    let mut touched: Vec<usize> = Vec::new();
    for ev in events {
        if ev.kind == EventKind::ArcEnforced && st.scc_of(ev.tail) != st.scc_of(ev.head) {
            kill_siblings(gv, st, st.scc_of(ev.tail))?;
        }
    }
    for sp in &splits {
        for &f in &sp.parts {
            kill_siblings(gv, st, f)?;
            touched.push(f);
        }
    }

    let n = st.n();
    let mut is_split = vec![false; n];
    for sp in &splits {
        is_split[sp.old] = true;
    }
    let mut segments = Vec::new();
    let none = NONE as usize;
    for sp in &splits {
        let x = sp.old;
        let p = st.path_prev[x] as usize;
        if p != none && is_split[p] {
            continue;
        }
        let mut fragments = sp.parts.len();
        let mut cur = x;
        loop {
            let next = st.path_next[cur] as usize;
            if next == none || !is_split[next] {
                break;
            }
            cur = next;
            fragments += splits.iter().find(|s| s.old == cur).map_or(0, |s| s.parts.len());
        }
        let t = st.path_next[cur] as usize;
        // A split first or last component has no unchanged neighbour on
        // that side; the walk then starts or ends at the fragment of s or e.
        let from = if p == none { st.scc_of(gv.start()) } else { p };
        let last = if t == none { st.scc_of(gv.end()) } else { t };
        let expected = fragments + (p != none) as usize + (t != none) as usize;
        segments.push((from, last, expected));
        touched.push(from);
        touched.push(last);
    }
    for (from, last, expected) in segments {
        if visit(gv, st, from, last)? != expected {
            return Err(Contradiction);
        }
    }
    let (sr, er) = (st.scc_of(gv.start()), st.scc_of(gv.end()));
    st.path_prev[sr] = NONE;
    st.path_next[er] = NONE;

    for &(u, v) in &removed {
        touched.push(st.scc_of(u));
        touched.push(st.scc_of(v));
    }
    touched.sort_unstable();
    touched.dedup();
    let er = st.scc_of(gv.end());
    for &x in &touched {
        if x == er {
            continue;
        }
        match *st.out_arcs(x) {
            [] => return Err(Contradiction),
            [(u, v)] => {
                gv.enforce_arc(u as usize, v as usize)?;
            }
            _ => {}
        }
    }
    for &x in &touched {
        door_rules_on(gv, st, x)?;
    }
    Ok(())
}

/// Propagator wrapper; the state itself lives in [`Store::reduced`] so that
/// other propagators can read it.
#[derive(Debug, Default)]
pub struct ReducedPath;

impl Propagator for ReducedPath {
    fn name(&self) -> &'static str {
        "reduced_path"
    }

    fn priority(&self) -> Priority {
        Priority::Linear
    }

    fn propagate(&mut self, store: &mut Store<'_>, events: &[Event], initial: bool) -> PropResult {
        let gv = &mut store.gv;
        let st = store.reduced.get_or_insert_with(|| ReducedState::new(gv.n(), gv.start(), gv.end()));
        let res = if initial || !st.is_current(gv) || !st.is_path() {
            propagate_reduced_path(gv, st).and_then(|_| apply_door_rules(gv, st))
        } else {
            incremental(gv, st, events)
        };
        match res {
            Ok(()) => {
                st.sync_mark = Some((gv.backtracks(), gv.arc_count()));
                Ok(())
            }
            Err(c) => {
                st.invalidate();
                Err(c)
            }
        }
    }
}

use crate::error::{Contradiction, PropResult};
use crate::graph::{Event, EventKind, GraphVar, IntId};
use crate::scheduler::{Priority, Propagator, Store};

/// Forbids circuits in the mandatory graph by tracking maximal mandatory
/// subpaths. `end_of` is meaningful at subpath starts, `start_of` and the
/// node count at subpath ends. All three are trailed.
#[derive(Debug)]
pub struct NoCycle {
    start_of: Vec<IntId>,
    end_of: Vec<IntId>,
    len: Vec<IntId>,
}

impl NoCycle {
    pub fn new(gv: &mut GraphVar) -> Self {
        let n = gv.n();
        NoCycle {
            start_of: (0..n).map(|v| gv.new_int(v as i64)).collect(),
            end_of: (0..n).map(|v| gv.new_int(v as i64)).collect(),
            len: (0..n).map(|_| gv.new_int(1)).collect(),
        }
    }

    pub fn subpath_start(&self, gv: &GraphVar, end: usize) -> usize {
        gv.int(self.start_of[end]) as usize
    }

    pub fn subpath_end(&self, gv: &GraphVar, start: usize) -> usize {
        gv.int(self.end_of[start]) as usize
    }

    fn fuse(&self, gv: &mut GraphVar, u: usize, v: usize) -> PropResult {
        if gv.mandatory_succ(u).len() != 1 || gv.mandatory_pred(v).len() != 1 {
            return Err(Contradiction);
        }
        let a = gv.int(self.start_of[u]) as usize;
        let b = gv.int(self.end_of[v]) as usize;
        if b == u || a == v {
            return Err(Contradiction);
        }
        let len = gv.int(self.len[u]) + gv.int(self.len[b]);
        gv.set_int(self.end_of[a], b as i64);
        gv.set_int(self.start_of[b], a as i64);
        gv.set_int(self.len[b], len);
        if a == gv.start() && b == gv.end() {
            if len != gv.n() as i64 {
                return Err(Contradiction);
            }
        } else {
            gv.remove_arc(b, a)?;
        }
        Ok(())
    }
}

impl Propagator for NoCycle {
    fn name(&self) -> &'static str {
        "nocycle"
    }

    fn priority(&self) -> Priority {
        Priority::Unary
    }

    fn propagate(&mut self, st: &mut Store<'_>, events: &[Event], initial: bool) -> PropResult {
        if initial {
            for (u, v) in st.gv.mandatory_arcs() {
                self.fuse(&mut st.gv, u, v)?;
            }
            return Ok(());
        }
        for ev in events {
            if ev.kind == EventKind::ArcEnforced {
                self.fuse(&mut st.gv, ev.tail, ev.head)?;
            }
        }
        Ok(())
    }
}

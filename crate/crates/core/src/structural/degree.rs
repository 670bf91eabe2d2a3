use crate::error::{Contradiction, PropResult};
use crate::graph::{Event, GraphVar};
use crate::scheduler::{Priority, Propagator, Store};

/// Every node but `e` has exactly one successor and every node but `s`
/// exactly one predecessor.
#[derive(Debug, Default)]
pub struct Degree;

fn check_out(gv: &mut GraphVar, u: usize) -> PropResult {
    if u == gv.end() {
        return Ok(());
    }
    match gv.mandatory_succ(u).len() {
        0 => match gv.out_degree(u) {
            0 => Err(Contradiction),
            1 => gv.enforce_arc(u, gv.succ(u)[0] as usize).map(drop),
            _ => Ok(()),
        },
        1 => {
            let keep = gv.mandatory_succ(u)[0];
            let drop_list: Vec<u32> = gv.succ(u).iter().copied().filter(|&v| v != keep).collect();
            for v in drop_list {
                gv.remove_arc(u, v as usize)?;
            }
            Ok(())
        }
        _ => Err(Contradiction),
    }
}

fn check_in(gv: &mut GraphVar, v: usize) -> PropResult {
    if v == gv.start() {
        return Ok(());
    }
    match gv.mandatory_pred(v).len() {
        0 => match gv.in_degree(v) {
            0 => Err(Contradiction),
            1 => gv.enforce_arc(gv.pred(v)[0] as usize, v).map(drop),
            _ => Ok(()),
        },
        1 => {
            let keep = gv.mandatory_pred(v)[0];
            let drop_list: Vec<u32> = gv.pred(v).iter().copied().filter(|&u| u != keep).collect();
            for u in drop_list {
                gv.remove_arc(u as usize, v)?;
            }
            Ok(())
        }
        _ => Err(Contradiction),
    }
}

impl Propagator for Degree {
    fn name(&self) -> &'static str {
        "degree"
    }

    fn priority(&self) -> Priority {
        Priority::Unary
    }

    fn propagate(&mut self, st: &mut Store<'_>, events: &[Event], initial: bool) -> PropResult {
        let gv = &mut st.gv;
        if initial {
            for v in 0..gv.n() {
                check_out(gv, v)?;
                check_in(gv, v)?;
            }
            return Ok(());
        }
        for ev in events {
            check_out(gv, ev.tail)?;
            check_in(gv, ev.head)?;
        }
        Ok(())
    }
}

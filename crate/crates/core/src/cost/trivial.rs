use crate::error::{Error, PropResult, Result};
use crate::graph::{Event, GraphVar};
use crate::instance::Instance;
use crate::scheduler::{Priority, Propagator, Store};

/// Sum over every node but `e` of its cheapest remaining outgoing arc.
pub fn lb_trivial(gv: &GraphVar, inst: &Instance) -> Result<i64> {
    let mut total = 0i64;
    for u in 0..gv.n() {
        if u == gv.end() {
            continue;
        }
        let best = gv
            .succ(u)
            .iter()
            .map(|&v| inst.raw_cost(u, v as usize))
            .min()
            .ok_or_else(|| Error::PreconditionViolation(format!("node {u} has no successor")))?;
        total += best;
    }
    Ok(total)
}

#[derive(Debug, Default)]
pub struct TrivialLb;

impl Propagator for TrivialLb {
    fn name(&self) -> &'static str {
        "trivial_lb"
    }

    fn priority(&self) -> Priority {
        Priority::Linear
    }

    fn propagate(&mut self, st: &mut Store<'_>, _: &[Event], _: bool) -> PropResult {
        match lb_trivial(&st.gv, st.inst) {
            Ok(lb) => st.raise_lb(lb),
            Err(_) => Err(crate::error::Contradiction),
        }
    }
}

//! Lower bounds on the path cost and the arc filtering derived from them.

pub mod bst;
pub mod held_karp;
pub mod hungarian;
pub mod model;
pub mod spanning;
pub mod trivial;

pub use bst::{bst_build, bst_filter, Bst};
pub use held_karp::{HeldKarp, LagrangianState, TreeMode};
pub use hungarian::{Hungarian, HungarianProp};
pub use model::CostModel;
pub use spanning::{kruskal, mst, prim, wst_filter, FilterOutcome, MstAlgorithm, SpanningTree, TreeEdge};
pub use trivial::{lb_trivial, TrivialLb};

use crate::scheduler::INFINITE;

/// Absolute tolerance applied before rounding fractional bounds up.
pub const EPS: f64 = 1e-9;

/// Whether a fractional lower bound rules out every solution of cost ≤ `ub`.
pub fn exceeds(bound: f64, ub: i64) -> bool {
    ub != INFINITE && (bound - EPS).ceil() > ub as f64
}

/// Integer lower bound implied by a fractional one.
pub fn round_bound(bound: f64) -> i64 {
    if bound.is_finite() {
        (bound - EPS).ceil() as i64
    } else if bound > 0.0 {
        INFINITE
    } else {
        i64::MIN
    }
}

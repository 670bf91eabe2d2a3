//! Constraint-programming solver for the asymmetric traveling salesman
//! problem, stated as a Hamiltonian path between two fixed endpoints.
//!
//! The domain is a [`GraphVar`]; structural propagators enforce the path
//! shape, cost relaxations bound the objective and filter arcs, and the
//! search engine runs a depth-first branch-and-bound over binary decisions.

pub mod bench;
pub mod cost;
pub mod error;
pub mod generate;
pub mod graph;
pub mod instance;
pub mod oracle;
pub mod par;
pub mod scc;
pub mod scheduler;
pub mod search;
pub mod structural;
pub mod tsplib;

pub use error::{Contradiction, Error, PropResult, Result};
pub use graph::{Event, EventKind, GraphVar};
pub use instance::{Instance, InstanceKind, FORBIDDEN};
pub use scc::ReducedState;
pub use scheduler::{Outcome, Priority, Propagator, Scheduler, Store, INFINITE};
pub use search::{solve, Heuristic, Mode, ModelConfig, Relax, SearchResult, SolveConfig, Status};

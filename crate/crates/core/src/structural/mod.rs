//! Propagators for the shape of a Hamiltonian s→e path.

pub mod alldifferent;
pub mod arborescence;
pub mod degree;
pub mod nocycle;
pub mod positions;
pub mod reduced_path;

pub use alldifferent::AllDifferent;
pub use arborescence::{Arborescence, Direction};
pub use degree::Degree;
pub use nocycle::NoCycle;
pub use positions::{bounds_consistent_alldiff, Positions};
pub use reduced_path::{apply_door_rules, propagate_reduced_path, ReducedPath};

//! Branch-and-bound over binary decisions.

pub mod heuristics;
pub mod solver;

pub use heuristics::{decide, Decision, Heuristic};
pub use solver::{build_model, solve, Mode, ModelConfig, Relax, SearchResult, SolveConfig, Status};

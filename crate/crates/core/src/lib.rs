//! Inference of deterministic context-free L-systems (D0L-systems) from a
//! sequence of strings.
//!
//! The problem is reduced to finding an independent set of a prescribed size
//! in a characteristic graph built from the input sequence. Three routes are
//! provided on top of that reduction:
//!
//! * an exact classical solver (clique-wise backtracking or generic
//!   branch-and-bound),
//! * a classically simulated QAOA over a penalized QUBO formulation,
//! * a CNF encoding in DIMACS format for external SAT solvers, with model
//!   decoding back into production rules.

pub mod chargraph;
pub mod gen;
pub mod lsystem;
pub mod mis;
pub mod oracle;
pub mod pipeline;
pub mod qaoa;
pub mod qubo;
pub mod sat;

pub use chargraph::{CharacteristicGraph, GraphStats};
pub use lsystem::{D0LSystem, Symbol, Word, WordSequence};
pub use pipeline::{InferenceResult, Outcome};

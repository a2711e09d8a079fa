//! Exact solving of satisfiability modulo counting (SMC) problems: CNF
//! formulas whose literals may be tied to probabilistic predicates of the
//! form `marginal cmp threshold` over probabilistic circuits.
//!
//! The solver is conflict-driven clause learning with incremental
//! upper/lower bounds on each predicate's circuit, so a predicate can be
//! found entailed or violated before all of its shared variables are set.

pub mod circuit;
pub mod cli;
pub mod compile;
pub mod error;
pub mod formula;
pub mod oracle;
pub mod problems;
pub mod solver;
pub mod sweep;

pub use error::{Error, Result};

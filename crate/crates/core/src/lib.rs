//! Optimal regression planning with h^m heuristics.
//!
//! Heuristic values for atom sets of size at most `m` are precomputed by a
//! fixpoint (`gbf`), improved on demand by IDAO* over the m-regression
//! AND/OR space (`idao`), and used by IDA* (`idastar`) to find optimal
//! sequential, parallel and temporal plans.

pub mod atoms;
pub mod error;
pub mod fixtures;
pub mod gbf;
pub mod htable;
pub mod idao;
pub mod idastar;
pub mod metrics;
pub mod model;
pub mod pddl;
pub mod pipeline;
pub mod rational;
pub mod seq;
pub mod space;
pub mod tables;
pub mod temporal;
pub mod validate;

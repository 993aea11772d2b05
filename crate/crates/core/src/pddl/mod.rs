//! The accepted PDDL subset: STRIPS with typing and equality, plus durative
//! actions with constant durations. Durative conditions and effects are
//! collapsed into plain pre/add/del sets.

pub mod ast;
pub mod ground;
pub mod parser;
pub mod print;
pub mod sexp;

pub use ground::{check_domain, ground};
pub use parser::{parse, parse_domain, parse_problem};
pub use print::{print_domain, print_problem};

use crate::error::PddlError;
use crate::model::Problem;

/// Parses and grounds a domain/problem pair.
pub fn load(domain_text: &str, problem_text: &str) -> Result<Problem, PddlError> {
    let (d, p) = parse(domain_text, problem_text)?;
    ground(&d, &p)
}

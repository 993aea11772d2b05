//! Sequential regression.

use crate::atoms::AtomSet;
use crate::model::{GroundAction, Problem};
use crate::rational::Rational;

/// `del(a) ∩ s = ∅` and `add(a) ∩ s ≠ ∅`.
pub fn applicable_seq(a: &GroundAction, s: &AtomSet) -> bool {
    !a.del().intersects(s) && a.add().intersects(s)
}

/// `(s − add(a)) ∪ pre(a)`.
pub fn regress_seq(s: &AtomSet, a: &GroundAction) -> AtomSet {
    assert!(applicable_seq(a, s), "regressing {} through an inapplicable action", a.name());
    s.difference(a.add()).union(a.pre())
}

pub fn final_seq(s: &AtomSet, init: &AtomSet) -> bool {
    s.is_subset(init)
}

/// Candidate actions adding some atom of `s`, ascending and without repeats.
pub(crate) fn relevant_actions(problem: &Problem, s: &AtomSet) -> Vec<usize> {
    let mut ids: Vec<usize> = s.iter().flat_map(|p| problem.achievers(p).iter().copied()).collect();
    ids.sort_unstable();
    ids.dedup();
    ids
}

/// One entry per applicable action, in action id order, with `δ = cost(a)`.
pub fn successors_seq(problem: &Problem, s: &AtomSet) -> Vec<(AtomSet, usize, Rational)> {
    relevant_actions(problem, s)
        .into_iter()
        .filter(|&i| !problem.action(i).del().intersects(s))
        .map(|i| {
            let a = problem.action(i);
            (regress_seq(s, a), i, a.cost())
        })
        .collect()
}

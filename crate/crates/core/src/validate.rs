//! Forward simulation of plans.
//!
//! Timed plans follow the planner's semantics: preconditions must hold when
//! an action starts, persistent preconditions until it ends, and effects
//! appear at the end (immediately for zero-duration actions). At one time
//! point, ending actions take effect first, then zero-duration actions in
//! plan order, then starting actions are checked.

use std::collections::BTreeSet;
use std::fmt;

use crate::atoms::AtomSet;
use crate::model::{compatible, Mode, Plan, Problem};
use crate::rational::{Rational, ZERO};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reason {
    UnknownAction,
    NegativeStart,
    Precondition,
    Compatibility,
    Goal,
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Reason::UnknownAction => "unknown-action",
            Reason::NegativeStart => "negative-start",
            Reason::Precondition => "precondition",
            Reason::Compatibility => "compatibility",
            Reason::Goal => "goal",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validity {
    /// The plan is executable and reaches the goal; carries its metric.
    Valid(Rational),
    Invalid { reason: Reason, detail: String },
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid(_))
    }

    pub fn reason(&self) -> Option<Reason> {
        match self {
            Validity::Valid(_) => None,
            Validity::Invalid { reason, .. } => Some(*reason),
        }
    }
}

fn invalid(reason: Reason, detail: String) -> Validity {
    Validity::Invalid { reason, detail }
}

fn apply(state: &mut AtomSet, del: &AtomSet, add: &AtomSet) {
    *state = state.difference(del).union(add);
}

pub fn validate_plan(problem: &Problem, plan: &Plan) -> Validity {
    if let Some(s) = plan.steps.iter().find(|s| s.action >= problem.actions().len()) {
        return invalid(Reason::UnknownAction, format!("action id {}", s.action));
    }
    if plan.mode == Mode::Sequential {
        validate_sequential(problem, plan)
    } else {
        validate_timed(problem, plan)
    }
}

fn validate_sequential(problem: &Problem, plan: &Plan) -> Validity {
    let mut state = problem.init().clone();
    let mut metric = ZERO;
    for (i, s) in plan.steps.iter().enumerate() {
        let a = problem.action(s.action);
        if !a.pre().is_subset(&state) {
            return invalid(Reason::Precondition, format!("step {i} ({})", a.name()));
        }
        apply(&mut state, a.del(), a.add());
        metric = metric + a.cost();
    }
    if !problem.goal().is_subset(&state) {
        return invalid(Reason::Goal, problem.set_name(&problem.goal().difference(&state)));
    }
    Validity::Valid(metric)
}

fn validate_timed(problem: &Problem, plan: &Plan) -> Validity {
    let steps = &plan.steps;
    if let Some(s) = steps.iter().find(|s| s.start.is_negative()) {
        return invalid(Reason::NegativeStart, format!("({}) at {}", problem.action(s.action).name(), s.start));
    }
    let span = |i: usize| {
        let s = &steps[i];
        (s.start, s.start + problem.action(s.action).dur())
    };
    for i in 0..steps.len() {
        for j in i + 1..steps.len() {
            let (s1, e1) = span(i);
            let (s2, e2) = span(j);
            let (a, b) = (problem.action(steps[i].action), problem.action(steps[j].action));
            if s1 < e2 && s2 < e1 && !compatible(a, b) {
                return invalid(Reason::Compatibility, format!("({}) and ({})", a.name(), b.name()));
            }
        }
    }
    let times: BTreeSet<Rational> = (0..steps.len()).flat_map(|i| [span(i).0, span(i).1]).collect();
    let mut state = problem.init().clone();
    for &t in &times {
        let ending: Vec<usize> = (0..steps.len())
            .filter(|&i| span(i).1 == t && span(i).0 < t)
            .collect();
        for &i in &ending {
            let a = problem.action(steps[i].action);
            if !a.per().is_subset(&state) {
                return invalid(Reason::Precondition, format!("({}) lost a condition before {t}", a.name()));
            }
        }
        for &i in &ending {
            let a = problem.action(steps[i].action);
            apply(&mut state, a.del(), a.add());
        }
        for s in steps {
            let a = problem.action(s.action);
            if s.start == t && a.dur().is_zero() {
                if !a.pre().is_subset(&state) {
                    return invalid(Reason::Precondition, format!("({}) at {t}", a.name()));
                }
                apply(&mut state, a.del(), a.add());
            }
        }
        for s in steps.iter().filter(|s| s.start == t) {
            let a = problem.action(s.action);
            if !a.dur().is_zero() && !a.pre().is_subset(&state) {
                return invalid(Reason::Precondition, format!("({}) at {t}", a.name()));
            }
        }
    }
    if !problem.goal().is_subset(&state) {
        return invalid(Reason::Goal, problem.set_name(&problem.goal().difference(&state)));
    }
    Validity::Valid(times.last().copied().unwrap_or(ZERO))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{sat1, temporal_chain, ProblemBuilder};
    use crate::model::PlanStep;

    fn seq_plan(p: &Problem, names: &[&str]) -> Plan {
        let steps = names
            .iter()
            .enumerate()
            .map(|(i, n)| PlanStep { start: Rational::integer(i as i64), action: p.action_index(n).unwrap() })
            .collect();
        Plan { steps, metric: ZERO, mode: Mode::Sequential }
    }

    #[test]
    fn sat1_hand_plan_is_valid() {
        let p = sat1();
        let plan = seq_plan(
            &p,
            &["power-on", "turn d1 d2", "calibrate d2", "turn d2 d4", "take-image d4", "turn d4 d5", "take-image d5"],
        );
        assert_eq!(validate_plan(&p, &plan), Validity::Valid(Rational::integer(7)));
    }

    #[test]
    fn missing_goal() {
        let p = sat1();
        let plan = seq_plan(&p, &["power-on"]);
        assert_eq!(validate_plan(&p, &plan).reason(), Some(Reason::Goal));
    }

    #[test]
    fn missing_precondition() {
        let p = sat1();
        let plan = seq_plan(&p, &["take-image d4"]);
        assert_eq!(validate_plan(&p, &plan).reason(), Some(Reason::Precondition));
    }

    #[test]
    fn overlapping_incompatible_actions() {
        let mut b = ProblemBuilder::new();
        b.atom("p").atom("q").atom("r");
        b.timed_action("use", &["p"], &["q"], &[], Rational::integer(2));
        b.timed_action("spoil", &[], &["r"], &["p"], Rational::integer(2));
        let p = b.build(&["p"], &["q", "r"], Mode::Temporal);
        let plan = Plan {
            steps: vec![PlanStep { start: ZERO, action: 0 }, PlanStep { start: Rational::integer(1), action: 1 }],
            metric: Rational::integer(3),
            mode: Mode::Temporal,
        };
        assert_eq!(validate_plan(&p, &plan).reason(), Some(Reason::Compatibility));
        let serial = Plan {
            steps: vec![PlanStep { start: ZERO, action: 0 }, PlanStep { start: Rational::integer(2), action: 1 }],
            metric: Rational::integer(4),
            mode: Mode::Temporal,
        };
        assert_eq!(validate_plan(&p, &serial), Validity::Valid(Rational::integer(4)));
    }

    #[test]
    fn effects_arrive_at_the_end() {
        let p = temporal_chain();
        let early = Plan {
            steps: vec![PlanStep { start: ZERO, action: 0 }, PlanStep { start: Rational::new(1, 2), action: 1 }],
            metric: ZERO,
            mode: Mode::Temporal,
        };
        assert_eq!(validate_plan(&p, &early).reason(), Some(Reason::Precondition));
        let ok = Plan {
            steps: vec![PlanStep { start: ZERO, action: 0 }, PlanStep { start: Rational::integer(2), action: 1 }],
            metric: ZERO,
            mode: Mode::Temporal,
        };
        assert_eq!(validate_plan(&p, &ok), Validity::Valid(Rational::integer(5)));
    }

    #[test]
    fn empty_plan_for_satisfied_goal() {
        let p = sat1().with_goal(AtomSet::new());
        assert_eq!(validate_plan(&p, &Plan::empty(Mode::Sequential)), Validity::Valid(ZERO));
        assert_eq!(validate_plan(&p, &Plan::empty(Mode::Temporal)), Validity::Valid(ZERO));
    }
}

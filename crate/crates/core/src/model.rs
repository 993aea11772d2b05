//! Ground planning problems and plans.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::atoms::{Atom, AtomSet};
use crate::error::ModelError;
use crate::rational::{Rational, ONE, ZERO};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Sequential,
    Parallel,
    Temporal,
}

impl Mode {
    /// Whether the metric is makespan rather than summed cost.
    pub fn is_timed(self) -> bool {
        !matches!(self, Mode::Sequential)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundAction {
    name: String,
    pre: AtomSet,
    add: AtomSet,
    del: AtomSet,
    per: AtomSet,
    cost: Rational,
    dur: Rational,
}

impl GroundAction {
    /// `name` is the display form without parentheses, e.g. `turn d1 d2`.
    pub fn new(
        name: impl Into<String>,
        pre: AtomSet,
        add: AtomSet,
        del: AtomSet,
        cost: Rational,
        dur: Rational,
    ) -> Result<GroundAction, ModelError> {
        let name = name.into();
        if add.intersects(&del) {
            return Err(ModelError::Contradictory(name));
        }
        if cost <= ZERO || cost.is_infinite() {
            return Err(ModelError::NonPositiveCost(name));
        }
        if dur.is_negative() || dur.is_infinite() {
            return Err(ModelError::NegativeDuration(name));
        }
        let per = pre.difference(&del);
        Ok(GroundAction { name, pre, add, del, per, cost, dur })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn pre(&self) -> &AtomSet {
        &self.pre
    }

    pub fn add(&self) -> &AtomSet {
        &self.add
    }

    pub fn del(&self) -> &AtomSet {
        &self.del
    }

    /// Persistent preconditions, `pre − del`.
    pub fn per(&self) -> &AtomSet {
        &self.per
    }

    pub fn cost(&self) -> Rational {
        self.cost
    }

    pub fn dur(&self) -> Rational {
        self.dur
    }

    fn with_dur(&self, dur: Rational) -> GroundAction {
        GroundAction { dur, ..self.clone() }
    }
}

/// Two actions may overlap in time iff neither deletes a precondition or
/// an add effect of the other.
pub fn compatible(a: &GroundAction, b: &GroundAction) -> bool {
    !(a.del.intersects(&b.pre)
        || a.del.intersects(&b.add)
        || b.del.intersects(&a.pre)
        || b.del.intersects(&a.add))
}

#[derive(Clone, Debug)]
pub struct Problem {
    atom_names: Vec<String>,
    atom_index: HashMap<String, Atom>,
    actions: Vec<GroundAction>,
    init: AtomSet,
    goal: AtomSet,
    mode: Mode,
    achievers: Vec<Vec<usize>>,
}

impl Problem {
    /// Validates atom references. Parallel mode forces every duration to 1.
    pub fn new(
        atom_names: Vec<String>,
        actions: Vec<GroundAction>,
        init: AtomSet,
        goal: AtomSet,
        mode: Mode,
    ) -> Result<Problem, ModelError> {
        let n = atom_names.len() as u32;
        let check = |s: &AtomSet| match s.iter().find(|a| a.0 >= n) {
            Some(a) => Err(ModelError::UnknownAtom(a.0)),
            None => Ok(()),
        };
        check(&init)?;
        check(&goal)?;
        for a in &actions {
            check(&a.pre)?;
            check(&a.add)?;
            check(&a.del)?;
        }
        let atom_index = atom_names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), Atom(i as u32)))
            .collect();
        let mut p = Problem {
            atom_names,
            atom_index,
            actions,
            init,
            goal,
            mode,
            achievers: Vec::new(),
        };
        if mode == Mode::Parallel {
            p.actions = p.actions.iter().map(|a| a.with_dur(ONE)).collect();
        }
        p.rebuild_index();
        Ok(p)
    }

    fn rebuild_index(&mut self) {
        let mut ach = vec![Vec::new(); self.atom_names.len()];
        for (i, a) in self.actions.iter().enumerate() {
            for p in a.add.iter() {
                ach[p.index()].push(i);
            }
        }
        self.achievers = ach;
    }

    pub fn atom_count(&self) -> usize {
        self.atom_names.len()
    }

    pub fn atom_name(&self, a: Atom) -> &str {
        &self.atom_names[a.index()]
    }

    pub fn atom_names(&self) -> &[String] {
        &self.atom_names
    }

    pub fn atom(&self, name: &str) -> Option<Atom> {
        self.atom_index.get(name).copied()
    }

    /// Builds an atom set from display names; panics on unknown names.
    pub fn atoms(&self, names: &[&str]) -> AtomSet {
        names
            .iter()
            .map(|n| self.atom(n).unwrap_or_else(|| panic!("unknown atom {n}")))
            .collect()
    }

    pub fn actions(&self) -> &[GroundAction] {
        &self.actions
    }

    pub fn action(&self, i: usize) -> &GroundAction {
        &self.actions[i]
    }

    pub fn action_index(&self, name: &str) -> Option<usize> {
        self.actions.iter().position(|a| a.name == name)
    }

    /// Actions adding `p`, in ascending id order.
    pub fn achievers(&self, p: Atom) -> &[usize] {
        &self.achievers[p.index()]
    }

    pub fn init(&self) -> &AtomSet {
        &self.init
    }

    pub fn goal(&self) -> &AtomSet {
        &self.goal
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// The same problem read in another mode.
    pub fn with_mode(&self, mode: Mode) -> Problem {
        Problem::new(
            self.atom_names.clone(),
            self.actions.clone(),
            self.init.clone(),
            self.goal.clone(),
            mode,
        )
        .expect("already validated")
    }

    pub fn with_goal(&self, goal: AtomSet) -> Problem {
        let mut p = self.clone();
        p.goal = goal;
        p
    }

    pub fn set_name(&self, s: &AtomSet) -> String {
        let names: Vec<&str> = s.iter().map(|a| self.atom_name(a)).collect();
        format!("{{{}}}", names.join(", "))
    }
}

/// A regression edge, reduced to what determines its cost.
#[derive(Clone, Copy, Debug)]
pub enum Transition<'a> {
    /// Sequential regression through an action.
    Regress(&'a GroundAction),
    /// Temporal or parallel regression advancing time by the given amount.
    Advance(Rational),
}

/// The increase in accumulated cost along an edge.
pub fn delta_cost(t: &Transition<'_>) -> Rational {
    match t {
        Transition::Regress(a) => a.cost(),
        Transition::Advance(d) => *d,
    }
}

/// Replaces every duration with its ceiling.
pub fn round_durations_up(problem: &Problem) -> Problem {
    let mut p = problem.clone();
    p.actions = p.actions.iter().map(|a| a.with_dur(a.dur.ceil())).collect();
    p
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanStep {
    pub start: Rational,
    pub action: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plan {
    pub steps: Vec<PlanStep>,
    pub metric: Rational,
    pub mode: Mode,
}

impl Plan {
    pub fn empty(mode: Mode) -> Plan {
        Plan { steps: Vec::new(), metric: ZERO, mode }
    }

    /// One line per step: `<index>: (<action>)` for sequential plans,
    /// `<start>: (<action>) [<dur>]` otherwise.
    pub fn render(&self, problem: &Problem) -> String {
        let mut out = String::new();
        for (i, s) in self.steps.iter().enumerate() {
            let a = problem.action(s.action);
            if self.mode == Mode::Sequential {
                let _ = writeln!(out, "{}: ({})", i, a.name());
            } else {
                let _ = writeln!(out, "{}: ({}) [{}]", s.start, a.name(), a.dur());
            }
        }
        out
    }
}

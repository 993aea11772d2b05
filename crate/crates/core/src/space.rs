//! The regression spaces searched by GBF, IDA* and IDAO*.

use std::fmt::Debug;
use std::hash::Hash;

use crate::atoms::{binomial, AtomSet};
use crate::htable::HeuristicTable;
use crate::model::{Mode, Plan, PlanStep, Problem};
use crate::rational::{Rational, ZERO};
use crate::seq::{final_seq, successors_seq};
use crate::temporal::{
    final_temporal, relax_state, storage_value, successors_temporal, temp_size, ShiftContext,
    TempState,
};

#[derive(Clone, Debug)]
pub struct Edge<S, C> {
    pub state: S,
    pub delta: Rational,
    /// Actions applied on this edge, ascending.
    pub actions: Vec<usize>,
    pub ctx: C,
}

#[derive(Clone, Debug)]
pub struct Expansion<S, C> {
    pub edges: Vec<Edge<S, C>>,
    pub shift_pruned: bool,
}

pub trait RegressionSpace {
    type State: Clone + Eq + Hash + Debug;
    type Ctx: Clone + Debug;

    fn problem(&self) -> &Problem;

    #[allow(clippy::wrong_self_convention)]
    fn from_atoms(&self, s: AtomSet) -> Self::State;

    fn root(&self) -> Self::State {
        self.from_atoms(self.problem().goal().clone())
    }

    fn is_final(&self, s: &Self::State) -> bool;

    /// Whether `s` can cost no less than `ancestor`, so a path from
    /// `ancestor` down to `s` never improves on `ancestor` itself.
    fn dominates(&self, s: &Self::State, ancestor: &Self::State) -> bool {
        s == ancestor
    }

    fn expand(&self, s: &Self::State, ctx: Option<&Self::Ctx>, right_shift: bool)
        -> Expansion<Self::State, Self::Ctx>;

    /// Action-free atom sets with offsets whose relaxed costs bound the cost
    /// of `s` from below.
    fn components(&self, s: &Self::State) -> Vec<(AtomSet, Rational)>;

    fn estimate(&self, table: &HeuristicTable, s: &Self::State) -> Rational {
        self.components(s)
            .iter()
            .map(|(c, o)| *o + table.eval(c))
            .max()
            .unwrap_or(ZERO)
    }

    fn size(&self, s: &Self::State) -> usize;

    /// A value every finite cost in the m-regression space stays within.
    /// An optimal solution never repeats an OR node along a branch, so a
    /// branch takes at most one step per distinct OR node.
    fn relaxed_cost_cap(&self, _m: usize) -> Option<Rational> {
        None
    }

    /// The atom set split into subsets at an AND node.
    fn split_set(&self, s: &Self::State) -> AtomSet;

    /// Atom set and value to record in the heuristic table.
    fn storage(&self, s: &Self::State, cost: Rational) -> (AtomSet, Rational);

    /// Turns a root-to-final path of edges into a forward plan.
    fn plan(&self, path: &[(Vec<usize>, Rational)]) -> Plan;
}

pub struct SeqSpace<'a> {
    pub problem: &'a Problem,
}

impl RegressionSpace for SeqSpace<'_> {
    type State = AtomSet;
    type Ctx = ();

    fn problem(&self) -> &Problem {
        self.problem
    }

    fn from_atoms(&self, s: AtomSet) -> AtomSet {
        s
    }

    fn is_final(&self, s: &AtomSet) -> bool {
        final_seq(s, self.problem.init())
    }

    fn dominates(&self, s: &AtomSet, ancestor: &AtomSet) -> bool {
        ancestor.is_subset(s)
    }

    fn expand(&self, s: &AtomSet, _: Option<&()>, _: bool) -> Expansion<AtomSet, ()> {
        let edges = successors_seq(self.problem, s)
            .into_iter()
            .map(|(state, a, delta)| Edge { state, delta, actions: vec![a], ctx: () })
            .collect();
        Expansion { edges, shift_pruned: false }
    }

    fn components(&self, s: &AtomSet) -> Vec<(AtomSet, Rational)> {
        vec![(s.clone(), ZERO)]
    }

    fn estimate(&self, table: &HeuristicTable, s: &AtomSet) -> Rational {
        table.eval(s)
    }

    fn size(&self, s: &AtomSet) -> usize {
        s.len()
    }

    fn relaxed_cost_cap(&self, m: usize) -> Option<Rational> {
        let n = self.problem.atom_count() as u64;
        let nodes: u64 = (1..=m as u64).map(|k| binomial(n, k)).sum();
        let step = self.problem.actions().iter().map(|a| a.cost()).max()?;
        let (num, den) = step.parts()?;
        let num = num.checked_mul(i64::try_from(nodes).ok()?)?;
        Some(Rational::new(num, den))
    }

    fn split_set(&self, s: &AtomSet) -> AtomSet {
        s.clone()
    }

    fn storage(&self, s: &AtomSet, cost: Rational) -> (AtomSet, Rational) {
        (s.clone(), cost)
    }

    fn plan(&self, path: &[(Vec<usize>, Rational)]) -> Plan {
        let steps: Vec<PlanStep> = path
            .iter()
            .rev()
            .flat_map(|(acts, _)| acts.iter().copied())
            .enumerate()
            .map(|(i, action)| PlanStep { start: Rational::integer(i as i64), action })
            .collect();
        let metric = steps.iter().map(|s| self.problem.action(s.action).cost()).sum();
        Plan { steps, metric, mode: Mode::Sequential }
    }
}

/// Temporal regression; parallel planning is the special case where every
/// duration is 1.
pub struct TempSpace<'a> {
    pub problem: &'a Problem,
}

impl RegressionSpace for TempSpace<'_> {
    type State = TempState;
    type Ctx = ShiftContext;

    fn problem(&self) -> &Problem {
        self.problem
    }

    fn from_atoms(&self, s: AtomSet) -> TempState {
        TempState::from_atoms(s)
    }

    fn is_final(&self, s: &TempState) -> bool {
        final_temporal(s, self.problem.init())
    }

    fn dominates(&self, s: &TempState, ancestor: &TempState) -> bool {
        s == ancestor || (s.f().is_empty() && ancestor.f().is_empty() && ancestor.e().is_subset(s.e()))
    }

    fn expand(
        &self,
        s: &TempState,
        ctx: Option<&ShiftContext>,
        right_shift: bool,
    ) -> Expansion<TempState, ShiftContext> {
        let x = successors_temporal(self.problem, s, ctx, right_shift);
        let edges = x
            .successors
            .into_iter()
            .map(|t| Edge { state: t.state, delta: t.advance, actions: t.started, ctx: t.shift })
            .collect();
        Expansion { edges, shift_pruned: x.shift_pruned }
    }

    fn components(&self, s: &TempState) -> Vec<(AtomSet, Rational)> {
        relax_state(self.problem, s).components
    }

    fn size(&self, s: &TempState) -> usize {
        temp_size(self.problem, s)
    }

    fn split_set(&self, s: &TempState) -> AtomSet {
        s.union_set(self.problem)
    }

    fn storage(&self, s: &TempState, cost: Rational) -> (AtomSet, Rational) {
        storage_value(self.problem, s, cost)
    }

    /// Step `k` sits at `t_k = T − Σ_{j<k} δ_j`. An action chosen there
    /// starts at `t_k − dur`; an instantaneous one at `t_{k+1}`.
    fn plan(&self, path: &[(Vec<usize>, Rational)]) -> Plan {
        let total: Rational = path.iter().map(|p| p.1).sum();
        let mut t = total;
        let mut keyed = Vec::new();
        for (k, (acts, delta)) in path.iter().enumerate() {
            for &a in acts {
                let d = self.problem.action(a).dur();
                let start = if d.is_zero() { t - *delta } else { t - d };
                keyed.push((start, std::cmp::Reverse(k), a));
            }
            t = t - *delta;
        }
        // Steps deeper in the regression happen earlier at equal start times.
        keyed.sort();
        let steps = keyed.into_iter().map(|(start, _, action)| PlanStep { start, action }).collect();
        Plan { steps, metric: total, mode: self.problem.mode() }
    }
}

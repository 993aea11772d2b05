//! Temporal regression over states `(E, F)`.
//!
//! `E` holds the atoms required at the current time point `t`; each
//! `(a, δ)` in `F` is an action that started `δ` time units before `t` and
//! is still running across it (`0 < δ < dur(a)`).

use std::collections::HashMap;

use crate::atoms::AtomSet;
use crate::htable::HeuristicTable;
use crate::model::{compatible, Problem};
use crate::rational::{Rational, ZERO};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct TempState {
    e: AtomSet,
    f: Vec<(usize, Rational)>,
}

impl TempState {
    /// Canonicalizes `F` by (action id, δ).
    pub fn new(e: AtomSet, mut f: Vec<(usize, Rational)>) -> TempState {
        f.sort();
        f.dedup();
        TempState { e, f }
    }

    pub fn from_atoms(e: AtomSet) -> TempState {
        TempState { e, f: Vec::new() }
    }

    pub fn e(&self) -> &AtomSet {
        &self.e
    }

    pub fn f(&self) -> &[(usize, Rational)] {
        &self.f
    }

    pub fn max_delta(&self) -> Rational {
        self.f.iter().map(|x| x.1).max().unwrap_or(ZERO)
    }

    /// `E ∪ ⋃ pre(a)` over the actions in `F`.
    pub fn union_set(&self, problem: &Problem) -> AtomSet {
        let mut u = self.e.clone();
        for &(a, _) in &self.f {
            u.union_with(problem.action(a).pre());
        }
        u
    }
}

/// What right-shift pruning needs to know about the predecessor of the
/// state being expanded.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ShiftContext {
    pub pred_e: AtomSet,
    pub pred_f: Vec<usize>,
    pub pred_chosen: Vec<usize>,
    /// Atoms of the current `E` that were only carried over by no-ops.
    pub carried: AtomSet,
}

/// Whether using `a` as an establisher at `cur` is excluded because `a`
/// could have been delayed to the predecessor's time point instead.
pub fn right_shift_forbids(
    problem: &Problem,
    ctx: Option<&ShiftContext>,
    cur: &TempState,
    a: usize,
) -> bool {
    let Some(ctx) = ctx else { return false };
    let act = problem.action(a);
    let added = act.add().intersection(cur.e());
    if added.is_empty() || !added.is_subset(&ctx.carried) {
        return false;
    }
    !act.del().intersects(&ctx.pred_e)
        && ctx
            .pred_f
            .iter()
            .chain(&ctx.pred_chosen)
            .all(|&b| compatible(act, problem.action(b)))
}

#[derive(Clone, Debug)]
pub struct TempSuccessor {
    pub state: TempState,
    pub advance: Rational,
    /// Real actions chosen as establishers, ascending.
    pub started: Vec<usize>,
    pub shift: ShiftContext,
}

#[derive(Clone, Debug, Default)]
pub struct TempExpansion {
    pub successors: Vec<TempSuccessor>,
    /// Whether right-shift pruning removed at least one establisher.
    pub shift_pruned: bool,
}

struct Gen<'a> {
    problem: &'a Problem,
    s: &'a TempState,
    ctx: Option<&'a ShiftContext>,
    right_shift: bool,
    chosen: Vec<usize>,
    noops: Vec<crate::atoms::Atom>,
    out: TempExpansion,
}

impl Gen<'_> {
    fn covered(&self, p: crate::atoms::Atom) -> bool {
        self.chosen.iter().any(|&a| self.problem.action(a).add().contains(p))
    }

    fn rec(&mut self, i: usize) {
        let e = self.s.e.as_slice();
        if i == e.len() {
            self.emit();
            return;
        }
        let p = e[i];
        if self.covered(p) {
            self.rec(i + 1);
            return;
        }
        let problem = self.problem;
        let noop_ok = self
            .s
            .f
            .iter()
            .all(|&(b, _)| !problem.action(b).del().contains(p));
        if noop_ok {
            self.noops.push(p);
            self.rec(i + 1);
            self.noops.pop();
        }
        for &a in problem.achievers(p) {
            let act = problem.action(a);
            if act.del().intersects(&self.s.e)
                || self.noops.iter().any(|&q| act.add().contains(q))
                || !self.chosen.iter().all(|&b| compatible(act, problem.action(b)))
                || !self.s.f.iter().all(|&(b, _)| compatible(act, problem.action(b)))
            {
                continue;
            }
            if self.right_shift && right_shift_forbids(problem, self.ctx, self.s, a) {
                self.out.shift_pruned = true;
                continue;
            }
            self.chosen.push(a);
            self.rec(i + 1);
            self.chosen.pop();
        }
    }

    fn emit(&mut self) {
        if self.chosen.is_empty() && self.s.f.is_empty() {
            return;
        }
        let problem = self.problem;
        let positive = self
            .chosen
            .iter()
            .map(|&a| problem.action(a).dur())
            .filter(|d| !d.is_zero());
        let advance = positive
            .chain(self.s.f.iter().map(|x| x.1))
            .min()
            .unwrap_or(ZERO);
        let mut e_next = AtomSet::from_sorted(self.noops.clone());
        let mut starting = AtomSet::new();
        let mut f_next = Vec::new();
        for &a in &self.chosen {
            let act = problem.action(a);
            let d = act.dur();
            if d.is_zero() || d == advance {
                starting.union_with(act.pre());
            } else {
                f_next.push((a, d - advance));
            }
        }
        for &(b, d) in &self.s.f {
            if d == advance {
                starting.union_with(problem.action(b).pre());
            } else {
                f_next.push((b, d - advance));
            }
        }
        e_next.union_with(&starting);
        let carried = AtomSet::from_sorted(self.noops.clone()).difference(&starting);
        let mut started = self.chosen.clone();
        started.sort_unstable();
        self.out.successors.push(TempSuccessor {
            state: TempState::new(e_next, f_next),
            advance,
            started,
            shift: ShiftContext {
                pred_e: self.s.e.clone(),
                pred_f: self.s.f.iter().map(|x| x.0).collect(),
                pred_chosen: self.chosen.clone(),
                carried,
            },
        });
    }
}

/// All successors of `s`, de-duplicated: when right-shift pruning is off a
/// state keeps only its cheapest edge; when it is on, duplicates are only
/// merged if their shift contexts agree as well.
pub fn successors_temporal(
    problem: &Problem,
    s: &TempState,
    ctx: Option<&ShiftContext>,
    use_right_shift: bool,
) -> TempExpansion {
    let mut g = Gen {
        problem,
        s,
        ctx,
        right_shift: use_right_shift,
        chosen: Vec::new(),
        noops: Vec::new(),
        out: TempExpansion::default(),
    };
    g.rec(0);
    let TempExpansion { successors, shift_pruned } = g.out;
    let mut seen: HashMap<(TempState, Option<ShiftContext>), usize> = HashMap::new();
    let mut out: Vec<TempSuccessor> = Vec::with_capacity(successors.len());
    for succ in successors {
        let key = (succ.state.clone(), use_right_shift.then(|| succ.shift.clone()));
        match seen.get(&key) {
            Some(&i) => {
                if succ.advance < out[i].advance {
                    out[i] = succ;
                }
            }
            None => {
                seen.insert(key, out.len());
                out.push(succ);
            }
        }
    }
    TempExpansion { successors: out, shift_pruned }
}

pub fn final_temporal(s: &TempState, init: &AtomSet) -> bool {
    s.f.is_empty() && s.e.is_subset(init)
}

/// A temporal state relaxed to action-free atom sets with time offsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelaxedView {
    pub components: Vec<(AtomSet, Rational)>,
}

impl RelaxedView {
    /// `max(offset + eval(set))` over the components.
    pub fn eval(&self, table: &HeuristicTable) -> Rational {
        self.components
            .iter()
            .map(|(s, o)| *o + table.eval(s))
            .max()
            .unwrap_or(ZERO)
    }
}

/// One component per distinct `δ` in `F`, holding the preconditions of every
/// action started at least that long ago, plus `(E ∪ ⋃ pre(F), 0)`. Ordered
/// by decreasing offset.
pub fn relax_state(problem: &Problem, s: &TempState) -> RelaxedView {
    let mut deltas: Vec<Rational> = s.f.iter().map(|x| x.1).collect();
    deltas.sort_unstable_by(|a, b| b.cmp(a));
    deltas.dedup();
    let mut components = Vec::with_capacity(deltas.len() + 1);
    for d in deltas {
        let mut set = AtomSet::new();
        for &(a, di) in &s.f {
            if di >= d {
                set.union_with(problem.action(a).pre());
            }
        }
        components.push((set, d));
    }
    components.push((s.union_set(problem), ZERO));
    RelaxedView { components }
}

/// `|E ∪ ⋃ pre(F)|`.
pub fn temp_size(problem: &Problem, s: &TempState) -> usize {
    s.union_set(problem).len()
}

/// The atom set and lower bound to store for a state whose cost is at least
/// `found_cost`: achieving the union set lets the state follow at most
/// `max δ` later, so `max δ` is subtracted.
pub fn storage_value(problem: &Problem, s: &TempState, found_cost: Rational) -> (AtomSet, Rational) {
    (s.union_set(problem), found_cost.saturating_sub(s.max_delta()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atoms::Atom;
    use crate::fixtures::{sat1, ProblemBuilder};
    use crate::model::Mode;
    use crate::rational::ONE;

    fn r(n: i64) -> Rational {
        Rational::integer(n)
    }

    fn fig2() -> Problem {
        let mut b = ProblemBuilder::new();
        b.atom("p").atom("q").atom("r").atom("x").atom("y");
        b.timed_action("a1", &["q"], &["x"], &[], r(3));
        b.timed_action("a2", &["q", "r"], &["y"], &[], r(4));
        b.build(&[], &["p"], Mode::Temporal)
    }

    #[test]
    fn compatible_turn_power_on() {
        let p = sat1();
        let t = p.action(p.action_index("turn d1 d2").unwrap());
        let on = p.action(p.action_index("power-on").unwrap());
        assert!(compatible(t, on));
    }

    #[test]
    fn single_establisher_advances_by_duration() {
        let mut b = ProblemBuilder::new();
        b.atom("p").atom("g");
        b.action("a", &["p"], &["g"], &[]);
        let p = b.build(&[], &["g"], Mode::Temporal);
        let s = TempState::from_atoms(p.atoms(&["g"]));
        let x = successors_temporal(&p, &s, None, false);
        assert_eq!(x.successors.len(), 1);
        assert_eq!(x.successors[0].state, TempState::from_atoms(p.atoms(&["p"])));
        assert_eq!(x.successors[0].advance, ONE);
    }

    #[test]
    fn noop_advance_on_figure_two_state() {
        let p = fig2();
        let s = TempState::new(p.atoms(&["p"]), vec![(0, r(1)), (1, r(2))]);
        let x = successors_temporal(&p, &s, None, false);
        assert_eq!(x.successors.len(), 1);
        let succ = &x.successors[0];
        assert_eq!(succ.advance, ONE);
        assert_eq!(succ.state, TempState::new(p.atoms(&["p", "q"]), vec![(1, ONE)]));
    }

    #[test]
    fn relaxation_of_figure_two_state() {
        let p = fig2();
        let s = TempState::new(p.atoms(&["p"]), vec![(0, r(1)), (1, r(2))]);
        let v = relax_state(&p, &s);
        assert_eq!(
            v.components,
            vec![
                (p.atoms(&["q", "r"]), r(2)),
                (p.atoms(&["q", "r"]), r(1)),
                (p.atoms(&["p", "q", "r"]), ZERO),
            ]
        );
        assert_eq!(temp_size(&p, &s), 3);
    }

    #[test]
    fn equal_deltas_share_a_component() {
        let p = fig2();
        let s = TempState::new(p.atoms(&["p"]), vec![(0, r(2)), (1, r(2))]);
        let v = relax_state(&p, &s);
        assert_eq!(v.components, vec![(p.atoms(&["q", "r"]), r(2)), (p.atoms(&["p", "q", "r"]), ZERO)]);
        let e = TempState::from_atoms(p.atoms(&["p"]));
        assert_eq!(relax_state(&p, &e).components, vec![(p.atoms(&["p"]), ZERO)]);
    }

    #[test]
    fn storage_values() {
        let p = fig2();
        let e = TempState::from_atoms(p.atoms(&["p"]));
        assert_eq!(storage_value(&p, &e, r(7)), (p.atoms(&["p"]), r(7)));
        let s = TempState::new(p.atoms(&["p"]), vec![(0, r(1)), (1, r(2))]);
        assert_eq!(storage_value(&p, &s, r(5)), (p.atoms(&["p", "q", "r"]), r(3)));
        assert_eq!(storage_value(&p, &s, r(1)).1, ZERO);
    }

    #[test]
    fn final_examples() {
        let p = fig2();
        let init = p.atoms(&["p"]);
        assert!(final_temporal(&TempState::from_atoms(AtomSet::new()), &init));
        assert!(final_temporal(&TempState::from_atoms(init.clone()), &init));
        assert!(!final_temporal(&TempState::new(init.clone(), vec![(0, ONE)]), &init));
    }

    #[test]
    fn right_shift_examples() {
        let mut b = ProblemBuilder::new();
        b.atom("p").atom("q").atom("z");
        b.action("a", &[], &["p"], &[]);
        b.action("ab", &[], &["p", "q"], &[]);
        let prob = b.build(&[], &["p"], Mode::Temporal);
        let cur = TempState::from_atoms(prob.atoms(&["p", "q"]));
        let ctx = ShiftContext {
            pred_e: prob.atoms(&["p"]),
            pred_f: vec![],
            pred_chosen: vec![],
            carried: prob.atoms(&["p"]),
        };
        assert!(right_shift_forbids(&prob, Some(&ctx), &cur, 0));
        assert!(!right_shift_forbids(&prob, Some(&ctx), &cur, 1));
        assert!(!right_shift_forbids(&prob, None, &cur, 0));
    }

    #[test]
    fn parallel_successors_never_carry_actions() {
        let p = sat1().with_mode(Mode::Parallel);
        let s = TempState::from_atoms(p.goal().clone());
        let x = successors_temporal(&p, &s, None, false);
        assert!(!x.successors.is_empty());
        for succ in &x.successors {
            assert!(succ.state.f().is_empty());
            assert_eq!(succ.advance, ONE);
            let mut want = AtomSet::new();
            for &a in &succ.started {
                want.union_with(p.action(a).pre());
            }
            let noops: Vec<Atom> = s.e().iter().filter(|q| !succ.started.iter().any(|&a| p.action(a).add().contains(*q))).collect();
            want.union_with(&AtomSet::from_sorted(noops));
            assert_eq!(succ.state.e(), &want);
        }
    }
}

//! IDA* over a regression space, with a transposition table.
//!
//! Each depth-first pass returns, for every node, a lower bound on its cost
//! to go: the least `δ + value` over its children, where children beyond
//! the bound contribute their estimate. The value of the root is therefore
//! the least f-cost pruned in the pass and becomes the next bound.
//!
//! Values that depend on the path leading to a node (because a child was
//! cut as a cycle back to an ancestor, or because right-shift pruning
//! looked at the predecessor) are tracked as a "taint": the depth of the
//! shallowest ancestor involved. Such values are only stored once the
//! search is back at or above that ancestor.

use std::collections::HashMap;

use crate::htable::HeuristicTable;
use crate::metrics::{Phase, Recorder, SpaceTag};
use crate::model::Plan;
use crate::rational::{Rational, INFINITY, ZERO};
use crate::space::RegressionSpace;
use crate::tables::TranspositionTable;

#[derive(Clone, Debug)]
pub struct IdaConfig {
    /// Transposition table slots; 0 disables the table.
    pub tt_capacity: usize,
    pub right_shift: bool,
    pub cycle_check: bool,
    pub upper_limit: Rational,
    /// Record expansion statistics for the first iteration only.
    pub first_iteration_only: bool,
    /// Abort once the run as a whole has made this many expansions.
    pub max_expansions: Option<u64>,
}

impl Default for IdaConfig {
    fn default() -> Self {
        IdaConfig {
            tt_capacity: 1 << 16,
            right_shift: true,
            cycle_check: true,
            upper_limit: INFINITY,
            first_iteration_only: false,
            max_expansions: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdaOutcome {
    Solved { cost: Rational, plan: Plan },
    /// No solution exists at all.
    Unsolvable,
    /// No solution of cost at most `limit`; `lower_bound` exceeds it.
    NoSolutionWithin { limit: Rational, lower_bound: Rational },
    /// The expansion budget ran out; `lower_bound` is the last completed bound.
    ResourceLimit { lower_bound: Rational },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IdaStats {
    pub expansions: u64,
    pub iterations: u64,
    /// The bound of every iteration started, in order.
    pub bounds: Vec<Rational>,
    pub tt_hits: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub outcome: IdaOutcome,
    pub stats: IdaStats,
}

/// Result of one bounded depth-first pass from the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PassResult {
    Solved { cost: Rational, path: Vec<(Vec<usize>, Rational)> },
    /// Least cost beyond the bound (∞ for a dead end).
    Exceeded(Rational),
    Aborted,
}

struct Ret {
    value: Rational,
    taint: Option<usize>,
    solved: bool,
}

pub struct IdaSearch<'a, S: RegressionSpace> {
    space: &'a S,
    table: &'a HeuristicTable,
    cfg: IdaConfig,
    tt: TranspositionTable<S::State>,
    on_path: HashMap<S::State, usize>,
    solution: Vec<(Vec<usize>, Rational)>,
    expansions: u64,
    aborted: bool,
}

impl<'a, S: RegressionSpace> IdaSearch<'a, S> {
    pub fn new(space: &'a S, table: &'a HeuristicTable, cfg: IdaConfig) -> Self {
        IdaSearch {
            space,
            table,
            tt: TranspositionTable::new(cfg.tt_capacity),
            cfg,
            on_path: HashMap::new(),
            solution: Vec::new(),
            expansions: 0,
            aborted: false,
        }
    }

    pub fn expansions(&self) -> u64 {
        self.expansions
    }

    fn h(&mut self, s: &S::State) -> Rational {
        let e = self.space.estimate(self.table, s);
        match self.tt.get(s) {
            Some(v) => e.max(v),
            None => e,
        }
    }

    /// One depth-first pass from the problem's root at `bound`.
    pub fn pass(&mut self, bound: Rational, rec: &mut Recorder) -> PassResult {
        let root = self.space.root();
        let h = self.h(&root);
        if h > bound {
            return PassResult::Exceeded(h);
        }
        self.solution.clear();
        self.on_path.clear();
        let r = self.dfs(&root, None, ZERO, bound, 0, h, rec);
        if self.aborted {
            return PassResult::Aborted;
        }
        if r.solved {
            let mut path = std::mem::take(&mut self.solution);
            path.reverse();
            let cost = path.iter().map(|p| p.1).sum();
            PassResult::Solved { cost, path }
        } else {
            PassResult::Exceeded(r.value)
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &mut self,
        s: &S::State,
        ctx: Option<&S::Ctx>,
        g: Rational,
        bound: Rational,
        depth: usize,
        h: Rational,
        rec: &mut Recorder,
    ) -> Ret {
        if self.space.is_final(s) {
            return Ret { value: ZERO, taint: None, solved: true };
        }
        if let Some(max) = self.cfg.max_expansions {
            if rec.expansions() >= max {
                self.aborted = true;
                return Ret { value: INFINITY, taint: Some(0), solved: false };
            }
        }
        self.expansions += 1;
        let exp = self.space.expand(s, ctx, self.cfg.right_shift);
        let space = self.space;
        rec.expansion(SpaceTag::Normal, space.size(s), || {
            exp.edges.iter().map(|e| space.size(&e.state)).collect()
        });
        let mut taint = (exp.shift_pruned && depth > 0).then(|| depth - 1);
        // Ordered by the table estimate alone, so the transposition table
        // prunes subtrees without reordering the search.
        let mut children: Vec<(Rational, Rational, usize)> = Vec::with_capacity(exp.edges.len());
        for (i, e) in exp.edges.iter().enumerate() {
            children.push((e.delta + space.estimate(self.table, &e.state), self.h(&e.state), i));
        }
        children.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| exp.edges[a.2].actions.cmp(&exp.edges[b.2].actions)));
        let mut best = INFINITY;
        if self.cfg.cycle_check {
            self.on_path.insert(s.clone(), depth);
        }
        for (_, hc, i) in children {
            let e = &exp.edges[i];
            let f_local = e.delta + hc;
            if self.cfg.cycle_check {
                let dominated = self.on_path.iter().filter(|(t, _)| space.dominates(&e.state, t)).map(|(_, &k)| k).max();
                if let Some(k) = dominated {
                    taint = Some(taint.map_or(k, |t| t.min(k)));
                    continue;
                }
            }
            if g + f_local > bound {
                best = best.min(f_local);
                continue;
            }
            let r = self.dfs(&e.state, Some(&e.ctx), g + e.delta, bound, depth + 1, hc, rec);
            if self.aborted {
                return r;
            }
            if r.solved {
                self.solution.push((e.actions.clone(), e.delta));
                self.on_path.remove(s);
                return r;
            }
            best = best.min(e.delta + r.value);
            if let Some(t) = r.taint {
                taint = Some(taint.map_or(t, |x| x.min(t)));
            }
        }
        self.on_path.remove(s);
        let value = best.max(h);
        if taint.is_none_or(|t| t >= depth) {
            self.tt.store(s, value, depth as u32);
        }
        Ret { value, taint: taint.filter(|&t| t < depth), solved: false }
    }
}

/// Iterative deepening from the estimate of the root until a solution is
/// found, the bound exceeds `cfg.upper_limit`, or the root is proven dead.
pub fn ida_star<S: RegressionSpace>(
    space: &S,
    table: &HeuristicTable,
    cfg: IdaConfig,
    rec: &mut Recorder,
) -> SearchResult {
    let first_only = cfg.first_iteration_only;
    let limit = cfg.upper_limit;
    let mut search = IdaSearch::new(space, table, cfg);
    let mut stats = IdaStats::default();
    if first_only {
        rec.recording = true;
    }
    let root = space.root();
    let mut bound = search.h(&root);
    let outcome = loop {
        if bound.is_infinite() {
            break IdaOutcome::Unsolvable;
        }
        if bound > limit {
            break IdaOutcome::NoSolutionWithin { limit, lower_bound: bound };
        }
        rec.bound(Phase::Ida, bound);
        stats.bounds.push(bound);
        stats.iterations += 1;
        let r = search.pass(bound, rec);
        if first_only {
            rec.recording = false;
        }
        match r {
            PassResult::Solved { cost, path } => {
                break IdaOutcome::Solved { cost, plan: space.plan(&path) };
            }
            PassResult::Exceeded(v) => {
                debug_assert!(v > bound);
                bound = v;
            }
            PassResult::Aborted => break IdaOutcome::ResourceLimit { lower_bound: bound },
        }
    };
    stats.expansions = search.expansions;
    stats.tt_hits = search.tt.hits;
    SearchResult { outcome, stats }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::sat1;
    use crate::gbf::compute_hm_seq;
    use crate::space::SeqSpace;

    #[test]
    fn first_pass_on_sat1_returns_four() {
        let p = sat1();
        let mut t = HeuristicTable::new();
        compute_hm_seq(&p, 1, &mut t);
        let space = SeqSpace { problem: &p };
        let mut s = IdaSearch::new(&space, &t, IdaConfig::default());
        let mut rec = Recorder::default();
        assert_eq!(s.pass(Rational::integer(3), &mut rec), PassResult::Exceeded(Rational::integer(4)));
    }

    #[test]
    fn sat1_solved_at_seven() {
        let p = sat1();
        let mut t = HeuristicTable::new();
        compute_hm_seq(&p, 2, &mut t);
        let space = SeqSpace { problem: &p };
        let r = ida_star(&space, &t, IdaConfig::default(), &mut Recorder::default());
        match r.outcome {
            IdaOutcome::Solved { cost, plan } => {
                assert_eq!(cost, Rational::integer(7));
                assert_eq!(plan.steps.len(), 7);
            }
            o => panic!("unexpected {o:?}"),
        }
    }

    #[test]
    fn upper_limit_stops_search() {
        let p = sat1();
        let mut t = HeuristicTable::new();
        compute_hm_seq(&p, 1, &mut t);
        let space = SeqSpace { problem: &p };
        let cfg = IdaConfig { upper_limit: Rational::integer(5), ..IdaConfig::default() };
        let r = ida_star(&space, &t, cfg, &mut Recorder::default());
        assert!(matches!(r.outcome, IdaOutcome::NoSolutionWithin { .. }));
        assert!(r.stats.bounds.windows(2).all(|w| w[0] < w[1]));
        assert!(r.stats.bounds.iter().all(|b| *b <= Rational::integer(5)));
    }
}

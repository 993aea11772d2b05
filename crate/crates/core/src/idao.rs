//! IDAO*: iterative deepening over the m-regression AND/OR space.
//!
//! States of size at most `m` are OR nodes expanded by ordinary regression;
//! larger states are AND nodes whose successors are all their size-`m`
//! subsets, each solved by a nested iterative-deepening search. Improved
//! costs of OR nodes go into the heuristic table as a side effect; exactly
//! solved nodes also go into a solved table that lives for one pass.

use crate::atoms::AtomSet;
use crate::htable::HeuristicTable;
use crate::metrics::{Phase, Recorder, SpaceTag};
use crate::model::Plan;
use crate::rational::{Rational, INFINITY, ZERO};
use crate::space::RegressionSpace;
use crate::tables::SolvedTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SubsetOrder {
    /// Ascending atom ids.
    #[default]
    Lexical,
    /// Highest current estimate first.
    EvalDescending,
}

#[derive(Clone, Debug)]
pub struct IdaoConfig {
    pub m: usize,
    /// Solved table slots; 0 disables the table.
    pub solved_capacity: usize,
    pub subset_order: SubsetOrder,
    pub first_iteration_only: bool,
    pub max_expansions: Option<u64>,
    /// Keep a log of table updates and root iterations.
    pub log_events: bool,
}

impl IdaoConfig {
    pub fn new(m: usize) -> IdaoConfig {
        IdaoConfig {
            m,
            solved_capacity: 1 << 16,
            subset_order: SubsetOrder::Lexical,
            first_iteration_only: false,
            max_expansions: None,
            log_events: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdaoEvent {
    /// A depth-first pass from the pass root started at this bound.
    Iteration { bound: Rational },
    /// An OR node's cost was written to the heuristic table.
    Stored { set: AtomSet, value: Rational },
    /// A node was solved exactly; `set` is its split set.
    Solved { set: AtomSet, cost: Rational },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IdaoStats {
    pub or_expansions: u64,
    pub and_expansions: u64,
    pub stores: u64,
    pub solved_hits: u64,
    pub solved_misses: u64,
    pub iterations: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdaoResult {
    pub m: usize,
    /// The optimal m-regression cost when solved, otherwise a lower bound.
    pub cost: Rational,
    pub solved: bool,
    pub and_expanded: bool,
    /// A real plan, available when the solution used no AND node.
    pub plan: Option<Plan>,
    pub aborted: bool,
    pub stats: IdaoStats,
    pub events: Vec<IdaoEvent>,
}

/// All subsets of size exactly `m`, in lexical order.
pub fn enumerate_and_successors(s: &AtomSet, m: usize) -> Vec<AtomSet> {
    s.subsets_of_size(m).collect()
}

struct DRet {
    cost: Rational,
    solved: bool,
    /// Deepest edge first.
    path: Option<Vec<(Vec<usize>, Rational)>>,
    taint: Option<usize>,
}

impl DRet {
    fn unsolved(cost: Rational, taint: Option<usize>) -> DRet {
        DRet { cost, solved: false, path: None, taint }
    }
}

fn merge(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

pub struct Idao<'a, S: RegressionSpace> {
    space: &'a S,
    table: &'a mut HeuristicTable,
    cfg: IdaoConfig,
    solved: SolvedTable<S::State>,
    /// States on the current path, across nested AND subsets.
    stack: Vec<S::State>,
    stats: IdaoStats,
    events: Vec<IdaoEvent>,
    and_expanded: bool,
    aborted: bool,
    cap: Option<Rational>,
}

impl<'a, S: RegressionSpace> Idao<'a, S> {
    pub fn new(space: &'a S, table: &'a mut HeuristicTable, cfg: IdaoConfig) -> Self {
        let cap = space.relaxed_cost_cap(cfg.m);
        Idao {
            space,
            table,
            solved: SolvedTable::new(cfg.solved_capacity),
            cfg,
            stack: Vec::new(),
            stats: IdaoStats::default(),
            events: Vec::new(),
            and_expanded: false,
            aborted: false,
            cap,
        }
    }

    fn h(&self, s: &S::State) -> Rational {
        self.settle(self.space.estimate(self.table, s))
    }

    /// Costs beyond the space's cap can only be infinite.
    fn settle(&self, c: Rational) -> Rational {
        match self.cap {
            Some(cap) if c > cap => INFINITY,
            _ => c,
        }
    }

    fn store_h(&mut self, s: &S::State, cost: Rational) {
        let (set, value) = self.space.storage(s, cost);
        self.table.store(&set, value);
        self.stats.stores += 1;
        if self.cfg.log_events {
            self.events.push(IdaoEvent::Stored { set, value });
        }
    }

    fn mark_solved(&mut self, s: &S::State, cost: Rational) {
        self.solved.store(s, cost);
        if self.cfg.log_events {
            self.events.push(IdaoEvent::Solved { set: self.space.split_set(s), cost });
        }
    }

    /// Repeated bounded searches of `s` from its estimate while the estimate
    /// stays within `b`. Returns the final estimate and whether `s` was solved.
    pub fn idao_star(&mut self, s: &S::State, b: Rational, rec: &mut Recorder) -> (Rational, bool) {
        let (c, solved, _) = self.star(s, b, rec);
        (c, solved)
    }

    fn star(&mut self, s: &S::State, b: Rational, rec: &mut Recorder) -> (Rational, bool, Option<usize>) {
        let mut current = self.h(s);
        let mut taint = None;
        while current <= b && current.is_finite() && !self.aborted {
            let r = self.dfs(s, current, rec);
            taint = merge(taint, r.taint);
            if r.solved {
                return (r.cost, true, taint);
            }
            current = self.settle(r.cost);
        }
        (current, false, taint)
    }

    fn dfs(&mut self, s: &S::State, b: Rational, rec: &mut Recorder) -> DRet {
        if self.space.is_final(s) {
            return DRet { cost: ZERO, solved: true, path: Some(Vec::new()), taint: None };
        }
        if let Some(c) = self.solved.get(s) {
            self.stats.solved_hits += 1;
            rec.solved_hits += 1;
            return if c <= b {
                DRet { cost: c, solved: true, path: None, taint: None }
            } else {
                DRet::unsolved(c, None)
            };
        }
        self.stats.solved_misses += 1;
        rec.solved_misses += 1;
        if let Some(k) = self.stack.iter().position(|t| t == s) {
            return DRet::unsolved(INFINITY, Some(k));
        }
        if let Some(max) = self.cfg.max_expansions {
            if rec.expansions() >= max {
                self.aborted = true;
                return DRet::unsolved(INFINITY, Some(0));
            }
        }
        let idx = self.stack.len();
        self.stack.push(s.clone());
        let r = if self.space.size(s) > self.cfg.m {
            self.and_node(s, b, idx, rec)
        } else {
            self.or_node(s, b, idx, rec)
        };
        self.stack.pop();
        r
    }

    fn and_node(&mut self, s: &S::State, b: Rational, idx: usize, rec: &mut Recorder) -> DRet {
        self.and_expanded = true;
        self.stats.and_expansions += 1;
        let m = self.cfg.m;
        let mut subsets = enumerate_and_successors(&self.space.split_set(s), m);
        if self.cfg.subset_order == SubsetOrder::EvalDescending {
            let table = &*self.table;
            subsets.sort_by_cached_key(|x| std::cmp::Reverse(table.eval(x)));
        }
        let n = subsets.len();
        rec.expansion(SpaceTag::And, self.space.size(s), || vec![m; n]);
        let mut taint = None;
        let mut cost = ZERO;
        for sub in subsets {
            let st = self.space.from_atoms(sub);
            let (c, _, t) = self.star(&st, b, rec);
            taint = merge(taint, t);
            if self.aborted || c > b {
                return DRet::unsolved(c, taint.filter(|&t| t < idx));
            }
            cost = cost.max(c);
        }
        self.mark_solved(s, cost);
        DRet { cost, solved: true, path: None, taint: None }
    }

    fn or_node(&mut self, s: &S::State, b: Rational, idx: usize, rec: &mut Recorder) -> DRet {
        self.stats.or_expansions += 1;
        let space = self.space;
        let exp = space.expand(s, None, false);
        rec.expansion(SpaceTag::Or, space.size(s), || {
            exp.edges.iter().map(|e| space.size(&e.state)).collect()
        });
        let h_s = self.h(s);
        let mut children: Vec<(Rational, usize)> = exp
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| (e.delta + self.h(&e.state), i))
            .collect();
        children.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| exp.edges[a.1].actions.cmp(&exp.edges[b.1].actions)));
        let mut best = INFINITY;
        let mut taint = None;
        for (f, i) in children {
            let e = &exp.edges[i];
            if let Some(k) = self.stack.iter().rposition(|t| space.dominates(&e.state, t)) {
                taint = merge(taint, Some(k));
                continue;
            }
            if f > b {
                best = best.min(f);
                continue;
            }
            let r = self.dfs(&e.state, b - e.delta, rec);
            taint = merge(taint, r.taint);
            if self.aborted {
                return DRet::unsolved(INFINITY, Some(0));
            }
            if r.solved {
                let cost = e.delta + r.cost;
                self.mark_solved(s, cost);
                self.store_h(s, cost);
                let path = r.path.map(|mut p| {
                    p.push((e.actions.clone(), e.delta));
                    p
                });
                return DRet { cost, solved: true, path, taint: None };
            }
            best = best.min(e.delta + r.cost);
        }
        let cost = best.max(h_s);
        if taint.is_none_or(|t| t >= idx) {
            self.store_h(s, cost);
        }
        DRet::unsolved(cost, taint.filter(|&t| t < idx))
    }
}

/// One relaxed-search pass from the problem goals with an unlimited bound.
pub fn idao_pass<S: RegressionSpace>(
    space: &S,
    table: &mut HeuristicTable,
    cfg: IdaoConfig,
    rec: &mut Recorder,
) -> IdaoResult {
    let m = cfg.m;
    let first_only = cfg.first_iteration_only;
    let mut idao = Idao::new(space, table, cfg);
    if first_only {
        rec.recording = true;
    }
    let root = space.root();
    let mut current = idao.h(&root);
    let mut solved = false;
    let mut path = None;
    while current.is_finite() && !solved && !idao.aborted {
        rec.bound(Phase::Idao(m), current);
        if idao.cfg.log_events {
            idao.events.push(IdaoEvent::Iteration { bound: current });
        }
        idao.stats.iterations += 1;
        let r = idao.dfs(&root, current, rec);
        if first_only {
            rec.recording = false;
        }
        if idao.aborted {
            break;
        }
        current = idao.settle(r.cost);
        solved = r.solved;
        path = r.path;
    }
    let plan = match (solved && !idao.and_expanded, path) {
        (true, Some(mut p)) => {
            p.reverse();
            Some(space.plan(&p))
        }
        _ => None,
    };
    IdaoResult {
        m,
        cost: current,
        solved,
        and_expanded: idao.and_expanded,
        plan,
        aborted: idao.aborted,
        stats: idao.stats,
        events: idao.events,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stopping {
    /// Stop after the pass for this m.
    Fixed(usize),
    /// Stop after a pass that expanded no AND node.
    NoAndNode,
    /// Stop when a pass does not raise the root cost.
    Converged,
}

/// Whether the pipeline should stop after `last`, given the root cost
/// before that pass.
pub fn stopping_condition(kind: Stopping, last: &IdaoResult, prev_cost: Rational) -> bool {
    match kind {
        Stopping::Fixed(cap) => last.m >= cap,
        Stopping::NoAndNode => !last.and_expanded,
        Stopping::Converged => last.cost == prev_cost,
    }
}

//! The two planner pipelines.
//!
//! TP4 computes h^1 or h^2 completely and runs IDA*. HSP_a* additionally
//! runs IDAO* passes for m = base + 1, base + 2, … before the final IDA*,
//! each pass improving the shared heuristic table.

use crate::gbf::{compute_hm, GbfStats, GbfStrategy};
use crate::htable::HeuristicTable;
use crate::idao::{idao_pass, stopping_condition, IdaoConfig, IdaoResult, Stopping, SubsetOrder};
use crate::idastar::{ida_star, IdaConfig, IdaOutcome, IdaStats};
use crate::error::PlanError;
use crate::metrics::{ExpansionEvent, MetricsReport, Phase, Recorder};
use crate::model::{round_durations_up, Mode, Plan, Problem};
use crate::rational::{Rational, INFINITY};
use crate::space::{RegressionSpace, SeqSpace, TempSpace};
use crate::validate::{validate_plan, Validity};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pipeline {
    Tp4,
    Hspa,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseHeuristic {
    H1,
    H2,
}

impl BaseHeuristic {
    pub fn m(self) -> usize {
        match self {
            BaseHeuristic::H1 => 1,
            BaseHeuristic::H2 => 2,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PlannerConfig {
    pub pipeline: Pipeline,
    /// Overrides the problem's own mode.
    pub mode: Option<Mode>,
    pub base_heuristic: BaseHeuristic,
    /// Ignored by TP4.
    pub stopping: Stopping,
    pub tt_capacity: usize,
    pub solved_capacity: usize,
    pub round_durations: bool,
    pub right_shift: bool,
    pub validate: bool,
    pub first_iteration_only: bool,
    pub upper_limit: Rational,
    pub max_expansions: Option<u64>,
    pub subset_order: SubsetOrder,
    /// Keep every expansion event and the IDAO* table-update log.
    pub keep_log: bool,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        PlannerConfig {
            pipeline: Pipeline::Hspa,
            mode: None,
            base_heuristic: BaseHeuristic::H2,
            stopping: Stopping::Fixed(3),
            tt_capacity: 1 << 16,
            solved_capacity: 1 << 16,
            round_durations: false,
            right_shift: true,
            validate: false,
            first_iteration_only: false,
            upper_limit: INFINITY,
            max_expansions: None,
            subset_order: SubsetOrder::Lexical,
            keep_log: false,
        }
    }
}

impl PlannerConfig {
    pub fn check(&self) -> Result<(), PlanError> {
        if let (Pipeline::Hspa, Stopping::Fixed(cap)) = (self.pipeline, self.stopping) {
            if cap <= self.base_heuristic.m() {
                return Err(PlanError::Config(format!(
                    "fixed stopping at m = {cap} does not exceed the base heuristic's m = {}",
                    self.base_heuristic.m()
                )));
            }
        }
        if self.upper_limit.is_negative() {
            return Err(PlanError::Config("negative upper limit".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Solved(Plan),
    Unsolvable,
    NoSolutionWithin { limit: Rational, lower_bound: Rational },
    ResourceLimit { lower_bound: Rational },
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub verdict: Verdict,
    pub report: MetricsReport,
    /// The problem actually searched, after mode override and rounding.
    pub problem: Problem,
    pub gbf: GbfStats,
    /// Root estimate from the base heuristic.
    pub base_estimate: Rational,
    /// Root estimate when the final search started.
    pub final_estimate: Rational,
    pub passes: Vec<IdaoResult>,
    /// Statistics of the final IDA* search, if one ran.
    pub ida: Option<IdaStats>,
    pub events: Option<Vec<ExpansionEvent>>,
    pub table: HeuristicTable,
}

impl RunResult {
    pub fn plan(&self) -> Option<&Plan> {
        match &self.verdict {
            Verdict::Solved(p) => Some(p),
            _ => None,
        }
    }

    pub fn metric(&self) -> Option<Rational> {
        self.plan().map(|p| p.metric)
    }
}

pub fn run_tp4(problem: &Problem, cfg: &PlannerConfig) -> Result<RunResult, PlanError> {
    run(problem, &PlannerConfig { pipeline: Pipeline::Tp4, ..cfg.clone() })
}

pub fn run_hspa(problem: &Problem, cfg: &PlannerConfig) -> Result<RunResult, PlanError> {
    run(problem, &PlannerConfig { pipeline: Pipeline::Hspa, ..cfg.clone() })
}

/// Runs the pipeline selected by `cfg.pipeline`.
pub fn run(problem: &Problem, cfg: &PlannerConfig) -> Result<RunResult, PlanError> {
    cfg.check()?;
    let mut p = match cfg.mode {
        Some(m) if m != problem.mode() => problem.with_mode(m),
        _ => problem.clone(),
    };
    if cfg.round_durations && p.mode() == Mode::Temporal {
        p = round_durations_up(&p);
    }
    let r = if p.mode() == Mode::Sequential {
        run_in(&SeqSpace { problem: &p }, cfg)
    } else {
        run_in(&TempSpace { problem: &p }, cfg)
    };
    let r = RunResult { problem: p, ..r };
    if cfg.validate {
        if let Some(plan) = r.plan() {
            match validate_plan(&r.problem, plan) {
                Validity::Valid(m) if m == plan.metric => {}
                Validity::Valid(m) => {
                    return Err(PlanError::InvalidPlan(format!("metric {} but simulated {m}", plan.metric)));
                }
                Validity::Invalid { reason, detail } => {
                    return Err(PlanError::InvalidPlan(format!("{reason}: {detail}")));
                }
            }
        }
    }
    Ok(r)
}

fn run_in<S: RegressionSpace>(space: &S, cfg: &PlannerConfig) -> RunResult {
    let mut rec = Recorder::new(cfg.keep_log);
    let mut table = HeuristicTable::new();
    let gbf = compute_hm(space, cfg.base_heuristic.m(), GbfStrategy::Worklist, &mut table);
    let root = space.root();
    let base_estimate = space.estimate(&table, &root);
    rec.bound(Phase::Gbf, base_estimate);
    let mut passes = Vec::new();
    let finish = |verdict, rec: Recorder, table, passes, ida, final_estimate| RunResult {
        verdict,
        report: rec.report(),
        problem: space.problem().clone(),
        gbf: gbf.clone(),
        base_estimate,
        final_estimate,
        passes,
        ida,
        events: rec.events().map(|e| e.to_vec()),
        table,
    };
    if base_estimate.is_infinite() {
        return finish(Verdict::Unsolvable, rec, table, passes, None, base_estimate);
    }
    if cfg.pipeline == Pipeline::Hspa {
        let mut prev = base_estimate;
        let mut m = cfg.base_heuristic.m() + 1;
        while m <= space.problem().atom_count().max(1) {
            let icfg = IdaoConfig {
                m,
                solved_capacity: cfg.solved_capacity,
                subset_order: cfg.subset_order,
                first_iteration_only: cfg.first_iteration_only,
                max_expansions: cfg.max_expansions,
                log_events: cfg.keep_log,
            };
            let r = idao_pass(space, &mut table, icfg, &mut rec);
            let verdict = if r.aborted {
                Some(Verdict::ResourceLimit { lower_bound: prev.max(r.cost) })
            } else if !r.solved {
                Some(Verdict::Unsolvable)
            } else if r.cost > cfg.upper_limit {
                Some(Verdict::NoSolutionWithin { limit: cfg.upper_limit, lower_bound: r.cost })
            } else {
                r.plan.clone().map(Verdict::Solved)
            };
            let stop = !r.and_expanded || stopping_condition(cfg.stopping, &r, prev);
            prev = r.cost;
            passes.push(r);
            if let Some(v) = verdict {
                return finish(v, rec, table, passes, None, prev);
            }
            if stop {
                break;
            }
            m += 1;
        }
    }
    let final_estimate = space.estimate(&table, &root);
    let icfg = IdaConfig {
        tt_capacity: cfg.tt_capacity,
        right_shift: cfg.right_shift,
        cycle_check: true,
        upper_limit: cfg.upper_limit,
        first_iteration_only: cfg.first_iteration_only,
        max_expansions: cfg.max_expansions,
    };
    let res = ida_star(space, &table, icfg, &mut rec);
    let verdict = match res.outcome {
        IdaOutcome::Solved { plan, .. } => Verdict::Solved(plan),
        IdaOutcome::Unsolvable => Verdict::Unsolvable,
        IdaOutcome::NoSolutionWithin { limit, lower_bound } => Verdict::NoSolutionWithin { limit, lower_bound },
        IdaOutcome::ResourceLimit { lower_bound } => Verdict::ResourceLimit { lower_bound },
    };
    finish(verdict, rec, table, passes, Some(res.stats), final_estimate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atoms::AtomSet;
    use crate::fixtures::{chain, sat1, sat1_mode, unsolvable};

    fn cfg(pipeline: Pipeline) -> PlannerConfig {
        PlannerConfig { pipeline, validate: true, ..PlannerConfig::default() }
    }

    #[test]
    fn sat1_sequential_costs_seven() {
        for pl in [Pipeline::Tp4, Pipeline::Hspa] {
            let r = run(&sat1(), &cfg(pl)).unwrap();
            assert_eq!(r.metric(), Some(Rational::integer(7)));
        }
    }

    #[test]
    fn sat1_parallel_makespan_six() {
        for pl in [Pipeline::Tp4, Pipeline::Hspa] {
            let r = run(&sat1_mode(Mode::Parallel), &cfg(pl)).unwrap();
            assert_eq!(r.metric(), Some(Rational::integer(6)));
        }
    }

    #[test]
    fn empty_goal_gives_empty_plan() {
        let p = sat1().with_goal(AtomSet::new());
        for pl in [Pipeline::Tp4, Pipeline::Hspa] {
            let r = run(&p, &cfg(pl)).unwrap();
            let plan = r.plan().unwrap();
            assert!(plan.steps.is_empty());
            assert_eq!(plan.metric, Rational::integer(0));
        }
    }

    #[test]
    fn unsolvable_reported() {
        for pl in [Pipeline::Tp4, Pipeline::Hspa] {
            assert_eq!(run(&unsolvable(), &cfg(pl)).unwrap().verdict, Verdict::Unsolvable);
        }
    }

    #[test]
    fn no_and_node_returns_relaxed_plan() {
        let c = PlannerConfig { stopping: Stopping::NoAndNode, ..cfg(Pipeline::Hspa) };
        let r = run(&chain(4), &c).unwrap();
        assert!(r.ida.is_none());
        assert_eq!(r.passes.len(), 1);
        assert_eq!(r.metric(), Some(Rational::integer(4)));
        let r = run(&sat1(), &c).unwrap();
        assert!(r.ida.is_none());
        assert!(!r.passes.last().unwrap().and_expanded);
        assert_eq!(r.metric(), Some(Rational::integer(7)));
    }

    #[test]
    fn fixed_cap_must_exceed_base() {
        let c = PlannerConfig { stopping: Stopping::Fixed(2), ..cfg(Pipeline::Hspa) };
        assert!(matches!(run(&sat1(), &c), Err(PlanError::Config(_))));
    }
}

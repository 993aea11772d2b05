//! Complete h^m by a generalized Bellman-Ford fixpoint.
//!
//! Every atom set of size at most `m` gets a value, starting from ∞ (0 for
//! subsets of the initial state) and decreasing until
//!
//! ```text
//! value(s) = min_{s'} δ(s, s') + max_{(C, o)} [o + EVAL(C)]
//! ```
//!
//! holds everywhere, where `(C, o)` ranges over the relaxed components of the
//! successor and `EVAL(C)` is `value(C)` for small `C` and the maximum over
//! its size-≤m subsets otherwise.

use std::collections::{HashMap, VecDeque};

use crate::atoms::AtomSet;
use crate::htable::HeuristicTable;
use crate::model::Problem;
use crate::rational::{Rational, INFINITY, ZERO};
use crate::space::{RegressionSpace, SeqSpace, TempSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GbfStrategy {
    /// Re-evaluate only sets whose inputs changed.
    Worklist,
    /// Sweep over all sets until nothing changes.
    RoundRobin,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GbfStats {
    pub sets: usize,
    /// Set evaluations (worklist) or full sweeps (round robin).
    pub rounds: u64,
    pub infinite: usize,
    /// Pairs of atoms with value ∞, i.e. detected mutexes.
    pub mutex_pairs: usize,
}

/// A successor reduced to the indices its value depends on.
struct Choice {
    delta: Rational,
    components: Vec<(Rational, Vec<usize>)>,
}

struct Compiled {
    sets: Vec<AtomSet>,
    options: Vec<Vec<Choice>>,
    is_init: Vec<bool>,
}

fn compile<S: RegressionSpace>(space: &S, m: usize) -> Compiled {
    let problem = space.problem();
    let all = AtomSet::from_ids(0..problem.atom_count() as u32);
    let mut sets = Vec::new();
    for k in 1..=m.min(all.len()) {
        sets.extend(all.subsets_of_size(k));
    }
    let index: HashMap<AtomSet, usize> = sets.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let lookup = |c: &AtomSet| -> Vec<usize> {
        if c.is_empty() {
            Vec::new()
        } else if c.len() <= m {
            vec![index[c]]
        } else {
            (1..=m).flat_map(|k| c.subsets_of_size(k)).map(|x| index[&x]).collect()
        }
    };
    let mut options = Vec::with_capacity(sets.len());
    let mut is_init = Vec::with_capacity(sets.len());
    for s in &sets {
        let init = s.is_subset(problem.init());
        is_init.push(init);
        if init {
            options.push(Vec::new());
            continue;
        }
        let x = space.expand(&space.from_atoms(s.clone()), None, false);
        let opts = x
            .edges
            .iter()
            .map(|e| Choice {
                delta: e.delta,
                components: space
                    .components(&e.state)
                    .iter()
                    .map(|(c, o)| (*o, lookup(c)))
                    .collect(),
            })
            .collect();
        options.push(opts);
    }
    Compiled { sets, options, is_init }
}

fn evaluate(c: &Compiled, values: &[Rational], i: usize) -> Rational {
    if c.is_init[i] {
        return ZERO;
    }
    let mut best = INFINITY;
    for opt in &c.options[i] {
        let mut worst = ZERO;
        for (o, idx) in &opt.components {
            let v = idx.iter().map(|&j| values[j]).max().unwrap_or(ZERO);
            worst = worst.max(*o + v);
            if worst >= best {
                break;
            }
        }
        best = best.min(opt.delta + worst);
    }
    best
}

/// Solves the fixpoint over `space` and stores every set's value in `table`.
pub fn compute_hm<S: RegressionSpace>(
    space: &S,
    m: usize,
    strategy: GbfStrategy,
    table: &mut HeuristicTable,
) -> GbfStats {
    assert!(m >= 1, "m must be at least 1");
    let c = compile(space, m);
    let n = c.sets.len();
    let mut values: Vec<Rational> = c.is_init.iter().map(|&z| if z { ZERO } else { INFINITY }).collect();
    let mut rounds = 0u64;
    match strategy {
        GbfStrategy::RoundRobin => loop {
            rounds += 1;
            let mut changed = false;
            for i in 0..n {
                let v = evaluate(&c, &values, i);
                if v < values[i] {
                    values[i] = v;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        },
        GbfStrategy::Worklist => {
            let mut readers: Vec<Vec<usize>> = vec![Vec::new(); n];
            for (i, opts) in c.options.iter().enumerate() {
                for opt in opts {
                    for (_, idx) in &opt.components {
                        for &j in idx {
                            readers[j].push(i);
                        }
                    }
                }
            }
            for r in &mut readers {
                r.sort_unstable();
                r.dedup();
            }
            let mut queue: VecDeque<usize> = (0..n).collect();
            let mut queued = vec![true; n];
            while let Some(i) = queue.pop_front() {
                queued[i] = false;
                rounds += 1;
                let v = evaluate(&c, &values, i);
                if v < values[i] {
                    values[i] = v;
                    for &r in &readers[i] {
                        if !queued[r] {
                            queued[r] = true;
                            queue.push_back(r);
                        }
                    }
                }
            }
        }
    }
    for (s, v) in c.sets.iter().zip(&values) {
        table.store(s, *v);
    }
    GbfStats {
        sets: n,
        rounds,
        infinite: values.iter().filter(|v| v.is_infinite()).count(),
        mutex_pairs: c
            .sets
            .iter()
            .zip(&values)
            .filter(|(s, v)| s.len() == 2 && v.is_infinite())
            .count(),
    }
}

pub fn compute_hm_seq(problem: &Problem, m: usize, table: &mut HeuristicTable) -> GbfStats {
    compute_hm(&SeqSpace { problem }, m, GbfStrategy::Worklist, table)
}

/// Temporal h^m; parallel problems are temporal problems with unit durations.
pub fn compute_hm_temporal(problem: &Problem, m: usize, table: &mut HeuristicTable) -> GbfStats {
    compute_hm(&TempSpace { problem }, m, GbfStrategy::Worklist, table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{sat1, sat1_mode, temporal_chain};
    use crate::model::Mode;

    #[test]
    fn sat1_h1_values() {
        let p = sat1();
        let mut t = HeuristicTable::new();
        compute_hm_seq(&p, 1, &mut t);
        assert_eq!(t.lookup_exact(&p.atoms(&["img d4"])), Some(Rational::integer(3)));
        assert_eq!(t.lookup_exact(&p.atoms(&["point d1"])), Some(ZERO));
        assert_eq!(t.eval(p.goal()), Rational::integer(3));
    }

    #[test]
    fn sat1_h2_goal_is_seven() {
        let p = sat1();
        let mut t = HeuristicTable::new();
        let stats = compute_hm_seq(&p, 2, &mut t);
        assert_eq!(t.eval(p.goal()), Rational::integer(7));
        // Pointing in two directions at once is impossible.
        assert_eq!(t.eval(&p.atoms(&["point d1", "point d2"])), INFINITY);
        assert!(stats.mutex_pairs >= 10);
    }

    #[test]
    fn strategies_agree() {
        for p in [sat1(), sat1_mode(Mode::Parallel)] {
            for m in 1..=2 {
                let mut a = HeuristicTable::new();
                let mut b = HeuristicTable::new();
                if p.mode() == Mode::Sequential {
                    compute_hm(&SeqSpace { problem: &p }, m, GbfStrategy::Worklist, &mut a);
                    compute_hm(&SeqSpace { problem: &p }, m, GbfStrategy::RoundRobin, &mut b);
                } else {
                    compute_hm(&TempSpace { problem: &p }, m, GbfStrategy::Worklist, &mut a);
                    compute_hm(&TempSpace { problem: &p }, m, GbfStrategy::RoundRobin, &mut b);
                }
                assert_eq!(a.entries(), b.entries());
            }
        }
    }

    #[test]
    fn parallel_cal_is_two() {
        let p = sat1_mode(Mode::Parallel);
        let mut t = HeuristicTable::new();
        compute_hm_temporal(&p, 1, &mut t);
        assert_eq!(t.lookup_exact(&p.atoms(&["cal"])), Some(Rational::integer(2)));
    }

    #[test]
    fn temporal_chain_sums_durations() {
        let p = temporal_chain();
        for m in 1..=2 {
            let mut t = HeuristicTable::new();
            compute_hm_temporal(&p, m, &mut t);
            assert_eq!(t.lookup_exact(&p.atoms(&["c"])), Some(Rational::integer(5)));
            assert_eq!(t.lookup_exact(&p.atoms(&["a"])), Some(ZERO));
        }
    }
}

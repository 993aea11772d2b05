//! Brute-force oracles and random instances shared by the integration tests.
#![allow(dead_code)]

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap, HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hmplan::atoms::AtomSet;
use hmplan::fixtures;
use hmplan::model::{compatible, GroundAction, Mode, Problem};
use hmplan::rational::{rational_gcd, Rational, INFINITY, ZERO};
use hmplan::seq::successors_seq;

/// A random STRIPS problem with at most 10 atoms and 15 actions.
pub fn random_problem(seed: u64) -> Problem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(4..=10u32);
    let atoms: Vec<u32> = (0..n).collect();
    let pick = |rng: &mut ChaCha8Rng, lo: usize, hi: usize| -> AtomSet {
        let k = rng.gen_range(lo..=hi);
        AtomSet::from_ids(atoms.choose_multiple(rng, k).copied())
    };
    let mut actions = Vec::new();
    for i in 0..rng.gen_range(8..=15) {
        let pre = pick(&mut rng, 1, 2);
        let add = pick(&mut rng, 1, 2);
        let del = pick(&mut rng, 0, 1).difference(&add);
        let cost = Rational::integer(rng.gen_range(1..=3));
        let dur = Rational::new(rng.gen_range(1..=4), 2);
        actions.push(GroundAction::new(format!("a{i}"), pre, add, del, cost, dur).unwrap());
    }
    let init = pick(&mut rng, 2, 3);
    let goal = pick(&mut rng, 2, 4);
    let names = (0..n).map(|i| format!("p{i}")).collect();
    Problem::new(names, actions, init, goal, Mode::Sequential).unwrap()
}

/// Random problems whose goal is reachable, skipping the others.
pub fn solvable_random_problems(count: usize) -> Vec<(u64, Problem)> {
    (0..)
        .map(|seed| (seed, random_problem(seed)))
        .filter(|(_, p)| seq_optimum(p).is_finite())
        .take(count)
        .collect()
}

/// Forward Dijkstra from the initial state over complete states.
pub fn forward_distances(p: &Problem) -> HashMap<AtomSet, Rational> {
    let mut dist = HashMap::new();
    let mut heap = BinaryHeap::new();
    dist.insert(p.init().clone(), ZERO);
    heap.push(Reverse((ZERO, p.init().clone())));
    while let Some(Reverse((d, s))) = heap.pop() {
        if dist.get(&s).is_some_and(|&best| best < d) {
            continue;
        }
        for a in p.actions() {
            if a.pre().is_subset(&s) {
                let t = s.difference(a.del()).union(a.add());
                let nd = d + a.cost();
                if dist.get(&t).is_none_or(|&best| nd < best) {
                    dist.insert(t.clone(), nd);
                    heap.push(Reverse((nd, t)));
                }
            }
        }
    }
    dist
}

/// Cheapest forward cost of reaching a state that contains `s`.
pub fn cost_to_go(dist: &HashMap<AtomSet, Rational>, s: &AtomSet) -> Rational {
    dist.iter().filter(|(t, _)| s.is_subset(t)).map(|(_, &d)| d).min().unwrap_or(INFINITY)
}

pub fn seq_optimum(p: &Problem) -> Rational {
    cost_to_go(&forward_distances(p), p.goal())
}

/// Regression states reachable from the goal, breadth first, at most `cap`.
pub fn regression_states(p: &Problem, cap: usize) -> Vec<AtomSet> {
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    let mut out = Vec::new();
    seen.insert(p.goal().clone());
    queue.push_back(p.goal().clone());
    while let Some(s) = queue.pop_front() {
        out.push(s.clone());
        if out.len() >= cap {
            break;
        }
        for (t, _, _) in successors_seq(p, &s) {
            if seen.insert(t.clone()) {
                queue.push_back(t);
            }
        }
    }
    out
}

fn compatible_with_all(p: &Problem, a: usize, others: &[usize]) -> bool {
    others.iter().all(|&b| compatible(p.action(a), p.action(b)))
}

/// Optimal makespan by forward search over discrete time, with one step
/// equal to the gcd of all durations. Every action's conditions must hold
/// at its start, overlapping actions must be pairwise compatible and
/// effects take place at the end.
pub fn temporal_optimum(p: &Problem) -> Rational {
    let durs: Vec<Rational> = p.actions().iter().map(|a| a.dur()).collect();
    assert!(durs.iter().all(|d| !d.is_zero()), "oracle needs positive durations");
    let step = durs.iter().copied().reduce(|a, b| rational_gcd(a, b).unwrap()).unwrap();
    let (sn, sd) = step.parts().unwrap();
    let ticks: Vec<u32> = durs
        .iter()
        .map(|&d| {
            let (n, dd) = d.parts().unwrap();
            assert_eq!((n * sd) % (dd * sn), 0);
            ((n * sd) / (dd * sn)) as u32
        })
        .collect();
    // State: atoms and the running actions with remaining ticks, sorted.
    type Key = (AtomSet, Vec<(u32, usize)>);
    let start: Key = (p.init().clone(), Vec::new());
    let mut dist: HashMap<Key, u64> = HashMap::new();
    let mut heap = BinaryHeap::new();
    dist.insert(start.clone(), 0);
    heap.push(Reverse((0u64, start)));
    while let Some(Reverse((t, (atoms, running)))) = heap.pop() {
        if dist.get(&(atoms.clone(), running.clone())).is_some_and(|&b| b < t) {
            continue;
        }
        if running.is_empty() && p.goal().is_subset(&atoms) {
            return Rational::new(t as i64 * sn, sd);
        }
        let running_ids: Vec<usize> = running.iter().map(|r| r.1).collect();
        let startable: Vec<usize> = (0..p.actions().len())
            .filter(|&a| p.action(a).pre().is_subset(&atoms) && compatible_with_all(p, a, &running_ids))
            .collect();
        let mut chosen = Vec::new();
        let mut batches = Vec::new();
        start_sets(p, &startable, 0, &mut chosen, &mut batches);
        for batch in batches {
            if batch.is_empty() && running.is_empty() {
                continue;
            }
            let mut run: Vec<(u32, usize)> = running.clone();
            run.extend(batch.iter().map(|&a| (ticks[a], a)));
            // Advance to the next end point.
            let adv = run.iter().map(|r| r.0).min().unwrap();
            let mut next = atoms.clone();
            let ending: Vec<usize> = run.iter().filter(|r| r.0 == adv).map(|r| r.1).collect();
            for &a in &ending {
                next = next.difference(p.action(a).del());
            }
            for &a in &ending {
                next = next.union(p.action(a).add());
            }
            let mut rest: Vec<(u32, usize)> =
                run.iter().filter(|r| r.0 > adv).map(|&(k, a)| (k - adv, a)).collect();
            rest.sort();
            let nt = t + adv as u64;
            let key = (next, rest);
            if dist.get(&key).is_none_or(|&b| nt < b) {
                dist.insert(key.clone(), nt);
                heap.push(Reverse((nt, key)));
            }
        }
    }
    INFINITY
}

fn start_sets(p: &Problem, cands: &[usize], from: usize, chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    out.push(chosen.clone());
    for i in from..cands.len() {
        let a = cands[i];
        if compatible_with_all(p, a, chosen) {
            chosen.push(a);
            start_sets(p, cands, i + 1, chosen, out);
            chosen.pop();
        }
    }
}

/// Every hand-built fixture with a name, including unsolvable ones.
pub fn named_fixtures() -> Vec<(&'static str, Problem)> {
    vec![
        ("sat1", fixtures::sat1()),
        ("sat1-3goals", fixtures::sat1_three_goals()),
        ("sat1-temporal", fixtures::sat1_temporal()),
        ("temporal-chain", fixtures::temporal_chain()),
        ("temporal-overlap", fixtures::temporal_overlap()),
        ("temporal-fractional", fixtures::temporal_fractional()),
        ("chain4", fixtures::chain(4)),
        ("growing", fixtures::growing()),
    ]
}

/// Optimal metric of `p` in its own mode by brute force.
pub fn optimum(p: &Problem) -> Rational {
    match p.mode() {
        Mode::Sequential => seq_optimum(p),
        _ => temporal_optimum(p),
    }
}

pub fn ordered(v: impl IntoIterator<Item = Rational>) -> BTreeSet<Rational> {
    v.into_iter().collect()
}

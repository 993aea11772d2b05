//! Small hand-built problems used by tests, benchmarks and the CLI demo.

use crate::atoms::AtomSet;
use crate::model::{GroundAction, Mode, Problem};
use crate::rational::{Rational, ONE};

/// Incremental construction of a ground problem from atom names.
pub struct ProblemBuilder {
    atoms: Vec<String>,
    actions: Vec<GroundAction>,
}

impl Default for ProblemBuilder {
    fn default() -> Self {
        ProblemBuilder::new()
    }
}

impl ProblemBuilder {
    pub fn new() -> ProblemBuilder {
        ProblemBuilder { atoms: Vec::new(), actions: Vec::new() }
    }

    pub fn atom(&mut self, name: &str) -> &mut Self {
        if !self.atoms.iter().any(|a| a == name) {
            self.atoms.push(name.to_string());
        }
        self
    }

    fn set(&self, names: &[&str]) -> AtomSet {
        AtomSet::from_ids(names.iter().map(|n| {
            self.atoms
                .iter()
                .position(|a| a == n)
                .unwrap_or_else(|| panic!("undeclared atom {n}")) as u32
        }))
    }

    pub fn action(&mut self, name: &str, pre: &[&str], add: &[&str], del: &[&str]) -> &mut Self {
        self.timed_action(name, pre, add, del, ONE)
    }

    pub fn timed_action(
        &mut self,
        name: &str,
        pre: &[&str],
        add: &[&str],
        del: &[&str],
        dur: Rational,
    ) -> &mut Self {
        let a = GroundAction::new(name, self.set(pre), self.set(add), self.set(del), ONE, dur)
            .expect("fixture action is well formed");
        self.actions.push(a);
        self
    }

    pub fn build(&self, init: &[&str], goal: &[&str], mode: Mode) -> Problem {
        Problem::new(self.atoms.clone(), self.actions.clone(), self.set(init), self.set(goal), mode)
            .expect("fixture problem is well formed")
    }
}

fn satellite(ndirs: usize, targets: &[&str], turn_dur: impl Fn(usize, usize) -> Rational) -> ProblemBuilder {
    let dirs: Vec<String> = (1..=ndirs).map(|i| format!("d{i}")).collect();
    let mut b = ProblemBuilder::new();
    for d in &dirs {
        b.atom(&format!("point {d}"));
    }
    b.atom("on");
    for t in targets {
        b.atom(&format!("img {t}"));
    }
    b.atom("cal");
    for (i, from) in dirs.iter().enumerate() {
        for (j, to) in dirs.iter().enumerate() {
            if i != j {
                let (pf, pt) = (format!("point {from}"), format!("point {to}"));
                b.timed_action(&format!("turn {from} {to}"), &[&pf], &[&pt], &[&pf], turn_dur(i, j));
            }
        }
    }
    b.action("power-on", &[], &["on"], &[]);
    b.action("calibrate d2", &["point d2", "on"], &["cal"], &[]);
    for t in targets {
        let (pt, img) = (format!("point {t}"), format!("img {t}"));
        b.action(&format!("take-image {t}"), &[&pt, "on", "cal"], &[&img], &[]);
    }
    b
}

/// The small satellite problem: turn, power on, calibrate at d2, image d4
/// and d5. Optimal sequential cost 7, `h^1(G) = 3`.
pub fn sat1() -> Problem {
    sat1_mode(Mode::Sequential)
}

pub fn sat1_mode(mode: Mode) -> Problem {
    satellite(5, &["d4", "d5"], |_, _| ONE).build(&["point d1"], &["img d4", "img d5"], mode)
}

/// SAT1 with a third image target. Here `h^2(G) = 7` while the optimal
/// sequential cost is 9.
pub fn sat1_three_goals() -> Problem {
    sat1_three_goals_mode(Mode::Sequential)
}

pub fn sat1_three_goals_mode(mode: Mode) -> Problem {
    satellite(5, &["d3", "d4", "d5"], |_, _| ONE).build(
        &["point d1"],
        &["img d3", "img d4", "img d5"],
        mode,
    )
}

/// Six directions and four image targets: `h^2(G) = 7`, optimal sequential
/// cost 11.
pub fn sat1_four_goals() -> Problem {
    satellite(6, &["d3", "d4", "d5", "d6"], |_, _| ONE).build(
        &["point d1"],
        &["img d3", "img d4", "img d5", "img d6"],
        Mode::Sequential,
    )
}

/// Temporal SAT1 where turning between directions takes `1 + |i − j| / 2`.
pub fn sat1_temporal() -> Problem {
    satellite(5, &["d4", "d5"], |i, j| {
        let gap = (i as i64 - j as i64).abs();
        Rational::new(2 + gap, 2)
    })
    .build(&["point d1"], &["img d4", "img d5"], Mode::Temporal)
}

/// A forced chain `a → b → c` with durations 2 and 3.
pub fn temporal_chain() -> Problem {
    let mut b = ProblemBuilder::new();
    b.atom("a").atom("b").atom("c");
    b.timed_action("make-b", &["a"], &["b"], &[], Rational::integer(2));
    b.timed_action("make-c", &["b"], &["c"], &[], Rational::integer(3));
    b.build(&["a"], &["c"], Mode::Temporal)
}

/// Two independent jobs that may overlap plus a third that conflicts with
/// one of them.
pub fn temporal_overlap() -> Problem {
    let mut b = ProblemBuilder::new();
    b.atom("free").atom("x").atom("y").atom("z").atom("r");
    b.timed_action("job-x", &["free"], &["x"], &[], Rational::integer(3));
    b.timed_action("job-y", &[], &["y"], &[], Rational::integer(2));
    b.timed_action("prep", &[], &["r"], &[], Rational::integer(1));
    b.timed_action("job-z", &["r"], &["z"], &["free"], Rational::integer(2));
    b.timed_action("restore", &[], &["free"], &[], Rational::integer(4));
    b.build(&["free"], &["x", "y", "z"], Mode::Temporal)
}

/// A temporal problem with fractional durations whose gcd is small.
pub fn temporal_fractional() -> Problem {
    let mut b = ProblemBuilder::new();
    b.atom("s").atom("m").atom("g1").atom("g2");
    b.timed_action("fast", &["s"], &["m"], &[], "1.5".parse().unwrap());
    b.timed_action("slow", &["s"], &["g1"], &[], "2.25".parse().unwrap());
    b.timed_action("finish", &["m"], &["g2"], &[], "0.75".parse().unwrap());
    b.timed_action("direct", &[], &["g2"], &[], "2.5".parse().unwrap());
    b.build(&["s"], &["g1", "g2"], Mode::Temporal)
}

/// A chain where each regression step replaces one atom by one atom.
pub fn chain(len: usize) -> Problem {
    let mut b = ProblemBuilder::new();
    let names: Vec<String> = (0..=len).map(|i| format!("c{i}")).collect();
    for n in &names {
        b.atom(n);
    }
    for i in 0..len {
        b.action(&format!("step {i}"), &[&names[i]], &[&names[i + 1]], &[&names[i]]);
    }
    b.build(&[&names[0]], &[&names[len]], Mode::Sequential)
}

/// Every non-leaf atom is produced by a single action needing three fresh
/// atoms, so regressing any atom brings in two companions.
pub fn growing() -> Problem {
    let mut b = ProblemBuilder::new();
    b.atom("goal");
    let mids: Vec<String> = (0..3).map(|i| format!("m{i}")).collect();
    let leaves: Vec<String> = (0..9).map(|i| format!("l{}{}", i / 3, i % 3)).collect();
    for a in mids.iter().chain(&leaves) {
        b.atom(a);
    }
    let mid_refs: Vec<&str> = mids.iter().map(|s| s.as_str()).collect();
    b.action("make goal", &mid_refs, &["goal"], &[]);
    for (i, m) in mids.iter().enumerate() {
        let pre: Vec<&str> = leaves[i * 3..i * 3 + 3].iter().map(|s| s.as_str()).collect();
        b.action(&format!("make {m}"), &pre, &[m], &[]);
    }
    let init: Vec<&str> = leaves.iter().map(|s| s.as_str()).collect();
    b.build(&init, &["goal"], Mode::Sequential)
}

/// A goal atom that no action adds.
pub fn unsolvable() -> Problem {
    let mut b = ProblemBuilder::new();
    b.atom("p").atom("q").atom("never");
    b.action("a", &["p"], &["q"], &[]);
    b.build(&["p"], &["q", "never"], Mode::Sequential)
}

pub const SAT1_DOMAIN: &str = "(define (domain satellite-small)
  (:requirements :strips :typing :equality)
  (:types direction)
  (:predicates (point ?d - direction) (on) (img ?d - direction) (cal)
               (target ?d - direction) (calib ?d - direction))
  (:action turn
    :parameters (?from ?to - direction)
    :precondition (and (point ?from) (not (= ?from ?to)))
    :effect (and (point ?to) (not (point ?from))))
  (:action power-on
    :parameters ()
    :effect (on))
  (:action calibrate
    :parameters (?d - direction)
    :precondition (and (calib ?d) (point ?d) (on))
    :effect (cal))
  (:action take-image
    :parameters (?d - direction)
    :precondition (and (target ?d) (point ?d) (on) (cal))
    :effect (img ?d)))
";

pub const SAT1_PROBLEM: &str = "(define (problem sat1)
  (:domain satellite-small)
  (:objects d1 d2 d3 d4 d5 - direction)
  (:init (point d1) (calib d2) (target d4) (target d5))
  (:goal (and (img d4) (img d5))))
";

pub const CHAIN_DOMAIN: &str = "(define (domain chain)
  (:requirements :strips :durative-actions)
  (:predicates (a) (b) (c))
  (:durative-action make-b
    :parameters ()
    :duration (= ?duration 2)
    :condition (at start (a))
    :effect (at end (b)))
  (:durative-action make-c
    :parameters ()
    :duration (= ?duration 3)
    :condition (over all (b))
    :effect (at end (c))))
";

pub const CHAIN_PROBLEM: &str = "(define (problem chain1)
  (:domain chain)
  (:init (a))
  (:goal (c))
  (:metric minimize (total-time)))
";

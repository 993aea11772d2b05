//! Renders ASTs back to PDDL text. Parsing the output yields the same AST.

use std::fmt::Write;

use super::ast::*;

fn typed(names: &[TypedName]) -> String {
    names.iter().map(|t| format!("{} - {}", t.name, t.ty)).collect::<Vec<_>>().join(" ")
}

fn atom(a: &AtomAst) -> String {
    let mut s = format!("({}", a.pred);
    for x in &a.args {
        s.push(' ');
        s.push_str(x);
    }
    s.push(')');
    s
}

fn timed(when: Option<When>, body: String) -> String {
    match when {
        None => body,
        Some(When::AtStart) => format!("(at start {body})"),
        Some(When::OverAll) => format!("(over all {body})"),
        Some(When::AtEnd) => format!("(at end {body})"),
    }
}

fn condition(c: &Condition) -> String {
    let body = match &c.kind {
        CondKind::Atom(a) => atom(a),
        CondKind::Eq(a, b) => format!("(= {a} {b})"),
        CondKind::Neq(a, b) => format!("(not (= {a} {b}))"),
    };
    timed(c.when, body)
}

fn effect(e: &Effect) -> String {
    let body = if e.positive { atom(&e.atom) } else { format!("(not {})", atom(&e.atom)) };
    timed(e.when, body)
}

fn conj(parts: Vec<String>) -> String {
    format!("(and {})", parts.join(" "))
}

pub fn print_domain(d: &DomainAst) -> String {
    let mut s = format!("(define (domain {})\n", d.name);
    if !d.requirements.is_empty() {
        let _ = writeln!(s, "  (:requirements {})", d.requirements.join(" "));
    }
    if !d.types.is_empty() {
        let _ = writeln!(s, "  (:types {})", typed(&d.types));
    }
    if !d.constants.is_empty() {
        let _ = writeln!(s, "  (:constants {})", typed(&d.constants));
    }
    if !d.predicates.is_empty() {
        let preds: Vec<String> = d
            .predicates
            .iter()
            .map(|p| if p.params.is_empty() { format!("({})", p.name) } else { format!("({} {})", p.name, typed(&p.params)) })
            .collect();
        let _ = writeln!(s, "  (:predicates {})", preds.join(" "));
    }
    for a in &d.actions {
        let conds = conj(a.conditions.iter().map(condition).collect());
        let effs = conj(a.effects.iter().map(effect).collect());
        match a.duration {
            None => {
                let _ = writeln!(
                    s,
                    "  (:action {}\n    :parameters ({})\n    :precondition {conds}\n    :effect {effs})",
                    a.name,
                    typed(&a.params)
                );
            }
            Some(dur) => {
                let _ = writeln!(
                    s,
                    "  (:durative-action {}\n    :parameters ({})\n    :duration (= ?duration {dur})\n    :condition {conds}\n    :effect {effs})",
                    a.name,
                    typed(&a.params)
                );
            }
        }
    }
    s.push_str(")\n");
    s
}

pub fn print_problem(p: &ProblemAst) -> String {
    let mut s = format!("(define (problem {})\n  (:domain {})\n", p.name, p.domain);
    if !p.objects.is_empty() {
        let _ = writeln!(s, "  (:objects {})", typed(&p.objects));
    }
    let init: Vec<String> = p.init.iter().map(atom).collect();
    let _ = writeln!(s, "  (:init {})", init.join(" "));
    let _ = write!(s, "  (:goal {})", conj(p.goal.iter().map(atom).collect()));
    if let Some(Metric::MinimizeTotalTime) = p.metric {
        s.push_str("\n  (:metric minimize (total-time))");
    }
    s.push_str(")\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{CHAIN_DOMAIN, CHAIN_PROBLEM, SAT1_DOMAIN, SAT1_PROBLEM};
    use crate::pddl::parser::{parse_domain, parse_problem};

    #[test]
    fn round_trip_fixtures() {
        for (d, p) in [(SAT1_DOMAIN, SAT1_PROBLEM), (CHAIN_DOMAIN, CHAIN_PROBLEM)] {
            let d = parse_domain(d).unwrap();
            let p = parse_problem(p).unwrap();
            assert_eq!(parse_domain(&print_domain(&d)).unwrap(), d);
            assert_eq!(parse_problem(&print_problem(&p)).unwrap(), p);
        }
    }

    #[test]
    fn fractional_duration_round_trips() {
        let src = "(define (domain d) (:predicates (p))
          (:durative-action a :parameters () :duration (= ?duration 1.204) :condition () :effect (at end (p))))";
        let d = parse_domain(src).unwrap();
        assert_eq!(parse_domain(&print_domain(&d)).unwrap(), d);
    }
}

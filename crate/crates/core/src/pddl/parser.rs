//! Builds domain and problem ASTs from s-expressions.

use super::ast::*;
use super::sexp::{read, Sexp};
use crate::error::{PddlError, Pos};
use crate::rational::{Rational, ZERO};

const SUPPORTED_REQUIREMENTS: &[&str] = &[":strips", ":typing", ":equality", ":durative-actions"];

fn syntax(pos: Pos, msg: impl Into<String>) -> PddlError {
    PddlError::Syntax { pos, msg: msg.into() }
}

fn unsupported(pos: Pos, feature: impl Into<String>) -> PddlError {
    PddlError::Unsupported { pos, feature: feature.into() }
}

fn expect_list<'a>(e: &'a Sexp, what: &str) -> Result<&'a [Sexp], PddlError> {
    e.list().ok_or_else(|| syntax(e.pos(), format!("expected {what}, found `{}`", e.sym().unwrap_or(""))))
}

fn expect_sym<'a>(e: &'a Sexp, what: &str) -> Result<&'a str, PddlError> {
    e.sym().ok_or_else(|| syntax(e.pos(), format!("expected {what}, found a list")))
}

/// `(define (<kind> <name>) <sections>...)`: returns the name and sections.
fn header<'a>(top: &'a Sexp, kind: &str) -> Result<(String, &'a [Sexp]), PddlError> {
    let items = expect_list(top, "`(define ...)`")?;
    match items.first().and_then(Sexp::sym) {
        Some("define") => {}
        _ => return Err(syntax(top.pos(), "expected `define`")),
    }
    let head = items.get(1).ok_or_else(|| syntax(top.pos(), format!("expected `({kind} <name>)`")))?;
    let h = expect_list(head, &format!("`({kind} <name>)`"))?;
    if h.len() != 2 || h[0].sym() != Some(kind) {
        return Err(syntax(head.pos(), format!("expected `({kind} <name>)`")));
    }
    Ok((expect_sym(&h[1], "a name")?.to_string(), &items[2..]))
}

/// `a b - t c` → a:t, b:t, c:object.
fn typed_list(items: &[Sexp]) -> Result<Vec<TypedName>, PddlError> {
    let mut out = Vec::new();
    let mut pending: Vec<(String, Pos)> = Vec::new();
    let mut i = 0;
    while i < items.len() {
        let e = &items[i];
        if e.sym() == Some("-") {
            let t = items.get(i + 1).ok_or_else(|| syntax(e.pos(), "expected a type after `-`"))?;
            if t.head() == Some("either") {
                return Err(unsupported(t.pos(), "either"));
            }
            let ty = expect_sym(t, "a type name")?;
            if pending.is_empty() {
                return Err(syntax(e.pos(), "`-` without preceding names"));
            }
            out.extend(pending.drain(..).map(|(name, pos)| TypedName { name, ty: ty.to_string(), pos }));
            i += 2;
        } else {
            pending.push((expect_sym(e, "a name")?.to_string(), e.pos()));
            i += 1;
        }
    }
    out.extend(pending.into_iter().map(|(name, pos)| TypedName { name, ty: "object".into(), pos }));
    Ok(out)
}

fn atom(e: &Sexp) -> Result<AtomAst, PddlError> {
    let items = expect_list(e, "an atom")?;
    let pred = items.first().ok_or_else(|| syntax(e.pos(), "empty atom"))?;
    let pred = expect_sym(pred, "a predicate name")?;
    let mut args = Vec::new();
    for a in &items[1..] {
        match a {
            Sexp::Sym(s, _) => args.push(s.clone()),
            Sexp::List(..) => return Err(unsupported(a.pos(), "numeric fluents")),
        }
    }
    Ok(AtomAst { pred: pred.to_string(), args, pos: e.pos() })
}

fn equality_args(items: &[Sexp], pos: Pos) -> Result<(String, String), PddlError> {
    if items.len() != 3 {
        return Err(syntax(pos, "`=` takes two arguments"));
    }
    match (&items[1], &items[2]) {
        (Sexp::Sym(a, _), Sexp::Sym(b, _)) => Ok((a.clone(), b.clone())),
        _ => Err(unsupported(pos, "numeric fluents")),
    }
}

fn reject_connective(e: &Sexp) -> Result<(), PddlError> {
    match e.head() {
        Some(h @ ("or" | "imply" | "exists" | "forall" | "when" | "preference")) => Err(unsupported(e.pos(), h)),
        Some(h @ ("<" | "<=" | ">" | ">=" | "increase" | "decrease" | "assign" | "scale-up" | "scale-down")) => {
            Err(unsupported(e.pos(), format!("numeric fluents (`{h}`)")))
        }
        _ => Ok(()),
    }
}

fn goal_description(e: &Sexp, when: Option<When>, out: &mut Vec<Condition>) -> Result<(), PddlError> {
    reject_connective(e)?;
    let items = expect_list(e, "a condition")?;
    match e.head() {
        None if items.is_empty() => Ok(()),
        Some("and") => items[1..].iter().try_for_each(|g| goal_description(g, when, out)),
        Some("=") => {
            let (a, b) = equality_args(items, e.pos())?;
            out.push(Condition { when, kind: CondKind::Eq(a, b) });
            Ok(())
        }
        Some("not") => {
            let inner = items.get(1).filter(|_| items.len() == 2).ok_or_else(|| syntax(e.pos(), "`not` takes one argument"))?;
            if inner.head() == Some("=") {
                let (a, b) = equality_args(expect_list(inner, "`(= a b)`")?, inner.pos())?;
                out.push(Condition { when, kind: CondKind::Neq(a, b) });
                Ok(())
            } else {
                Err(unsupported(e.pos(), "negative preconditions"))
            }
        }
        _ => {
            out.push(Condition { when, kind: CondKind::Atom(atom(e)?) });
            Ok(())
        }
    }
}

fn timed(e: &Sexp) -> Result<Option<(When, &Sexp)>, PddlError> {
    let Some(items) = e.list() else { return Ok(None) };
    let when = match (items.first().and_then(Sexp::sym), items.get(1).and_then(Sexp::sym)) {
        (Some("at"), Some("start")) => When::AtStart,
        (Some("at"), Some("end")) => When::AtEnd,
        (Some("over"), Some("all")) => When::OverAll,
        (Some("at"), _) => return Err(unsupported(e.pos(), "timed initial literals")),
        _ => return Ok(None),
    };
    if items.len() != 3 {
        return Err(syntax(e.pos(), "time specifier takes one argument"));
    }
    Ok(Some((when, &items[2])))
}

fn durative_condition(e: &Sexp, out: &mut Vec<Condition>) -> Result<(), PddlError> {
    if e.head() == Some("and") {
        return expect_list(e, "a condition")?[1..].iter().try_for_each(|g| durative_condition(g, out));
    }
    if e.list().is_some_and(|l| l.is_empty()) {
        return Ok(());
    }
    match timed(e)? {
        Some((w, g)) => goal_description(g, Some(w), out),
        None => Err(syntax(e.pos(), "expected `at start`, `at end` or `over all`")),
    }
}

fn effect(e: &Sexp, when: Option<When>, out: &mut Vec<Effect>) -> Result<(), PddlError> {
    reject_connective(e)?;
    let items = expect_list(e, "an effect")?;
    match e.head() {
        None if items.is_empty() => Ok(()),
        Some("and") => items[1..].iter().try_for_each(|x| effect(x, when, out)),
        Some("not") => {
            let inner = items.get(1).filter(|_| items.len() == 2).ok_or_else(|| syntax(e.pos(), "`not` takes one argument"))?;
            out.push(Effect { when, atom: atom(inner)?, positive: false });
            Ok(())
        }
        _ => {
            out.push(Effect { when, atom: atom(e)?, positive: true });
            Ok(())
        }
    }
}

fn durative_effect(e: &Sexp, out: &mut Vec<Effect>) -> Result<(), PddlError> {
    if e.head() == Some("and") {
        return expect_list(e, "an effect")?[1..].iter().try_for_each(|x| durative_effect(x, out));
    }
    if e.list().is_some_and(|l| l.is_empty()) {
        return Ok(());
    }
    reject_connective(e)?;
    match timed(e)? {
        Some((When::OverAll, _)) => Err(unsupported(e.pos(), "continuous effects")),
        Some((w, x)) => effect(x, Some(w), out),
        None => Err(syntax(e.pos(), "expected `at start` or `at end`")),
    }
}

fn duration(e: &Sexp) -> Result<Rational, PddlError> {
    let items = expect_list(e, "a duration constraint")?;
    match e.head() {
        Some("and") if items.len() == 2 => duration(&items[1]),
        Some("=") if items.len() == 3 && items[1].sym() == Some("?duration") => match &items[2] {
            Sexp::Sym(s, p) => {
                let d: Rational = s.parse().map_err(|_| syntax(*p, format!("expected a number, found `{s}`")))?;
                if d.is_negative() || d.is_infinite() {
                    return Err(PddlError::Invalid { pos: *p, msg: "duration must be a finite non-negative number".into() });
                }
                Ok(d)
            }
            Sexp::List(_, p) => Err(unsupported(*p, "duration expressions")),
        },
        Some("<=" | ">=" | "<" | ">") => Err(unsupported(e.pos(), "duration inequalities")),
        _ => Err(syntax(e.pos(), "expected `(= ?duration <number>)`")),
    }
}

fn keyword_args(items: &[Sexp], pos: Pos) -> Result<Vec<(&str, &Sexp)>, PddlError> {
    if !items.len().is_multiple_of(2) {
        return Err(syntax(pos, "expected `:keyword value` pairs"));
    }
    items
        .chunks(2)
        .map(|c| {
            let k = expect_sym(&c[0], "a keyword")?;
            if !k.starts_with(':') {
                return Err(syntax(c[0].pos(), format!("expected a keyword, found `{k}`")));
            }
            Ok((k, &c[1]))
        })
        .collect()
}

fn action(items: &[Sexp], pos: Pos, durative: bool) -> Result<ActionSchema, PddlError> {
    let name = expect_sym(items.get(1).ok_or_else(|| syntax(pos, "expected an action name"))?, "an action name")?;
    let mut a = ActionSchema {
        name: name.to_string(),
        params: Vec::new(),
        duration: durative.then_some(ZERO),
        conditions: Vec::new(),
        effects: Vec::new(),
        pos,
    };
    let mut has_duration = false;
    for (k, v) in keyword_args(&items[2..], pos)? {
        match (k, durative) {
            (":parameters", _) => a.params = typed_list(expect_list(v, "a parameter list")?)?,
            (":precondition", false) => goal_description(v, None, &mut a.conditions)?,
            (":effect", false) => effect(v, None, &mut a.effects)?,
            (":duration", true) => {
                a.duration = Some(duration(v)?);
                has_duration = true;
            }
            (":condition", true) => durative_condition(v, &mut a.conditions)?,
            (":effect", true) => durative_effect(v, &mut a.effects)?,
            _ => return Err(syntax(v.pos(), format!("unexpected `{k}` in action `{name}`"))),
        }
    }
    if durative && !has_duration {
        return Err(syntax(pos, format!("durative action `{name}` has no `:duration`")));
    }
    Ok(a)
}

pub fn parse_domain(text: &str) -> Result<DomainAst, PddlError> {
    let top = read(text)?;
    let (name, sections) = header(&top, "domain")?;
    let mut d = DomainAst {
        name,
        requirements: Vec::new(),
        types: Vec::new(),
        constants: Vec::new(),
        predicates: Vec::new(),
        actions: Vec::new(),
    };
    for s in sections {
        let items = expect_list(s, "a domain section")?;
        match s.head() {
            Some(":requirements") => d.requirements = requirements(&items[1..])?,
            Some(":types") => d.types = typed_list(&items[1..])?,
            Some(":constants") => d.constants = typed_list(&items[1..])?,
            Some(":predicates") => {
                for p in &items[1..] {
                    let pi = expect_list(p, "a predicate declaration")?;
                    let name = expect_sym(pi.first().ok_or_else(|| syntax(p.pos(), "empty predicate"))?, "a predicate name")?;
                    d.predicates.push(PredicateAst { name: name.to_string(), params: typed_list(&pi[1..])?, pos: p.pos() });
                }
            }
            Some(":action") => d.actions.push(action(items, s.pos(), false)?),
            Some(":durative-action") => d.actions.push(action(items, s.pos(), true)?),
            Some(":derived") => return Err(unsupported(s.pos(), ":derived")),
            Some(":functions") => return Err(unsupported(s.pos(), "numeric fluents (`:functions`)")),
            Some(h) => return Err(unsupported(s.pos(), h)),
            None => return Err(syntax(s.pos(), "expected a section keyword")),
        }
    }
    Ok(d)
}

fn requirements(items: &[Sexp]) -> Result<Vec<String>, PddlError> {
    items
        .iter()
        .map(|r| {
            let k = expect_sym(r, "a requirement")?;
            if SUPPORTED_REQUIREMENTS.contains(&k) {
                Ok(k.to_string())
            } else {
                Err(unsupported(r.pos(), k))
            }
        })
        .collect()
}

pub fn parse_problem(text: &str) -> Result<ProblemAst, PddlError> {
    let top = read(text)?;
    let (name, sections) = header(&top, "problem")?;
    let mut p = ProblemAst {
        name,
        domain: String::new(),
        objects: Vec::new(),
        init: Vec::new(),
        goal: Vec::new(),
        metric: None,
    };
    for s in sections {
        let items = expect_list(s, "a problem section")?;
        match s.head() {
            Some(":domain") if items.len() == 2 => p.domain = expect_sym(&items[1], "a domain name")?.to_string(),
            Some(":requirements") => {
                requirements(&items[1..])?;
            }
            Some(":objects") => p.objects = typed_list(&items[1..])?,
            Some(":init") => {
                for l in &items[1..] {
                    match l.head() {
                        Some("=") => return Err(unsupported(l.pos(), "numeric fluents")),
                        Some("at") => return Err(unsupported(l.pos(), "timed initial literals")),
                        Some("not") => return Err(unsupported(l.pos(), "negative initial literals")),
                        _ => p.init.push(atom(l)?),
                    }
                }
            }
            Some(":goal") if items.len() == 2 => {
                let mut conds = Vec::new();
                goal_description(&items[1], None, &mut conds)?;
                for c in conds {
                    match c.kind {
                        CondKind::Atom(a) => p.goal.push(a),
                        _ => return Err(unsupported(items[1].pos(), "equality in goals")),
                    }
                }
            }
            Some(":metric") => p.metric = Some(metric(items, s.pos())?),
            Some(h) => return Err(unsupported(s.pos(), h)),
            None => return Err(syntax(s.pos(), "expected a section keyword")),
        }
    }
    if p.domain.is_empty() {
        return Err(syntax(top.pos(), "missing `(:domain <name>)`"));
    }
    Ok(p)
}

fn metric(items: &[Sexp], pos: Pos) -> Result<Metric, PddlError> {
    let ok = items.len() == 3
        && items[1].sym() == Some("minimize")
        && items[2].list().is_some_and(|l| l.len() == 1 && l[0].sym() == Some("total-time"));
    if ok {
        Ok(Metric::MinimizeTotalTime)
    } else {
        Err(unsupported(pos, "metrics other than `(minimize (total-time))`"))
    }
}

pub fn parse(domain_text: &str, problem_text: &str) -> Result<(DomainAst, ProblemAst), PddlError> {
    Ok((parse_domain(domain_text)?, parse_problem(problem_text)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{CHAIN_DOMAIN, CHAIN_PROBLEM, SAT1_DOMAIN, SAT1_PROBLEM};

    #[test]
    fn minimal_strips_domain() {
        let d = parse_domain("(define (domain d) (:predicates (p)) (:action a :parameters () :effect (p)))").unwrap();
        assert_eq!(d.actions.len(), 1);
        assert_eq!(d.actions[0].duration, None);
    }

    #[test]
    fn durative_duration() {
        let d = parse_domain(CHAIN_DOMAIN).unwrap();
        assert_eq!(d.actions[0].duration, Some(Rational::integer(2)));
        assert_eq!(d.actions[1].conditions[0].when, Some(When::OverAll));
        let p = parse_problem(CHAIN_PROBLEM).unwrap();
        assert_eq!(p.metric, Some(Metric::MinimizeTotalTime));
    }

    #[test]
    fn derived_is_unsupported() {
        let e = parse_domain("(define (domain d) (:predicates (p) (q)) (:derived (p) (q)))").unwrap_err();
        assert!(matches!(e, PddlError::Unsupported { ref feature, .. } if feature == ":derived"));
    }

    #[test]
    fn other_unsupported_features() {
        for (src, feat) in [
            ("(define (domain d) (:requirements :adl))", ":adl"),
            ("(define (domain d) (:functions (f)))", "numeric fluents"),
            ("(define (domain d) (:action a :parameters () :precondition (not (p)) :effect (q)))", "negative"),
            ("(define (domain d) (:action a :parameters () :precondition (or (p) (q)) :effect (q)))", "or"),
            ("(define (domain d) (:action a :parameters () :effect (increase (c) 1)))", "numeric"),
        ] {
            match parse_domain(src) {
                Err(PddlError::Unsupported { feature, .. }) => assert!(feature.contains(feat), "{feature}"),
                r => panic!("{src}: {r:?}"),
            }
        }
    }

    #[test]
    fn satellite_fixture_parses() {
        let (d, p) = parse(SAT1_DOMAIN, SAT1_PROBLEM).unwrap();
        assert_eq!(d.actions.len(), 4);
        assert!(matches!(d.actions[0].conditions[1].kind, CondKind::Neq(..)));
        assert_eq!(p.objects.len(), 5);
        assert_eq!(p.goal.len(), 2);
    }

    #[test]
    fn typed_lists() {
        let d = parse_domain("(define (domain d) (:types a b - t c))").unwrap();
        let tys: Vec<_> = d.types.iter().map(|t| (t.name.as_str(), t.ty.as_str())).collect();
        assert_eq!(tys, [("a", "t"), ("b", "t"), ("c", "object")]);
    }

    #[test]
    fn syntax_error_position() {
        match parse_domain("(define (domain d)\n  (:predicates (p))\n  (:action a :parameters ()") {
            Err(PddlError::Syntax { pos, .. }) => assert_eq!(pos.line, 3),
            r => panic!("{r:?}"),
        }
    }
}

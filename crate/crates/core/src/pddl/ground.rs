//! Grounding: instantiates every action schema over the typed objects.
//!
//! Predicates that no action changes are static. Their atoms are checked
//! against the initial state while grounding and never reach the problem.
//! Atoms are numbered by predicate declaration order, then by argument
//! objects in declaration order.

use std::collections::{BTreeSet, HashMap, HashSet};

use super::ast::*;
use crate::atoms::{Atom, AtomSet};
use crate::error::{PddlError, Pos};
use crate::model::{GroundAction, Mode, Problem};
use crate::rational::{Rational, ONE, ZERO};

fn undeclared(pos: Pos, kind: &'static str, name: &str) -> PddlError {
    PddlError::Undeclared { pos, kind, name: name.to_string() }
}

fn invalid(pos: Pos, msg: impl Into<String>) -> PddlError {
    PddlError::Invalid { pos, msg: msg.into() }
}

struct Types {
    parent: HashMap<String, String>,
}

impl Types {
    fn new(d: &DomainAst) -> Result<Types, PddlError> {
        let mut parent = HashMap::new();
        for t in &d.types {
            if t.name == "object" {
                continue;
            }
            if parent.insert(t.name.clone(), t.ty.clone()).is_some() {
                return Err(invalid(t.pos, format!("type `{}` declared twice", t.name)));
            }
        }
        let types = Types { parent };
        for t in &d.types {
            types.check(&t.ty, t.pos)?;
            if types.ancestors(&t.name).is_none() {
                return Err(invalid(t.pos, format!("type `{}` is its own ancestor", t.name)));
            }
        }
        Ok(types)
    }

    fn check(&self, ty: &str, pos: Pos) -> Result<(), PddlError> {
        if ty == "object" || self.parent.contains_key(ty) {
            Ok(())
        } else {
            Err(undeclared(pos, "type", ty))
        }
    }

    /// `ty` and all its supertypes; `None` on a cycle.
    fn ancestors(&self, ty: &str) -> Option<Vec<String>> {
        let mut out = vec![ty.to_string()];
        let mut cur = ty;
        while let Some(p) = self.parent.get(cur) {
            if out.iter().any(|t| t == p) {
                return None;
            }
            out.push(p.clone());
            cur = p;
        }
        if cur != "object" {
            out.push("object".into());
        }
        Some(out)
    }
}

fn check_args(
    args: &[String],
    pos: Pos,
    params: &[TypedName],
    constants: &HashSet<&str>,
) -> Result<(), PddlError> {
    for a in args {
        if a.starts_with('?') {
            if !params.iter().any(|p| &p.name == a) {
                return Err(undeclared(pos, "variable", a));
            }
        } else if !constants.contains(a.as_str()) {
            return Err(undeclared(pos, "object", a));
        }
    }
    Ok(())
}

fn check_atom(
    a: &AtomAst,
    preds: &HashMap<&str, &PredicateAst>,
    params: &[TypedName],
    constants: &HashSet<&str>,
) -> Result<(), PddlError> {
    let p = preds.get(a.pred.as_str()).ok_or_else(|| undeclared(a.pos, "predicate", &a.pred))?;
    if p.params.len() != a.args.len() {
        return Err(invalid(
            a.pos,
            format!("`{}` takes {} arguments, {} given", a.pred, p.params.len(), a.args.len()),
        ));
    }
    check_args(&a.args, a.pos, params, constants)
}

/// Semantic checks that need only the domain.
pub fn check_domain(d: &DomainAst) -> Result<(), PddlError> {
    let types = Types::new(d)?;
    let constants: HashSet<&str> = d.constants.iter().map(|c| c.name.as_str()).collect();
    for c in &d.constants {
        types.check(&c.ty, c.pos)?;
    }
    let mut preds: HashMap<&str, &PredicateAst> = HashMap::new();
    for p in &d.predicates {
        for t in &p.params {
            types.check(&t.ty, t.pos)?;
        }
        if preds.insert(&p.name, p).is_some() {
            return Err(invalid(p.pos, format!("predicate `{}` declared twice", p.name)));
        }
    }
    let mut names = HashSet::new();
    for a in &d.actions {
        if !names.insert(&a.name) {
            return Err(invalid(a.pos, format!("action `{}` declared twice", a.name)));
        }
        let mut seen = HashSet::new();
        for t in &a.params {
            types.check(&t.ty, t.pos)?;
            if !t.name.starts_with('?') {
                return Err(invalid(t.pos, format!("parameter `{}` must start with `?`", t.name)));
            }
            if !seen.insert(&t.name) {
                return Err(invalid(t.pos, format!("parameter `{}` declared twice", t.name)));
            }
        }
        for c in &a.conditions {
            match &c.kind {
                CondKind::Atom(x) => check_atom(x, &preds, &a.params, &constants)?,
                CondKind::Eq(x, y) | CondKind::Neq(x, y) => {
                    check_args(&[x.clone(), y.clone()], a.pos, &a.params, &constants)?
                }
            }
        }
        for e in &a.effects {
            check_atom(&e.atom, &preds, &a.params, &constants)?;
        }
    }
    Ok(())
}

type Key = (usize, Vec<usize>);

struct Schema {
    name: String,
    pre: Vec<Key>,
    add: Vec<Key>,
    del: Vec<Key>,
    dur: Rational,
}

pub fn ground(d: &DomainAst, p: &ProblemAst) -> Result<Problem, PddlError> {
    check_domain(d)?;
    if p.domain != d.name {
        return Err(invalid(Pos::default(), format!("problem is for domain `{}`, not `{}`", p.domain, d.name)));
    }
    let types = Types::new(d)?;
    let mut objects: Vec<(&str, Vec<String>)> = Vec::new();
    let mut obj_index: HashMap<&str, usize> = HashMap::new();
    for o in d.constants.iter().chain(&p.objects) {
        types.check(&o.ty, o.pos)?;
        if obj_index.insert(&o.name, objects.len()).is_some() {
            return Err(invalid(o.pos, format!("object `{}` declared twice", o.name)));
        }
        objects.push((&o.name, types.ancestors(&o.ty).expect("checked acyclic")));
    }
    let pred_index: HashMap<&str, usize> = d.predicates.iter().enumerate().map(|(i, p)| (p.name.as_str(), i)).collect();
    let ground_fact = |a: &AtomAst| -> Result<Key, PddlError> {
        let pi = *pred_index.get(a.pred.as_str()).ok_or_else(|| undeclared(a.pos, "predicate", &a.pred))?;
        if d.predicates[pi].params.len() != a.args.len() {
            return Err(invalid(a.pos, format!("`{}` takes {} arguments", a.pred, d.predicates[pi].params.len())));
        }
        let args = a
            .args
            .iter()
            .map(|x| obj_index.get(x.as_str()).copied().ok_or_else(|| undeclared(a.pos, "object", x)))
            .collect::<Result<_, _>>()?;
        Ok((pi, args))
    };
    let init: BTreeSet<Key> = p.init.iter().map(ground_fact).collect::<Result<_, _>>()?;
    let goal: BTreeSet<Key> = p.goal.iter().map(ground_fact).collect::<Result<_, _>>()?;

    let mut fluent = vec![false; d.predicates.len()];
    for a in &d.actions {
        for e in &a.effects {
            fluent[pred_index[e.atom.pred.as_str()]] = true;
        }
    }
    let temporal = d.actions.iter().any(|a| a.duration.is_some());

    let mut schemas = Vec::new();
    for a in &d.actions {
        let candidates: Vec<Vec<usize>> = a
            .params
            .iter()
            .map(|t| (0..objects.len()).filter(|&o| objects[o].1.contains(&t.ty)).collect())
            .collect();
        if candidates.iter().any(|c| c.is_empty()) {
            continue;
        }
        let mut choice = vec![0usize; a.params.len()];
        'bindings: loop {
            let binding: Vec<usize> = choice.iter().zip(&candidates).map(|(&i, c)| c[i]).collect();
            let resolve = |x: &str| -> usize {
                match a.params.iter().position(|t| t.name == x) {
                    Some(i) => binding[i],
                    None => obj_index[x],
                }
            };
            let key = |x: &AtomAst| -> Key {
                (pred_index[x.pred.as_str()], x.args.iter().map(|s| resolve(s)).collect())
            };
            let mut ok = true;
            let mut pre = Vec::new();
            for c in &a.conditions {
                match &c.kind {
                    CondKind::Eq(x, y) => ok &= resolve(x) == resolve(y),
                    CondKind::Neq(x, y) => ok &= resolve(x) != resolve(y),
                    CondKind::Atom(x) => {
                        let k = key(x);
                        if fluent[k.0] {
                            pre.push(k);
                        } else {
                            ok &= init.contains(&k);
                        }
                    }
                }
            }
            if ok {
                let add: Vec<Key> = a.effects.iter().filter(|e| e.positive).map(|e| key(&e.atom)).collect();
                let del: Vec<Key> = a.effects.iter().filter(|e| !e.positive).map(|e| key(&e.atom)).collect();
                // An instance that adds and deletes the same atom is dropped.
                if !add.iter().any(|k| del.contains(k)) {
                    let mut name = a.name.clone();
                    for &o in &binding {
                        name.push(' ');
                        name.push_str(objects[o].0);
                    }
                    let dur = a.duration.unwrap_or(if temporal { ZERO } else { ONE });
                    schemas.push(Schema { name, pre, add, del, dur });
                }
            }
            for i in (0..choice.len()).rev() {
                choice[i] += 1;
                if choice[i] < candidates[i].len() {
                    continue 'bindings;
                }
                choice[i] = 0;
            }
            break;
        }
    }

    let mut universe: BTreeSet<Key> = BTreeSet::new();
    universe.extend(init.iter().filter(|k| fluent[k.0]).cloned());
    universe.extend(goal.iter().filter(|k| fluent[k.0] || !init.contains(k)).cloned());
    for s in &schemas {
        universe.extend(s.pre.iter().chain(&s.add).chain(&s.del).cloned());
    }
    let ids: HashMap<&Key, u32> = universe.iter().enumerate().map(|(i, k)| (k, i as u32)).collect();
    let names: Vec<String> = universe
        .iter()
        .map(|(pi, args)| {
            let mut s = d.predicates[*pi].name.clone();
            for &o in args {
                s.push(' ');
                s.push_str(objects[o].0);
            }
            s
        })
        .collect();
    let set = |keys: &mut dyn Iterator<Item = &Key>| -> AtomSet {
        keys.filter_map(|k| ids.get(k).map(|&i| Atom(i))).collect()
    };
    let mut actions = Vec::with_capacity(schemas.len());
    for s in &schemas {
        actions.push(GroundAction::new(
            s.name.clone(),
            set(&mut s.pre.iter()),
            set(&mut s.add.iter()),
            set(&mut s.del.iter()),
            ONE,
            s.dur,
        )?);
    }
    let init_set = set(&mut init.iter());
    let goal_set = set(&mut goal.iter());
    let mode = if temporal { Mode::Temporal } else { Mode::Sequential };
    Ok(Problem::new(names, actions, init_set, goal_set, mode)?)
}

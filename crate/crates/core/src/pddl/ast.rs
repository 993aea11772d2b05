//! Abstract syntax of the accepted PDDL subset.

use crate::error::Pos;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypedName {
    pub name: String,
    /// `object` when no type is given.
    pub ty: String,
    pub pos: Pos,
}

/// A predicate applied to variables (`?x`) or object names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomAst {
    pub pred: String,
    pub args: Vec<String>,
    pub pos: Pos,
}

/// Time annotation of a durative condition or effect.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum When {
    AtStart,
    OverAll,
    AtEnd,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CondKind {
    Atom(AtomAst),
    Eq(String, String),
    Neq(String, String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition {
    pub when: Option<When>,
    pub kind: CondKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Effect {
    pub when: Option<When>,
    pub atom: AtomAst,
    pub positive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredicateAst {
    pub name: String,
    pub params: Vec<TypedName>,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionSchema {
    pub name: String,
    pub params: Vec<TypedName>,
    /// `Some` exactly for durative actions.
    pub duration: Option<Rational>,
    pub conditions: Vec<Condition>,
    pub effects: Vec<Effect>,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomainAst {
    pub name: String,
    pub requirements: Vec<String>,
    /// Each type with its parent.
    pub types: Vec<TypedName>,
    pub constants: Vec<TypedName>,
    pub predicates: Vec<PredicateAst>,
    pub actions: Vec<ActionSchema>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    MinimizeTotalTime,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemAst {
    pub name: String,
    pub domain: String,
    pub objects: Vec<TypedName>,
    pub init: Vec<AtomAst>,
    pub goal: Vec<AtomAst>,
    pub metric: Option<Metric>,
}

//! Fixed-size closed hash tables keyed on full search states.
//!
//! A lookup is one hash computation and one equality test: each state has
//! exactly one slot.

use std::hash::{DefaultHasher, Hash, Hasher};

use crate::rational::Rational;

fn hash_of<S: Hash>(s: &S) -> u64 {
    let mut h = DefaultHasher::new();
    s.hash(&mut h);
    h.finish()
}

#[derive(Clone, Debug)]
struct Slot<S> {
    state: S,
    value: Rational,
    depth: u32,
}

/// Updated lower bounds of expanded, unsolved IDA* nodes. On a collision the
/// entry closer to the root wins.
#[derive(Clone, Debug)]
pub struct TranspositionTable<S> {
    slots: Vec<Option<Slot<S>>>,
    pub hits: u64,
    pub stores: u64,
}

impl<S: Hash + Eq + Clone> TranspositionTable<S> {
    /// A table with `capacity` slots; zero capacity stores nothing.
    pub fn new(capacity: usize) -> TranspositionTable<S> {
        TranspositionTable { slots: vec![None; capacity], hits: 0, stores: 0 }
    }

    pub fn capacity(&self) -> usize {
        self.slots.len()
    }

    fn slot(&self, s: &S) -> Option<usize> {
        (!self.slots.is_empty()).then(|| (hash_of(s) % self.slots.len() as u64) as usize)
    }

    pub fn get(&mut self, s: &S) -> Option<Rational> {
        let i = self.slot(s)?;
        match &self.slots[i] {
            Some(e) if e.state == *s => {
                self.hits += 1;
                Some(e.value)
            }
            _ => None,
        }
    }

    pub fn store(&mut self, s: &S, value: Rational, depth: u32) {
        let Some(i) = self.slot(s) else { return };
        let replace = match &self.slots[i] {
            None => true,
            Some(e) => e.state == *s || depth <= e.depth,
        };
        if replace {
            self.stores += 1;
            let value = match &self.slots[i] {
                Some(e) if e.state == *s => value.max(e.value),
                _ => value,
            };
            self.slots[i] = Some(Slot { state: s.clone(), value, depth });
        }
    }

    pub fn len(&self) -> usize {
        self.slots.iter().filter(|s| s.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Exact costs of nodes solved during one m-regression pass. A collision
/// simply overwrites the previous entry.
#[derive(Clone, Debug)]
pub struct SolvedTable<S> {
    slots: Vec<Option<(S, Rational)>>,
}

impl<S: Hash + Eq + Clone> SolvedTable<S> {
    pub fn new(capacity: usize) -> SolvedTable<S> {
        SolvedTable { slots: vec![None; capacity] }
    }

    fn slot(&self, s: &S) -> Option<usize> {
        (!self.slots.is_empty()).then(|| (hash_of(s) % self.slots.len() as u64) as usize)
    }

    pub fn get(&self, s: &S) -> Option<Rational> {
        let i = self.slot(s)?;
        match &self.slots[i] {
            Some((k, v)) if k == s => Some(*v),
            _ => None,
        }
    }

    pub fn store(&mut self, s: &S, cost: Rational) {
        if let Some(i) = self.slot(s) {
            self.slots[i] = Some((s.clone(), cost));
        }
    }

    pub fn clear(&mut self) {
        self.slots.iter_mut().for_each(|s| *s = None);
    }
}

//! Trie-backed heuristic table.
//!
//! Atom sets are stored as ascending id strings. Every stored set has all
//! of its lexical prefixes stored as well (with value 0 unless something
//! better is known), which lets evaluation find every stored subset of a
//! query by a single walk that only descends into existing children.

use crate::atoms::{Atom, AtomSet};
use crate::model::Problem;
use crate::rational::{Rational, INFINITY, ZERO};

#[derive(Clone, Debug)]
struct Node {
    children: Vec<(Atom, u32)>,
    value: Rational,
}

impl Node {
    fn child(&self, a: Atom) -> Option<u32> {
        self.children
            .binary_search_by_key(&a, |c| c.0)
            .ok()
            .map(|i| self.children[i].1)
    }
}

#[derive(Clone, Debug)]
pub struct HeuristicTable {
    nodes: Vec<Node>,
    empty_stored: bool,
    stores: u64,
}

impl Default for HeuristicTable {
    fn default() -> Self {
        HeuristicTable::new()
    }
}

impl HeuristicTable {
    pub fn new() -> HeuristicTable {
        HeuristicTable {
            nodes: vec![Node { children: Vec::new(), value: ZERO }],
            empty_stored: false,
            stores: 0,
        }
    }

    /// Number of stored sets, the empty set included once anything is stored.
    pub fn len(&self) -> usize {
        self.nodes.len() - 1 + usize::from(self.empty_stored)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of `store` calls so far.
    pub fn store_count(&self) -> u64 {
        self.stores
    }

    /// `T(s) := max(T(s), v)`, inserting missing prefixes with value 0.
    /// Returns whether the stored value changed.
    pub fn store(&mut self, s: &AtomSet, v: Rational) -> bool {
        self.stores += 1;
        self.empty_stored = true;
        let mut cur = 0usize;
        let mut created = false;
        for a in s.iter() {
            cur = match self.nodes[cur].children.binary_search_by_key(&a, |c| c.0) {
                Ok(i) => self.nodes[cur].children[i].1 as usize,
                Err(i) => {
                    let id = self.nodes.len();
                    self.nodes.push(Node { children: Vec::new(), value: ZERO });
                    self.nodes[cur].children.insert(i, (a, id as u32));
                    created = true;
                    id
                }
            };
        }
        let node = &mut self.nodes[cur];
        // The empty set always costs nothing.
        if cur != 0 && v > node.value {
            node.value = v;
            true
        } else {
            created
        }
    }

    /// The exact stored value of `s`, if present.
    pub fn lookup_exact(&self, s: &AtomSet) -> Option<Rational> {
        if s.is_empty() {
            return self.empty_stored.then_some(ZERO);
        }
        let mut cur = 0usize;
        for a in s.iter() {
            cur = self.nodes[cur].child(a)? as usize;
        }
        Some(self.nodes[cur].value)
    }

    /// Maximum stored value over all subsets of `s`; 0 when none is stored.
    pub fn eval(&self, s: &AtomSet) -> Rational {
        let mut best = ZERO;
        self.walk(0, s.as_slice(), &mut best);
        best
    }

    fn walk(&self, node: usize, rest: &[Atom], best: &mut Rational) {
        let n = &self.nodes[node];
        if n.value > *best {
            *best = n.value;
        }
        if *best == INFINITY || n.children.is_empty() {
            return;
        }
        for (i, &a) in rest.iter().enumerate() {
            if let Some(c) = n.child(a) {
                self.walk(c as usize, &rest[i + 1..], best);
                if *best == INFINITY {
                    return;
                }
            }
        }
    }

    /// Every stored set with its value, in lexical order.
    pub fn entries(&self) -> Vec<(AtomSet, Rational)> {
        let mut out = Vec::new();
        if self.empty_stored {
            out.push((AtomSet::new(), ZERO));
        }
        let mut path = Vec::new();
        self.collect(0, &mut path, &mut out);
        out
    }

    fn collect(&self, node: usize, path: &mut Vec<Atom>, out: &mut Vec<(AtomSet, Rational)>) {
        for &(a, c) in &self.nodes[node].children {
            path.push(a);
            out.push((AtomSet::from_sorted(path.clone()), self.nodes[c as usize].value));
            self.collect(c as usize, path, out);
            path.pop();
        }
    }

    /// Debug dump, one `{atom names} value` line per stored non-empty set.
    pub fn dump(&self, problem: &Problem) -> String {
        let mut lines: Vec<String> = self
            .entries()
            .into_iter()
            .filter(|(s, _)| !s.is_empty())
            .map(|(s, v)| {
                let names: Vec<&str> = s.iter().map(|a| problem.atom_name(a)).collect();
                format!("{{{}}} {}", names.join(" "), v)
            })
            .collect();
        lines.sort();
        let mut out = lines.join("\n");
        out.push('\n');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(ids: &[u32]) -> AtomSet {
        AtomSet::from_ids(ids.iter().copied())
    }

    const A: u32 = 0;
    const B: u32 = 1;
    const C: u32 = 2;

    #[test]
    fn store_inserts_prefixes() {
        let mut t = HeuristicTable::new();
        assert_eq!(t.lookup_exact(&set(&[])), None);
        t.store(&set(&[A, C]), Rational::integer(4));
        assert_eq!(t.lookup_exact(&set(&[A])), Some(ZERO));
        assert_eq!(t.lookup_exact(&set(&[A, C])), Some(Rational::integer(4)));
        assert_eq!(t.lookup_exact(&set(&[B])), None);
        assert_eq!(t.lookup_exact(&set(&[])), Some(ZERO));
        assert_eq!(t.len(), 3);
    }

    #[test]
    fn store_is_monotone() {
        let mut t = HeuristicTable::new();
        t.store(&set(&[A, C]), Rational::integer(4));
        assert!(!t.store(&set(&[A, C]), Rational::integer(3)));
        assert_eq!(t.lookup_exact(&set(&[A, C])), Some(Rational::integer(4)));
    }

    #[test]
    fn eval_maximizes_over_subsets() {
        let mut t = HeuristicTable::new();
        assert_eq!(t.eval(&set(&[])), ZERO);
        t.store(&set(&[A, C]), Rational::integer(4));
        t.store(&set(&[B]), Rational::integer(2));
        assert_eq!(t.eval(&set(&[A, B, C])), Rational::integer(4));
        assert_eq!(t.eval(&set(&[B, C])), Rational::integer(2));
        t.store(&set(&[B, C]), INFINITY);
        assert_eq!(t.eval(&set(&[A, B, C])), INFINITY);
    }

    fn brute(t: &HeuristicTable, s: &AtomSet) -> Rational {
        let mut best = ZERO;
        for k in 0..=s.len() {
            for sub in s.subsets_of_size(k) {
                if let Some(v) = t.lookup_exact(&sub) {
                    best = best.max(v);
                }
            }
        }
        best
    }

    fn stores() -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
        proptest::collection::vec((proptest::collection::vec(0u32..12, 0..5), 0i64..20), 0..25)
    }

    proptest! {
        #[test]
        fn eval_matches_brute_force(ops in stores(), q in proptest::collection::vec(0u32..12, 0..12)) {
            let mut t = HeuristicTable::new();
            for (s, v) in &ops {
                t.store(&set(s), Rational::integer(*v));
            }
            let q = set(&q);
            prop_assert_eq!(t.eval(&q), brute(&t, &q));
        }

        #[test]
        fn eval_monotone_over_supersets(ops in stores(), q in proptest::collection::vec(0u32..12, 0..8),
                                        extra in proptest::collection::vec(0u32..12, 0..4)) {
            let mut t = HeuristicTable::new();
            for (s, v) in &ops {
                t.store(&set(s), Rational::integer(*v));
            }
            let small = set(&q);
            let big = small.union(&set(&extra));
            prop_assert!(t.eval(&small) <= t.eval(&big));
        }

        #[test]
        fn restoring_entries_is_idempotent(ops in stores()) {
            let mut t = HeuristicTable::new();
            for (s, v) in &ops {
                t.store(&set(s), Rational::integer(*v));
            }
            let before = t.entries();
            for (s, v) in &before {
                t.store(s, *v);
            }
            prop_assert_eq!(t.entries(), before);
        }
    }
}

//! Interned atoms and sorted atom sets.

use std::fmt;

/// A proposition, identified by its dense id within one problem.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Atom(pub u32);

impl Atom {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A set of atoms kept as a strictly ascending vector of ids.
///
/// The ascending order is the fixed lexical order used by the heuristic
/// table and by subset enumeration.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AtomSet(Vec<Atom>);

impl AtomSet {
    pub fn new() -> AtomSet {
        AtomSet(Vec::new())
    }

    /// Builds a set from arbitrary ids, sorting and removing duplicates.
    pub fn from_ids<I: IntoIterator<Item = u32>>(ids: I) -> AtomSet {
        ids.into_iter().map(Atom).collect()
    }

    /// Wraps a vector already in strictly ascending order.
    pub fn from_sorted(v: Vec<Atom>) -> AtomSet {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        AtomSet(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Atom] {
        &self.0
    }

    pub fn iter(&self) -> std::iter::Copied<std::slice::Iter<'_, Atom>> {
        self.0.iter().copied()
    }

    pub fn contains(&self, a: Atom) -> bool {
        self.0.binary_search(&a).is_ok()
    }

    pub fn insert(&mut self, a: Atom) -> bool {
        match self.0.binary_search(&a) {
            Ok(_) => false,
            Err(i) => {
                self.0.insert(i, a);
                true
            }
        }
    }

    pub fn is_subset(&self, other: &AtomSet) -> bool {
        if self.len() > other.len() {
            return false;
        }
        let mut j = 0;
        let o = &other.0;
        for &a in &self.0 {
            while j < o.len() && o[j] < a {
                j += 1;
            }
            if j == o.len() || o[j] != a {
                return false;
            }
            j += 1;
        }
        true
    }

    pub fn intersects(&self, other: &AtomSet) -> bool {
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.0, &other.0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    pub fn union(&self, other: &AtomSet) -> AtomSet {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        AtomSet(out)
    }

    pub fn union_with(&mut self, other: &AtomSet) {
        if !other.is_subset(self) {
            *self = self.union(other);
        }
    }

    pub fn intersection(&self, other: &AtomSet) -> AtomSet {
        AtomSet(self.0.iter().copied().filter(|a| other.contains(*a)).collect())
    }

    pub fn difference(&self, other: &AtomSet) -> AtomSet {
        AtomSet(self.0.iter().copied().filter(|a| !other.contains(*a)).collect())
    }

    /// All subsets with exactly `k` members, in lexical order.
    pub fn subsets_of_size(&self, k: usize) -> Subsets<'_> {
        Subsets::new(&self.0, k)
    }
}

impl FromIterator<Atom> for AtomSet {
    fn from_iter<I: IntoIterator<Item = Atom>>(iter: I) -> Self {
        let mut v: Vec<Atom> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        AtomSet(v)
    }
}

impl<'a> IntoIterator for &'a AtomSet {
    type Item = Atom;
    type IntoIter = std::iter::Copied<std::slice::Iter<'a, Atom>>;

    fn into_iter(self) -> Self::IntoIter {
        self.iter()
    }
}

impl fmt::Debug for AtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter().map(|a| a.0)).finish()
    }
}

/// Lexical enumeration of fixed-size combinations of a sorted slice.
pub struct Subsets<'a> {
    items: &'a [Atom],
    idx: Vec<usize>,
    done: bool,
}

impl<'a> Subsets<'a> {
    fn new(items: &'a [Atom], k: usize) -> Subsets<'a> {
        Subsets {
            items,
            idx: (0..k).collect(),
            done: k > items.len(),
        }
    }
}

impl Iterator for Subsets<'_> {
    type Item = AtomSet;

    fn next(&mut self) -> Option<AtomSet> {
        if self.done {
            return None;
        }
        let out = AtomSet(self.idx.iter().map(|&i| self.items[i]).collect());
        let n = self.items.len();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Binomial coefficient, saturating at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

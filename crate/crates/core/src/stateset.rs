use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Serialize, Serializer};

/// A subset of a model's states `0..universe`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StateSet {
    bits: FixedBitSet,
}

impl StateSet {
    pub fn empty(universe: usize) -> Self {
        StateSet {
            bits: FixedBitSet::with_capacity(universe),
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        StateSet { bits }
    }

    pub fn from_states<I: IntoIterator<Item = usize>>(universe: usize, states: I) -> Self {
        let mut s = Self::empty(universe);
        for x in states {
            s.insert(x);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn contains(&self, s: usize) -> bool {
        self.bits.contains(s)
    }

    /// Panics if `s` is outside the universe.
    pub fn insert(&mut self, s: usize) {
        self.bits.insert(s)
    }

    pub fn remove(&mut self, s: usize) {
        self.bits.set(s, false)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn complement(&self) -> StateSet {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        StateSet { bits }
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        StateSet { bits }
    }

    pub fn intersection(&self, other: &StateSet) -> StateSet {
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        StateSet { bits }
    }

    pub fn difference(&self, other: &StateSet) -> StateSet {
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        StateSet { bits }
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    /// `¬self ∪ other`
    pub fn implies(&self, other: &StateSet) -> StateSet {
        self.complement().union(other)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for StateSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_algebra() {
        let a = StateSet::from_states(5, [0, 2]);
        let b = StateSet::from_states(5, [2, 3]);
        assert_eq!(a.union(&b).to_vec(), vec![0, 2, 3]);
        assert_eq!(a.intersection(&b).to_vec(), vec![2]);
        assert_eq!(a.complement().to_vec(), vec![1, 3, 4]);
        assert_eq!(a.implies(&b).to_vec(), vec![1, 2, 3, 4]);
        assert_eq!(StateSet::full(3).len(), 3);
        assert!(StateSet::empty(3).is_empty());
    }
}

use std::cmp::Ordering;
use std::fmt;

use fixedbitset::FixedBitSet;

/// Index into a model's state table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub usize);

/// A set of states of a fixed-size model.
///
/// Ordered by the sorted list of members, so disjoint sets (such as the
/// classes of a partition) sort by their least state.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StateSet(FixedBitSet);

impl StateSet {
    pub fn empty(universe: usize) -> Self {
        StateSet(FixedBitSet::with_capacity(universe))
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        StateSet(bits)
    }

    pub fn from_ids<I: IntoIterator<Item = StateId>>(universe: usize, ids: I) -> Self {
        let mut s = Self::empty(universe);
        for id in ids {
            s.insert(id);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn insert(&mut self, s: StateId) {
        self.0.insert(s.0);
    }

    pub fn contains(&self, s: StateId) -> bool {
        self.0.contains(s.0)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.0.is_full()
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn first(&self) -> Option<StateId> {
        self.0.minimum().map(StateId)
    }

    pub fn iter(&self) -> impl Iterator<Item = StateId> + '_ {
        self.0.ones().map(StateId)
    }

    pub fn union_with(&mut self, other: &StateSet) {
        self.0.union_with(&other.0);
    }

    pub fn intersect_with(&mut self, other: &StateSet) {
        self.0.intersect_with(&other.0);
    }

    pub fn complement(&self) -> StateSet {
        let mut bits = self.0.clone();
        bits.toggle_range(..);
        StateSet(bits)
    }

    pub fn intersection(&self, other: &StateSet) -> StateSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }
}

impl Ord for StateSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.ones().cmp(other.0.ones())
    }
}

impl PartialOrd for StateSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.ones()).finish()
    }
}

/// A binary relation on states, stored as a successor set per state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    succ: Vec<StateSet>,
}

impl Relation {
    pub fn empty(universe: usize) -> Self {
        Relation {
            succ: vec![StateSet::empty(universe); universe],
        }
    }

    pub fn from_pairs<I: IntoIterator<Item = (StateId, StateId)>>(universe: usize, pairs: I) -> Self {
        let mut r = Self::empty(universe);
        for (s, t) in pairs {
            r.insert(s, t);
        }
        r
    }

    pub fn universe(&self) -> usize {
        self.succ.len()
    }

    pub fn insert(&mut self, s: StateId, t: StateId) {
        self.succ[s.0].insert(t);
    }

    pub fn contains(&self, s: StateId, t: StateId) -> bool {
        self.succ[s.0].contains(t)
    }

    pub fn successors(&self, s: StateId) -> &StateSet {
        &self.succ[s.0]
    }

    pub fn is_empty(&self) -> bool {
        self.succ.iter().all(StateSet::is_empty)
    }

    pub fn len(&self) -> usize {
        self.succ.iter().map(StateSet::len).sum()
    }

    pub fn intersect_with(&mut self, other: &Relation) {
        for (a, b) in self.succ.iter_mut().zip(&other.succ) {
            a.intersect_with(b);
        }
    }

    /// Pairs in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (StateId, StateId)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(s, ts)| ts.iter().map(move |t| (StateId(s), t)))
    }

    /// Image of a set of states.
    pub fn image(&self, x: &StateSet) -> StateSet {
        let mut out = StateSet::empty(self.universe());
        for s in x.iter() {
            out.union_with(&self.succ[s.0]);
        }
        out
    }
}

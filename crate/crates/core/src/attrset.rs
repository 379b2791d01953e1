//! Dense attribute sets over a schema's attribute table.

use std::cmp::Ordering;
use std::fmt;

use fixedbitset::FixedBitSet;

/// Position of an attribute in its schema's [`AttributeTable`](crate::schema::AttributeTable).
///
/// Ids follow declaration order: relations in document order, attributes in the
/// order they were declared inside each relation.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AttrId(pub usize);

impl AttrId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

/// A set of attributes drawn from one attribute table.
///
/// All sets that are compared or combined must share the same width (the size of
/// the table they index into). Ordering is lexicographic on the ascending member
/// list, which makes every sorted collection of sets deterministic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AttrSet(FixedBitSet);

impl AttrSet {
    pub fn empty(width: usize) -> Self {
        AttrSet(FixedBitSet::with_capacity(width))
    }

    pub fn full(width: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(width);
        bits.insert_range(..);
        AttrSet(bits)
    }

    pub fn from_ids<I: IntoIterator<Item = AttrId>>(width: usize, ids: I) -> Self {
        let mut set = Self::empty(width);
        for id in ids {
            set.insert(id);
        }
        set
    }

    pub fn singleton(width: usize, id: AttrId) -> Self {
        Self::from_ids(width, [id])
    }

    /// Number of attribute slots this set indexes over.
    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn contains(&self, id: AttrId) -> bool {
        self.0.contains(id.0)
    }

    pub fn insert(&mut self, id: AttrId) -> bool {
        !self.0.put(id.0)
    }

    pub fn remove(&mut self, id: AttrId) {
        self.0.set(id.0, false);
    }

    pub fn with(&self, id: AttrId) -> Self {
        let mut out = self.clone();
        out.insert(id);
        out
    }

    pub fn without(&self, id: AttrId) -> Self {
        let mut out = self.clone();
        out.remove(id);
        out
    }

    pub fn is_subset(&self, other: &AttrSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_superset(&self, other: &AttrSet) -> bool {
        other.0.is_subset(&self.0)
    }

    /// `self ⊊ other`.
    pub fn is_strict_subset(&self, other: &AttrSet) -> bool {
        self.is_subset(other) && self != other
    }

    pub fn is_disjoint(&self, other: &AttrSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn union_with(&mut self, other: &AttrSet) {
        self.0.union_with(&other.0);
    }

    pub fn intersect_with(&mut self, other: &AttrSet) {
        self.0.intersect_with(&other.0);
    }

    pub fn difference_with(&mut self, other: &AttrSet) {
        self.0.difference_with(&other.0);
    }

    pub fn union(&self, other: &AttrSet) -> AttrSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn intersection(&self, other: &AttrSet) -> AttrSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn difference(&self, other: &AttrSet) -> AttrSet {
        let mut out = self.clone();
        out.difference_with(other);
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = AttrId> + '_ {
        self.0.ones().map(AttrId)
    }

    pub fn first(&self) -> Option<AttrId> {
        self.0.minimum().map(AttrId)
    }

    pub fn to_vec(&self) -> Vec<AttrId> {
        self.iter().collect()
    }
}

impl Ord for AttrSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.ones().cmp(other.0.ones())
    }
}

impl PartialOrd for AttrSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for AttrSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.ones()).finish()
    }
}

/// Sorts a family of sets and keeps only its ⊆-minimal members.
pub fn minimize(mut family: Vec<AttrSet>) -> Vec<AttrSet> {
    family.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    family.dedup();
    let mut kept: Vec<AttrSet> = Vec::with_capacity(family.len());
    for set in family {
        if !kept.iter().any(|k| k.is_subset(&set)) {
            kept.push(set);
        }
    }
    kept.sort();
    kept
}

/// True when no member of `family` is a strict subset of another and there are no duplicates.
pub fn is_antichain(family: &[AttrSet]) -> bool {
    family.iter().enumerate().all(|(i, a)| {
        family
            .iter()
            .enumerate()
            .all(|(j, b)| i == j || !a.is_subset(b))
    })
}

//! The power-set procedure, kept literal so it can serve as a reference.

use crate::exec::Execution;
use crate::schema::{PolicySet, RelationSchema};

use super::{Frame, IdentifierFamilies};

const CHUNK: usize = 1 << 12;

/// The survivors of the elimination phase for one relation.
#[derive(Clone, Debug)]
pub struct PowerSetSweep {
    /// Relation arity; subsets are masks over `0..arity` in attribute order.
    pub arity: usize,
    /// `alive[mask]` is true when the subset survived elimination.
    pub alive: Vec<bool>,
    pub eliminated: u64,
}

impl PowerSetSweep {
    pub fn generated(&self) -> u64 {
        self.alive.len() as u64
    }

    pub fn survivors(&self) -> impl Iterator<Item = u64> + '_ {
        self.alive
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(m, _)| m as u64)
    }
}

/// Builds every subset of `relation` and removes those containing a whole set of
/// `policy`, or a member of one together with one of its identifiers.
///
/// The caller is responsible for keeping the arity within reach of a power set.
pub fn power_set_sweep(
    relation: &RelationSchema,
    policy: &PolicySet,
    families: &IdentifierFamilies,
    execution: Execution,
) -> PowerSetSweep {
    let frame = Frame::new(relation);
    let mut forbidden = Vec::new();
    for set in policy.sets() {
        if let Some(m) = frame.mask(set.members()) {
            forbidden.push(m);
        }
        for attr in set.members().iter() {
            for identifier in families.get(attr) {
                if let Some(m) = frame.mask(&identifier.with(attr)) {
                    forbidden.push(m);
                }
            }
        }
    }
    let mut alive = vec![true; 1usize << frame.len()];
    let removed = execution.for_chunks(&mut alive, CHUNK, |start, chunk| {
        let mut removed = 0u64;
        for (offset, slot) in chunk.iter_mut().enumerate() {
            let z = (start + offset) as u64;
            if forbidden.iter().any(|&f| f & !z == 0) {
                *slot = false;
                removed += 1;
            }
        }
        removed
    });
    PowerSetSweep {
        arity: frame.len(),
        alive,
        eliminated: removed.into_iter().sum(),
    }
}

/// Survivors with no surviving strict superset.
///
/// Elimination is upward closed, so the survivors form a down-set and a
/// survivor is maximal exactly when no one-attribute extension survives.
pub(crate) fn maximal_survivors(sweep: &PowerSetSweep) -> Vec<u64> {
    let n = sweep.arity;
    sweep
        .survivors()
        .filter(|&z| (0..n).all(|i| z >> i & 1 == 1 || !sweep.alive[(z | 1 << i) as usize]))
        .collect()
}

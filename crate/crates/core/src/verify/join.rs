//! Join closure of a view layer.
//!
//! Two attribute sets `P` and `Q` are joined on their maximal correspondence:
//! shared attributes plus foreign-key partners whose link survives in `F'`. The
//! join only counts when it is lossless, i.e. one side's join attributes
//! determine that whole side.

use std::collections::HashMap;

use crate::attrset::AttrSet;
use crate::exec::Execution;
use crate::fd::closure;
use crate::schema::LogicalSchema;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JoinOrigin {
    View(String),
    Join {
        left: usize,
        right: usize,
        on_left: AttrSet,
        on_right: AttrSet,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinedSet {
    pub attributes: AttrSet,
    pub origin: JoinOrigin,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinClosure {
    /// Views first, then joins in discovery order; indices in origins refer here.
    pub sets: Vec<JoinedSet>,
    /// False when the cap stopped the search before a fixpoint.
    pub complete: bool,
}

impl JoinClosure {
    /// The chain of joins that produced set `i`, as indices in build order.
    pub fn trace(&self, i: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![i];
        while let Some(j) = stack.pop() {
            if out.contains(&j) {
                continue;
            }
            out.push(j);
            if let JoinOrigin::Join { left, right, .. } = self.sets[j].origin {
                stack.push(left);
                stack.push(right);
            }
        }
        out.sort_unstable();
        out
    }
}

/// The maximal correspondence `(J_P, J_Q)` between `p` and `q`, or `None` when they share nothing.
pub fn correspondence(layer: &LogicalSchema, p: &AttrSet, q: &AttrSet) -> Option<(AttrSet, AttrSet)> {
    let shared = p.intersection(q);
    let mut jp = shared.clone();
    let mut jq = shared;
    for &(a, b) in layer.links() {
        if !linked_in(layer, a, b) {
            continue;
        }
        for (x, y) in [(a, b), (b, a)] {
            if p.contains(x) && q.contains(y) {
                jp.insert(x);
                jq.insert(y);
            }
        }
    }
    (!jp.is_empty()).then_some((jp, jq))
}

fn linked_in(layer: &LogicalSchema, a: crate::attrset::AttrId, b: crate::attrset::AttrId) -> bool {
    let has = |x, y| {
        layer
            .fds()
            .iter()
            .any(|fd| fd.rhs() == y && fd.lhs().len() == 1 && fd.lhs().contains(x))
    };
    has(a, b) && has(b, a)
}

/// Whether joining `p` on `jp` with `q` on `jq` is lossless under the layer's dependencies.
pub fn join_on(layer: &LogicalSchema, p: &AttrSet, jp: &AttrSet, q: &AttrSet, jq: &AttrSet) -> bool {
    if jp.is_empty() || jq.is_empty() || !jp.is_subset(p) || !jq.is_subset(q) {
        return false;
    }
    closure(jp, layer).is_superset(p) || closure(jq, layer).is_superset(q)
}

/// The correspondence of `p` and `q` when joining on it is lossless.
pub fn meaningful_join(layer: &LogicalSchema, p: &AttrSet, q: &AttrSet) -> Option<(AttrSet, AttrSet)> {
    correspondence(layer, p, q).filter(|(jp, jq)| join_on(layer, p, jp, q, jq))
}

/// Every attribute set reachable from the views by lossless joins, up to `max_sets` sets.
pub fn join_closure(layer: &LogicalSchema, max_sets: usize, execution: Execution) -> JoinClosure {
    let mut sets: Vec<JoinedSet> = Vec::new();
    let mut index: HashMap<AttrSet, usize> = HashMap::new();
    for rel in layer.relations() {
        if !index.contains_key(rel.attributes()) {
            index.insert(rel.attributes().clone(), sets.len());
            sets.push(JoinedSet {
                attributes: rel.attributes().clone(),
                origin: JoinOrigin::View(rel.name().to_string()),
            });
        }
    }
    let mut start = 0;
    loop {
        let end = sets.len();
        if start == end {
            return JoinClosure { sets, complete: true };
        }
        let pairs: Vec<(usize, usize)> = (start..end).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
        let found = execution.map(&pairs, |&(i, j)| {
            let (p, q) = (&sets[i].attributes, &sets[j].attributes);
            if p.is_subset(q) || q.is_subset(p) {
                return None;
            }
            meaningful_join(layer, p, q).map(|(jp, jq)| (p.union(q), jp, jq))
        });
        for ((i, j), hit) in pairs.into_iter().zip(found) {
            let Some((attributes, on_left, on_right)) = hit else {
                continue;
            };
            if index.contains_key(&attributes) {
                continue;
            }
            if sets.len() >= max_sets {
                return JoinClosure { sets, complete: false };
            }
            index.insert(attributes.clone(), sets.len());
            sets.push(JoinedSet {
                attributes,
                origin: JoinOrigin::Join {
                    left: i,
                    right: j,
                    on_left,
                    on_right,
                },
            });
        }
        start = end;
    }
}

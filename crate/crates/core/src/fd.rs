//! Reasoning over functional dependencies.
//!
//! `F⁺` is never materialized. Every membership question is answered through
//! [`closure`], and "partial" means that some proper subset of the left-hand
//! side already determines the right-hand side.

use itertools::Itertools;

use crate::attrset::{minimize, AttrId, AttrSet};
use crate::error::{Error, Result};
use crate::schema::{FunctionalDependency, LogicalSchema};

/// Counter-based attribute closure (linear in the total size of `F`).
#[derive(Debug)]
pub(crate) struct ClosureIndex {
    width: usize,
    lhs_len: Vec<u32>,
    rhs: Vec<AttrId>,
    /// For every attribute, the dependencies whose left-hand side mentions it.
    uses: Vec<Vec<u32>>,
}

impl ClosureIndex {
    pub(crate) fn new(width: usize, fds: &[FunctionalDependency]) -> Self {
        let mut uses = vec![Vec::new(); width];
        let mut lhs_len = Vec::with_capacity(fds.len());
        let mut rhs = Vec::with_capacity(fds.len());
        for (i, fd) in fds.iter().enumerate() {
            lhs_len.push(fd.lhs().len() as u32);
            rhs.push(fd.rhs());
            for a in fd.lhs().iter() {
                uses[a.index()].push(i as u32);
            }
        }
        ClosureIndex {
            width,
            lhs_len,
            rhs,
            uses,
        }
    }

    pub(crate) fn closure(&self, seed: &AttrSet) -> AttrSet {
        debug_assert_eq!(seed.width(), self.width);
        let mut remaining = self.lhs_len.clone();
        let mut result = seed.clone();
        let mut stack: Vec<AttrId> = seed.iter().collect();
        while let Some(a) = stack.pop() {
            for &fd in &self.uses[a.index()] {
                let left = &mut remaining[fd as usize];
                *left -= 1;
                if *left == 0 {
                    let b = self.rhs[fd as usize];
                    if result.insert(b) {
                        stack.push(b);
                    }
                }
            }
        }
        result
    }

    /// Attributes that occur on some left-hand side; only these can be part of a minimal determinant.
    pub(crate) fn determinant_candidates(&self) -> AttrSet {
        let ids = (0..self.width).filter(|&i| !self.uses[i].is_empty()).map(AttrId);
        AttrSet::from_ids(self.width, ids)
    }
}

fn check_universe(schema: &LogicalSchema, set: &AttrSet) -> Result<()> {
    match set.difference(schema.universe()).first() {
        Some(id) => Err(Error::OutsideUniverse(schema.attribute(id).dotted())),
        None => Ok(()),
    }
}

/// `X⁺`: the least superset of `x` closed under every dependency of the schema.
pub fn attribute_closure(x: &AttrSet, schema: &LogicalSchema) -> Result<AttrSet> {
    check_universe(schema, x)?;
    Ok(closure(x, schema))
}

/// Unchecked variant of [`attribute_closure`].
pub fn closure(x: &AttrSet, schema: &LogicalSchema) -> AttrSet {
    schema.closure_index().closure(x)
}

/// `true` iff `T ⊆ X⁺`.
pub fn determines(x: &AttrSet, target: &AttrSet, schema: &LogicalSchema) -> bool {
    target.is_subset(&closure(x, schema))
}

/// Membership of `x → a` in `F⁺`, excluding reflexive and partial dependencies.
pub fn fd_holds(x: &AttrSet, a: AttrId, schema: &LogicalSchema) -> Result<bool> {
    check_universe(schema, &x.with(a))?;
    Ok(fd_holds_unchecked(x, a, schema))
}

pub(crate) fn fd_holds_unchecked(x: &AttrSet, a: AttrId, schema: &LogicalSchema) -> bool {
    if x.contains(a) || !closure(x, schema).contains(a) {
        return false;
    }
    // Closure is monotone, so only the maximal proper subsets need checking.
    x.iter().all(|b| !closure(&x.without(b), schema).contains(a))
}

/// `A₁ ⇉ A₂`: `A₁ → A₂` is in `F⁺`, is not reflexive (`A₂ ⊄ A₁`) and no proper
/// subset of `A₁` determines all of `A₂`.
pub fn inferable(a1: &AttrSet, a2: &AttrSet, schema: &LogicalSchema) -> bool {
    if a2.is_empty() || a2.is_subset(a1) || !determines(a1, a2, schema) {
        return false;
    }
    a1.iter().all(|b| !determines(&a1.without(b), a2, schema))
}

/// How far identifier enumeration may go.
///
/// With `max_size: None` (the default) enumeration is exact. A bound only takes
/// effect when the universe is larger than [`EXHAUSTIVE_UNIVERSE`]; smaller
/// schemas are always searched exhaustively.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IdentifierSearch {
    pub max_size: Option<usize>,
}

/// Universes up to this size are always searched exhaustively.
pub const EXHAUSTIVE_UNIVERSE: usize = 16;

impl IdentifierSearch {
    pub fn exact() -> Self {
        IdentifierSearch { max_size: None }
    }

    pub fn bounded(max_size: usize) -> Self {
        IdentifierSearch {
            max_size: Some(max_size.max(1)),
        }
    }

    fn bound_for(&self, schema: &LogicalSchema) -> Option<usize> {
        match self.max_size {
            Some(k) if schema.universe().len() > EXHAUSTIVE_UNIVERSE => Some(k),
            _ => None,
        }
    }
}

/// Minimal identifier sets of one attribute or of an attribute set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentifierFamily {
    pub owner: AttrSet,
    /// ⊆-minimal identifiers in lexicographic order.
    pub identifiers: Vec<AttrSet>,
    /// False when a size bound cut the search short.
    pub exact: bool,
}

impl IdentifierFamily {
    pub fn is_empty(&self) -> bool {
        self.identifiers.is_empty()
    }

    pub fn len(&self) -> usize {
        self.identifiers.len()
    }
}

/// `i_α`: all minimal `x` with `α ∉ x` and `x → α ∈ F⁺`.
pub fn minimal_identifier_sets(
    a: AttrId,
    schema: &LogicalSchema,
    search: IdentifierSearch,
) -> IdentifierFamily {
    let owner = AttrSet::singleton(schema.width(), a);
    let (identifiers, exact) = match search.bound_for(schema) {
        None => (minimal_determinants(&owner, schema), true),
        Some(k) => (bounded_determinants(&owner, schema, k), false),
    };
    let identifiers = identifiers.into_iter().filter(|x| !x.contains(a)).collect();
    IdentifierFamily {
        owner,
        identifiers,
        exact,
    }
}

/// `I_A`: the minimal sets that identify every member of `A`, i.e. the minimal
/// elements of `⋂_{α∈A} i_α`. Such sets are disjoint from `A`.
pub fn identifier_sets_of_set(
    a: &AttrSet,
    schema: &LogicalSchema,
    search: IdentifierSearch,
) -> IdentifierFamily {
    let (all, exact) = match search.bound_for(schema) {
        None => (minimal_determinants(a, schema), true),
        Some(k) => (bounded_determinants(a, schema, k), false),
    };
    IdentifierFamily {
        owner: a.clone(),
        identifiers: all.into_iter().filter(|x| x.is_disjoint(a)).collect(),
        exact,
    }
}

/// An attribute is identifiable when some relation holds it together with one of its identifiers.
pub fn identifiable(a: AttrId, schema: &LogicalSchema) -> bool {
    // A relation R ∋ a contains an identifier of `a` exactly when a ∈ (R ∖ {a})⁺.
    schema
        .relations()
        .iter()
        .filter(|r| r.attributes().contains(a))
        .any(|r| closure(&r.attributes().without(a), schema).contains(a))
}

/// All ⊆-minimal sets `x` with `target ⊆ x⁺`, target itself included when minimal.
///
/// Key enumeration in the style of Lucchesi and Osborn, seeded with `target`:
/// for every found set `K` and dependency `X → b` with `b ∈ K`, the set
/// `X ∪ (K ∖ {b})` also determines the target; if it contains no known
/// determinant it is shrunk to a new minimal one. The fixpoint holds every
/// minimal determinant.
fn minimal_determinants(target: &AttrSet, schema: &LogicalSchema) -> Vec<AttrSet> {
    let seed = shrink(target.clone(), target, schema);
    let mut found = vec![seed];
    let mut next = 0;
    while next < found.len() {
        let key = found[next].clone();
        next += 1;
        for fd in schema.fds() {
            if !key.contains(fd.rhs()) {
                continue;
            }
            let mut candidate = key.without(fd.rhs());
            candidate.union_with(fd.lhs());
            if found.iter().any(|k| k.is_subset(&candidate)) {
                continue;
            }
            found.push(shrink(candidate, target, schema));
        }
    }
    found.sort();
    found
}

/// Drops members of `set` one at a time while it still determines `target`.
fn shrink(mut set: AttrSet, target: &AttrSet, schema: &LogicalSchema) -> AttrSet {
    for a in set.to_vec() {
        let smaller = set.without(a);
        if determines(&smaller, target, schema) {
            set = smaller;
        }
    }
    set
}

/// Level-wise search for determinants of `target` of size at most `max_size`.
fn bounded_determinants(target: &AttrSet, schema: &LogicalSchema, max_size: usize) -> Vec<AttrSet> {
    let mut found = Vec::new();
    if target.len() <= max_size {
        found.push(shrink(target.clone(), target, schema));
    }
    let candidates = schema
        .closure_index()
        .determinant_candidates()
        .union(target)
        .to_vec();
    for size in 1..=max_size.min(candidates.len()) {
        for combo in candidates.iter().copied().combinations(size) {
            let set = AttrSet::from_ids(schema.width(), combo);
            if found.iter().any(|f: &AttrSet| f.is_subset(&set)) {
                continue;
            }
            if determines(&set, target, schema) {
                found.push(set);
            }
        }
    }
    minimize(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// id and email keys; email determines only name and surname.
    fn person() -> LogicalSchema {
        LogicalSchema::builder()
            .relation("P", &["id", "email", "name", "surname", "age"], &["id"])
            .fd(&["P.email"], "P.name")
            .fd(&["P.email"], "P.surname")
            .build()
            .unwrap()
    }

    #[test]
    fn closure_basics() {
        let s = person();
        let email = s.attr_set(&["P.email"]).unwrap();
        assert_eq!(
            closure(&email, &s),
            s.attr_set(&["P.email", "P.name", "P.surname"]).unwrap()
        );
        assert!(closure(&s.empty_set(), &s).is_empty());
        let age = s.attr_set(&["P.age"]).unwrap();
        assert_eq!(closure(&age, &s), age);
    }

    #[test]
    fn fd_holds_rejects_reflexive_and_partial() {
        let s = person();
        let id = s.resolve("P.id").unwrap();
        let name = s.resolve("P.name").unwrap();
        assert!(fd_holds(&s.attr_set(&["P.id"]).unwrap(), name, &s).unwrap());
        assert!(!fd_holds(&s.attr_set(&["P.id"]).unwrap(), id, &s).unwrap());
        assert!(!fd_holds(&s.attr_set(&["P.id", "P.age"]).unwrap(), name, &s).unwrap());
    }

    #[test]
    fn identifiers_of_name() {
        let s = person();
        let fam = minimal_identifier_sets(s.resolve("P.name").unwrap(), &s, IdentifierSearch::exact());
        assert_eq!(
            fam.identifiers,
            vec![s.attr_set(&["P.id"]).unwrap(), s.attr_set(&["P.email"]).unwrap()]
        );
        let pair = s.attr_set(&["P.name", "P.surname"]).unwrap();
        let fam = identifier_sets_of_set(&pair, &s, IdentifierSearch::exact());
        assert_eq!(fam.identifiers.len(), 2);
        let none = minimal_identifier_sets(s.resolve("P.id").unwrap(), &s, IdentifierSearch::exact());
        assert!(none.is_empty());
    }

    #[test]
    fn alternative_determinants_are_found_through_non_key_dependencies() {
        // a -> t, b -> t, {c, d} -> a: the seed step alone only sees a and b.
        let s = LogicalSchema::builder()
            .relation::<&str>("R", &["a", "b", "c", "d", "t"], &[])
            .fd(&["R.a"], "R.t")
            .fd(&["R.b"], "R.t")
            .fd(&["R.c", "R.d"], "R.a")
            .build()
            .unwrap();
        let fam = minimal_identifier_sets(s.resolve("R.t").unwrap(), &s, IdentifierSearch::exact());
        assert_eq!(
            fam.identifiers,
            vec![
                s.attr_set(&["R.a"]).unwrap(),
                s.attr_set(&["R.b"]).unwrap(),
                s.attr_set(&["R.c", "R.d"]).unwrap(),
            ]
        );
    }

    #[test]
    fn set_identifiers_may_combine_attributes() {
        let s = LogicalSchema::builder()
            .relation::<&str>("R", &["p", "q", "x", "y"], &[])
            .fd(&["R.p"], "R.x")
            .fd(&["R.q"], "R.y")
            .build()
            .unwrap();
        let xy = s.attr_set(&["R.x", "R.y"]).unwrap();
        let fam = identifier_sets_of_set(&xy, &s, IdentifierSearch::exact());
        assert_eq!(fam.identifiers, vec![s.attr_set(&["R.p", "R.q"]).unwrap()]);
    }

    #[test]
    fn inferability() {
        let s = person();
        let id = s.attr_set(&["P.id"]).unwrap();
        let rest = s.attr_set(&["P.name", "P.age"]).unwrap();
        assert!(inferable(&id, &rest, &s));
        assert!(!inferable(&id, &id, &s));
        let padded = s.attr_set(&["P.id", "P.email"]).unwrap();
        assert!(!inferable(&padded, &rest, &s));
    }

    #[test]
    fn identifiable_needs_colocated_identifier() {
        let s = person();
        assert!(identifiable(s.resolve("P.age").unwrap(), &s));
        assert!(!identifiable(s.resolve("P.id").unwrap(), &s));
    }

    #[test]
    fn bounded_search_matches_exact_for_small_identifiers() {
        let s = person();
        let name = s.resolve("P.name").unwrap();
        let exact = minimal_identifier_sets(name, &s, IdentifierSearch::exact());
        let target = AttrSet::singleton(s.width(), name);
        let bounded: Vec<AttrSet> = bounded_determinants(&target, &s, 2)
            .into_iter()
            .filter(|x| !x.contains(name))
            .collect();
        assert_eq!(exact.identifiers, bounded);
    }
}

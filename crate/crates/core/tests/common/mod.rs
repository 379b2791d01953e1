//! Brute-force reference implementations shared by the integration tests.
//!
//! Everything here works from first principles over explicit subset
//! enumeration, so the universes must stay small (about 14 attributes at most).

#![allow(dead_code)]

use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use secview::attrset::{AttrId, AttrSet};
use secview::document::{load_policy, load_schema};
use secview::schema::{LogicalSchema, PolicySet};

pub fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn retail() -> (LogicalSchema, PolicySet) {
    let schema = load_schema(&fixture("retail.json")).unwrap();
    let policy = load_policy(&fixture("retail_policy.json"), &schema).unwrap();
    (schema, policy)
}

pub fn student() -> (LogicalSchema, PolicySet) {
    let schema = load_schema(&fixture("student.json")).unwrap();
    let policy = load_policy(&fixture("student_policy.json"), &schema).unwrap();
    (schema, policy)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn set(schema: &LogicalSchema, names: &[&str]) -> AttrSet {
    schema.attr_set(names).unwrap()
}

/// Dependencies as plain `(lhs, rhs)` pairs.
pub fn fd_pairs(schema: &LogicalSchema) -> Vec<(AttrSet, AttrId)> {
    schema.fds().iter().map(|fd| (fd.lhs().clone(), fd.rhs())).collect()
}

/// Fixpoint closure: apply every dependency until nothing changes.
pub fn naive_closure(x: &AttrSet, fds: &[(AttrSet, AttrId)]) -> AttrSet {
    let mut out = x.clone();
    loop {
        let mut changed = false;
        for (lhs, rhs) in fds {
            if lhs.is_subset(&out) && !out.contains(*rhs) {
                out.insert(*rhs);
                changed = true;
            }
        }
        if !changed {
            return out;
        }
    }
}

/// Every subset of `base`.
pub fn subsets(base: &AttrSet) -> Vec<AttrSet> {
    let ids = base.to_vec();
    assert!(ids.len() <= 20, "subset enumeration over {} attributes", ids.len());
    (0u32..1 << ids.len())
        .map(|m| {
            AttrSet::from_ids(
                base.width(),
                ids.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, &a)| a),
            )
        })
        .collect()
}

/// Strict subsets of `x`, by enumeration.
pub fn proper_subsets(x: &AttrSet) -> Vec<AttrSet> {
    subsets(x).into_iter().filter(|s| s != x).collect()
}

/// `x → a ∈ F⁺` with reflexive and partial dependencies excluded, checked against every proper subset.
pub fn brute_fd_holds(x: &AttrSet, a: AttrId, fds: &[(AttrSet, AttrId)]) -> bool {
    !x.contains(a)
        && naive_closure(x, fds).contains(a)
        && proper_subsets(x).iter().all(|y| !naive_closure(y, fds).contains(a))
}

pub fn brute_inferable(a1: &AttrSet, a2: &AttrSet, fds: &[(AttrSet, AttrId)]) -> bool {
    !a2.is_empty()
        && !a2.is_subset(a1)
        && a2.is_subset(&naive_closure(a1, fds))
        && proper_subsets(a1).iter().all(|y| !a2.is_subset(&naive_closure(y, fds)))
}

fn minimal(mut family: Vec<AttrSet>) -> Vec<AttrSet> {
    let copy = family.clone();
    family.retain(|s| !copy.iter().any(|o| o.is_strict_subset(s)));
    family.sort();
    family.dedup();
    family
}

/// Every (not only minimal) identifier of `a`: `x` with `a ∉ x` and `a ∈ x⁺`.
pub fn full_identifier_family(a: AttrId, schema: &LogicalSchema) -> Vec<AttrSet> {
    let fds = fd_pairs(schema);
    subsets(schema.universe())
        .into_iter()
        .filter(|x| !x.contains(a) && naive_closure(x, &fds).contains(a))
        .collect()
}

pub fn brute_minimal_identifiers(a: AttrId, schema: &LogicalSchema) -> Vec<AttrSet> {
    minimal(full_identifier_family(a, schema))
}

/// Minimal `x` disjoint from `target` with `target ⊆ x⁺`.
pub fn brute_set_identifiers(target: &AttrSet, schema: &LogicalSchema) -> Vec<AttrSet> {
    let fds = fd_pairs(schema);
    minimal(
        subsets(schema.universe())
            .into_iter()
            .filter(|x| x.is_disjoint(target) && target.is_subset(&naive_closure(x, &fds)))
            .collect(),
    )
}

/// Some relation holds `a` together with one of its identifiers.
pub fn brute_identifiable(a: AttrId, schema: &LogicalSchema) -> bool {
    let ids = full_identifier_family(a, schema);
    schema
        .relations()
        .iter()
        .any(|r| ids.iter().any(|x| x.with(a).is_subset(r.attributes())))
}

/// The secure-decomposition conditions checked directly against full identifier families:
/// no view holds a whole policy set, or a member of one with any of its identifiers.
pub fn admissible(view: &AttrSet, policy: &PolicySet, full: &dyn Fn(AttrId) -> Vec<AttrSet>) -> bool {
    policy.sets().iter().all(|s| {
        !s.members().is_subset(view)
            && s
                .members()
                .iter()
                .filter(|&a| view.contains(a))
                .all(|a| full(a).iter().all(|x| !x.with(a).is_subset(view)))
    })
}

/// Maximal admissible subsets of every relation, by enumeration of all subsets.
pub fn brute_decomposition(
    schema: &LogicalSchema,
    policy: &PolicySet,
) -> std::collections::BTreeMap<String, Vec<AttrSet>> {
    let full = |a: AttrId| full_identifier_family(a, schema);
    schema
        .relations()
        .iter()
        .map(|r| {
            let ok: Vec<AttrSet> = subsets(r.attributes())
                .into_iter()
                .filter(|v| admissible(v, policy, &full))
                .collect();
            let mut maximal: Vec<AttrSet> = ok
                .iter()
                .filter(|v| !ok.iter().any(|o| v.is_strict_subset(o)))
                .cloned()
                .collect();
            maximal.sort();
            (r.name().to_string(), maximal)
        })
        .collect()
}

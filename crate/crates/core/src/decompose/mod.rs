//! Secure decomposition of a logical schema against a policy.
//!
//! Each base relation is split into the maximal subsets of its attributes that
//! contain neither a whole security dependent set nor a member of one together
//! with any of that member's identifiers. [`decompose_reference`] follows the
//! textbook power-set procedure literally; [`decompose`] enumerates the same
//! maximal sets directly as maximal independent sets of the forbidden-set
//! hypergraph.

mod lint;
mod mis;
mod reference;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use crate::attrset::{AttrId, AttrSet};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::fd::{minimal_identifier_sets, IdentifierSearch};
use crate::schema::{FunctionalDependency, LogicalSchema, PolicySet, RelationSchema};
use crate::verify::restrict_fds;

pub use lint::{lint_policy, Diagnostic, Severity};
pub use reference::{power_set_sweep, PowerSetSweep};

/// Largest relation the power-set reference path accepts.
pub const REFERENCE_ARITY_LIMIT: usize = 22;

/// Largest relation the optimized path accepts (attributes are packed into a `u64`).
pub const OPTIMIZED_ARITY_LIMIT: usize = 64;

#[derive(Clone, Copy, Debug)]
pub struct DecomposeOptions {
    pub identifiers: IdentifierSearch,
    pub execution: Execution,
    pub reference_arity_limit: usize,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions {
            identifiers: IdentifierSearch::default(),
            execution: Execution::default(),
            reference_arity_limit: REFERENCE_ARITY_LIMIT,
        }
    }
}

/// Minimal identifier families `i_α` for every attribute mentioned by a policy.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IdentifierFamilies {
    families: BTreeMap<AttrId, Vec<AttrSet>>,
}

impl IdentifierFamilies {
    pub fn compute(
        schema: &LogicalSchema,
        policy: &PolicySet,
        search: IdentifierSearch,
        execution: Execution,
    ) -> Self {
        let members = policy.members(schema.width()).to_vec();
        let computed = execution.map(&members, |&a| {
            minimal_identifier_sets(a, schema, search).identifiers
        });
        IdentifierFamilies {
            families: members.into_iter().zip(computed).collect(),
        }
    }

    /// Wraps precomputed families, e.g. exhaustively enumerated ones.
    pub fn from_map(families: BTreeMap<AttrId, Vec<AttrSet>>) -> Self {
        IdentifierFamilies { families }
    }

    pub fn get(&self, a: AttrId) -> &[AttrSet] {
        self.families.get(&a).map(Vec::as_slice).unwrap_or(&[])
    }

    /// `μ` restricted to the attributes in `policy`.
    pub fn max_len(&self) -> usize {
        self.families.values().map(Vec::len).max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ForbiddenOrigin {
    /// The security dependent set itself.
    WholeSet { sds: usize },
    /// A member of the set together with one of its identifiers.
    MemberWithIdentifier {
        sds: usize,
        attr: AttrId,
        identifier: AttrSet,
    },
}

/// An attribute combination no output view may contain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForbiddenSet {
    pub members: AttrSet,
    pub origin: ForbiddenOrigin,
}

/// The forbidden combinations that fit inside `relation`, reduced to an antichain.
pub fn forbidden_sets_for(
    relation: &RelationSchema,
    policy: &PolicySet,
    families: &IdentifierFamilies,
) -> Vec<ForbiddenSet> {
    let attrs = relation.attributes();
    let mut all = Vec::new();
    for (sds, set) in policy.sets().iter().enumerate() {
        if set.members().is_subset(attrs) {
            all.push(ForbiddenSet {
                members: set.members().clone(),
                origin: ForbiddenOrigin::WholeSet { sds },
            });
        }
        for attr in set.members().iter().filter(|&a| attrs.contains(a)) {
            for identifier in families.get(attr) {
                let members = identifier.with(attr);
                if members.is_subset(attrs) {
                    all.push(ForbiddenSet {
                        members,
                        origin: ForbiddenOrigin::MemberWithIdentifier {
                            sds,
                            attr,
                            identifier: identifier.clone(),
                        },
                    });
                }
            }
        }
    }
    all.sort_by(|a, b| {
        a.members
            .len()
            .cmp(&b.members.len())
            .then_with(|| a.members.cmp(&b.members))
            .then_with(|| a.origin.cmp(&b.origin))
    });
    let mut kept: Vec<ForbiddenSet> = Vec::with_capacity(all.len());
    for f in all {
        if !kept.iter().any(|k| k.members.is_subset(&f.members)) {
            kept.push(f);
        }
    }
    kept.sort_by(|a, b| a.members.cmp(&b.members));
    kept
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct View {
    pub name: String,
    pub attributes: AttrSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationDecomposition {
    pub base: String,
    pub views: Vec<View>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DecompositionStats {
    /// Number of relations.
    pub pi: usize,
    /// Largest relation arity.
    pub epsilon: usize,
    /// Largest security dependent set.
    pub eta: usize,
    /// Largest identifier family among policy attributes.
    pub mu: usize,
    /// Power-set members built (reference) or search nodes visited (optimized).
    pub subsets_generated: u64,
    /// Subsets removed by the forbidden-set checks (reference) or pruned branches (optimized).
    pub subsets_eliminated: u64,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub relations: Vec<RelationDecomposition>,
    /// `F'`: the original dependencies the view layer still realizes.
    pub derived_fds: Vec<FunctionalDependency>,
    pub stats: DecompositionStats,
}

impl Decomposition {
    /// Every view as a keyless relation schema over the original attribute table.
    pub fn view_schemas(&self) -> Vec<RelationSchema> {
        self.relations
            .iter()
            .flat_map(|r| {
                r.views
                    .iter()
                    .map(|v| RelationSchema::view(v.name.clone(), r.base.clone(), v.attributes.clone()))
            })
            .collect()
    }

    /// Maximal attribute sets per base relation, without names.
    pub fn families(&self) -> BTreeMap<String, Vec<AttrSet>> {
        self.relations
            .iter()
            .map(|r| {
                let mut sets: Vec<AttrSet> = r.views.iter().map(|v| v.attributes.clone()).collect();
                sets.sort();
                (r.base.clone(), sets)
            })
            .collect()
    }

    /// Groups an arbitrary view layer by base relation, in order of first appearance.
    pub fn from_views(views: &[RelationSchema], original: &LogicalSchema) -> Self {
        let mut relations: Vec<RelationDecomposition> = Vec::new();
        for v in views {
            let view = View {
                name: v.name().to_string(),
                attributes: v.attributes().clone(),
            };
            match relations.iter_mut().find(|r| r.base == v.base()) {
                Some(r) => r.views.push(view),
                None => relations.push(RelationDecomposition {
                    base: v.base().to_string(),
                    views: vec![view],
                }),
            }
        }
        Decomposition {
            relations,
            derived_fds: restrict_fds(views, original).fds().to_vec(),
            stats: DecompositionStats::default(),
        }
    }

    /// The decomposed schema `(R', F')`.
    pub fn view_layer(&self, original: &LogicalSchema) -> LogicalSchema {
        restrict_fds(&self.view_schemas(), original)
    }
}

pub(crate) struct RelationOutcome {
    pub sets: Vec<AttrSet>,
    pub generated: u64,
    pub eliminated: u64,
}

/// Local bit positions for one relation's attributes.
pub(crate) struct Frame {
    ids: Vec<AttrId>,
    width: usize,
}

impl Frame {
    pub(crate) fn new(relation: &RelationSchema) -> Self {
        Frame {
            ids: relation.attributes().to_vec(),
            width: relation.attributes().width(),
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.ids.len()
    }

    /// Local mask of `set`; `None` when `set` reaches outside the relation.
    pub(crate) fn mask(&self, set: &AttrSet) -> Option<u64> {
        let mut mask = 0u64;
        for a in set.iter() {
            let pos = self.ids.binary_search(&a).ok()?;
            mask |= 1 << pos;
        }
        Some(mask)
    }

    pub(crate) fn expand(&self, mask: u64) -> AttrSet {
        let ids = (0..self.ids.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| self.ids[i]);
        AttrSet::from_ids(self.width, ids)
    }
}

fn assemble(
    schema: &LogicalSchema,
    policy: &PolicySet,
    families: &IdentifierFamilies,
    outcomes: Vec<RelationOutcome>,
    started: Instant,
) -> Decomposition {
    let mut stats = DecompositionStats {
        pi: schema.relations().len(),
        epsilon: schema.relations().iter().map(RelationSchema::arity).max().unwrap_or(0),
        eta: policy.sets().iter().map(|s| s.len()).max().unwrap_or(0),
        mu: families.max_len(),
        ..DecompositionStats::default()
    };
    let mut relations = Vec::with_capacity(outcomes.len());
    for (rel, mut outcome) in schema.relations().iter().zip(outcomes) {
        stats.subsets_generated += outcome.generated;
        stats.subsets_eliminated += outcome.eliminated;
        outcome.sets.sort();
        let views = outcome
            .sets
            .into_iter()
            .enumerate()
            .map(|(i, attributes)| View {
                name: format!("{}_{}", rel.name(), i + 1),
                attributes,
            })
            .collect();
        relations.push(RelationDecomposition {
            base: rel.name().to_string(),
            views,
        });
    }
    let mut decomposition = Decomposition {
        relations,
        derived_fds: Vec::new(),
        stats,
    };
    decomposition.derived_fds = decomposition.view_layer(schema).fds().to_vec();
    decomposition.stats.elapsed = started.elapsed();
    decomposition
}

fn check_arity(schema: &LogicalSchema, limit: usize) -> Result<()> {
    match schema.relations().iter().find(|r| r.arity() > limit) {
        Some(r) => Err(Error::ArityLimit {
            relation: r.name().to_string(),
            arity: r.arity(),
            limit,
        }),
        None => Ok(()),
    }
}

/// Secure decomposition by direct enumeration of maximal admissible subsets.
pub fn decompose(
    schema: &LogicalSchema,
    policy: &PolicySet,
    options: &DecomposeOptions,
) -> Result<Decomposition> {
    let started = Instant::now();
    check_arity(schema, OPTIMIZED_ARITY_LIMIT)?;
    let families = IdentifierFamilies::compute(schema, policy, options.identifiers, options.execution);
    Ok(decompose_with(schema, policy, &families, options.execution, started))
}

/// [`decompose`] with caller-supplied identifier families.
pub fn decompose_with_families(
    schema: &LogicalSchema,
    policy: &PolicySet,
    families: &IdentifierFamilies,
    execution: Execution,
) -> Result<Decomposition> {
    check_arity(schema, OPTIMIZED_ARITY_LIMIT)?;
    Ok(decompose_with(schema, policy, families, execution, Instant::now()))
}

fn decompose_with(
    schema: &LogicalSchema,
    policy: &PolicySet,
    families: &IdentifierFamilies,
    execution: Execution,
    started: Instant,
) -> Decomposition {
    let outcomes = execution.map(schema.relations(), |rel| {
        let frame = Frame::new(rel);
        let edges: Vec<u64> = forbidden_sets_for(rel, policy, families)
            .iter()
            .filter_map(|f| frame.mask(&f.members))
            .collect();
        let found = mis::maximal_independent_sets(frame.len(), &edges);
        RelationOutcome {
            sets: found.sets.iter().map(|&m| frame.expand(m)).collect(),
            generated: found.nodes,
            eliminated: found.pruned,
        }
    });
    assemble(schema, policy, families, outcomes, started)
}

/// Secure decomposition by the power-set procedure: generate every subset of a
/// relation, drop the forbidden ones, keep the maximal survivors.
pub fn decompose_reference(
    schema: &LogicalSchema,
    policy: &PolicySet,
    options: &DecomposeOptions,
) -> Result<Decomposition> {
    let started = Instant::now();
    check_arity(schema, options.reference_arity_limit.min(REFERENCE_ARITY_LIMIT))?;
    let families = IdentifierFamilies::compute(schema, policy, options.identifiers, options.execution);
    let outcomes = schema
        .relations()
        .iter()
        .map(|rel| {
            let sweep = power_set_sweep(rel, policy, &families, options.execution);
            let frame = Frame::new(rel);
            RelationOutcome {
                sets: reference::maximal_survivors(&sweep)
                    .into_iter()
                    .map(|m| frame.expand(m))
                    .collect(),
                generated: sweep.generated(),
                eliminated: sweep.eliminated,
            }
        })
        .collect();
    Ok(assemble(schema, policy, &families, outcomes, started))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn student() -> (LogicalSchema, PolicySet) {
        let attrs = ["id", "email", "name", "surname", "address", "age", "gender"];
        let mut b = LogicalSchema::builder().relation("STUDENT", &attrs, &["id"]);
        for a in attrs.iter().filter(|&&a| a != "email") {
            b = b.fd(&["STUDENT.email"], &format!("STUDENT.{a}"));
        }
        let schema = b.build().unwrap();
        let policy =
            PolicySet::from_names(&schema, &[vec!["STUDENT.email", "STUDENT.gender"]]).unwrap();
        (schema, policy)
    }

    #[test]
    fn student_forbidden_sets() {
        let (schema, policy) = student();
        let families =
            IdentifierFamilies::compute(&schema, &policy, IdentifierSearch::exact(), Execution::Sequential);
        let forbidden = forbidden_sets_for(&schema.relations()[0], &policy, &families);
        let got: Vec<AttrSet> = forbidden.into_iter().map(|f| f.members).collect();
        let want = vec![
            schema.attr_set(&["STUDENT.id", "STUDENT.email"]).unwrap(),
            schema.attr_set(&["STUDENT.id", "STUDENT.gender"]).unwrap(),
            schema.attr_set(&["STUDENT.email", "STUDENT.gender"]).unwrap(),
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn both_paths_split_student_three_ways() {
        let (schema, policy) = student();
        let opts = DecomposeOptions::default();
        let fast = decompose(&schema, &policy, &opts).unwrap();
        let slow = decompose_reference(&schema, &policy, &opts).unwrap();
        assert_eq!(fast.families(), slow.families());
        assert_eq!(fast.relations[0].views.len(), 3);
        assert_eq!(slow.stats.subsets_generated, 128);
    }

    #[test]
    fn empty_policy_keeps_relations_whole() {
        let (schema, _) = student();
        let d = decompose(&schema, &PolicySet::empty(), &DecomposeOptions::default()).unwrap();
        assert_eq!(d.relations[0].views.len(), 1);
        assert_eq!(&d.relations[0].views[0].attributes, schema.relations()[0].attributes());
        assert_eq!(d.derived_fds, schema.fds());
    }

    #[test]
    fn relation_without_policy_attributes_has_no_forbidden_sets() {
        let schema = LogicalSchema::builder()
            .relation("A", &["k", "v"], &["k"])
            .relation("B", &["x", "y"], &["x"])
            .build()
            .unwrap();
        let policy = PolicySet::from_names(&schema, &[vec!["B.x", "B.y"]]).unwrap();
        let families =
            IdentifierFamilies::compute(&schema, &policy, IdentifierSearch::exact(), Execution::Sequential);
        assert!(forbidden_sets_for(&schema.relations()[0], &policy, &families).is_empty());
    }

    #[test]
    fn reference_rejects_wide_relations() {
        let attrs: Vec<String> = (0..23).map(|i| format!("a{i}")).collect();
        let schema = LogicalSchema::builder()
            .relation::<String>("W", &attrs, &[])
            .build()
            .unwrap();
        let err = decompose_reference(&schema, &PolicySet::empty(), &DecomposeOptions::default())
            .unwrap_err();
        assert_eq!(err.code(), "arity-limit-exceeded");
        assert!(decompose(&schema, &PolicySet::empty(), &DecomposeOptions::default()).is_ok());
    }
}

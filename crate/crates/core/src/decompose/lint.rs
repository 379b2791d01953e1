//! Policy diagnostics.

use itertools::Itertools;

use crate::attrset::AttrSet;
use crate::fd::{minimal_identifier_sets, IdentifierSearch};
use crate::schema::{LogicalSchema, PolicySet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Info,
    Warning,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Info => "info",
            Severity::Warning => "warning",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: &'static str,
    /// Index of the security dependent set in the policy.
    pub sds: usize,
    pub message: String,
    /// Attribute sets the diagnostic is about, e.g. unprotected pairs.
    pub subsets: Vec<AttrSet>,
}

/// Number of subsets with at least two members and strictly fewer than `k`.
fn unprotected_subsets(k: usize) -> u128 {
    (1u128 << k) - k as u128 - 2
}

/// Flags policy shapes that protect less than they appear to.
///
/// * a set with more than two members only hides the full combination; every
///   smaller combination of its members may still appear together in a view;
/// * a set that strictly contains another set of the policy adds nothing;
/// * a set that fits in no relation and whose members have no identifiers never
///   constrains the decomposition.
pub fn lint_policy(
    schema: &LogicalSchema,
    policy: &PolicySet,
    search: IdentifierSearch,
) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for (i, set) in policy.sets().iter().enumerate() {
        let members = set.members();
        let label = schema.render_set(members);
        if members.len() > 2 {
            let pairs: Vec<AttrSet> = members
                .to_vec()
                .into_iter()
                .tuple_combinations()
                .map(|(a, b)| AttrSet::from_ids(schema.width(), [a, b]))
                .collect();
            out.push(Diagnostic {
                severity: Severity::Warning,
                code: "unprotected-subsets",
                sds: i,
                message: format!(
                    "set {label} has {} members; {} proper subsets with two or more members, including {} pairs, stay unprotected",
                    members.len(),
                    unprotected_subsets(members.len()),
                    pairs.len()
                ),
                subsets: pairs,
            });
        }
        for (j, other) in policy.sets().iter().enumerate() {
            if j != i && other.members().is_strict_subset(members) {
                out.push(Diagnostic {
                    severity: Severity::Info,
                    code: "redundant-superset",
                    sds: i,
                    message: format!(
                        "set {label} contains set {} and adds no protection",
                        schema.render_set(other.members())
                    ),
                    subsets: vec![other.members().clone()],
                });
            }
        }
        let co_located = schema
            .relations()
            .iter()
            .any(|r| members.is_subset(r.attributes()));
        let identified = members
            .iter()
            .any(|a| !minimal_identifier_sets(a, schema, search).is_empty());
        if !co_located && !identified {
            out.push(Diagnostic {
                severity: Severity::Info,
                code: "no-effect",
                sds: i,
                message: format!(
                    "set {label} lies in no single relation and none of its members has an identifier"
                ),
                subsets: Vec::new(),
            });
        }
    }
    out
}

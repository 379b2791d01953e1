//! Security verification of a view layer against a policy.
//!
//! Two independent paths are offered. [`is_secure`] is the logical check: a set
//! is exposed when a view holds all of it, or when the view-layer dependencies
//! give its members a common identifier. The
//! [`join_closure`] oracle instead joins views wherever a join is lossless and
//! reports any reachable attribute set that covers a protected set. [`audit`]
//! runs both and records whether they agree.

mod join;

use crate::attrset::{AttrId, AttrSet};
use crate::exec::Execution;
use crate::fd::{identifier_sets_of_set, IdentifierSearch};
use crate::schema::{ForeignKeyLink, FunctionalDependency, LogicalSchema, PolicySet, RelationSchema};

pub use join::{correspondence, join_closure, join_on, meaningful_join, JoinClosure, JoinOrigin, JoinedSet};

/// Default cap on the number of distinct sets the join-closure oracle builds.
pub const DEFAULT_MAX_JOIN_SETS: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Secure,
    Insecure,
    /// No violation was found, but a search was cut short.
    Unverified,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Secure => "secure",
            Verdict::Insecure => "insecure",
            Verdict::Unverified => "unverified",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ViolationKind {
    /// One relation holds every member of the set.
    ContainedInRelation,
    /// The dependencies identify every member from a common attribute set.
    Inferable,
    /// A chain of lossless joins reaches an attribute set covering the set.
    JoinReachable,
}

impl ViolationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationKind::ContainedInRelation => "contained-in-relation",
            ViolationKind::Inferable => "inferable",
            ViolationKind::JoinReachable => "join-reachable",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Relation(String),
    Identifier(AttrSet),
    /// Index into [`JoinClosure::sets`].
    JoinedSet(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// Index of the security dependent set in the policy.
    pub sds: usize,
    pub kind: ViolationKind,
    pub witness: Witness,
}

/// Outcome of the logical check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicalCheck {
    pub violations: Vec<Violation>,
    /// False when identifier enumeration ran under a size bound.
    pub exact: bool,
}

impl LogicalCheck {
    pub fn verdict(&self) -> Verdict {
        if !self.violations.is_empty() {
            Verdict::Insecure
        } else if self.exact {
            Verdict::Secure
        } else {
            Verdict::Unverified
        }
    }
}

/// Outcome of the join-closure oracle.
#[derive(Clone, Debug)]
pub struct OracleCheck {
    pub closure: JoinClosure,
    pub violations: Vec<Violation>,
}

impl OracleCheck {
    pub fn verdict(&self) -> Verdict {
        if !self.violations.is_empty() {
            Verdict::Insecure
        } else if self.closure.complete {
            Verdict::Secure
        } else {
            Verdict::Unverified
        }
    }
}

#[derive(Clone, Debug)]
pub struct SecurityReport {
    pub verdict: Verdict,
    pub logical: LogicalCheck,
    pub oracle: OracleCheck,
    /// Whether both paths reached the same conclusion; `None` when either was inconclusive.
    pub consistent: Option<bool>,
}

/// Projects the dependencies of `original` onto `views`, giving the view layer `(R', F')`.
///
/// A dependency survives when all of its attributes sit in one view. The two
/// dependencies of a declared foreign-key pair survive when both endpoints are
/// present somewhere in the layer, since the key value is what the views share.
pub fn restrict_fds(views: &[RelationSchema], original: &LogicalSchema) -> LogicalSchema {
    let mut present = original.empty_set();
    for v in views {
        present.union_with(v.attributes());
    }
    let inside_view = |fd: &FunctionalDependency| {
        let attrs = fd.attributes();
        views.iter().any(|v| attrs.is_subset(v.attributes()))
    };
    let links: Vec<(AttrId, AttrId)> = original
        .links()
        .iter()
        .copied()
        .filter(|&(a, b)| present.contains(a) && present.contains(b))
        .collect();
    let link_fd = |fd: &FunctionalDependency| {
        fd.lhs().len() == 1 && {
            let a = fd.lhs().first().expect("nonempty lhs");
            links.iter().any(|&(x, y)| (x, y) == (a, fd.rhs()) || (y, x) == (a, fd.rhs()))
        }
    };
    let fds = original
        .fds()
        .iter()
        .filter(|fd| inside_view(fd) || link_fd(fd))
        .cloned()
        .collect();
    let foreign_keys: Vec<ForeignKeyLink> = original
        .foreign_keys()
        .iter()
        .filter(|fk| fk.pairs().all(|(a, b)| present.contains(a) && present.contains(b)))
        .cloned()
        .collect();
    LogicalSchema::assemble(original.table().clone(), views.to_vec(), fds, foreign_keys, links)
}

/// The logical check over a view layer `(R', F')`.
pub fn is_secure(layer: &LogicalSchema, policy: &PolicySet, search: IdentifierSearch) -> LogicalCheck {
    let mut violations = Vec::new();
    let mut exact = true;
    for (sds, set) in policy.sets().iter().enumerate() {
        let members = set.members();
        if let Some(rel) = layer.relations().iter().find(|r| members.is_subset(r.attributes())) {
            violations.push(Violation {
                sds,
                kind: ViolationKind::ContainedInRelation,
                witness: Witness::Relation(rel.name().to_string()),
            });
            continue;
        }
        let family = identifier_sets_of_set(members, layer, search);
        exact &= family.exact;
        if let Some(first) = family.identifiers.first() {
            violations.push(Violation {
                sds,
                kind: ViolationKind::Inferable,
                witness: Witness::Identifier(first.clone()),
            });
        }
    }
    LogicalCheck { violations, exact }
}

/// Runs the join-closure oracle over `layer`.
pub fn oracle_check(
    layer: &LogicalSchema,
    policy: &PolicySet,
    max_sets: usize,
    execution: Execution,
) -> OracleCheck {
    let closure = join_closure(layer, max_sets, execution);
    let violations = policy
        .sets()
        .iter()
        .enumerate()
        .filter_map(|(sds, set)| {
            closure
                .sets
                .iter()
                .position(|s| set.members().is_subset(&s.attributes))
                .map(|i| Violation {
                    sds,
                    kind: ViolationKind::JoinReachable,
                    witness: Witness::JoinedSet(i),
                })
        })
        .collect();
    OracleCheck { closure, violations }
}

/// Both checks over `layer`, with a combined verdict.
///
/// The combined verdict is insecure when either path finds a violation.
pub fn audit(
    layer: &LogicalSchema,
    policy: &PolicySet,
    search: IdentifierSearch,
    max_sets: usize,
    execution: Execution,
) -> SecurityReport {
    let logical = is_secure(layer, policy, search);
    let oracle = oracle_check(layer, policy, max_sets, execution);
    let (lv, ov) = (logical.verdict(), oracle.verdict());
    let verdict = if lv == Verdict::Insecure || ov == Verdict::Insecure {
        Verdict::Insecure
    } else if lv == Verdict::Unverified || ov == Verdict::Unverified {
        Verdict::Unverified
    } else {
        Verdict::Secure
    };
    let consistent = match (lv, ov) {
        (Verdict::Unverified, _) | (_, Verdict::Unverified) => None,
        _ => Some(lv == ov),
    };
    SecurityReport {
        verdict,
        logical,
        oracle,
        consistent,
    }
}

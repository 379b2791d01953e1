//! Secure view-layer decomposition for relational schemas.
//!
//! A [`LogicalSchema`] pairs relations with functional dependencies. A
//! [`PolicySet`] lists attribute combinations that must never be associated.
//! [`decompose`] splits every relation into maximal views that respect the
//! policy, and [`audit`] checks an arbitrary view layer both logically and by
//! exhaustive lossless joining.

pub mod attrset;
pub mod decompose;
pub mod document;
pub mod error;
pub mod exec;
pub mod fd;
pub mod report;
pub mod schema;
pub mod sql;
pub mod synth;
pub mod verify;

pub use attrset::{AttrId, AttrSet};
pub use decompose::{
    decompose, decompose_reference, lint_policy, DecomposeOptions, Decomposition, IdentifierFamilies,
};
pub use error::{Error, Result};
pub use exec::Execution;
pub use fd::{
    attribute_closure, closure, fd_holds, identifiable, identifier_sets_of_set, inferable,
    minimal_identifier_sets, IdentifierSearch,
};
pub use schema::{
    FunctionalDependency, LogicalSchema, PolicySet, QualifiedAttribute, RelationSchema,
    SecurityDependentSet,
};
pub use sql::emit_views;
pub use verify::{audit, is_secure, join_closure, restrict_fds, SecurityReport, Verdict};

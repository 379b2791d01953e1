//! Logical schemas, functional dependencies and security policies.
//!
//! Every attribute is qualified by the relation that declares it, so `name` in
//! `CUSTOMER` and `name` in `PRODUCT` are different attributes. Externally an
//! attribute is written `RELATION.attr`; its canonical rendering is `attr_RELATION`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::attrset::{AttrId, AttrSet};
use crate::error::{Error, Result};
use crate::fd::ClosureIndex;

/// An attribute name qualified with the base relation that declares it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QualifiedAttribute {
    relation: String,
    attr: String,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && !name.contains('.') && !name.chars().any(char::is_whitespace)
}

impl QualifiedAttribute {
    pub fn new(relation: &str, attr: &str) -> Result<Self> {
        for name in [relation, attr] {
            if !valid_name(name) {
                return Err(Error::InvalidName(name.to_string()));
            }
        }
        Ok(QualifiedAttribute {
            relation: relation.to_string(),
            attr: attr.to_string(),
        })
    }

    /// Parses the `RELATION.attr` form used by input documents.
    pub fn parse_dotted(text: &str) -> Result<Self> {
        match text.split_once('.') {
            Some((relation, attr)) => Self::new(relation, attr),
            None => Err(Error::UnknownAttribute(text.to_string())),
        }
    }

    pub fn relation(&self) -> &str {
        &self.relation
    }

    pub fn attr(&self) -> &str {
        &self.attr
    }

    /// `attr_relation`.
    pub fn canonical(&self) -> String {
        format!("{}_{}", self.attr, self.relation)
    }

    /// `RELATION.attr`.
    pub fn dotted(&self) -> String {
        format!("{}.{}", self.relation, self.attr)
    }
}

impl fmt::Display for QualifiedAttribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.relation, self.attr)
    }
}

/// The attribute universe of a schema, indexed by [`AttrId`].
#[derive(Debug)]
pub struct AttributeTable {
    attrs: Vec<QualifiedAttribute>,
    by_dotted: HashMap<String, AttrId>,
}

impl AttributeTable {
    pub fn width(&self) -> usize {
        self.attrs.len()
    }

    pub fn get(&self, id: AttrId) -> &QualifiedAttribute {
        &self.attrs[id.index()]
    }

    pub fn lookup(&self, dotted: &str) -> Option<AttrId> {
        self.by_dotted.get(dotted).copied()
    }

    pub fn resolve(&self, dotted: &str) -> Result<AttrId> {
        self.lookup(dotted)
            .ok_or_else(|| Error::UnknownAttribute(dotted.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (AttrId, &QualifiedAttribute)> {
        self.attrs.iter().enumerate().map(|(i, a)| (AttrId(i), a))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationSchema {
    name: String,
    base: String,
    attributes: AttrSet,
    primary_key: AttrSet,
}

impl RelationSchema {
    /// A projection of base relation `base` onto `attributes`; views carry no declared key.
    pub fn view(name: impl Into<String>, base: impl Into<String>, attributes: AttrSet) -> Self {
        let width = attributes.width();
        RelationSchema {
            name: name.into(),
            base: base.into(),
            attributes,
            primary_key: AttrSet::empty(width),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Name of the base relation this schema was declared as or projected from.
    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn attributes(&self) -> &AttrSet {
        &self.attributes
    }

    pub fn primary_key(&self) -> &AttrSet {
        &self.primary_key
    }

    pub fn arity(&self) -> usize {
        self.attributes.len()
    }
}

/// `lhs → rhs`, always non-reflexive (`rhs ∉ lhs`) with a single attribute on the right.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FunctionalDependency {
    lhs: AttrSet,
    rhs: AttrId,
}

impl FunctionalDependency {
    pub fn new(lhs: AttrSet, rhs: AttrId) -> Result<Self> {
        if lhs.is_empty() {
            return Err(Error::EmptyLhs(format!("#{}", rhs.index())));
        }
        if lhs.contains(rhs) {
            return Err(Error::ReflexiveFd(format!("#{}", rhs.index())));
        }
        Ok(FunctionalDependency { lhs, rhs })
    }

    pub fn lhs(&self) -> &AttrSet {
        &self.lhs
    }

    pub fn rhs(&self) -> AttrId {
        self.rhs
    }

    /// `lhs ∪ {rhs}`.
    pub fn attributes(&self) -> AttrSet {
        self.lhs.with(self.rhs)
    }
}

/// A declared foreign key: `from[i]` references `to[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForeignKeyLink {
    from: Vec<AttrId>,
    to: Vec<AttrId>,
}

impl ForeignKeyLink {
    pub fn from_attrs(&self) -> &[AttrId] {
        &self.from
    }

    pub fn to_attrs(&self) -> &[AttrId] {
        &self.to
    }

    pub fn pairs(&self) -> impl Iterator<Item = (AttrId, AttrId)> + '_ {
        self.from.iter().copied().zip(self.to.iter().copied())
    }
}

/// A logical schema `(R, F)`.
///
/// Base schemas come from [`SchemaBuilder`]. View layers produced by
/// [`restrict_fds`](crate::verify::restrict_fds) share the attribute table of the
/// schema they were projected from, so attribute ids stay comparable.
#[derive(Clone, Debug)]
pub struct LogicalSchema {
    table: Arc<AttributeTable>,
    relations: Vec<RelationSchema>,
    fds: Vec<FunctionalDependency>,
    foreign_keys: Vec<ForeignKeyLink>,
    links: Vec<(AttrId, AttrId)>,
    universe: AttrSet,
    closure: Arc<ClosureIndex>,
}

impl LogicalSchema {
    pub fn builder() -> SchemaBuilder {
        SchemaBuilder::default()
    }

    pub(crate) fn assemble(
        table: Arc<AttributeTable>,
        relations: Vec<RelationSchema>,
        mut fds: Vec<FunctionalDependency>,
        foreign_keys: Vec<ForeignKeyLink>,
        links: Vec<(AttrId, AttrId)>,
    ) -> Self {
        let width = table.width();
        fds.sort();
        fds.dedup();
        let mut universe = AttrSet::empty(width);
        for rel in &relations {
            universe.union_with(rel.attributes());
        }
        let closure = Arc::new(ClosureIndex::new(width, &fds));
        LogicalSchema {
            table,
            relations,
            fds,
            foreign_keys,
            links,
            universe,
            closure,
        }
    }

    pub fn table(&self) -> &Arc<AttributeTable> {
        &self.table
    }

    /// Width of every [`AttrSet`] belonging to this schema.
    pub fn width(&self) -> usize {
        self.table.width()
    }

    pub fn relations(&self) -> &[RelationSchema] {
        &self.relations
    }

    pub fn relation(&self, name: &str) -> Option<&RelationSchema> {
        self.relations.iter().find(|r| r.name == name)
    }

    pub fn fds(&self) -> &[FunctionalDependency] {
        &self.fds
    }

    pub fn foreign_keys(&self) -> &[ForeignKeyLink] {
        &self.foreign_keys
    }

    /// Foreign-key attribute pairs whose symmetric dependency pair is present in `F`.
    pub fn links(&self) -> &[(AttrId, AttrId)] {
        &self.links
    }

    /// `U_R`: union of all relation attributes.
    pub fn universe(&self) -> &AttrSet {
        &self.universe
    }

    pub(crate) fn closure_index(&self) -> &ClosureIndex {
        &self.closure
    }

    pub fn empty_set(&self) -> AttrSet {
        AttrSet::empty(self.width())
    }

    pub fn attribute(&self, id: AttrId) -> &QualifiedAttribute {
        self.table.get(id)
    }

    /// Resolves a `RELATION.attr` name that must lie inside the universe.
    pub fn resolve(&self, dotted: &str) -> Result<AttrId> {
        let id = self.table.resolve(dotted)?;
        if !self.universe.contains(id) {
            return Err(Error::OutsideUniverse(dotted.to_string()));
        }
        Ok(id)
    }

    /// Resolves a list of `RELATION.attr` names into a set.
    pub fn attr_set<S: AsRef<str>>(&self, names: &[S]) -> Result<AttrSet> {
        let mut set = self.empty_set();
        for name in names {
            set.insert(self.resolve(name.as_ref())?);
        }
        Ok(set)
    }

    /// Dotted names of the members of `set`, in id order.
    pub fn names(&self, set: &AttrSet) -> Vec<String> {
        set.iter().map(|id| self.table.get(id).dotted()).collect()
    }

    pub fn canonical_names(&self, set: &AttrSet) -> Vec<String> {
        set.iter().map(|id| self.table.get(id).canonical()).collect()
    }

    pub fn render_set(&self, set: &AttrSet) -> String {
        format!("{{{}}}", self.canonical_names(set).join(", "))
    }

    pub fn render_fd(&self, fd: &FunctionalDependency) -> String {
        format!(
            "{} -> {}",
            self.canonical_names(fd.lhs()).join(", "),
            self.table.get(fd.rhs()).canonical()
        )
    }

    pub fn is_link(&self, a: AttrId, b: AttrId) -> bool {
        self.links
            .iter()
            .any(|&(x, y)| (x == a && y == b) || (x == b && y == a))
    }

    /// Builds a dependency from dotted names, checked against this schema's table.
    pub fn fd(&self, lhs: &[&str], rhs: &str) -> Result<FunctionalDependency> {
        let lhs_set = self.attr_set(lhs)?;
        let rhs_id = self.resolve(rhs)?;
        FunctionalDependency::new(lhs_set, rhs_id).map_err(|e| match e {
            Error::ReflexiveFd(_) => Error::ReflexiveFd(rhs.to_string()),
            other => other,
        })
    }
}

#[derive(Debug, Default)]
struct PendingRelation {
    name: String,
    attributes: Vec<String>,
    primary_key: Vec<String>,
}

#[derive(Debug, Default)]
struct PendingForeignKey {
    from_relation: String,
    from: Vec<String>,
    to_relation: String,
    to: Vec<String>,
}

/// Collects relation, key and dependency declarations and validates them in [`build`](Self::build).
#[derive(Debug, Default)]
pub struct SchemaBuilder {
    relations: Vec<PendingRelation>,
    foreign_keys: Vec<PendingForeignKey>,
    fds: Vec<(Vec<String>, String)>,
}

impl SchemaBuilder {
    pub fn relation<S: AsRef<str>>(mut self, name: &str, attributes: &[S], primary_key: &[S]) -> Self {
        self.relations.push(PendingRelation {
            name: name.to_string(),
            attributes: attributes.iter().map(|s| s.as_ref().to_string()).collect(),
            primary_key: primary_key.iter().map(|s| s.as_ref().to_string()).collect(),
        });
        self
    }

    pub fn foreign_key<S: AsRef<str>>(
        mut self,
        from_relation: &str,
        from: &[S],
        to_relation: &str,
        to: &[S],
    ) -> Self {
        self.foreign_keys.push(PendingForeignKey {
            from_relation: from_relation.to_string(),
            from: from.iter().map(|s| s.as_ref().to_string()).collect(),
            to_relation: to_relation.to_string(),
            to: to.iter().map(|s| s.as_ref().to_string()).collect(),
        });
        self
    }

    /// Adds an explicit dependency, with attributes written `RELATION.attr`.
    pub fn fd<S: AsRef<str>>(mut self, lhs: &[S], rhs: &str) -> Self {
        self.fds.push((
            lhs.iter().map(|s| s.as_ref().to_string()).collect(),
            rhs.to_string(),
        ));
        self
    }

    pub fn build(self) -> Result<LogicalSchema> {
        let mut attrs = Vec::new();
        let mut by_dotted = HashMap::new();
        let mut by_canonical: HashMap<String, String> = HashMap::new();
        let mut spans = Vec::with_capacity(self.relations.len());

        for rel in &self.relations {
            if !valid_name(&rel.name) {
                return Err(Error::InvalidName(rel.name.clone()));
            }
            if self.relations.iter().filter(|r| r.name == rel.name).count() > 1 {
                return Err(Error::DuplicateRelation(rel.name.clone()));
            }
            if rel.attributes.is_empty() {
                return Err(Error::EmptyRelation(rel.name.clone()));
            }
            let start = attrs.len();
            for attr in &rel.attributes {
                let qa = QualifiedAttribute::new(&rel.name, attr)?;
                let dotted = qa.dotted();
                if by_dotted.contains_key(&dotted) {
                    return Err(Error::DuplicateAttribute {
                        relation: rel.name.clone(),
                        attr: attr.clone(),
                    });
                }
                if let Some(first) = by_canonical.insert(qa.canonical(), dotted.clone()) {
                    return Err(Error::CanonicalCollision {
                        canonical: qa.canonical(),
                        first,
                        second: dotted,
                    });
                }
                by_dotted.insert(dotted, AttrId(attrs.len()));
                attrs.push(qa);
            }
            spans.push(start..attrs.len());
        }

        let table = Arc::new(AttributeTable { attrs, by_dotted });
        let width = table.width();
        let mut relations = Vec::with_capacity(self.relations.len());
        let mut fds = Vec::new();

        for (rel, span) in self.relations.iter().zip(spans) {
            let attributes = AttrSet::from_ids(width, span.map(AttrId));
            let mut primary_key = AttrSet::empty(width);
            for attr in &rel.primary_key {
                let id = table
                    .lookup(&format!("{}.{}", rel.name, attr))
                    .ok_or_else(|| Error::KeyOutsideRelation {
                        relation: rel.name.clone(),
                        attr: attr.clone(),
                    })?;
                primary_key.insert(id);
            }
            if !primary_key.is_empty() {
                for id in attributes.difference(&primary_key).iter() {
                    fds.push(FunctionalDependency::new(primary_key.clone(), id)?);
                }
            }
            relations.push(RelationSchema {
                name: rel.name.clone(),
                base: rel.name.clone(),
                attributes,
                primary_key,
            });
        }

        let mut foreign_keys = Vec::new();
        let mut links = Vec::new();
        for fk in &self.foreign_keys {
            for rel in [&fk.from_relation, &fk.to_relation] {
                if !self.relations.iter().any(|r| &r.name == rel) {
                    return Err(Error::UnknownRelation(rel.clone()));
                }
            }
            if fk.from.len() != fk.to.len() || fk.from.is_empty() {
                return Err(Error::ForeignKeyArity {
                    from: fk.from_relation.clone(),
                    to: fk.to_relation.clone(),
                    from_len: fk.from.len(),
                    to_len: fk.to.len(),
                });
            }
            if fk.from_relation == fk.to_relation {
                return Err(Error::ForeignKeySameRelation(fk.from_relation.clone()));
            }
            let resolve = |rel: &str, attr: &str| table.resolve(&format!("{rel}.{attr}"));
            let from = fk
                .from
                .iter()
                .map(|a| resolve(&fk.from_relation, a))
                .collect::<Result<Vec<_>>>()?;
            let to = fk
                .to
                .iter()
                .map(|a| resolve(&fk.to_relation, a))
                .collect::<Result<Vec<_>>>()?;
            for (&f, &t) in from.iter().zip(&to) {
                fds.push(FunctionalDependency::new(AttrSet::singleton(width, f), t)?);
                fds.push(FunctionalDependency::new(AttrSet::singleton(width, t), f)?);
                let pair = if f < t { (f, t) } else { (t, f) };
                if !links.contains(&pair) {
                    links.push(pair);
                }
            }
            foreign_keys.push(ForeignKeyLink { from, to });
        }

        for (lhs, rhs) in &self.fds {
            let mut lhs_set = AttrSet::empty(width);
            for name in lhs {
                lhs_set.insert(table.resolve(name)?);
            }
            let rhs_id = table.resolve(rhs)?;
            if lhs_set.contains(rhs_id) {
                return Err(Error::ReflexiveFd(rhs.clone()));
            }
            fds.push(FunctionalDependency::new(lhs_set, rhs_id).map_err(|_| Error::EmptyLhs(rhs.clone()))?);
        }

        links.sort();
        Ok(LogicalSchema::assemble(table, relations, fds, foreign_keys, links))
    }
}

/// A set of at least two attributes whose association must not be inferable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SecurityDependentSet {
    members: AttrSet,
}

impl SecurityDependentSet {
    pub fn new(schema: &LogicalSchema, members: AttrSet) -> Result<Self> {
        if members.len() < 2 {
            return Err(Error::SetTooSmall {
                members: schema.names(&members),
            });
        }
        if let Some(outside) = members.difference(schema.universe()).first() {
            return Err(Error::OutsideUniverse(schema.attribute(outside).dotted()));
        }
        Ok(SecurityDependentSet { members })
    }

    pub fn members(&self) -> &AttrSet {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// The policy `S`: a duplicate-free list of security dependent sets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PolicySet {
    sets: Vec<SecurityDependentSet>,
}

impl PolicySet {
    /// Keeps the first occurrence of every distinct set, in input order.
    pub fn new(sets: Vec<SecurityDependentSet>) -> Self {
        let mut out: Vec<SecurityDependentSet> = Vec::with_capacity(sets.len());
        for set in sets {
            if !out.contains(&set) {
                out.push(set);
            }
        }
        PolicySet { sets: out }
    }

    pub fn empty() -> Self {
        PolicySet::default()
    }

    /// Builds a policy from `RELATION.attr` names.
    pub fn from_names<S: AsRef<str>>(schema: &LogicalSchema, sets: &[Vec<S>]) -> Result<Self> {
        let mut out = Vec::with_capacity(sets.len());
        for names in sets {
            let mut members = schema.empty_set();
            for name in names {
                let id = schema
                    .table()
                    .resolve(name.as_ref())
                    .map_err(|_| Error::UnknownAttribute(name.as_ref().to_string()))?;
                members.insert(id);
            }
            if members.len() < 2 {
                return Err(Error::SetTooSmall {
                    members: names.iter().map(|s| s.as_ref().to_string()).collect(),
                });
            }
            out.push(SecurityDependentSet::new(schema, members)?);
        }
        Ok(PolicySet::new(out))
    }

    pub fn sets(&self) -> &[SecurityDependentSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Union of every member of every set.
    pub fn members(&self, width: usize) -> AttrSet {
        let mut all = AttrSet::empty(width);
        for set in &self.sets {
            all.union_with(set.members());
        }
        all
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn users_logs() -> LogicalSchema {
        LogicalSchema::builder()
            .relation("USERS", &["id", "name", "surname"], &["id"])
            .relation("LOGS", &["userid", "action", "date"], &["userid"])
            .foreign_key("LOGS", &["userid"], "USERS", &["id"])
            .build()
            .unwrap()
    }

    #[test]
    fn canonical_and_dotted_forms() {
        let qa = QualifiedAttribute::new("USERS", "id").unwrap();
        assert_eq!(qa.canonical(), "id_USERS");
        assert_eq!(qa.dotted(), "USERS.id");
        assert_eq!(QualifiedAttribute::parse_dotted("USERS.id").unwrap(), qa);
        assert!(QualifiedAttribute::new("", "id").is_err());
        assert!(QualifiedAttribute::new("A.B", "id").is_err());
    }

    #[test]
    fn keys_and_foreign_keys_expand_to_dependencies() {
        let schema = users_logs();
        let rendered: Vec<String> = schema.fds().iter().map(|fd| schema.render_fd(fd)).collect();
        for expected in [
            "userid_LOGS -> id_USERS",
            "id_USERS -> userid_LOGS",
            "id_USERS -> name_USERS",
            "id_USERS -> surname_USERS",
            "userid_LOGS -> action_LOGS",
            "userid_LOGS -> date_LOGS",
        ] {
            assert!(rendered.iter().any(|r| r == expected), "missing {expected}");
        }
        assert_eq!(schema.fds().len(), 6);
        assert_eq!(schema.links().len(), 1);
        assert_eq!(schema.universe().len(), 6);
    }

    #[test]
    fn keyless_relation_without_fds() {
        let schema = LogicalSchema::builder()
            .relation::<&str>("T", &["a", "b"], &[])
            .build()
            .unwrap();
        assert!(schema.fds().is_empty());
    }

    #[test]
    fn rejects_bad_declarations() {
        let dup = LogicalSchema::builder()
            .relation("R", &["a"], &[])
            .relation("R", &["b"], &[])
            .build();
        assert_eq!(dup.unwrap_err().code(), "duplicate-relation");

        let refl = LogicalSchema::builder()
            .relation("R", &["a", "b"], &[])
            .fd(&["R.a"], "R.a")
            .build();
        assert_eq!(refl.unwrap_err().code(), "reflexive-fd");

        let arity = LogicalSchema::builder()
            .relation("R", &["a", "b"], &["a"])
            .relation("S", &["x"], &["x"])
            .foreign_key("R", &["a", "b"], "S", &["x"])
            .build();
        assert_eq!(arity.unwrap_err().code(), "foreign-key-arity");

        let unknown = LogicalSchema::builder()
            .relation("R", &["a", "b"], &[])
            .fd(&["R.z"], "R.a")
            .build();
        assert_eq!(unknown.unwrap_err().code(), "unknown-attribute");

        let collision = LogicalSchema::builder()
            .relation("b_c", &["a"], &[])
            .relation("c", &["a_b"], &[])
            .build();
        assert_eq!(collision.unwrap_err().code(), "canonical-collision");
    }

    #[test]
    fn policy_validation() {
        let schema = users_logs();
        let ok = PolicySet::from_names(
            &schema,
            &[vec!["USERS.name", "LOGS.action"], vec!["LOGS.action", "USERS.name"]],
        )
        .unwrap();
        assert_eq!(ok.len(), 1);
        let small = PolicySet::from_names(&schema, &[vec!["USERS.name"]]);
        assert_eq!(small.unwrap_err().code(), "set-too-small");
        let unknown = PolicySet::from_names(&schema, &[vec!["USERS.name", "USERS.salary"]]);
        assert_eq!(unknown.unwrap_err().code(), "unknown-attribute");
    }
}

//! JSON documents: schemas, policies, view layers and decompositions.
//!
//! Attributes are always written in dotted `RELATION.attr` form.

use serde::{Deserialize, Serialize};

use crate::attrset::AttrSet;
use crate::decompose::{Decomposition, DecompositionStats};
use crate::error::{Error, Result};
use crate::schema::{FunctionalDependency, LogicalSchema, PolicySet, RelationSchema};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemaDocument {
    pub relations: Vec<RelationDoc>,
    #[serde(default)]
    pub foreign_keys: Vec<ForeignKeyDoc>,
    #[serde(default)]
    pub functional_dependencies: Vec<FdDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationDoc {
    pub name: String,
    pub attributes: Vec<String>,
    #[serde(default)]
    pub primary_key: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KeyRefDoc {
    pub relation: String,
    pub attributes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForeignKeyDoc {
    pub from: KeyRefDoc,
    pub to: KeyRefDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FdDoc {
    pub lhs: Vec<String>,
    pub rhs: String,
}

impl FdDoc {
    pub fn new(fd: &FunctionalDependency, schema: &LogicalSchema) -> Self {
        FdDoc {
            lhs: schema.names(fd.lhs()),
            rhs: schema.attribute(fd.rhs()).dotted(),
        }
    }
}

impl SchemaDocument {
    pub fn into_schema(self) -> Result<LogicalSchema> {
        let mut b = LogicalSchema::builder();
        for r in &self.relations {
            b = b.relation(&r.name, &r.attributes, &r.primary_key);
        }
        for fk in &self.foreign_keys {
            b = b.foreign_key(&fk.from.relation, &fk.from.attributes, &fk.to.relation, &fk.to.attributes);
        }
        for fd in &self.functional_dependencies {
            b = b.fd(&fd.lhs, &fd.rhs);
        }
        b.build()
    }

    /// A document that rebuilds to the same relations and dependency set.
    ///
    /// Key- and foreign-key-derived dependencies are written out explicitly.
    pub fn from_schema(schema: &LogicalSchema) -> Self {
        let attr_names = |set: &AttrSet| -> Vec<String> {
            set.iter().map(|a| schema.attribute(a).attr().to_string()).collect()
        };
        let relations = schema
            .relations()
            .iter()
            .map(|r| RelationDoc {
                name: r.name().to_string(),
                attributes: attr_names(r.attributes()),
                primary_key: attr_names(r.primary_key()),
            })
            .collect();
        let key_ref = |ids: &[crate::attrset::AttrId]| KeyRefDoc {
            relation: schema.attribute(ids[0]).relation().to_string(),
            attributes: ids.iter().map(|&a| schema.attribute(a).attr().to_string()).collect(),
        };
        let foreign_keys = schema
            .foreign_keys()
            .iter()
            .map(|fk| ForeignKeyDoc {
                from: key_ref(fk.from_attrs()),
                to: key_ref(fk.to_attrs()),
            })
            .collect();
        let functional_dependencies = schema.fds().iter().map(|fd| FdDoc::new(fd, schema)).collect();
        SchemaDocument {
            relations,
            foreign_keys,
            functional_dependencies,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyDocument {
    pub security_dependent_sets: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViewDoc {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<String>,
    pub attributes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViewListDocument {
    pub views: Vec<ViewDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedSetDoc {
    pub name: String,
    pub attributes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationViewsDoc {
    pub base: String,
    pub views: Vec<NamedSetDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatsDoc {
    pub pi: usize,
    pub epsilon: usize,
    pub eta: usize,
    pub mu: usize,
    pub subsets_generated: u64,
    pub subsets_eliminated: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

impl StatsDoc {
    /// Wall-clock time is only included on request so output stays byte-stable.
    pub fn new(stats: &DecompositionStats, timings: bool) -> Self {
        StatsDoc {
            pi: stats.pi,
            epsilon: stats.epsilon,
            eta: stats.eta,
            mu: stats.mu,
            subsets_generated: stats.subsets_generated,
            subsets_eliminated: stats.subsets_eliminated,
            elapsed_ms: timings.then(|| stats.elapsed.as_secs_f64() * 1e3),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionDocument {
    pub relations: Vec<RelationViewsDoc>,
    pub derived_fds: Vec<FdDoc>,
    pub stats: StatsDoc,
}

impl DecompositionDocument {
    pub fn new(decomposition: &Decomposition, schema: &LogicalSchema, timings: bool) -> Self {
        DecompositionDocument {
            relations: decomposition
                .relations
                .iter()
                .map(|r| RelationViewsDoc {
                    base: r.base.clone(),
                    views: r
                        .views
                        .iter()
                        .map(|v| NamedSetDoc {
                            name: v.name.clone(),
                            attributes: schema.names(&v.attributes),
                        })
                        .collect(),
                })
                .collect(),
            derived_fds: decomposition
                .derived_fds
                .iter()
                .map(|fd| FdDoc::new(fd, schema))
                .collect(),
            stats: StatsDoc::new(&decomposition.stats, timings),
        }
    }
}

/// A view layer given either as a plain list or as a decomposition output.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ViewsDocument {
    List(ViewListDocument),
    Decomposition(DecompositionDocument),
}

pub fn load_schema(text: &str) -> Result<LogicalSchema> {
    serde_json::from_str::<SchemaDocument>(text)?.into_schema()
}

pub fn load_policy(text: &str, schema: &LogicalSchema) -> Result<PolicySet> {
    let doc: PolicyDocument = serde_json::from_str(text)?;
    PolicySet::from_names(schema, &doc.security_dependent_sets)
}

fn view_schema(
    name: &str,
    base: Option<&str>,
    attributes: &[String],
    schema: &LogicalSchema,
) -> Result<RelationSchema> {
    let mut set = schema.empty_set();
    let mut base_name = base.map(str::to_string);
    for dotted in attributes {
        let id = schema.resolve(dotted)?;
        let rel = schema.attribute(id).relation();
        match &base_name {
            None => base_name = Some(rel.to_string()),
            Some(b) if b != rel => {
                return Err(Error::ViewOutsideBase {
                    view: name.to_string(),
                    base: b.clone(),
                    attr: dotted.clone(),
                })
            }
            Some(_) => {}
        }
        set.insert(id);
    }
    let base_name = base_name.ok_or_else(|| Error::EmptyRelation(name.to_string()))?;
    if set.is_empty() {
        return Err(Error::EmptyRelation(name.to_string()));
    }
    if schema.relation(&base_name).is_none() {
        return Err(Error::UnknownRelation(base_name));
    }
    Ok(RelationSchema::view(name, base_name, set))
}

/// Loads a view layer over `schema`. Every view must project a single base relation.
pub fn load_views(text: &str, schema: &LogicalSchema) -> Result<Vec<RelationSchema>> {
    match serde_json::from_str::<ViewsDocument>(text)? {
        ViewsDocument::List(doc) => doc
            .views
            .iter()
            .map(|v| view_schema(&v.name, v.base.as_deref(), &v.attributes, schema))
            .collect(),
        ViewsDocument::Decomposition(doc) => doc
            .relations
            .iter()
            .flat_map(|r| {
                r.views
                    .iter()
                    .map(move |v| view_schema(&v.name, Some(&r.base), &v.attributes, schema))
            })
            .collect(),
    }
}

//! Seeded random schemas, policies and view layers for property tests and benches.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::attrset::AttrSet;
use crate::schema::{LogicalSchema, PolicySet, RelationSchema, SecurityDependentSet};

#[derive(Clone, Copy, Debug)]
pub struct InstanceShape {
    pub max_relations: usize,
    pub min_arity: usize,
    pub max_arity: usize,
    pub max_sets: usize,
    pub min_set_size: usize,
    pub max_set_size: usize,
    /// Explicit dependencies drawn per instance, at most.
    pub max_fds: usize,
    pub max_lhs: usize,
    /// Chance that a relation gets its first attribute as primary key.
    pub key_probability: f64,
    /// Whether dependencies may mention attributes of different relations.
    pub cross_relation_fds: bool,
    /// Foreign keys drawn per instance, at most.
    pub max_foreign_keys: usize,
}

impl Default for InstanceShape {
    fn default() -> Self {
        InstanceShape {
            max_relations: 4,
            min_arity: 1,
            max_arity: 8,
            max_sets: 5,
            min_set_size: 2,
            max_set_size: 4,
            max_fds: 10,
            max_lhs: 2,
            key_probability: 0.5,
            cross_relation_fds: true,
            max_foreign_keys: 0,
        }
    }
}

impl InstanceShape {
    /// One relation of exactly `arity` attributes.
    pub fn single_relation(arity: usize) -> Self {
        InstanceShape {
            max_relations: 1,
            min_arity: arity,
            max_arity: arity,
            ..InstanceShape::default()
        }
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub schema: LogicalSchema,
    pub policy: PolicySet,
}

pub fn random_schema<R: Rng>(shape: &InstanceShape, rng: &mut R) -> LogicalSchema {
    let relations = rng.gen_range(1..=shape.max_relations.max(1));
    let mut b = LogicalSchema::builder();
    let mut names: Vec<Vec<String>> = Vec::with_capacity(relations);
    for r in 0..relations {
        let arity = rng.gen_range(shape.min_arity.max(1)..=shape.max_arity.max(shape.min_arity).max(1));
        let attrs: Vec<String> = (0..arity).map(|i| format!("a{i}")).collect();
        let key: Vec<String> = if rng.gen_bool(shape.key_probability) {
            vec![attrs[0].clone()]
        } else {
            Vec::new()
        };
        b = b.relation(&format!("R{r}"), &attrs, &key);
        names.push(attrs.iter().map(|a| format!("R{r}.{a}")).collect());
    }
    for _ in 0..rng.gen_range(0..=shape.max_foreign_keys) {
        if relations < 2 {
            break;
        }
        let from = rng.gen_range(0..relations);
        let to = (from + rng.gen_range(1..relations)) % relations;
        let fa = rng.gen_range(0..names[from].len());
        let ta = rng.gen_range(0..names[to].len());
        b = b.foreign_key(&format!("R{from}"), &[format!("a{fa}")], &format!("R{to}"), &[format!("a{ta}")]);
    }
    let all: Vec<String> = names.iter().flatten().cloned().collect();
    for _ in 0..rng.gen_range(0..=shape.max_fds) {
        let r = rng.gen_range(0..relations);
        let pool: &[String] = if shape.cross_relation_fds { &all } else { &names[r] };
        if pool.len() < 2 {
            continue;
        }
        let rhs = pool.choose(rng).expect("nonempty pool").clone();
        let lhs_len = rng.gen_range(1..=shape.max_lhs.max(1)).min(pool.len() - 1);
        let others: Vec<&String> = pool.iter().filter(|a| **a != rhs).collect();
        let lhs: Vec<String> = others.choose_multiple(rng, lhs_len).map(|s| (*s).clone()).collect();
        b = b.fd(&lhs, &rhs);
    }
    b.build().expect("generated schemas are well formed")
}

pub fn random_policy<R: Rng>(schema: &LogicalSchema, shape: &InstanceShape, rng: &mut R) -> PolicySet {
    let universe = schema.universe().to_vec();
    if universe.len() < 2 {
        return PolicySet::empty();
    }
    let count = rng.gen_range(0..=shape.max_sets);
    let mut sets = Vec::with_capacity(count);
    for _ in 0..count {
        let hi = shape.max_set_size.min(universe.len());
        let lo = shape.min_set_size.max(2).min(hi);
        let size = rng.gen_range(lo..=hi);
        let members = AttrSet::from_ids(schema.width(), universe.choose_multiple(rng, size).copied());
        sets.push(SecurityDependentSet::new(schema, members).expect("members come from the universe"));
    }
    PolicySet::new(sets)
}

pub fn random_instance<R: Rng>(shape: &InstanceShape, rng: &mut R) -> Instance {
    let schema = random_schema(shape, rng);
    let policy = random_policy(&schema, shape, rng);
    Instance { schema, policy }
}

/// Up to `max_views` random nonempty projections of every relation.
pub fn random_views<R: Rng>(schema: &LogicalSchema, max_views: usize, rng: &mut R) -> Vec<RelationSchema> {
    let mut out = Vec::new();
    for rel in schema.relations() {
        let attrs = rel.attributes().to_vec();
        for i in 0..rng.gen_range(1..=max_views.max(1)) {
            let mut set = AttrSet::from_ids(schema.width(), attrs.iter().copied().filter(|_| rng.gen_bool(0.6)));
            if set.is_empty() {
                set.insert(*attrs.choose(rng).expect("relations are nonempty"));
            }
            out.push(RelationSchema::view(format!("{}_{}", rel.name(), i + 1), rel.name(), set));
        }
    }
    out
}

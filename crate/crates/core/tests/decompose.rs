mod common;

use std::collections::BTreeMap;

use common::{brute_decomposition, fd_pairs, fixture, full_identifier_family, naive_closure, retail, rng, set, student};
use proptest::prelude::*;
use secview::decompose::{
    decompose, decompose_reference, decompose_with_families, lint_policy, power_set_sweep,
    DecomposeOptions, IdentifierFamilies, Severity,
};
use secview::document::load_policy;
use secview::exec::Execution;
use secview::fd::IdentifierSearch;
use secview::schema::{LogicalSchema, PolicySet};
use secview::synth::{random_instance, InstanceShape};
use secview::{audit, emit_views, AttrSet, Verdict};

fn names(schema: &LogicalSchema, sets: &[AttrSet]) -> Vec<Vec<String>> {
    sets.iter().map(|s| schema.names(s)).collect()
}

#[test]
fn retail_customer_splits_three_ways() {
    let (schema, policy) = retail();
    let d = decompose(&schema, &policy, &DecomposeOptions::default()).unwrap();
    let families = d.families();
    assert_eq!(
        families["CUSTOMER"],
        vec![
            set(&schema, &["CUSTOMER.cid", "CUSTOMER.name", "CUSTOMER.surname"]),
            set(&schema, &["CUSTOMER.name", "CUSTOMER.surname", "CUSTOMER.pNo", "CUSTOMER.address"]),
            set(&schema, &["CUSTOMER.name", "CUSTOMER.surname", "CUSTOMER.age", "CUSTOMER.gender"]),
        ]
    );
    assert_eq!(families["PRODUCT"], vec![schema.relation("PRODUCT").unwrap().attributes().clone()]);
    assert_eq!(families["BUY"], vec![schema.relation("BUY").unwrap().attributes().clone()]);
    let names: Vec<&str> = d.relations[0].views.iter().map(|v| v.name.as_str()).collect();
    assert_eq!(names, ["CUSTOMER_1", "CUSTOMER_2", "CUSTOMER_3"]);

    assert_eq!(schema.fds().len(), 15);
    assert_eq!(d.derived_fds.len(), 11);
    let cid = set(&schema, &["CUSTOMER.cid"]);
    for lost in ["CUSTOMER.pNo", "CUSTOMER.address", "CUSTOMER.age", "CUSTOMER.gender"] {
        let fd = secview::FunctionalDependency::new(cid.clone(), schema.resolve(lost).unwrap()).unwrap();
        assert!(!d.derived_fds.contains(&fd), "{lost}");
    }
    assert_eq!((d.stats.pi, d.stats.epsilon, d.stats.eta, d.stats.mu), (3, 7, 2, 2));
}

#[test]
fn retail_reference_run_matches_and_counts_subsets() {
    let (schema, policy) = retail();
    let d = decompose_reference(&schema, &policy, &DecomposeOptions::default()).unwrap();
    let fast = decompose(&schema, &policy, &DecomposeOptions::default()).unwrap();
    assert_eq!(d.relations, fast.relations);
    assert_eq!(d.derived_fds, fast.derived_fds);
    assert_eq!(d.stats.subsets_generated, 128 + 32 + 16);
}

#[test]
fn retail_sql_views() {
    let (schema, policy) = retail();
    let d = decompose(&schema, &policy, &DecomposeOptions::default()).unwrap();
    let sql = emit_views(&d, &schema);
    let want = "\
CREATE VIEW CUSTOMER_1 AS SELECT cid, name, surname FROM CUSTOMER;
CREATE VIEW CUSTOMER_2 AS SELECT DISTINCT name, surname, pNo, address FROM CUSTOMER;
CREATE VIEW CUSTOMER_3 AS SELECT DISTINCT name, surname, age, gender FROM CUSTOMER;
CREATE VIEW PRODUCT_1 AS SELECT pid, name, model, year, price FROM PRODUCT;
CREATE VIEW BUY_1 AS SELECT cid, pid, date, quantity FROM BUY;
";
    assert_eq!(sql, want);
}

#[test]
fn student_corrected_decomposition() {
    let (schema, policy) = student();
    let d = decompose(&schema, &policy, &DecomposeOptions::default()).unwrap();
    let sets: Vec<AttrSet> = d.relations[0].views.iter().map(|v| v.attributes.clone()).collect();
    assert_eq!(
        names(&schema, &sets),
        vec![
            vec!["STUDENT.id", "STUDENT.name", "STUDENT.surname", "STUDENT.address", "STUDENT.age"],
            vec!["STUDENT.email", "STUDENT.name", "STUDENT.surname", "STUDENT.address", "STUDENT.age"],
            vec!["STUDENT.name", "STUDENT.surname", "STUDENT.address", "STUDENT.age", "STUDENT.gender"],
        ]
    );
}

#[test]
fn faulty_policy_lint() {
    let (schema, _) = retail();
    let policy = load_policy(&fixture("retail_faulty_policy.json"), &schema).unwrap();
    let diagnostics = lint_policy(&schema, &policy, IdentifierSearch::exact());
    assert_eq!(diagnostics.len(), 1);
    let d = &diagnostics[0];
    assert_eq!(d.severity, Severity::Warning);
    assert_eq!(d.code, "unprotected-subsets");
    assert_eq!(d.subsets.len(), 10);
    assert!(d.message.contains("25 proper subsets"), "{}", d.message);

    let (_, good) = retail();
    assert!(lint_policy(&schema, &good, IdentifierSearch::exact()).is_empty());
}

#[test]
fn lint_reports_nested_and_inert_sets() {
    let schema = LogicalSchema::builder()
        .relation("A", &["x", "y", "z"], &[])
        .relation("B", &["u"], &[])
        .build()
        .unwrap();
    let policy = PolicySet::from_names(
        &schema,
        &[vec!["A.x", "A.y"], vec!["A.x", "A.y", "A.z"], vec!["A.z", "B.u"]],
    )
    .unwrap();
    let codes: Vec<(&str, usize)> = lint_policy(&schema, &policy, IdentifierSearch::exact())
        .iter()
        .map(|d| (d.code, d.sds))
        .collect();
    assert_eq!(
        codes,
        vec![("unprotected-subsets", 1), ("redundant-superset", 1), ("no-effect", 2)]
    );
}

fn property_shape() -> InstanceShape {
    InstanceShape {
        max_arity: 6,
        max_relations: 3,
        ..InstanceShape::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn output_is_a_secure_decomposition(seed in any::<u64>()) {
        let inst = random_instance(&property_shape(), &mut rng(seed));
        let (schema, policy) = (&inst.schema, &inst.policy);
        let d = decompose(schema, policy, &DecomposeOptions::default()).unwrap();

        // Every attribute survives.
        let mut covered = schema.empty_set();
        for v in d.view_schemas() {
            covered.union_with(v.attributes());
        }
        prop_assert_eq!(&covered, schema.universe());

        // Only original dependencies remain and nothing new becomes derivable.
        let layer = d.view_layer(schema);
        prop_assert!(d.derived_fds.iter().all(|fd| schema.fds().contains(fd)));
        let (orig, kept) = (fd_pairs(schema), fd_pairs(&layer));
        for x in common::subsets(schema.universe()).into_iter().step_by(7) {
            prop_assert!(naive_closure(&x, &kept).is_subset(&naive_closure(&x, &orig)));
        }

        // No view holds a policy set or a member with any identifier, checked
        // against the full (not only minimal) identifier families.
        let full = |a| full_identifier_family(a, schema);
        for v in d.view_schemas() {
            prop_assert!(common::admissible(v.attributes(), policy, &full));
        }

        // Exactly the maximal admissible subsets.
        prop_assert_eq!(d.families(), brute_decomposition(schema, policy));

        let report = audit(&layer, policy, IdentifierSearch::exact(), 100_000, Execution::Sequential);
        prop_assert_eq!(report.verdict, Verdict::Secure);
        prop_assert_eq!(report.consistent, Some(true));
    }

    #[test]
    fn optimized_matches_reference(seed in any::<u64>()) {
        let inst = random_instance(&InstanceShape { max_arity: 10, ..InstanceShape::default() }, &mut rng(seed));
        let opts = DecomposeOptions::default();
        let fast = decompose(&inst.schema, &inst.policy, &opts).unwrap();
        let slow = decompose_reference(&inst.schema, &inst.policy, &opts).unwrap();
        prop_assert_eq!(&fast.relations, &slow.relations);
        prop_assert_eq!(&fast.derived_fds, &slow.derived_fds);
        let seq = decompose(&inst.schema, &inst.policy, &DecomposeOptions { execution: Execution::Sequential, ..opts }).unwrap();
        prop_assert_eq!(&fast.relations, &seq.relations);
    }

    #[test]
    fn minimal_identifiers_eliminate_as_much_as_full_families(seed in any::<u64>()) {
        let inst = random_instance(&property_shape(), &mut rng(seed));
        let (schema, policy) = (&inst.schema, &inst.policy);
        let minimal = IdentifierFamilies::compute(schema, policy, IdentifierSearch::exact(), Execution::Sequential);
        let full = IdentifierFamilies::from_map(
            policy.members(schema.width()).iter().map(|a| (a, full_identifier_family(a, schema))).collect::<BTreeMap<_, _>>(),
        );
        for rel in schema.relations() {
            let a = power_set_sweep(rel, policy, &minimal, Execution::Sequential);
            let b = power_set_sweep(rel, policy, &full, Execution::Sequential);
            prop_assert_eq!(a.alive, b.alive);
        }
        let a = decompose_with_families(schema, policy, &minimal, Execution::Sequential).unwrap();
        let b = decompose_with_families(schema, policy, &full, Execution::Sequential).unwrap();
        prop_assert_eq!(a.relations, b.relations);
    }
}

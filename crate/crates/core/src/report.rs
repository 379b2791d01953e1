//! Rendering of verification reports and decompositions.

use serde::Serialize;

use crate::decompose::Decomposition;
use crate::schema::{LogicalSchema, PolicySet};
use crate::verify::{JoinClosure, JoinOrigin, SecurityReport, Violation, Witness};

#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument {
    pub verdict: &'static str,
    /// `null` when either check was inconclusive.
    pub consistent: Option<bool>,
    pub logical: CheckDoc,
    pub oracle: CheckDoc,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckDoc {
    pub verdict: &'static str,
    pub complete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sets_explored: Option<usize>,
    pub violations: Vec<ViolationDoc>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ViolationDoc {
    pub set: Vec<String>,
    pub kind: &'static str,
    pub witness: WitnessDoc,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessDoc {
    Relation(String),
    Identifier(Vec<String>),
    JoinedSet {
        attributes: Vec<String>,
        trace: Vec<TraceStep>,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceStep {
    pub index: usize,
    pub attributes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub view: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub join: Option<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub on: Option<[Vec<String>; 2]>,
}

fn trace(closure: &JoinClosure, i: usize, schema: &LogicalSchema) -> Vec<TraceStep> {
    closure
        .trace(i)
        .into_iter()
        .map(|j| {
            let set = &closure.sets[j];
            let mut step = TraceStep {
                index: j,
                attributes: schema.names(&set.attributes),
                view: None,
                join: None,
                on: None,
            };
            match &set.origin {
                JoinOrigin::View(name) => step.view = Some(name.clone()),
                JoinOrigin::Join {
                    left,
                    right,
                    on_left,
                    on_right,
                } => {
                    step.join = Some([*left, *right]);
                    step.on = Some([schema.names(on_left), schema.names(on_right)]);
                }
            }
            step
        })
        .collect()
}

fn violation_doc(
    v: &Violation,
    policy: &PolicySet,
    closure: &JoinClosure,
    schema: &LogicalSchema,
) -> ViolationDoc {
    let witness = match &v.witness {
        Witness::Relation(name) => WitnessDoc::Relation(name.clone()),
        Witness::Identifier(set) => WitnessDoc::Identifier(schema.names(set)),
        Witness::JoinedSet(i) => WitnessDoc::JoinedSet {
            attributes: schema.names(&closure.sets[*i].attributes),
            trace: trace(closure, *i, schema),
        },
    };
    ViolationDoc {
        set: schema.names(policy.sets()[v.sds].members()),
        kind: v.kind.as_str(),
        witness,
    }
}

impl ReportDocument {
    pub fn new(report: &SecurityReport, policy: &PolicySet, schema: &LogicalSchema) -> Self {
        let closure = &report.oracle.closure;
        ReportDocument {
            verdict: report.verdict.as_str(),
            consistent: report.consistent,
            logical: CheckDoc {
                verdict: report.logical.verdict().as_str(),
                complete: report.logical.exact,
                sets_explored: None,
                violations: report
                    .logical
                    .violations
                    .iter()
                    .map(|v| violation_doc(v, policy, closure, schema))
                    .collect(),
            },
            oracle: CheckDoc {
                verdict: report.oracle.verdict().as_str(),
                complete: closure.complete,
                sets_explored: Some(closure.sets.len()),
                violations: report
                    .oracle
                    .violations
                    .iter()
                    .map(|v| violation_doc(v, policy, closure, schema))
                    .collect(),
            },
        }
    }
}

fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        format!("{}\n", padded.join("  ").trim_end())
    };
    let mut out = line(header.to_vec());
    let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
    out.push_str(&line(rule.iter().map(String::as_str).collect()));
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}

/// A plain-text table of every violation found by either check.
pub fn render_report_text(report: &SecurityReport, policy: &PolicySet, schema: &LogicalSchema) -> String {
    let closure = &report.oracle.closure;
    let mut rows = Vec::new();
    for (check, violations) in [
        ("logical", &report.logical.violations),
        ("join", &report.oracle.violations),
    ] {
        for v in violations {
            let witness = match &v.witness {
                Witness::Relation(name) => name.clone(),
                Witness::Identifier(set) => schema.render_set(set),
                Witness::JoinedSet(i) => {
                    let views: Vec<String> = closure
                        .trace(*i)
                        .into_iter()
                        .filter_map(|j| match &closure.sets[j].origin {
                            JoinOrigin::View(name) => Some(name.clone()),
                            JoinOrigin::Join { .. } => None,
                        })
                        .collect();
                    format!("join of {}", views.join(", "))
                }
            };
            rows.push(vec![
                check.to_string(),
                schema.render_set(policy.sets()[v.sds].members()),
                v.kind.as_str().to_string(),
                witness,
            ]);
        }
    }
    let consistent = match report.consistent {
        Some(true) => "yes",
        Some(false) => "NO",
        None => "unknown",
    };
    let mut out = format!(
        "verdict: {}\nlogical check: {}\njoin closure: {} ({} sets{})\nchecks agree: {consistent}\n",
        report.verdict.as_str(),
        report.logical.verdict().as_str(),
        report.oracle.verdict().as_str(),
        closure.sets.len(),
        if closure.complete { "" } else { ", capped" },
    );
    if !rows.is_empty() {
        out.push('\n');
        out.push_str(&table(&["check", "set", "kind", "witness"], &rows));
    }
    out
}

/// The views of a decomposition, one per line, followed by the surviving dependencies.
pub fn render_decomposition_text(decomposition: &Decomposition, schema: &LogicalSchema) -> String {
    let rows: Vec<Vec<String>> = decomposition
        .relations
        .iter()
        .flat_map(|r| {
            r.views.iter().map(move |v| {
                vec![
                    r.base.clone(),
                    v.name.clone(),
                    schema.render_set(&v.attributes),
                ]
            })
        })
        .collect();
    let mut out = table(&["base", "view", "attributes"], &rows);
    out.push_str(&format!("\nderived dependencies ({}):\n", decomposition.derived_fds.len()));
    for fd in &decomposition.derived_fds {
        out.push_str(&format!("  {}\n", schema.render_fd(fd)));
    }
    let s = &decomposition.stats;
    out.push_str(&format!(
        "\npi={} epsilon={} eta={} mu={} generated={} eliminated={}\n",
        s.pi, s.epsilon, s.eta, s.mu, s.subsets_generated, s.subsets_eliminated
    ));
    out
}

//! `CREATE VIEW` emission for a decomposition.

use std::fmt::Write;

use crate::attrset::AttrSet;
use crate::decompose::Decomposition;
use crate::fd::ClosureIndex;
use crate::schema::{FunctionalDependency, LogicalSchema};

/// Renders `name` bare when it is a plain identifier and double-quoted otherwise.
pub fn quote_identifier(name: &str) -> String {
    let mut chars = name.chars();
    let plain = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
    if plain {
        name.to_string()
    } else {
        format!("\"{}\"", name.replace('"', "\"\""))
    }
}

/// Whether `view` holds a key of `base` under the dependencies local to `base`.
fn holds_key(view: &AttrSet, base: &AttrSet, original: &LogicalSchema) -> bool {
    let local: Vec<FunctionalDependency> = original
        .fds()
        .iter()
        .filter(|fd| fd.attributes().is_subset(base))
        .cloned()
        .collect();
    ClosureIndex::new(original.width(), &local)
        .closure(view)
        .is_superset(base)
}

/// One `CREATE VIEW` statement per view, in decomposition order.
///
/// Columns drop the relation suffix and keep declaration order. `DISTINCT` is
/// added when the view holds no key of its base relation, since the projection
/// may then repeat rows.
pub fn emit_views(decomposition: &Decomposition, original: &LogicalSchema) -> String {
    let mut out = String::new();
    for rel in &decomposition.relations {
        let base = original
            .relation(&rel.base)
            .map(|r| r.attributes().clone())
            .unwrap_or_else(|| original.empty_set());
        for view in &rel.views {
            let columns: Vec<String> = view
                .attributes
                .iter()
                .map(|a| quote_identifier(original.attribute(a).attr()))
                .collect();
            let distinct = if holds_key(&view.attributes, &base, original) {
                ""
            } else {
                "DISTINCT "
            };
            writeln!(
                out,
                "CREATE VIEW {} AS SELECT {distinct}{} FROM {};",
                quote_identifier(&view.name),
                columns.join(", "),
                quote_identifier(&rel.base)
            )
            .expect("writing to a String cannot fail");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quoting() {
        assert_eq!(quote_identifier("name"), "name");
        assert_eq!(quote_identifier("_x1"), "_x1");
        assert_eq!(quote_identifier("1x"), "\"1x\"");
        assert_eq!(quote_identifier("a-b"), "\"a-b\"");
        assert_eq!(quote_identifier("we\"ird"), "\"we\"\"ird\"");
    }
}

//! Text and JSON rendering of run results.

use serde_json::{json, Map, Value};

use sesqui::json::{BOTTOM_KEY, BOTTOM_ROW};
use sesqui::KernelFlavor;

use crate::run::RunResult;
use crate::scenario::Arrow;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

/// Lines for one row, without indentation.
fn row_lines(a: &Arrow, x: usize) -> Vec<String> {
    match a {
        Arrow::Relation(r) => vec![r.row_text(x)],
        Arrow::Kernel(k) => {
            let row = k.row(x);
            if row.is_failure() && matches!(k.flavor(), KernelFlavor::Par | KernelFlavor::Norm) {
                return vec![BOTTOM_ROW.into()];
            }
            let mut lines: Vec<String> = (0..k.codomain().len())
                .filter_map(|y| {
                    let w = row.weight(&y);
                    w.is_positive()
                        .then(|| format!("{}: {w}", k.codomain().label(y)))
                })
                .collect();
            if row.bottom().is_positive() {
                lines.push(format!("{BOTTOM_KEY}: {}", row.bottom()));
            }
            lines
        }
    }
}

fn selected_rows(a: &Arrow, query: Option<&[String]>) -> Vec<usize> {
    let dom = a.domain();
    match query {
        Some(q) => (0..dom.len()).filter(|&i| q.iter().any(|l| l == dom.label(i))).collect(),
        None => (0..dom.len()).collect(),
    }
}

fn arrow_text(a: &Arrow, query: Option<&[String]>, out: &mut Vec<String>) {
    let rows = selected_rows(a, query);
    if a.domain().len() == 1 {
        out.extend(row_lines(a, 0));
        return;
    }
    for x in rows {
        out.push(format!("{}:", a.domain().label(x)));
        out.extend(row_lines(a, x).into_iter().map(|l| format!("  {l}")));
    }
}

fn arrow_json(a: &Arrow, query: Option<&[String]>) -> Value {
    let mut v = match a {
        Arrow::Kernel(k) => k.to_json(),
        Arrow::Relation(r) => r.to_json(),
    };
    if let Some(q) = query {
        if let Some(rows) = v.get_mut("rows").and_then(Value::as_object_mut) {
            let kept: Map<String, Value> = rows
                .iter()
                .filter(|(k, _)| q.contains(k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect();
            *rows = kept;
        }
    }
    v
}

/// Renders a result. Output is a pure function of the result, so identical
/// runs print identical bytes.
pub fn emit_report(r: &RunResult, format: Format) -> String {
    let query = r.query.as_deref();
    match format {
        Format::Text => {
            let mut out = Vec::new();
            if !r.trace.is_empty() {
                for step in &r.trace {
                    out.push(format!("# {}", step.tree));
                    arrow_text(&step.value, None, &mut out);
                }
                out.push(format!(
                    "# result ({} semantics{})",
                    r.semantics,
                    if r.normalized { ", normalized" } else { "" }
                ));
            }
            arrow_text(&r.result, query, &mut out);
            let mut s = out.join("\n");
            s.push('\n');
            s
        }
        Format::Json => {
            let mut obj = Map::new();
            obj.insert("semantics".into(), json!(r.semantics.to_string()));
            obj.insert("assoc".into(), json!(r.tree.to_string()));
            obj.insert("normalized".into(), json!(r.normalized));
            obj.insert("result".into(), arrow_json(&r.result, query));
            if !r.trace.is_empty() {
                let steps: Vec<Value> = r
                    .trace
                    .iter()
                    .map(|s| json!({"tree": s.tree, "result": arrow_json(&s.value, None)}))
                    .collect();
                obj.insert("trace".into(), Value::Array(steps));
            }
            let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("serializable");
            s.push('\n');
            s
        }
    }
}

//! Plain-text rendering of query result tables.

use windkg_core::graph::{NodeRecord, PropertyValue};
use windkg_core::query::{ResultTable, ResultValue};

fn render_property(value: &PropertyValue) -> String {
    match value {
        PropertyValue::Text(s) => format!("\"{s}\""),
        PropertyValue::Integer(i) => i.to_string(),
        PropertyValue::Real(r) => format!("{r:?}"),
        PropertyValue::Boolean(b) => b.to_string(),
        PropertyValue::TextList(items) => {
            let quoted: Vec<String> = items.iter().map(|s| format!("\"{s}\"")).collect();
            format!("[{}]", quoted.join(", "))
        }
    }
}

fn render_node(node: &NodeRecord) -> String {
    let props: Vec<String> = node
        .properties
        .iter()
        .map(|(k, v)| format!("{k}: {}", render_property(v)))
        .collect();
    format!("(#{} :{} {{{}}})", node.id.0, node.labels.join(":"), props.join(", "))
}

pub fn render_cell(value: &ResultValue) -> String {
    match value {
        ResultValue::Node(node) => render_node(node),
        ResultValue::Relationship(rel) => {
            format!("[#{} :{} {}->{}]", rel.id.0, rel.rel_type, rel.start.0, rel.end.0)
        }
        ResultValue::Value(v) => render_property(v),
        ResultValue::Null => "null".to_string(),
    }
}

pub fn render_table(table: &ResultTable) -> String {
    let mut out = String::new();
    out.push_str(&table.columns.join(" | "));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(render_cell).collect();
        out.push_str(&cells.join(" | "));
        out.push('\n');
    }
    out.push_str(&format!("({} row{})\n", table.len(), if table.len() == 1 { "" } else { "s" }));
    out
}

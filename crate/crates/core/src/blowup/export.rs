use std::fmt::Write;

use super::{BlowupNode, SimResult};

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering: one node per blow-up center.
pub fn to_dot(result: &SimResult) -> String {
    let mut out = String::from("digraph blowup {\n  node [shape=box, fontname=\"monospace\"];\n");
    let mut next = 0usize;
    emit(&result.tree, &mut out, &mut next);
    writeln!(out, "  label=\"r_x = {}\";", result.r_x).unwrap();
    out.push_str("}\n");
    out
}

fn emit(node: &BlowupNode, out: &mut String, next: &mut usize) -> usize {
    let id = *next;
    *next += 1;
    let style = if node.clean { "" } else { ", style=bold" };
    let label = format!(
        "{}\\nt={} field={} w={}\\npg={}\\ne={} mu={}",
        escape(&node.label()),
        node.t,
        node.field,
        node.weight,
        node.pg,
        node.e,
        node.mu
    );
    writeln!(out, "  n{id} [label=\"{label}\"{style}];").unwrap();
    for child in &node.children {
        let cid = emit(child, out, next);
        let step = child.provenance.last().map(|s| s.to_string()).unwrap_or_default();
        writeln!(out, "  n{id} -> n{cid} [label=\"{}\"];", escape(&step)).unwrap();
    }
    id
}

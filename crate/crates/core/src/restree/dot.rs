//! Graphviz export with stable node ids: `p<node>` for points and
//! `e<index>` for exceptional divisors.

use std::fmt::Write;

use super::{NodeKind, ResolutionTree};

pub(super) fn to_dot(tree: &ResolutionTree) -> String {
    let mut out = String::new();
    out.push_str("digraph resolution {\n");
    out.push_str("  node [fontname=\"monospace\"];\n");
    for n in &tree.nodes {
        let kind = match n.kind {
            NodeKind::Regular => "regular".to_string(),
            NodeKind::Reduced => "reduced".to_string(),
            NodeKind::BlownUp(i) => format!("blown up -> E{i}"),
        };
        let _ = writeln!(
            out,
            "  p{} [shape=box, label=\"P{}\\n{}\\n{}\"];",
            n.id,
            n.id,
            escape(&n.germ.to_string()),
            kind
        );
    }
    for d in &tree.divisors {
        let _ = writeln!(
            out,
            "  e{} [shape=ellipse, label=\"E{}\\niota={}\\na_fol={}\\na_var={}\\nself={}\"];",
            d.index, d.index, d.iota, d.a_fol, d.a_var, d.self_intersection
        );
        let _ = writeln!(out, "  p{} -> e{};", d.center, d.index);
    }
    for n in &tree.nodes {
        if let (Some(parent), Some(point)) = (n.parent, &n.point) {
            if let NodeKind::BlownUp(i) = tree.nodes[parent].kind {
                let _ = writeln!(out, "  e{} -> p{} [label=\"{}\"];", i, n.id, point);
            }
        }
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

//! Graphviz export. `-` edges are dashed; every edge gets its own statement.

use std::fmt::Write as _;

use crate::covering::CoveredGraph;
use crate::curvegraph::{CurveGraph, Sign, VertexKind};
use crate::plumbing::PlumbGraph;
use crate::resolution::{MultGraph, MultVertexKind};

/// Labels use `\n` escapes, so backslashes pass through untouched.
fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\\\""))
}

fn edge_attrs(sign: Sign, label: Option<&str>) -> String {
    let mut attrs = Vec::new();
    if sign == Sign::Minus {
        attrs.push("style=dashed".to_string());
    }
    if let Some(l) = label {
        attrs.push(format!("label={}", quote(l)));
    }
    if attrs.is_empty() {
        String::new()
    } else {
        format!(" [{}]", attrs.join(", "))
    }
}

fn header(out: &mut String, name: &str) {
    let _ = writeln!(out, "graph {} {{", quote(name));
}

pub fn curve_graph_dot(g: &CurveGraph) -> String {
    let mut out = String::new();
    header(&mut out, &g.name);
    for v in g.vertices.values() {
        match v.kind {
            VertexKind::Node => {
                let label = format!(
                    "{}\\n({};{},{}) [{}]",
                    v.id, v.mf, v.pair.m, v.pair.n, v.genus
                );
                let _ = writeln!(out, "  {} [label={}];", quote(&v.id), quote(&label));
            }
            VertexKind::Arrowhead => {
                let label = format!("{}\\n({};0,1)", v.id, v.mf);
                let _ = writeln!(
                    out,
                    "  {} [shape=plaintext, label={}];",
                    quote(&v.id),
                    quote(&label)
                );
            }
        }
    }
    for e in g.edges.values() {
        let label = if e.count == 1 {
            e.id.clone()
        } else {
            format!("{} x{}", e.id, e.count)
        };
        let _ = writeln!(
            out,
            "  {} -- {}{};",
            quote(&e.endpoints.0),
            quote(&e.endpoints.1),
            edge_attrs(e.sign, Some(&label))
        );
    }
    out.push_str("}\n");
    out
}

pub fn covered_graph_dot(cg: &CoveredGraph) -> String {
    let mut out = String::new();
    header(&mut out, &cg.base.name);
    for v in cg.vertices.values() {
        match (v.kind, v.euler) {
            (VertexKind::Node, Some(chi)) => {
                let label = format!("{}\\nchi={}", v.id, chi);
                let _ = writeln!(out, "  {} [label={}];", quote(&v.id), quote(&label));
            }
            _ => {
                let _ = writeln!(out, "  {} [shape=plaintext];", quote(&v.id));
            }
        }
    }
    for e in &cg.edges {
        let _ = writeln!(
            out,
            "  {} -- {}{};",
            quote(&e.endpoints.0),
            quote(&e.endpoints.1),
            edge_attrs(e.sign, None)
        );
    }
    out.push_str("}\n");
    out
}

pub fn mult_graph_dot(mg: &MultGraph, name: &str) -> String {
    let mut out = String::new();
    header(&mut out, name);
    for v in mg.vertices.values() {
        let (shape, label) = match v.kind {
            MultVertexKind::Curve => ("", format!("{}\\n({}) [{}]", v.id, v.mult, v.genus)),
            MultVertexKind::String => ("", format!("{}\\n({})", v.id, v.mult)),
            MultVertexKind::Arrowhead => ("shape=plaintext, ", format!("{}\\n({})", v.id, v.mult)),
        };
        let _ = writeln!(
            out,
            "  {} [{}label={}];",
            quote(&v.id),
            shape,
            quote(&label)
        );
    }
    for e in &mg.edges {
        let _ = writeln!(
            out,
            "  {} -- {}{};",
            quote(&e.ends.0),
            quote(&e.ends.1),
            edge_attrs(e.sign, None)
        );
    }
    out.push_str("}\n");
    out
}

pub fn plumb_graph_dot(pg: &PlumbGraph, name: &str) -> String {
    let mut out = String::new();
    header(&mut out, name);
    for v in pg.vertices.values() {
        let label = format!("{}\\n{} [{}]", v.id, v.euler, v.genus);
        let _ = writeln!(out, "  {} [label={}];", quote(&v.id), quote(&label));
    }
    for e in &pg.edges {
        let _ = writeln!(
            out,
            "  {} -- {}{};",
            quote(&e.a),
            quote(&e.b),
            edge_attrs(e.sign, None)
        );
    }
    out.push_str("}\n");
    out
}

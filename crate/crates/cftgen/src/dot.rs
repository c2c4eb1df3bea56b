//! Graphviz rendering. Edges point from cause to effect, so the graphs are
//! laid out bottom to top.
//!
//! Shapes: input failure modes `triangle`, output failure modes
//! `invtriangle`, basic events `circle`, AND `box`, OR `ellipse`, XOR
//! `hexagon`, NOT `diamond`, constant false `plaintext`.

use std::fmt::Write as _;

use cftgen_core::cft::{GateKind, TreeNode};
use cftgen_core::{CftProject, ClassicFaultTree};

fn quote(s: &str) -> String {
    let mut q = String::with_capacity(s.len() + 2);
    q.push('"');
    for c in s.chars() {
        match c {
            '"' | '\\' => {
                q.push('\\');
                q.push(c);
            }
            '\n' => q.push_str("\\n"),
            _ => q.push(c),
        }
    }
    q.push('"');
    q
}

fn gate_shape(kind: GateKind) -> &'static str {
    match kind {
        GateKind::And => "box",
        GateKind::Or => "ellipse",
        GateKind::Xor => "hexagon",
        GateKind::Not => "diamond",
    }
}

pub fn project_to_dot(project: &CftProject) -> String {
    let mut out = String::from("digraph cft {\n");
    if !project.elements.is_empty() {
        out.push_str("  rankdir=BT;\n");
    }
    for e in &project.elements {
        writeln!(
            out,
            "  subgraph {} {{",
            quote(&format!("cluster_{}", e.component))
        )
        .unwrap();
        writeln!(out, "    label={};", quote(&e.component)).unwrap();
        for (modes, shape) in [
            (&e.input_failure_modes, "triangle"),
            (&e.output_failure_modes, "invtriangle"),
        ] {
            for m in modes {
                let label = format!("{}\n{}", m.port, m.failure_type);
                writeln!(
                    out,
                    "    {} [shape={shape}, label={}];",
                    quote(&m.id),
                    quote(&label)
                )
                .unwrap();
            }
        }
        for b in &e.basic_events {
            let label = b.rsplit_once('/').map_or(b.as_str(), |(_, t)| t);
            writeln!(
                out,
                "    {} [shape=circle, label={}];",
                quote(b),
                quote(label)
            )
            .unwrap();
        }
        for g in &e.gates {
            writeln!(
                out,
                "    {} [shape={}, label={}];",
                quote(&g.id),
                gate_shape(g.kind),
                quote(g.kind.as_str())
            )
            .unwrap();
        }
        out.push_str("  }\n");
    }
    for e in &project.elements {
        for edge in e.all_edges() {
            writeln!(out, "  {} -> {};", quote(&edge.from), quote(&edge.to)).unwrap();
        }
    }
    for l in &project.links {
        writeln!(
            out,
            "  {} -> {} [style=dashed];",
            quote(&l.from.to_string()),
            quote(&l.to.to_string())
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn tree_to_dot(tree: &ClassicFaultTree, title: &str) -> String {
    let mut out = String::from("digraph tree {\n  rankdir=BT;\n");
    writeln!(out, "  label={};", quote(title)).unwrap();
    for (i, node) in tree.nodes.iter().enumerate() {
        let (shape, label) = match node {
            TreeNode::BasicEvent(name) => ("circle", name.as_str()),
            TreeNode::False => ("plaintext", "FALSE"),
            TreeNode::Gate { kind, .. } => (gate_shape(*kind), kind.as_str()),
        };
        let top = if i == tree.top { ", penwidth=2" } else { "" };
        writeln!(out, "  n{i} [shape={shape}, label={}{top}];", quote(label)).unwrap();
    }
    for (i, node) in tree.nodes.iter().enumerate() {
        if let TreeNode::Gate { inputs, .. } = node {
            for j in inputs {
                writeln!(out, "  n{j} -> n{i};").unwrap();
            }
        }
    }
    out.push_str("}\n");
    out
}

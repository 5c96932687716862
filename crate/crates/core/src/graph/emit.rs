use std::fmt::Write as _;

use serde::Serialize;

use super::CausalGraph;
use crate::error::{Error, Result};

/// Significant digits of numbers in DOT edge labels.
pub const FLOAT_DIGITS: usize = 4;

fn sig(v: f64) -> String {
    format!("{:.*e}", FLOAT_DIGITS - 1, v)
}

fn quote(name: &str) -> String {
    format!("\"{}\"", name.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz DOT text. Self-loops are written as `node -> node` edges; the
/// output depends only on the graph.
pub fn emit_dot(g: &CausalGraph) -> String {
    let mut out = String::from("digraph G {\n");
    for n in &g.nodes {
        let _ = writeln!(out, "  {};", quote(n));
    }
    let label = |value: f64, tau: Option<f64>, p: f64| {
        let tau = tau.map_or_else(|| "NA".to_string(), sig);
        format!("T={} tau={} p={}", sig(value), tau, sig(p))
    };
    for e in &g.edges {
        let _ = writeln!(
            out,
            "  {} -> {} [label=\"{}\"];",
            quote(&g.nodes[e.source]),
            quote(&g.nodes[e.target]),
            label(e.value, e.tau, e.p)
        );
    }
    for s in &g.self_loops {
        let node = quote(&g.nodes[s.node]);
        let _ = writeln!(out, "  {node} -> {node} [label=\"{}\"];", label(s.value, s.tau, s.p));
    }
    out.push_str("}\n");
    out
}

/// Pretty-printed JSON of a [`super::FlowMatrix`] or [`CausalGraph`].
///
/// Floats are written in shortest round-trip form, so parsing the text
/// restores every value bit for bit.
pub fn emit_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

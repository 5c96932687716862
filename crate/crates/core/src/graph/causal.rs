use serde::{Deserialize, Serialize};

use super::FlowMatrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    #[serde(rename = "T")]
    pub value: f64,
    pub tau: Option<f64>,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfLoop {
    pub node: usize,
    #[serde(rename = "T")]
    pub value: f64,
    pub tau: Option<f64>,
    pub p: f64,
}

/// Significant flows as a directed graph with self-loops. Edges are ordered
/// by target, then source.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CausalGraph {
    pub nodes: Vec<String>,
    pub alpha: f64,
    pub min_tau: Option<f64>,
    pub edges: Vec<Edge>,
    pub self_loops: Vec<SelfLoop>,
}

impl CausalGraph {
    pub fn has_edge(&self, source: usize, target: usize) -> bool {
        self.edges.iter().any(|e| e.source == source && e.target == target)
    }
}

/// Keeps every entry with `p < alpha` (every entry when `alpha >= 1`) and,
/// if `min_tau` is given, `|tau| >= min_tau`. Self contributions are
/// filtered the same way.
pub fn build_graph(fm: &FlowMatrix, alpha: f64, min_tau: Option<f64>) -> CausalGraph {
    let d = fm.dim();
    let tau_at = |i: usize, j: usize| fm.tau.as_ref().map(|t| t[i][j]);
    let keep = |i: usize, j: usize| {
        let p_ok = alpha >= 1.0 || fm.p[i][j] < alpha;
        let tau_ok = match min_tau {
            None => true,
            Some(m) => tau_at(i, j).is_some_and(|t| t.abs() >= m),
        };
        p_ok && tau_ok
    };

    let mut edges = Vec::new();
    let mut self_loops = Vec::new();
    for target in 0..d {
        for source in 0..d {
            if !keep(target, source) {
                continue;
            }
            if source == target {
                self_loops.push(SelfLoop {
                    node: target,
                    value: fm.t[target][target],
                    tau: tau_at(target, target),
                    p: fm.p[target][target],
                });
            } else {
                edges.push(Edge {
                    source,
                    target,
                    value: fm.t[target][source],
                    tau: tau_at(target, source),
                    p: fm.p[target][source],
                });
            }
        }
    }
    CausalGraph {
        nodes: fm.names.clone(),
        alpha,
        min_tau,
        edges,
        self_loops,
    }
}

//! From a multivariate series to a causal graph in Graphviz DOT.
//!
//! Pipe the output to `dot -Tsvg` to draw it.

use infoflow::dynamics::{preset, simulate};
use infoflow::graph::{effective_alpha, emit_dot};
use infoflow::{all_pairs, build_graph, AnalysisOptions};

fn main() -> infoflow::Result<()> {
    let cfg = preset("chain5")?;
    let sde = cfg.sde()?;
    let set = simulate(&sde, &cfg.initial_state(), cfg.n, cfg.dt, 11, cfg.burn_in)?.into_series_set()?;

    let fm = all_pairs(&set, &AnalysisOptions::default())?;
    // Bonferroni over all d^2 tests, and ignore flows under 1% of the budget
    let alpha = effective_alpha(0.05, fm.dim(), true);
    let graph = build_graph(&fm, alpha, Some(0.01));

    eprintln!("{} edges, {} self-loops", graph.edges.len(), graph.self_loops.len());
    print!("{}", emit_dot(&graph));
    Ok(())
}

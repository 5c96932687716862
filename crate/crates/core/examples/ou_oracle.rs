//! Closed-form flows of a linear stochastic system next to estimates from a
//! simulated trajectory.

use infoflow::dynamics::{preset, simulate, stationary_covariance, theoretical_matrix};
use infoflow::{all_pairs, AnalysisOptions};

fn main() -> infoflow::Result<()> {
    let sde = preset("chain5")?.sde()?;
    let sigma = stationary_covariance(&sde)?;
    println!("stationary covariance (Lyapunov residual {:.1e}):\n{:.4}", sigma.residual, sigma.sigma);

    let exact = theoretical_matrix(&sde)?;
    let set = simulate(&sde, &vec![0.0; sde.dim()], 100_000, 0.01, 3, None)?.into_series_set()?;
    let est = all_pairs(&set, &AnalysisOptions::default())?;

    println!("T[target][source]   exact    estimate");
    for i in 0..sde.dim() {
        for j in 0..sde.dim() {
            let t = exact.flows[(i, j)];
            if t != 0.0 || i == j {
                println!("T[{i}][{j}]           {t:+.4}  {:+.4} (p = {:.2e})", est.t[i][j], est.p[i][j]);
            }
        }
    }
    Ok(())
}

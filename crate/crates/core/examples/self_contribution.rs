//! A component's own contribution to its entropy change.
//!
//! For a linear system it equals the diagonal drift coefficient a_ii; the
//! entropy budget (inflows + self + noise = 0 at stationarity) ties the
//! three terms together.

use infoflow::dynamics::{preset, simulate, theoretical_budget};
use infoflow::estimator::self_contribution;

fn main() -> infoflow::Result<()> {
    let sde = preset("ou2")?.sde()?;
    let set = simulate(&sde, &[0.0, 0.0], 200_000, 0.01, 7, None)?.into_series_set()?;

    for target in 0..set.dim() {
        let est = self_contribution(&set, target, 1)?;
        let budget = theoretical_budget(&sde, target)?;
        let inflow: f64 = budget.flows.iter().map(|(_, t)| t).sum();
        println!(
            "{}: self = {:+.4} +/- {:.4} (exact {:+.4}); budget {:+.4} + {:+.4} + {:+.4} = {:.1e}",
            set.names()[target],
            est.value,
            est.std_err,
            budget.self_term,
            inflow,
            budget.self_term,
            budget.noise_term,
            budget.residual
        );
    }
    Ok(())
}

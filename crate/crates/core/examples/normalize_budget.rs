//! Relative importance of each flow: every term of a target's entropy
//! budget divided by the budget's total absolute size.

use infoflow::dynamics::{preset, simulate};
use infoflow::estimator::{fit_linear_model, flow_from_fit, normalize_flows, self_from_fit};

fn main() -> infoflow::Result<()> {
    let sde = preset("ou2")?.sde()?;
    let set = simulate(&sde, &[0.0, 0.0], 500_000, 0.01, 5, None)?.into_series_set()?;

    let fit = fit_linear_model(&set, 0, 1)?;
    let inflow = flow_from_fit(&fit, 1)?;
    let own = self_from_fit(&fit);
    let budget = normalize_flows(&[inflow], &own, &fit)?;

    println!("budget of x1 (total {:.4}):", budget.total);
    for (source, tau) in &budget.flows {
        println!("  from {}: {tau:+.4}", set.names()[*source]);
    }
    println!("  self:   {:+.4}", budget.self_share);
    println!("  noise:  {:+.4}", budget.noise_share);
    println!("  sum of |shares| = {:.6}", budget.abs_sum());
    Ok(())
}

//! Information flow between two series, in both directions.
//!
//! `x2` drives `x1` but not the reverse, so T(x2 -> x1) should be near the
//! theoretical 1/9 and T(x1 -> x2) indistinguishable from zero.

use infoflow::dynamics::{preset, simulate, theoretical_flow};
use infoflow::estimator::flow_bivariate;

fn main() -> infoflow::Result<()> {
    let sde = preset("ou2")?.sde()?;
    let traj = simulate(&sde, &[0.0, 0.0], 200_000, 0.01, 42, None)?;
    let (x1, x2) = (&traj.values[0], &traj.values[1]);

    // flow_bivariate(target, source, ...)
    let into_x1 = flow_bivariate(x1, x2, 0.01, 1)?;
    let into_x2 = flow_bivariate(x2, x1, 0.01, 1)?;

    for (label, f, truth) in [
        ("x2 -> x1", &into_x1, theoretical_flow(&sde, 1, 0)?),
        ("x1 -> x2", &into_x2, theoretical_flow(&sde, 0, 1)?),
    ] {
        println!(
            "{label}: T = {:+.4} (se {:.4}, 95% CI [{:+.4}, {:+.4}], p = {:.3}), exact {:+.4}",
            f.value, f.std_err, f.ci95.0, f.ci95.1, f.p_value, truth
        );
    }
    Ok(())
}

//! One wide input and `m-1` narrow ones: the sphere touches the axis
//! tangentially and the maximal function scales like `δ^{m-3/2}`.

use sphmax::cex::{cex_condition_b, default_params, Family, ProbeGrid};
use sphmax::Sliced;

fn main() -> sphmax::Result<()> {
    let sliced = Sliced::default();
    for m in [2, 3] {
        let r = cex_condition_b(
            m,
            &default_params(Family::B, m),
            &ProbeGrid::default(),
            &sliced,
        )?;
        println!(
            "m={m}: slope {:.4} (expected {} ± {}), ok = {}",
            r.fitted_slope,
            r.expected_slope,
            r.tolerance,
            r.ok()
        );
        for (d, v) in r.params.iter().zip(&r.values) {
            println!("  δ = {d:.3e}  value {v:.6e}");
        }
    }
    Ok(())
}

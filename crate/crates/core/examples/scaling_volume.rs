//! Concentrated inputs `χ_[-δ,δ]`: the maximal function at `x ∈ [1/2, 1]`
//! scales like `δ^{m-1}`.

use sphmax::cex::{cex_condition_a, default_params, Family, ProbeGrid};
use sphmax::Sliced;

fn main() -> sphmax::Result<()> {
    let sliced = Sliced::default();
    for m in [2, 3] {
        let r = cex_condition_a(
            m,
            &default_params(Family::A, m),
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
        print!("{}", r.to_csv_string()?);
    }
    Ok(())
}

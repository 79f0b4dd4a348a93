//! Corner points: `k` unit indicators and `m-k` constants decay like `|x|^{-k}`
//! along the projection onto the first `k` coordinates.

use sphmax::cex::{cex_corner, corner_projection_constant, default_params, Family, ProbeGrid};
use sphmax::Sliced;

fn main() -> sphmax::Result<()> {
    let sliced = Sliced::default();
    for (m, k) in [(2, 1), (3, 1), (3, 2)] {
        let r = cex_corner(
            m,
            k,
            &default_params(Family::Corner, m),
            &ProbeGrid::default(),
            &sliced,
        )?;
        println!(
            "m={m} k={k}: κ = {:.4}, slope {:.4} (expected {}), operator slope {:.4}, ok = {}",
            corner_projection_constant(m, k),
            r.fitted_slope,
            r.expected_slope,
            r.diagnostics["operator_slope"],
            r.ok()
        );
    }
    Ok(())
}

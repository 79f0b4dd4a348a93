//! Power-log inputs on the boundary pieces `H` and `H_i`, where the maximal
//! function decays exactly at the borderline rate.

use sphmax::cex::{cex_h, cex_hi, default_params, Family, ProbeGrid};
use sphmax::region::ExponentPoint;
use sphmax::Sliced;

fn main() -> sphmax::Result<()> {
    let sliced = Sliced::default();
    let grid = ProbeGrid::default();

    for s in ["(1/2,1/2)", "(1/2,1/2,1)"] {
        let pt: ExponentPoint = s.parse()?;
        let r = cex_h(&pt, &default_params(Family::H, pt.m()), &grid, &sliced)?;
        println!(
            "H  at {pt}: slope {:.4} (expected {}), ok = {}",
            r.fitted_slope,
            r.expected_slope,
            r.ok()
        );
    }

    for s in ["(1/2,1/4)", "(3/4,3/4,1/4)"] {
        let pt: ExponentPoint = s.parse()?;
        let r = cex_hi(&pt, &default_params(Family::Hi, pt.m()), &grid, &sliced)?;
        println!(
            "Hi at {pt}: slope {:.4} (expected {:.4}), ok = {}",
            r.fitted_slope,
            r.expected_slope,
            r.ok()
        );
        if let Some(c) = r.columns.get("compensated") {
            println!("   compensated {c:.4?}");
        }
    }

    match cex_h(&"(1/3,1/3)".parse()?, &[8.0, 16.0], &grid, &sliced) {
        Err(e) => println!("off the boundary: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}

//! Suprema over dilations: the multilinear spherical maximal function, the
//! two-point linear operator and the ball (Hardy-Littlewood) variant.

use sphmax::operators::{linear_spherical_max, multilinear_hl_max, spherical_maximal};
use sphmax::{FunctionSpec, Sliced, TGrid};

fn main() -> sphmax::Result<()> {
    let sliced = Sliced::default();
    let delta = 1.0 / 16.0;
    let bump = FunctionSpec::indicator(-delta, delta)?;
    let x = 0.75;

    let grid = TGrid::new(0.5, 2.0, 1.02, 20)?.with_anchors([x * 2f64.sqrt()]);
    let est = spherical_maximal(&[bump, bump], x, &grid, &sliced)?;
    println!(
        "S^2(χ, χ)({x}) ≥ {:.6} at t = {:.6}  (value/δ = {:.4})",
        est.value,
        est.argmax_t,
        est.value / delta
    );

    let unit = FunctionSpec::indicator(-1.0, 1.0)?;
    let g = TGrid::new(4.0, 6.0, 1.01, 10)?;
    println!(
        "two-point max of χ(-1,1) at x=5: {}",
        linear_spherical_max(&unit, 5.0, &g)?.value
    );

    let g = TGrid::new(1.0, 5.0, 1.005, 20)?;
    let hl = multilinear_hl_max(&[unit], 2.0, &g, &sliced)?;
    println!(
        "ball max of χ(-1,1) at x=2: {:.6} at t = {:.4}",
        hl.value, hl.argmax_t
    );

    // the inferred grid spans every scale at which the supports can be seen
    let fs = [unit, bump, "plog:0.3,1,0.5".parse()?];
    let grid = TGrid::infer(&fs, 0.4)?;
    let est = spherical_maximal(&fs, 0.4, &grid, &sliced)?;
    println!(
        "S^3 at x=0.4: {:.6} at t = {:.6} after {} rounds",
        est.value, est.argmax_t, est.levels
    );
    Ok(())
}

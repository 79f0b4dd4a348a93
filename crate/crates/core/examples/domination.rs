//! Pointwise domination of the spherical maximal function, bilinear arc by
//! the two auxiliary maximal functions and multilinear by `S^2 · M^{m-2}`.

use sphmax::operators::{
    check_bilinear_domination, check_multilinear_domination, domination_constant,
};
use sphmax::probes::{bilinear_suite, multilinear_suite};
use sphmax::{FunctionSpec, Sliced, TGrid};

fn main() -> sphmax::Result<()> {
    let sliced = Sliced::default();

    let f = FunctionSpec::power_log(0.25, 1.0, 0.5)?;
    let g = FunctionSpec::indicator(-10.0, 10.0)?;
    let grid = TGrid::infer(&[f, g], 0.3)?;
    let r = check_bilinear_domination(&f, &g, 0.3, 0.1, 1.5, &grid, &sliced)?;
    println!(
        "bilinear: arc {:.6} ≤ √2·A·K·B = {:.6}  ok = {}",
        r.lhs, r.rhs, r.ok
    );

    let delta = FunctionSpec::indicator(-0.25, 0.25)?;
    let unit = FunctionSpec::indicator(-1.0, 1.0)?;
    let fs = [unit, unit, delta];
    let r = check_multilinear_domination(&fs, 0.8, &TGrid::infer(&fs, 0.8)?, &sliced)?;
    println!(
        "trilinear: S^3 {:.6} ≤ C·S^2·M = {:.6} (C_3 = {})  ok = {}",
        r.lhs,
        r.rhs,
        domination_constant(3)?,
        r.ok
    );

    let b = bilinear_suite(50, 1729, &sliced)?;
    println!(
        "{} bilinear probes: {} violations, worst ratio {:.4}",
        b.probes, b.violations, b.worst_ratio
    );
    let t = multilinear_suite(3, 20, 1729, &sliced)?;
    println!(
        "{} trilinear probes: {} violations, worst ratio {:.4}",
        t.probes, t.violations, t.worst_ratio
    );
    Ok(())
}

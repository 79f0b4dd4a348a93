//! Evaluates `S^m_t` three ways: the adaptive slice rule, a fixed node rule
//! and Monte Carlo.

use sphmax::operators::spherical_average;
use sphmax::sphere::mc::mc_spherical_average;
use sphmax::{FunctionSpec, Sliced, SphereRule};

fn main() -> sphmax::Result<()> {
    let f: FunctionSpec = "ind:-2,0".parse()?;
    let g: FunctionSpec = "ind:0,2".parse()?;
    let fs = [f, g];

    let sliced = Sliced::default();
    let nodes = SphereRule::build(2, 8)?;
    let adaptive = spherical_average(&fs, 1.0, 0.0, &sliced)?;
    let fixed = spherical_average(&fs, 1.0, 0.0, &nodes)?;
    let mc = mc_spherical_average(&fs, 1.0, 0.0, 100_000, 7)?;

    println!("quarter arc, exact 1/4");
    println!("  sliced      {adaptive:.12}");
    println!("  node rule   {fixed:.12}  ({} nodes)", nodes.len());
    println!("  monte carlo {:.6} ± {:.6}", mc.mean, mc.std_error);

    // m = 3 with a power-log singularity on one coordinate
    let h = FunctionSpec::power_log(0.25, 1.0, 0.5)?;
    let one = FunctionSpec::constant(1.0)?;
    let fs3 = [h, one, "ind:-1,1".parse()?];
    let v = spherical_average(&fs3, 0.8, 0.1, &sliced)?;
    let mc = mc_spherical_average(&fs3, 0.8, 0.1, 100_000, 7)?;
    println!(
        "m=3 power-log: sliced {v:.8}, monte carlo {:.5} (z = {:.2})",
        mc.mean,
        mc.z_score(v)
    );
    Ok(())
}

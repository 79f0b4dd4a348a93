//! Fixed sphere and ball rules: sizes, moments and refinement.

use sphmax::{BallRule, SphereRule};

fn main() -> sphmax::Result<()> {
    for m in 2..=5 {
        let r = SphereRule::build(m, 4)?;
        let one = r.integrate(|_| 1.0);
        let y1sq = r.integrate(|y| y[0] * y[0]);
        println!(
            "S^{}: {:>7} nodes, ∫1 = {one:.15}, ∫y₁² = {y1sq:.12} (1/m = {:.12})",
            m - 1,
            r.len(),
            1.0 / m as f64
        );
    }

    let mut r = SphereRule::build(2, 0)?;
    for _ in 0..4 {
        let q4 = r.integrate(|y| y[0].powi(4));
        println!(
            "circle level {}: {:>4} nodes, ∫y₁⁴ = {q4:.15} (3/8)",
            r.level(),
            r.len()
        );
        r = r.refine()?;
    }

    let ball = BallRule::build(2, 5)?;
    println!(
        "B^2: {} nodes, ∫[y₁ > 0] = {:.12}",
        ball.len(),
        ball.integrate(|y| f64::from(y[0] > 0.0))
    );

    let small = SphereRule::build(2, 1)?;
    let mut csv = Vec::new();
    small.write_csv(&mut csv)?;
    print!("{}", String::from_utf8_lossy(&csv));
    Ok(())
}

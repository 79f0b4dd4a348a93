//! The bilinear endpoint: `f = |x|^{-1/2}(-log|x|)^{-1}` near zero paired
//! with a wide indicator. Truncating the arc at `η` leaves a value growing
//! like `log log(1/η)`.

use sphmax::cex::{
    cex_bilinear_l2, default_params, l2_analytic_integral, l2_integral_quadrature, Family,
};

fn main() -> sphmax::Result<()> {
    let x = 1.0 / 3.0;
    println!(
        "antiderivative at η=1e-6: {:.12}, quadrature {:.12}",
        l2_analytic_integral(x, 1e-6),
        l2_integral_quadrature(x, 1e-6)
    );

    let r = cex_bilinear_l2(&default_params(Family::L2, 2), x)?;
    for (eta, v) in r.params.iter().zip(&r.values) {
        println!("  η = {eta:.0e}  truncated arc {v:.6}");
    }
    println!(
        "slope vs log log(1/η): {:.4} (1/√(2x) = {:.4})",
        r.fitted_slope, r.expected_slope
    );
    for (k, v) in &r.diagnostics {
        println!("  {k} = {v}");
    }
    println!(
        "slope ok = {}, side checks ok = {}",
        r.slope_ok, r.checks_ok
    );
    Ok(())
}

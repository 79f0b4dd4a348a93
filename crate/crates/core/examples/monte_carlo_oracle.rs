//! Seeded agreement check between the deterministic rule and sampling.

use sphmax::probes::oracle_suite;
use sphmax::Sliced;

fn main() -> sphmax::Result<()> {
    let sliced = Sliced::default();
    for m in [2, 3] {
        let s = oracle_suite(m, 20, 100_000, 1729, 4.0, &sliced)?;
        println!(
            "m={m}: {} cases, max |z| = {:.3}, ok = {}",
            s.cases.len(),
            s.max_z,
            s.ok
        );
        for c in s.cases.iter().take(3) {
            println!(
                "  t={:.3} x={:+.3}  rule {:.6}  mc {:.6} ± {:.6}",
                c.t, c.x, c.value, c.mc_mean, c.mc_std_error
            );
        }
    }
    Ok(())
}

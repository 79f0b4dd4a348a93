//! The ratio bound behind the boundary counterexamples, sampled in
//! logarithmic coordinates.

use sphmax::cex::{lemma_check, lemma_phi};

fn main() -> sphmax::Result<()> {
    println!("φ(1, 1, 1/4) = {:.9}", lemma_phi(1.0, 1.0, 0.25));
    for r1 in [0.5, 1.0, 2.0] {
        for r2 in [0.5, 1.0, 2.0] {
            let rep = lemma_check(r1, r2, 1.0, 20_000, 1729)?;
            println!(
                "r1={r1:<3} r2={r2:<3} max ratio {:.12}  C' = {:.6}  monotonicity violations {}  ok = {}",
                rep.max_ratio, rep.c_prime, rep.monotonicity_violations, rep.ok
            );
        }
    }
    Ok(())
}

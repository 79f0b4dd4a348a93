//! Exact classification of exponent tuples `q_i = 1/p_i`.

use sphmax::region::{classify, sample_region, ExponentPoint};

fn main() -> sphmax::Result<()> {
    for s in [
        "(1/3,1/3)",
        "(1/2,1/4)",
        "(1,0,0)",
        "(1/2,1/2,1)",
        "(3/5,3/5,9/10)",
        "(0.2,0.3,0.4,0.5)",
    ] {
        let pt: ExponentPoint = s.parse()?;
        let c = classify(&pt);
        let triggers: Vec<String> = c.triggers.iter().map(|t| t.to_string()).collect();
        println!(
            "{:<18} 1/p = {:<6} {:<20} [{}]",
            pt.to_string(),
            sphmax::region::rational_string(&pt.recip_p()),
            c.verdict.to_string(),
            triggers.join(" ")
        );
        println!("{:>18} {}", "", c.citation);
    }

    let sample = sample_region(3, 2000, 5)?;
    let mut counts = std::collections::BTreeMap::new();
    for (_, c) in &sample {
        *counts.entry(c.verdict.to_string()).or_insert(0) += 1;
    }
    println!("2000 lattice samples in [0,1]^3: {counts:?}");
    Ok(())
}

//! `L^p` norms of the symbolic inputs, including borderline divergence.

use sphmax::FunctionSpec;

fn main() -> sphmax::Result<()> {
    for s in [
        "ind:-1,2",
        "plog:0.5,1,0.5",
        "plog:0.5,0.5,0.5",
        "ptail:0.25,0.5,2",
        "const:3",
    ] {
        let f: FunctionSpec = s.parse()?;
        let row: Vec<String> = [1.0, 2.0, 4.0, f64::INFINITY]
            .iter()
            .map(|&p| format!("{:.6}", f.lp_norm(p)))
            .collect();
        println!("{s:<18} L1 L2 L4 Linf: {}", row.join("  "));
    }
    Ok(())
}

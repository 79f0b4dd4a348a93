//! Vertex sets of the closed strong-type region and their SVG rendering.

use sphmax::cli::write_figure;
use sphmax::region::{parse_rational, region_figure};

fn main() -> sphmax::Result<()> {
    let dir = std::env::temp_dir().join("sphmax-figures");
    std::fs::create_dir_all(&dir)?;

    for (m, slice) in [(2, None), (3, None), (3, Some("1/2"))] {
        let slice = slice.map(parse_rational).transpose()?;
        let fig = region_figure(m, slice)?;
        println!(
            "m={m} slice={:?}: {} vertices, {} faces",
            fig.slice.as_ref().map(|s| s.to_string()),
            fig.vertices.len(),
            fig.faces.len()
        );
        println!("  {}", fig.labels().join(" "));
        for (name, idx) in &fig.sets {
            let labels: Vec<&str> = idx
                .iter()
                .map(|&i| fig.vertices[i].label.as_str())
                .collect();
            println!("  {name}: {}", labels.join(" "));
        }
        let stem = match &fig.slice {
            Some(_) => format!("region_m{m}_slice"),
            None => format!("region_m{m}"),
        };
        let (json, svg) = write_figure(&fig, &dir, &stem)?;
        println!("  wrote {} and {}", json.display(), svg.display());
    }
    Ok(())
}

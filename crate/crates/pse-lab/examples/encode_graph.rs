//! Computes every positional/structural encoding for one small graph and
//! prints the per-node vectors.

use pse_lab::pse::{compute_all, PseConfig, PseLevel};
use pse_lab::Graph;

fn main() -> pse_lab::Result<()> {
    // a 5-cycle with one chord
    let g = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (1, 4)])?;
    let config = PseConfig::default();

    for pse in compute_all(&g, &config)? {
        println!("\n{} ({:?}-level, width {}):", pse.kind.name(), pse.level, pse.width());
        match pse.level {
            PseLevel::Node => {
                for v in 0..g.num_nodes() {
                    let row: Vec<String> =
                        pse.values.row(v).iter().map(|x| format!("{x:+.4}")).collect();
                    println!("  node {v}: [{}]", row.join(", "));
                }
            }
            PseLevel::Graph => {
                let row: Vec<String> =
                    pse.values.row(0).iter().map(|x| format!("{x:+.4}")).collect();
                println!("  graph: [{}]", row.join(", "));
            }
        }
    }
    Ok(())
}

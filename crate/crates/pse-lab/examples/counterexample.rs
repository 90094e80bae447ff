//! The limits of refinement-bounded encoders: two stable 2-colorings of the
//! same circulant that color refinement cannot tell apart, even though the
//! uncolored graph is node-transitive.

use pse_lab::datasets::fig1_graphs;
use pse_lab::pse::count_simple_cycles;
use pse_lab::wl::{color_refinement, distinguishable, orbit_partition};

fn main() -> pse_lab::Result<()> {
    let (c6, two_triangles, coloring_a, coloring_b) = fig1_graphs();

    let (diff, _) = distinguishable(&c6, &two_triangles, None, None)?;
    println!("C6 vs two triangles, plain refinement: distinguishable = {diff}");
    println!(
        "  cycle counts (k=3..6): {:?} vs {:?}",
        count_simple_cycles(&c6, 6)?,
        count_simple_cycles(&two_triangles, 6)?
    );

    for (name, g) in [("coloring A", &coloring_a), ("coloring B", &coloring_b)] {
        let p = color_refinement(g, g.node_labels())?;
        println!("{name}: stable after {} iterations, {} classes", p.iterations, p.num_classes());
    }
    let (diff, _) = distinguishable(
        &coloring_a,
        &coloring_b,
        coloring_a.node_labels(),
        coloring_b.node_labels(),
    )?;
    println!("colorings distinguishable by refinement: {diff}");

    let plain = coloring_a.with_node_labels(vec![0; 12])?;
    let orbits = orbit_partition(&plain)?;
    println!(
        "uncolored circulant: {} orbit(s), {} automorphisms",
        orbits.num_orbits(),
        orbits.automorphism_count
    );
    Ok(())
}

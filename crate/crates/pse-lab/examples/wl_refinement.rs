//! Color refinement in action: the 6-cycle and the disjoint pair of
//! triangles get identical stable colorings, but augmenting the initial
//! colors with cycle counts separates them immediately.

use pse_lab::pse::{all_pse, PseConfig};
use pse_lab::wl::{augment_colors_batch, color_refinement, distinguishable, refine_shared};
use pse_lab::Graph;

fn main() -> pse_lab::Result<()> {
    let c6 = Graph::new(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)])?;
    let two_triangles = Graph::new(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])?;

    let p = color_refinement(&c6, None)?;
    println!("C6: {} stable classes after {} iterations", p.num_classes(), p.iterations);

    let (diff, _) = distinguishable(&c6, &two_triangles, None, None)?;
    println!("plain refinement distinguishes them: {diff}");

    // cycle counts up to length 6 as extra initial colors
    let config = PseConfig {
        cycle_k_max: Some(6),
        lap_pe_dim: None,
        rwse_steps: None,
        elstatic: false,
        hk_times: None,
        lap_eigval_dim: None,
    };
    let pse_a = all_pse(&c6, &config)?;
    let pse_b = all_pse(&two_triangles, &config)?;
    let inits = augment_colors_batch(&[&c6, &two_triangles], &[&pse_a, &pse_b], 6)?;
    let parts = refine_shared(&[&c6, &two_triangles], &inits)?;
    println!(
        "cycle-augmented refinement distinguishes them: {}",
        parts[0].color_history != parts[1].color_history
    );
    Ok(())
}

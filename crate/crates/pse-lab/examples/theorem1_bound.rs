//! Builds GatedGCN weight stacks that reproduce random GIN stacks up to a
//! chosen error budget and reports the observed error against the bound.

use pse_lab::datasets::random_regular;
use pse_lab::mpnn::{thm1_construct, thm1_verify, GinLayerWeights};
use pse_lab::rng::SplitMix64;
use pse_lab::DenseMatrix;

fn main() -> pse_lab::Result<()> {
    let mut rng = SplitMix64::new(42);
    let g = random_regular(10, 3, &mut rng)?;
    let stack = vec![
        GinLayerWeights::random(3, 5, 4, 1.0, &mut rng),
        GinLayerWeights::random(4, 6, 3, 1.0, &mut rng),
    ];
    let gated = thm1_construct(&stack, 0.1)?;
    println!("{} GIN layers become {} GatedGCN layers", stack.len(), gated.len());

    let mut h0 = DenseMatrix::zeros(g.num_nodes(), 3);
    for v in 0..g.num_nodes() {
        for j in 0..3 {
            h0.set(v, j, 2.0 * rng.next_f64() - 1.0);
        }
    }
    println!("{:>8} {:>14} {:>14}", "alpha", "max_error", "bound");
    for alpha in [0.5, 0.1, 0.01, 0.001] {
        let (err, bound) = thm1_verify(&g, &h0, &stack, alpha)?;
        println!("{alpha:>8} {err:>14.8} {bound:>14.8}");
        assert!(err <= bound + 1e-9);
    }
    Ok(())
}

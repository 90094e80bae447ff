//! Property-based invariants over randomly generated graphs.

use proptest::prelude::*;

use pse_lab::graph::{parse_jsonl, serialize_jsonl, Graph, GraphRecord};
use pse_lab::matrix::laplacian;
use pse_lab::pse::{normalize_per_graph, rwse};
use pse_lab::wl::color_refinement;

fn arb_graph() -> impl Strategy<Value = Graph> {
    (2usize..12).prop_flat_map(|n| {
        let max_edges = n * (n - 1) / 2;
        (Just(n), proptest::collection::vec(any::<bool>(), max_edges))
    })
    .prop_map(|(n, mask)| {
        let mut edges = Vec::new();
        let mut idx = 0;
        for a in 0..n {
            for b in a + 1..n {
                if mask[idx] {
                    edges.push((a, b));
                }
                idx += 1;
            }
        }
        Graph::new(n, &edges).unwrap()
    })
}

fn arb_permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just(()).prop_perturb(move |_, mut rng| {
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = (rng.next_u64() % (i as u64 + 1)) as usize;
            perm.swap(i, j);
        }
        perm
    })
}

proptest! {
    #[test]
    fn jsonl_round_trip(g in arb_graph()) {
        let records = vec![GraphRecord::from_graph(&g)];
        let mut buf = Vec::new();
        serialize_jsonl(&mut buf, &records).unwrap();
        let parsed = parse_jsonl(&buf[..]).unwrap();
        prop_assert_eq!(&records, &parsed);
        prop_assert_eq!(&g, &parsed[0].to_graph().unwrap());
    }

    #[test]
    fn permutation_round_trip(g in arb_graph().prop_flat_map(|g| {
        let n = g.num_nodes();
        (Just(g), arb_permutation(n))
    })) {
        let (g, perm) = g;
        let mut inverse = vec![0; perm.len()];
        for (old, &new) in perm.iter().enumerate() {
            inverse[new] = old;
        }
        let back = g.permute(&perm).unwrap().permute(&inverse).unwrap();
        prop_assert_eq!(g, back);
    }

    #[test]
    fn laplacian_rows_sum_to_zero(g in arb_graph()) {
        let lap = laplacian(&g);
        for v in 0..g.num_nodes() {
            let sum: f64 = lap.row(v).iter().sum();
            prop_assert!(sum.abs() < 1e-12);
        }
    }

    #[test]
    fn normalization_is_idempotent(g in arb_graph()) {
        let p = rwse(&g, &[1, 2, 3]).unwrap();
        let once = normalize_per_graph(&p).unwrap();
        let twice = normalize_per_graph(&once).unwrap();
        for v in 0..g.num_nodes() {
            for j in 0..once.width() {
                prop_assert!((once.values.get(v, j) - twice.values.get(v, j)).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn refinement_class_count_is_monotone(g in arb_graph()) {
        let p = color_refinement(&g, None).unwrap();
        for w in p.history.windows(2) {
            // class counts can only grow while refining
            prop_assert!(w[1].len() >= w[0].len());
        }
        prop_assert!(p.num_classes() <= g.num_nodes());
    }
}

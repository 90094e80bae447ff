//! 1-WL color refinement, pairwise distinguishability, exact orbit
//! partitions, and PSE-augmented initial colorings.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::pse::{PseLevel, PseVector};

/// Stable coloring of one graph plus the per-iteration histories.
#[derive(Clone, Debug)]
pub struct WlPartition {
    /// Per-node class ids, contiguous from 0.
    pub colors: Vec<usize>,
    /// Iterations until stabilization (0 when the initial coloring is stable).
    pub iterations: usize,
    /// Sorted class-size multiset per iteration, starting at iteration 0.
    pub history: Vec<Vec<usize>>,
    /// Sorted color multiset per iteration, using ids shared over the whole
    /// refinement batch. Comparing these across graphs of the same batch is
    /// what decides distinguishability; class sizes alone would miss graphs
    /// whose colorings differ but have equal block sizes.
    pub color_history: Vec<Vec<u64>>,
}

impl WlPartition {
    pub fn num_classes(&self) -> usize {
        self.colors.iter().max().map_or(0, |&c| c + 1)
    }
}

#[derive(Clone, Debug)]
pub struct OrbitPartition {
    /// Per-node orbit ids, contiguous from 0.
    pub orbits: Vec<usize>,
    /// Order of the automorphism group.
    pub automorphism_count: u64,
}

impl OrbitPartition {
    pub fn num_orbits(&self) -> usize {
        self.orbits.iter().max().map_or(0, |&o| o + 1)
    }
}

fn class_sizes(colors: &[u64]) -> Vec<usize> {
    let mut counts: HashMap<u64, usize> = HashMap::new();
    for &c in colors {
        *counts.entry(c).or_insert(0) += 1;
    }
    let mut sizes: Vec<usize> = counts.into_values().collect();
    sizes.sort_unstable();
    sizes
}

fn sorted_colors(colors: &[u64]) -> Vec<u64> {
    let mut out = colors.to_vec();
    out.sort_unstable();
    out
}

fn compress(colors: &[u64]) -> Vec<usize> {
    let mut map: HashMap<u64, usize> = HashMap::new();
    let mut out = Vec::with_capacity(colors.len());
    for &c in colors {
        let next = map.len();
        out.push(*map.entry(c).or_insert(next));
    }
    out
}

/// Runs color refinement on several graphs at once with one shared RELABEL
/// table, which is equivalent to running them "in parallel". Returns the
/// stable colors and per-iteration class-size multisets of each graph.
///
/// RELABEL is an exact dictionary to fresh integers, never a hash, so two
/// signatures collide only when they are equal.
pub fn refine_shared(graphs: &[&Graph], inits: &[Vec<u64>]) -> Result<Vec<WlPartition>> {
    assert_eq!(graphs.len(), inits.len());
    for (g, init) in graphs.iter().zip(inits) {
        if init.len() != g.num_nodes() {
            return Err(Error::LengthMismatch { got: init.len(), expected: g.num_nodes() });
        }
    }
    let mut colors: Vec<Vec<u64>> = inits.to_vec();
    let mut histories: Vec<Vec<Vec<usize>>> =
        colors.iter().map(|c| vec![class_sizes(c)]).collect();
    let mut color_histories: Vec<Vec<Vec<u64>>> =
        colors.iter().map(|c| vec![sorted_colors(c)]).collect();

    let total_classes = |colors: &[Vec<u64>]| -> usize {
        let mut seen: Vec<u64> = colors.iter().flatten().copied().collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    };

    let mut num_classes = total_classes(&colors);
    let mut iterations = 0;
    loop {
        let mut relabel: HashMap<(u64, Vec<u64>), u64> = HashMap::new();
        let mut next_color = 0u64;
        let mut new_colors: Vec<Vec<u64>> = Vec::with_capacity(graphs.len());
        for (g, cur) in graphs.iter().zip(&colors) {
            let mut updated = Vec::with_capacity(g.num_nodes());
            for v in 0..g.num_nodes() {
                let mut nbr: Vec<u64> = g.neighbors(v).iter().map(|&u| cur[u]).collect();
                nbr.sort_unstable();
                let key = (cur[v], nbr);
                let id = *relabel.entry(key).or_insert_with(|| {
                    let id = next_color;
                    next_color += 1;
                    id
                });
                updated.push(id);
            }
            new_colors.push(updated);
        }
        let new_num_classes = total_classes(&new_colors);
        if new_num_classes == num_classes {
            break;
        }
        colors = new_colors;
        num_classes = new_num_classes;
        iterations += 1;
        for (h, c) in histories.iter_mut().zip(&colors) {
            h.push(class_sizes(c));
        }
        for (h, c) in color_histories.iter_mut().zip(&colors) {
            h.push(sorted_colors(c));
        }
    }

    Ok(colors
        .iter()
        .zip(histories)
        .zip(color_histories)
        .map(|((c, history), color_history)| WlPartition {
            colors: compress(c),
            iterations,
            history,
            color_history,
        })
        .collect())
}

fn default_init(g: &Graph, init: Option<&[i64]>) -> Result<Vec<u64>> {
    match init {
        Some(colors) => {
            if colors.len() != g.num_nodes() {
                return Err(Error::LengthMismatch {
                    got: colors.len(),
                    expected: g.num_nodes(),
                });
            }
            // Map i64 labels to u64 preserving equality.
            Ok(colors.iter().map(|&c| c as u64).collect())
        }
        None => match g.node_labels() {
            Some(labels) => Ok(labels.iter().map(|&c| c as u64).collect()),
            None => Ok(vec![0; g.num_nodes()]),
        },
    }
}

/// Color refinement on one graph. `init` defaults to the graph's node labels
/// when present and all-equal colors otherwise.
pub fn color_refinement(g: &Graph, init: Option<&[i64]>) -> Result<WlPartition> {
    let init = default_init(g, init)?;
    Ok(refine_shared(&[g], &[init])?.pop().unwrap())
}

/// Runs CR in parallel on both graphs; they are distinguishable iff some
/// iteration's class-size multisets differ. Returns the witness iteration.
pub fn distinguishable(
    g: &Graph,
    h: &Graph,
    init_g: Option<&[i64]>,
    init_h: Option<&[i64]>,
) -> Result<(bool, Option<usize>)> {
    let ig = default_init(g, init_g)?;
    let ih = default_init(h, init_h)?;
    let parts = refine_shared(&[g, h], &[ig, ih])?;
    let (pg, ph) = (&parts[0], &parts[1]);
    let rounds = pg.color_history.len().max(ph.color_history.len());
    for t in 0..rounds {
        let hg = pg.color_history.get(t).unwrap_or_else(|| pg.color_history.last().unwrap());
        let hh = ph.color_history.get(t).unwrap_or_else(|| ph.color_history.last().unwrap());
        if hg != hh {
            return Ok((true, Some(t)));
        }
    }
    Ok((false, None))
}

/// Exact orbit partition under the full automorphism group, by WL-pruned
/// backtracking over bijections. Respects node labels when present.
pub fn orbit_partition(g: &Graph) -> Result<OrbitPartition> {
    let n = g.num_nodes();
    if n > 16 {
        return Err(Error::GraphTooLarge(n));
    }
    if n == 0 {
        return Ok(OrbitPartition { orbits: Vec::new(), automorphism_count: 1 });
    }
    let stable = color_refinement(g, None)?.colors;
    // candidates[v] = nodes sharing stable WL color (which already folds in
    // label and degree information)
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], v: usize) -> usize {
        if parent[v] != v {
            let root = find(parent, parent[v]);
            parent[v] = root;
        }
        parent[v]
    }
    let mut count = 0u64;
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn backtrack(
        g: &Graph,
        stable: &[usize],
        image: &mut [usize],
        used: &mut [bool],
        depth: usize,
        count: &mut u64,
        parent: &mut [usize],
    ) {
        let n = g.num_nodes();
        if depth == n {
            *count += 1;
            for v in 0..n {
                let (a, b) = (find(parent, v), find(parent, image[v]));
                if a != b {
                    parent[a] = b;
                }
            }
            return;
        }
        let v = depth;
        for w in 0..n {
            if used[w] || stable[w] != stable[v] {
                continue;
            }
            // adjacency consistency with all previously assigned vertices
            let consistent = (0..depth).all(|u| g.has_edge(v, u) == g.has_edge(w, image[u]));
            if !consistent {
                continue;
            }
            image[v] = w;
            used[w] = true;
            backtrack(g, stable, image, used, depth + 1, count, parent);
            used[w] = false;
            image[v] = usize::MAX;
        }
    }
    backtrack(g, &stable, &mut image, &mut used, 0, &mut count, &mut parent);

    let mut roots: Vec<usize> = (0..n).map(|v| find(&mut parent, v)).collect();
    let ids = {
        let mut map: HashMap<usize, usize> = HashMap::new();
        roots
            .iter_mut()
            .map(|&mut r| {
                let next = map.len();
                *map.entry(r).or_insert(next)
            })
            .collect::<Vec<usize>>()
    };
    Ok(OrbitPartition { orbits: ids, automorphism_count: count })
}

fn quantize(x: f64, decimals: u32) -> i64 {
    let scale = 10f64.powi(decimals as i32);
    let q = (x * scale).round();
    if q == 0.0 {
        0 // fold -0.0 into 0
    } else {
        q as i64
    }
}

/// Batch-consistent PSE-augmented initial colorings: a fresh integer per
/// distinct (existing label, quantized PSE row) pair, with one dictionary
/// shared over the whole batch.
pub fn augment_colors_batch(
    graphs: &[&Graph],
    pses: &[&PseVector],
    decimals: u32,
) -> Result<Vec<Vec<u64>>> {
    assert_eq!(graphs.len(), pses.len());
    let mut table: HashMap<(i64, Vec<i64>), u64> = HashMap::new();
    let mut out = Vec::with_capacity(graphs.len());
    for (g, pse) in graphs.iter().zip(pses) {
        if pse.level != PseLevel::Node {
            return Err(Error::NotNodeLevel);
        }
        if pse.values.rows() != g.num_nodes() {
            return Err(Error::LengthMismatch {
                got: pse.values.rows(),
                expected: g.num_nodes(),
            });
        }
        let mut colors = Vec::with_capacity(g.num_nodes());
        for v in 0..g.num_nodes() {
            let label = g.node_labels().map_or(0, |l| l[v]);
            let row: Vec<i64> =
                pse.values.row(v).iter().map(|&x| quantize(x, decimals)).collect();
            let next = table.len() as u64;
            colors.push(*table.entry((label, row)).or_insert(next));
        }
        out.push(colors);
    }
    Ok(out)
}

/// Single-graph convenience over [`augment_colors_batch`].
pub fn augment_colors(g: &Graph, pse: &PseVector, decimals: u32) -> Result<Vec<u64>> {
    Ok(augment_colors_batch(&[g], &[pse], decimals)?.pop().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::DenseMatrix;
    use crate::pse::{PseKind, PseLevel, PseVector};

    fn cycle(n: usize) -> Graph {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &edges).unwrap()
    }

    #[test]
    fn c6_is_one_class() {
        let p = color_refinement(&cycle(6), None).unwrap();
        assert_eq!(p.num_classes(), 1);
        assert_eq!(p.iterations, 0);
    }

    #[test]
    fn star_splits_by_degree() {
        let g = Graph::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let p = color_refinement(&g, None).unwrap();
        assert_eq!(p.num_classes(), 2);
        assert_eq!(p.colors[1], p.colors[2]);
        assert_ne!(p.colors[0], p.colors[1]);
    }

    #[test]
    fn p4_splits_ends_from_inner() {
        // hand simulation: degree split after round one, stable after that
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let p = color_refinement(&g, None).unwrap();
        assert_eq!(p.num_classes(), 2);
        assert_eq!(p.colors[0], p.colors[3]);
        assert_eq!(p.colors[1], p.colors[2]);
    }

    #[test]
    fn refinement_is_monotone_and_short() {
        let g = Graph::new(7, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6)]).unwrap();
        let p = color_refinement(&g, None).unwrap();
        assert!(p.iterations <= g.num_nodes());
        for t in 1..p.history.len() {
            assert!(p.history[t].len() >= p.history[t - 1].len());
        }
    }

    #[test]
    fn c6_vs_two_triangles_indistinguishable() {
        let two_triangles =
            Graph::new(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        let (d, _) = distinguishable(&cycle(6), &two_triangles, None, None).unwrap();
        assert!(!d);
    }

    #[test]
    fn k2_vs_p3_distinguishable() {
        let k2 = Graph::new(2, &[(0, 1)]).unwrap();
        let p3 = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let (d, witness) = distinguishable(&k2, &p3, None, None).unwrap();
        assert!(d);
        assert_eq!(witness, Some(0));
    }

    #[test]
    fn distinguishable_is_symmetric() {
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let h = Graph::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(
            distinguishable(&g, &h, None, None).unwrap().0,
            distinguishable(&h, &g, None, None).unwrap().0
        );
    }

    #[test]
    fn c4_orbits() {
        let p = orbit_partition(&cycle(4)).unwrap();
        assert_eq!(p.num_orbits(), 1);
        assert_eq!(p.automorphism_count, 8);
    }

    #[test]
    fn p3_orbits() {
        let g = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let p = orbit_partition(&g).unwrap();
        assert_eq!(p.orbits[0], p.orbits[2]);
        assert_ne!(p.orbits[0], p.orbits[1]);
        assert_eq!(p.automorphism_count, 2);
    }

    #[test]
    fn orbit_bound() {
        let g = Graph::new(17, &[]).unwrap();
        assert!(matches!(orbit_partition(&g), Err(Error::GraphTooLarge(17))));
    }

    #[test]
    fn stable_colors_respect_orbits() {
        let g = Graph::new(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)]).unwrap();
        let orbits = orbit_partition(&g).unwrap().orbits;
        let colors = color_refinement(&g, None).unwrap().colors;
        for v in 0..6 {
            for w in 0..6 {
                if orbits[v] == orbits[w] {
                    assert_eq!(colors[v], colors[w]);
                }
            }
        }
    }

    #[test]
    fn uniform_pse_collapses_to_labels() {
        let g = Graph::new(3, &[(0, 1), (1, 2)])
            .unwrap()
            .with_node_labels(vec![7, 7, 9])
            .unwrap();
        let pse = PseVector {
            kind: PseKind::RWSE,
            level: PseLevel::Node,
            values: DenseMatrix::from_rows(&[vec![0.5], vec![0.5], vec![0.5]]),
            params: serde_json::json!({}),
        };
        let colors = augment_colors(&g, &pse, 6).unwrap();
        assert_eq!(colors[0], colors[1]);
        assert_ne!(colors[0], colors[2]);
    }

    #[test]
    fn augment_rejects_graph_level() {
        let g = cycle(3);
        let pse = PseVector {
            kind: PseKind::CycleSE,
            level: PseLevel::Graph,
            values: DenseMatrix::from_rows(&[vec![1.0]]),
            params: serde_json::json!({}),
        };
        assert!(matches!(augment_colors(&g, &pse, 6), Err(Error::NotNodeLevel)));
    }

    #[test]
    fn quantize_folds_negative_zero() {
        assert_eq!(quantize(-1e-9, 6), 0);
        assert_eq!(quantize(1.5e-6, 6), 2);
    }
}

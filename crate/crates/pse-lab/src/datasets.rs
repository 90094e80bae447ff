//! Synthetic graph generators (circulant skip-link families, random regular
//! graphs, triangle-detection sets, the paired counterexample graphs) and
//! corpus statistics.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matrix::adjacency_matrix;
use crate::rng::{derive_stream, SplitMix64};
use crate::spectral::eigh;

/// A generated corpus together with everything needed to reproduce it.
#[derive(Clone, Debug)]
pub struct DatasetBundle {
    pub graphs: Vec<Graph>,
    /// Per-graph class/task label, when the generator defines one.
    pub graph_labels: Option<Vec<i64>>,
    pub meta: DatasetMeta,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DatasetMeta {
    pub generator: String,
    pub seed: u64,
    pub params: serde_json::Value,
}

pub const CSL_NUM_NODES: usize = 41;
pub const CSL_DEFAULT_SKIPS: [usize; 10] = [2, 3, 4, 5, 6, 9, 11, 12, 13, 16];
pub const CSL_COPIES_PER_CLASS: usize = 15;

/// Circulant graph C_n(1, r): ring edges plus skip-r chords.
pub fn circulant(n: usize, skips: &[usize]) -> Result<Graph> {
    let mut edges = Vec::new();
    for &r in skips {
        if r == 0 || r >= n {
            return Err(Error::BadSkip(r));
        }
        for v in 0..n {
            let u = (v + r) % n;
            if u != v {
                edges.push((v, u));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    Graph::new(n, &edges)
}

/// Circulant skip-link dataset: 41-node circulants C_41(1, r) for every skip
/// length in `skips`, with `copies` node-permuted copies per class. The class
/// index within `skips` is the graph label.
pub fn gen_csl(skips: &[usize], copies: usize, seed: u64) -> Result<DatasetBundle> {
    let n = CSL_NUM_NODES;
    let mut seen = std::collections::HashSet::new();
    for &r in skips {
        if r < 2 || r > n / 2 || !seen.insert(r) {
            return Err(Error::BadSkip(r));
        }
    }
    let mut graphs = Vec::with_capacity(skips.len() * copies);
    let mut labels = Vec::with_capacity(skips.len() * copies);
    for (class, &r) in skips.iter().enumerate() {
        let base = circulant(n, &[1, r])?;
        for copy in 0..copies {
            let mut rng = SplitMix64::new(derive_stream(seed, (class * copies + copy) as u64));
            let perm = rng.permutation(n);
            graphs.push(base.permute(&perm)?);
            labels.push(class as i64);
        }
    }
    Ok(DatasetBundle {
        graphs,
        graph_labels: Some(labels),
        meta: DatasetMeta {
            generator: "csl".into(),
            seed,
            params: serde_json::json!({ "num_nodes": n, "skips": skips, "copies": copies }),
        },
    })
}

pub fn gen_csl_default(seed: u64) -> Result<DatasetBundle> {
    gen_csl(&CSL_DEFAULT_SKIPS, CSL_COPIES_PER_CLASS, seed)
}

const REGULAR_MAX_RESTARTS: usize = 10_000;

/// Random d-regular graph via sequential stub pairing: repeatedly draw a
/// uniformly random *suitable* stub pair (distinct endpoints, edge not yet
/// present) and connect it, restarting from scratch when no suitable pair
/// remains. This matches the common networkx/Steger-Wormald style sampler;
/// it is asymptotically uniform but not exactly uniform for small n, and its
/// small-n triangle statistics differ measurably from the exactly uniform
/// configuration-model-with-rejection sampler.
pub fn random_regular(n: usize, d: usize, rng: &mut SplitMix64) -> Result<Graph> {
    if n * d % 2 != 0 || d >= n {
        return Err(Error::InfeasibleDegree { n, d });
    }
    if d == 0 {
        return Graph::new(n, &[]);
    }
    'restart: for _ in 0..REGULAR_MAX_RESTARTS {
        let mut edges: std::collections::HashSet<(usize, usize)> = std::collections::HashSet::new();
        // stubs[v] = remaining degree of v
        let mut stubs: Vec<usize> = Vec::with_capacity(n * d);
        for v in 0..n {
            stubs.extend(std::iter::repeat(v).take(d));
        }
        while !stubs.is_empty() {
            rng.shuffle(&mut stubs);
            let mut progress = false;
            let mut i = 0;
            while i + 1 < stubs.len() {
                let (a, b) = (stubs[i], stubs[i + 1]);
                let key = (a.min(b), a.max(b));
                if a != b && !edges.contains(&key) {
                    edges.insert(key);
                    stubs.remove(i + 1);
                    stubs.remove(i);
                    progress = true;
                } else {
                    i += 2;
                }
            }
            if !progress {
                continue 'restart;
            }
        }
        let edge_list: Vec<(usize, usize)> = edges.into_iter().collect();
        return Graph::new(n, &edge_list);
    }
    Err(Error::RetriesExhausted(REGULAR_MAX_RESTARTS))
}

/// A corpus of `count` random d-regular graphs on n nodes.
pub fn gen_regular(n: usize, d: usize, count: usize, seed: u64) -> Result<DatasetBundle> {
    let mut graphs = Vec::with_capacity(count);
    for i in 0..count {
        let mut rng = SplitMix64::new(derive_stream(seed, i as u64));
        graphs.push(random_regular(n, d, &mut rng)?);
    }
    Ok(DatasetBundle {
        graphs,
        graph_labels: None,
        meta: DatasetMeta {
            generator: "regular".into(),
            seed,
            params: serde_json::json!({ "num_nodes": n, "degree": d, "count": count }),
        },
    })
}

/// Triangle-detection corpus: random 3-regular graphs where each node is
/// labeled 1 if it lies on at least one triangle (diagonal of M^3 positive).
pub fn gen_tri(n: usize, count: usize, seed: u64) -> Result<DatasetBundle> {
    let mut bundle = gen_regular(n, 3, count, seed)?;
    for g in &mut bundle.graphs {
        let labels = triangle_node_labels(g);
        *g = g.with_node_labels(labels)?;
    }
    bundle.meta.generator = "tri".into();
    bundle.meta.params = serde_json::json!({ "num_nodes": n, "degree": 3, "count": count });
    Ok(bundle)
}

/// 1 if node v lies on a triangle, else 0, via the diagonal of M^3.
pub fn triangle_node_labels(g: &Graph) -> Vec<i64> {
    let n = g.num_nodes();
    let mut labels = vec![0i64; n];
    for v in 0..n {
        'outer: for (i, &a) in g.neighbors(v).iter().enumerate() {
            for &b in &g.neighbors(v)[i + 1..] {
                if g.has_edge(a, b) {
                    labels[v] = 1;
                    break 'outer;
                }
            }
        }
    }
    labels
}

/// The four counterexample graphs:
/// (a) the 6-cycle,
/// (b) two disjoint triangles,
/// (c) C_12(1, 2) with nodes 0,1,2,6,7,8 colored red (label 1),
/// (d) the same circulant with odd nodes colored red.
/// In (c) and (d) every node has exactly two red and two black neighbors, so
/// the colorings are already stable under color refinement.
pub fn fig1_graphs() -> (Graph, Graph, Graph, Graph) {
    let a = circulant(6, &[1]).unwrap();
    let b = Graph::new(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
    let circ = circulant(12, &[1, 2]).unwrap();
    let mut labels_c = vec![0i64; 12];
    for v in [0, 1, 2, 6, 7, 8] {
        labels_c[v] = 1;
    }
    let labels_d: Vec<i64> = (0..12).map(|v| (v % 2) as i64).collect();
    let c = circ.with_node_labels(labels_c).unwrap();
    let d = circ.with_node_labels(labels_d).unwrap();
    (a, b, c, d)
}

/// Corpus-level statistics; averages are over graphs.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DatasetStats {
    pub num_graphs: usize,
    pub mean_nodes: f64,
    pub mean_edges: f64,
    /// Mean of 2m / (n (n-1)) over graphs.
    pub mean_density: f64,
    /// Mean algebraic connectivity (second-smallest Laplacian eigenvalue).
    pub mean_fiedler_value: f64,
    /// Mean diameter of each graph's largest component.
    pub mean_diameter: f64,
    pub any_disconnected: bool,
    /// Mean triangle count, trace(M^3)/6.
    pub mean_triangles: f64,
    /// Mean of the global clustering coefficient (3*triangles / wedges).
    pub mean_clustering: f64,
    /// Mean maximum clique size; None when any graph exceeds the exact-search
    /// size cap.
    pub mean_max_clique: Option<f64>,
}

const MAX_CLIQUE_NODE_CAP: usize = 50;

fn triangle_count(g: &Graph) -> usize {
    let mut count = 0;
    for v in 0..g.num_nodes() {
        for (i, &a) in g.neighbors(v).iter().enumerate() {
            for &b in &g.neighbors(v)[i + 1..] {
                if a > v && b > v && g.has_edge(a, b) {
                    count += 1;
                }
            }
        }
    }
    count
}

fn largest_component_diameter(g: &Graph) -> usize {
    let ids = g.components();
    let num_comps = ids.iter().copied().max().map_or(0, |m| m + 1);
    let mut groups = vec![Vec::new(); num_comps];
    for (v, &c) in ids.iter().enumerate() {
        groups[c].push(v);
    }
    let largest = groups.into_iter().max_by_key(Vec::len).unwrap_or_default();
    let mut diameter = 0;
    for &s in &largest {
        // BFS from s restricted to its component
        let mut dist = vec![usize::MAX; g.num_nodes()];
        dist[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &u in g.neighbors(v) {
                if dist[u] == usize::MAX {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        for &v in &largest {
            if dist[v] != usize::MAX {
                diameter = diameter.max(dist[v]);
            }
        }
    }
    diameter
}

fn max_clique(g: &Graph) -> usize {
    // branch and bound on candidate sets, fine for n <= 50 sparse graphs
    fn expand(g: &Graph, current: usize, candidates: &mut Vec<usize>, best: &mut usize) {
        if candidates.is_empty() {
            *best = (*best).max(current);
            return;
        }
        while let Some(v) = candidates.pop() {
            if current + candidates.len() + 1 <= *best {
                return;
            }
            let mut next: Vec<usize> =
                candidates.iter().copied().filter(|&u| g.has_edge(u, v)).collect();
            expand(g, current + 1, &mut next, best);
        }
        *best = (*best).max(current);
    }
    let mut best = 0;
    let mut candidates: Vec<usize> = (0..g.num_nodes()).collect();
    expand(g, 0, &mut candidates, &mut best);
    best
}

fn fiedler_value(g: &Graph) -> f64 {
    if g.num_nodes() < 2 {
        return 0.0;
    }
    let lap = crate::matrix::laplacian(g);
    let decomp = eigh(&lap).expect("laplacian is symmetric");
    decomp.eigenvalues[1]
}

struct GraphStats {
    nodes: f64,
    edges: f64,
    density: f64,
    fiedler: f64,
    diameter: f64,
    disconnected: bool,
    triangles: f64,
    clustering: f64,
    clique: Option<f64>,
}

fn per_graph_stats(g: &Graph) -> GraphStats {
    let n = g.num_nodes() as f64;
    let m = g.num_edges() as f64;
    let tri = triangle_count(g) as f64;
    let wedges: f64 = (0..g.num_nodes())
        .map(|v| {
            let d = g.neighbors(v).len() as f64;
            d * (d - 1.0) / 2.0
        })
        .sum();
    GraphStats {
        nodes: n,
        edges: m,
        density: if g.num_nodes() > 1 { 2.0 * m / (n * (n - 1.0)) } else { 0.0 },
        fiedler: fiedler_value(g),
        diameter: largest_component_diameter(g) as f64,
        disconnected: !g.is_connected(),
        triangles: tri,
        clustering: if wedges > 0.0 { 3.0 * tri / wedges } else { 0.0 },
        clique: (g.num_nodes() <= MAX_CLIQUE_NODE_CAP).then(|| max_clique(g) as f64),
    }
}

pub fn dataset_stats(graphs: &[Graph]) -> DatasetStats {
    let k = graphs.len().max(1) as f64;
    // per-graph work runs in parallel; the reduction below stays in input
    // order so float sums are deterministic
    let per_graph: Vec<GraphStats> = graphs.par_iter().map(per_graph_stats).collect();
    let mut nodes = 0.0;
    let mut edges = 0.0;
    let mut density = 0.0;
    let mut fiedler = 0.0;
    let mut diameter = 0.0;
    let mut any_disconnected = false;
    let mut triangles = 0.0;
    let mut clustering = 0.0;
    let mut clique_sum = 0.0;
    let mut clique_ok = true;
    for s in per_graph {
        nodes += s.nodes;
        edges += s.edges;
        density += s.density;
        fiedler += s.fiedler;
        diameter += s.diameter;
        any_disconnected |= s.disconnected;
        triangles += s.triangles;
        clustering += s.clustering;
        match s.clique {
            Some(c) => clique_sum += c,
            None => clique_ok = false,
        }
    }
    DatasetStats {
        num_graphs: graphs.len(),
        mean_nodes: nodes / k,
        mean_edges: edges / k,
        mean_density: density / k,
        mean_fiedler_value: fiedler / k,
        mean_diameter: diameter / k,
        any_disconnected,
        mean_triangles: triangles / k,
        mean_clustering: clustering / k,
        mean_max_clique: if clique_ok { Some(clique_sum / k) } else { None },
    }
}

/// trace(M^3)/6 as a cross-check for the neighborhood-based triangle count.
pub fn triangles_via_trace(g: &Graph) -> f64 {
    let m = adjacency_matrix(g);
    let m3 = m.matmul(&m).matmul(&m);
    (0..g.num_nodes()).map(|i| m3.get(i, i)).sum::<f64>() / 6.0
}

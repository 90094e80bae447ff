//! Non-spectral PSE kernels (RWSE, ElstaticPE, CycleSE), random and constant
//! node features, AllPSE concatenation, and per-graph normalization.
//!
//! RWSE and ElstaticPE are evaluated in exact rational arithmetic and only
//! converted to floats at the end. The float result is then a function of the
//! exact value alone, which makes permutation equivariance bit-exact instead
//! of tolerance-based.

use num::rational::BigRational;
use num::traits::ToPrimitive;
use num::{BigInt, One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matrix::DenseMatrix;
use crate::rng::SplitMix64;
use crate::spectral::{hk_diag_se, lap_eigenvalues, lap_pe};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PseKind {
    LapPE,
    LapEigval,
    RWSE,
    ElstaticPE,
    HKdiagSE,
    CycleSE,
    RNF,
    AllPSE,
}

impl PseKind {
    pub fn name(self) -> &'static str {
        match self {
            PseKind::LapPE => "LapPE",
            PseKind::LapEigval => "LapEigval",
            PseKind::RWSE => "RWSE",
            PseKind::ElstaticPE => "ElstaticPE",
            PseKind::HKdiagSE => "HKdiagSE",
            PseKind::CycleSE => "CycleSE",
            PseKind::RNF => "RNF",
            PseKind::AllPSE => "AllPSE",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PseLevel {
    Node,
    Graph,
}

/// A named per-node or graph-level encoding block.
#[derive(Clone, Debug)]
pub struct PseVector {
    pub kind: PseKind,
    pub level: PseLevel,
    /// num_nodes x width for node-level, 1 x width for graph-level.
    pub values: DenseMatrix,
    /// Generating parameters, recorded for sidecar files.
    pub params: serde_json::Value,
}

impl PseVector {
    pub fn width(&self) -> usize {
        self.values.cols()
    }
}

fn integer_matmul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

/// RWSE: component j of node v is the k_j-step return probability
/// (P^k)_vv, computed exactly. Internally P is scaled by the lcm `c` of the
/// degrees so that powers stay in integer arithmetic: (cP)^k / c^k = P^k.
pub fn rwse(g: &Graph, steps: &[usize]) -> Result<PseVector> {
    assert!(!steps.is_empty(), "steps must be non-empty");
    let n = g.num_nodes();
    let k_max = *steps.iter().max().unwrap();
    let c: usize = (0..n).map(|v| g.degree(v)).filter(|&d| d > 0).fold(1, num::integer::lcm);
    let mut b = vec![vec![BigInt::zero(); n]; n];
    for v in 0..n {
        let d = g.degree(v);
        if d == 0 {
            continue;
        }
        for &u in g.neighbors(v) {
            b[v][u] = BigInt::from(c / d);
        }
    }
    let mut values = DenseMatrix::zeros(n, steps.len());
    let mut power = b.clone();
    let mut scale = BigInt::from(c);
    for k in 1..=k_max {
        for (j, &step) in steps.iter().enumerate() {
            if step == k {
                for v in 0..n {
                    let exact = BigRational::new(power[v][v].clone(), scale.clone());
                    values.set(v, j, exact.to_f64().unwrap_or(0.0));
                }
            }
        }
        if k < k_max {
            power = integer_matmul(&power, &b);
            scale *= c;
        }
    }
    Ok(PseVector {
        kind: PseKind::RWSE,
        level: PseLevel::Node,
        values,
        params: serde_json::json!({ "steps": steps }),
    })
}

/// Exact pseudoinverse of the Laplacian of a connected graph, via
/// Ldag = (L + J/n)^-1 - J/n with rational Gauss-Jordan elimination.
fn rational_laplacian_pinv(g: &Graph) -> Result<Vec<Vec<BigRational>>> {
    if !g.is_connected() {
        return Err(Error::DisconnectedGraph);
    }
    let n = g.num_nodes();
    let inv_n = BigRational::new(BigInt::one(), BigInt::from(n));
    let mut a = vec![vec![BigRational::zero(); n]; n];
    for v in 0..n {
        a[v][v] = BigRational::from(BigInt::from(g.degree(v)));
    }
    for &(u, v) in g.edges() {
        a[u][v] = -BigRational::one();
        a[v][u] = -BigRational::one();
    }
    for row in &mut a {
        for x in row.iter_mut() {
            *x += &inv_n;
        }
    }
    let mut inv = vec![vec![BigRational::zero(); n]; n];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = BigRational::one();
    }
    for col in 0..n {
        let pivot_row = (col..n).find(|&r| !a[r][col].is_zero()).expect("L + J/n is invertible");
        a.swap(col, pivot_row);
        inv.swap(col, pivot_row);
        let pivot = a[col][col].clone();
        for x in &mut a[col] {
            *x /= &pivot;
        }
        for x in &mut inv[col] {
            *x /= &pivot;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for c in 0..n {
                let t = &factor * &a[col][c];
                a[r][c] -= t;
                let t = &factor * &inv[col][c];
                inv[r][c] -= t;
            }
        }
    }
    for row in &mut inv {
        for x in row.iter_mut() {
            *x -= &inv_n;
        }
    }
    Ok(inv)
}

fn rational_mean(values: &[BigRational]) -> BigRational {
    let sum: BigRational = values.iter().sum();
    sum / BigRational::from(BigInt::from(values.len()))
}

/// Population standard deviation, converted to float from the exact variance.
fn rational_std(values: &[BigRational]) -> f64 {
    let mean = rational_mean(values);
    let var: BigRational =
        values.iter().map(|x| (x - &mean) * (x - &mean)).sum::<BigRational>()
            / BigRational::from(BigInt::from(values.len()));
    var.to_f64().unwrap_or(0.0).max(0.0).sqrt()
}

/// ElstaticPE: per-node statistics of electrostatic potentials
/// Q_ij = Ldag_ij - Ldag_ii (so each node's potential on itself is 0).
///
/// The 7 components per node v are, with j over all other nodes and
/// u over neighbors: [min_j, max_j, mean_j, std_j, min_u, mean_u, std_u].
pub fn elstatic_pe(g: &Graph) -> Result<PseVector> {
    let n = g.num_nodes();
    let pinv = rational_laplacian_pinv(g)?;
    let mut values = DenseMatrix::zeros(n, 7);
    for v in 0..n {
        let q_row: Vec<BigRational> =
            (0..n).map(|j| &pinv[v][j] - &pinv[v][v]).collect();
        let others: Vec<BigRational> =
            (0..n).filter(|&j| j != v).map(|j| q_row[j].clone()).collect();
        let nbrs: Vec<BigRational> =
            g.neighbors(v).iter().map(|&u| q_row[u].clone()).collect();
        if others.is_empty() {
            continue;
        }
        let min_all = others.iter().min().unwrap().to_f64().unwrap_or(0.0);
        let max_all = others.iter().max().unwrap().to_f64().unwrap_or(0.0);
        values.set(v, 0, min_all);
        values.set(v, 1, max_all);
        values.set(v, 2, rational_mean(&others).to_f64().unwrap_or(0.0));
        values.set(v, 3, rational_std(&others));
        if !nbrs.is_empty() {
            values.set(v, 4, nbrs.iter().min().unwrap().to_f64().unwrap_or(0.0));
            values.set(v, 5, rational_mean(&nbrs).to_f64().unwrap_or(0.0));
            values.set(v, 6, rational_std(&nbrs));
        }
    }
    Ok(PseVector {
        kind: PseKind::ElstaticPE,
        level: PseLevel::Node,
        values,
        params: serde_json::json!({}),
    })
}

/// Counts simple cycles of each length k in 3..=k_max, once per cycle
/// (up to rotation and reflection).
pub fn count_simple_cycles(g: &Graph, k_max: usize) -> Result<Vec<u64>> {
    if !(3..=10).contains(&k_max) {
        return Err(Error::KTooLarge(k_max));
    }
    let n = g.num_nodes();
    // DFS rooted at the minimum-index vertex of each cycle; only vertices
    // larger than the root may appear inside a path, and each cycle is found
    // in both directions, hence the /2.
    let mut doubled = vec![0u64; k_max + 1];
    let mut in_path = vec![false; n];
    let mut path = Vec::with_capacity(k_max);
    for root in 0..n {
        path.push(root);
        in_path[root] = true;
        dfs_cycles(g, root, root, &mut path, &mut in_path, k_max, &mut doubled);
        in_path[root] = false;
        path.pop();
    }
    Ok((3..=k_max).map(|k| doubled[k] / 2).collect())
}

fn dfs_cycles(
    g: &Graph,
    root: usize,
    v: usize,
    path: &mut Vec<usize>,
    in_path: &mut [bool],
    k_max: usize,
    doubled: &mut [u64],
) {
    for &u in g.neighbors(v) {
        if u == root && path.len() >= 3 {
            doubled[path.len()] += 1;
        }
        if u > root && !in_path[u] && path.len() < k_max {
            path.push(u);
            in_path[u] = true;
            dfs_cycles(g, root, u, path, in_path, k_max, doubled);
            in_path[u] = false;
            path.pop();
        }
    }
}

/// CycleSE: graph-level simple-cycle counts for k in 3..=k_max.
pub fn cycle_se(g: &Graph, k_max: usize) -> Result<PseVector> {
    let counts = count_simple_cycles(g, k_max)?;
    let values = DenseMatrix::from_rows(&[counts.iter().map(|&c| c as f64).collect()]);
    Ok(PseVector {
        kind: PseKind::CycleSE,
        level: PseLevel::Graph,
        values,
        params: serde_json::json!({ "k_max": k_max }),
    })
}

/// Random node features: i.i.d. standard normal entries from the documented
/// SplitMix64 stream, row-major fill. Same (dim, seed) gives identical bits.
pub fn rnf(g: &Graph, dim: usize, seed: u64) -> PseVector {
    assert!(dim >= 1);
    let n = g.num_nodes();
    let mut rng = SplitMix64::new(seed);
    let mut values = DenseMatrix::zeros(n, dim);
    for v in 0..n {
        for j in 0..dim {
            values.set(v, j, rng.next_normal());
        }
    }
    PseVector {
        kind: PseKind::RNF,
        level: PseLevel::Node,
        values,
        params: serde_json::json!({ "dim": dim, "seed": seed }),
    }
}

pub const RNF_DEFAULT_DIM: usize = 20;

/// All-ones node features, the constant-input substitute for RNF.
pub fn constant_features(g: &Graph, dim: usize) -> PseVector {
    assert!(dim >= 1);
    let mut values = DenseMatrix::zeros(g.num_nodes(), dim);
    for v in 0..g.num_nodes() {
        for j in 0..dim {
            values.set(v, j, 1.0);
        }
    }
    PseVector {
        kind: PseKind::RNF,
        level: PseLevel::Node,
        values,
        params: serde_json::json!({ "dim": dim, "constant": true }),
    }
}

/// Which PSE kinds to compute and with what parameters.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PseConfig {
    #[serde(default)]
    pub lap_pe_dim: Option<usize>,
    #[serde(default)]
    pub rwse_steps: Option<Vec<usize>>,
    #[serde(default)]
    pub elstatic: bool,
    #[serde(default)]
    pub hk_times: Option<Vec<f64>>,
    #[serde(default)]
    pub cycle_k_max: Option<usize>,
    #[serde(default)]
    pub lap_eigval_dim: Option<usize>,
}

impl Default for PseConfig {
    /// All kinds enabled with the library defaults: LapPE m=4, RWSE k=1..8,
    /// ElstaticPE, HKdiagSE t in {0.5,1,2,4}, CycleSE k<=8, 4 eigenvalues.
    fn default() -> Self {
        PseConfig {
            lap_pe_dim: Some(4),
            rwse_steps: Some((1..=8).collect()),
            elstatic: true,
            hk_times: Some(vec![0.5, 1.0, 2.0, 4.0]),
            cycle_k_max: Some(8),
            lap_eigval_dim: Some(4),
        }
    }
}

impl PseConfig {
    pub fn is_empty(&self) -> bool {
        self.lap_pe_dim.is_none()
            && self.rwse_steps.is_none()
            && !self.elstatic
            && self.hk_times.is_none()
            && self.cycle_k_max.is_none()
            && self.lap_eigval_dim.is_none()
    }

    /// RWSE-only config, used by the CSL expressivity experiment.
    pub fn rwse_only(steps: Vec<usize>) -> Self {
        PseConfig {
            lap_pe_dim: None,
            rwse_steps: Some(steps),
            elstatic: false,
            hk_times: None,
            cycle_k_max: None,
            lap_eigval_dim: None,
        }
    }
}

/// Computes every kind enabled in the config, in the fixed column order
/// (LapPE, RWSE, ElstaticPE, HKdiagSE, CycleSE, LapEigval).
pub fn compute_all(g: &Graph, config: &PseConfig) -> Result<Vec<PseVector>> {
    if config.is_empty() {
        return Err(Error::EmptyConfig);
    }
    let mut out = Vec::new();
    if let Some(m) = config.lap_pe_dim {
        out.push(PseVector {
            kind: PseKind::LapPE,
            level: PseLevel::Node,
            values: lap_pe(g, m)?,
            params: serde_json::json!({ "m": m }),
        });
    }
    if let Some(steps) = &config.rwse_steps {
        out.push(rwse(g, steps)?);
    }
    if config.elstatic {
        out.push(elstatic_pe(g)?);
    }
    if let Some(times) = &config.hk_times {
        out.push(PseVector {
            kind: PseKind::HKdiagSE,
            level: PseLevel::Node,
            values: hk_diag_se(g, times)?,
            params: serde_json::json!({ "times": times }),
        });
    }
    if let Some(k_max) = config.cycle_k_max {
        out.push(cycle_se(g, k_max)?);
    }
    if let Some(m) = config.lap_eigval_dim {
        let values = DenseMatrix::from_rows(&[lap_eigenvalues(g, m)?]);
        out.push(PseVector {
            kind: PseKind::LapEigval,
            level: PseLevel::Graph,
            values,
            params: serde_json::json!({ "m": m }),
        });
    }
    Ok(out)
}

/// AllPSE: column-wise concatenation of the configured kinds, with
/// graph-level blocks broadcast to every node.
pub fn all_pse(g: &Graph, config: &PseConfig) -> Result<PseVector> {
    let parts = compute_all(g, config)?;
    let n = g.num_nodes();
    let width: usize = parts.iter().map(PseVector::width).sum();
    let mut values = DenseMatrix::zeros(n, width);
    let mut offset = 0;
    for part in &parts {
        for j in 0..part.width() {
            for v in 0..n {
                let x = match part.level {
                    PseLevel::Node => part.values.get(v, j),
                    PseLevel::Graph => part.values.get(0, j),
                };
                values.set(v, offset + j, x);
            }
        }
        offset += part.width();
    }
    Ok(PseVector {
        kind: PseKind::AllPSE,
        level: PseLevel::Node,
        values,
        params: serde_json::to_value(config)?,
    })
}

/// Shifts and scales each column to zero mean and unit (population) standard
/// deviation across the graph's nodes. Constant columns map to all-zeros.
pub fn normalize_per_graph(p: &PseVector) -> Result<PseVector> {
    if p.level != PseLevel::Node {
        return Err(Error::NotNodeLevel);
    }
    let n = p.values.rows();
    let w = p.values.cols();
    let mut values = DenseMatrix::zeros(n, w);
    for j in 0..w {
        let mean: f64 = (0..n).map(|v| p.values.get(v, j)).sum::<f64>() / n as f64;
        let var: f64 =
            (0..n).map(|v| (p.values.get(v, j) - mean).powi(2)).sum::<f64>() / n as f64;
        let std = var.sqrt();
        if std == 0.0 {
            continue;
        }
        for v in 0..n {
            values.set(v, j, (p.values.get(v, j) - mean) / std);
        }
    }
    Ok(PseVector { kind: p.kind, level: p.level, values, params: p.params.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        Graph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn k2() -> Graph {
        Graph::new(2, &[(0, 1)]).unwrap()
    }

    #[test]
    fn rwse_triangle_two_steps() {
        let p = rwse(&triangle(), &[2]).unwrap();
        for v in 0..3 {
            assert_eq!(p.values.get(v, 0), 0.5);
        }
    }

    #[test]
    fn rwse_k2_parity() {
        let p = rwse(&k2(), &[2, 3]).unwrap();
        for v in 0..2 {
            assert_eq!(p.values.get(v, 0), 1.0);
            assert_eq!(p.values.get(v, 1), 0.0);
        }
    }

    #[test]
    fn rwse_isolated_node_is_zero() {
        let g = Graph::new(3, &[(0, 1)]).unwrap();
        let p = rwse(&g, &[1, 2, 3, 4]).unwrap();
        for j in 0..4 {
            assert_eq!(p.values.get(2, j), 0.0);
        }
    }

    #[test]
    fn elstatic_k2() {
        let p = elstatic_pe(&k2()).unwrap();
        for v in 0..2 {
            assert_eq!(p.values.row(v), &[-0.5, -0.5, -0.5, 0.0, -0.5, -0.5, 0.0]);
        }
    }

    #[test]
    fn elstatic_constant_on_vertex_transitive_graph() {
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let p = elstatic_pe(&g).unwrap();
        for v in 1..4 {
            assert_eq!(p.values.row(v), p.values.row(0));
        }
    }

    #[test]
    fn elstatic_rejects_disconnected() {
        let g = Graph::new(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(matches!(elstatic_pe(&g), Err(Error::DisconnectedGraph)));
    }

    #[test]
    fn elstatic_diagonal_is_zero_by_construction() {
        // Q_vv = Ldag_vv - Ldag_vv; check indirectly: on K2 the only other
        // potential is -0.5 and self-potential never enters the stats.
        let g = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]).unwrap();
        let pinv = super::rational_laplacian_pinv(&g).unwrap();
        for v in 0..5 {
            let q_vv = &pinv[v][v] - &pinv[v][v];
            assert!(q_vv.is_zero());
        }
    }

    #[test]
    fn cycle_counts() {
        assert_eq!(count_simple_cycles(&triangle(), 4).unwrap(), vec![1, 0]);
        let c6: Vec<(usize, usize)> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        let c6 = Graph::new(6, &c6).unwrap();
        assert_eq!(count_simple_cycles(&c6, 6).unwrap(), vec![0, 0, 0, 1]);
        let two_triangles = Graph::new(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert_eq!(count_simple_cycles(&two_triangles, 3).unwrap(), vec![2]);
        assert!(matches!(count_simple_cycles(&c6, 11), Err(Error::KTooLarge(11))));
    }

    #[test]
    fn k4_cycle_counts() {
        let k4 = Graph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(count_simple_cycles(&k4, 4).unwrap(), vec![4, 3]);
    }

    #[test]
    fn rnf_shape_and_determinism() {
        let g = Graph::new(5, &[(0, 1)]).unwrap();
        let a = rnf(&g, RNF_DEFAULT_DIM, 99);
        assert_eq!(a.values.cols(), 20);
        let b = rnf(&g, RNF_DEFAULT_DIM, 99);
        assert_eq!(a.values.data(), b.values.data());
    }

    #[test]
    fn rnf_moments_on_large_graph() {
        let g = Graph::new(1000, &[]).unwrap();
        let p = rnf(&g, 3, 7);
        for j in 0..3 {
            let col: Vec<f64> = (0..1000).map(|v| p.values.get(v, j)).collect();
            let mean = col.iter().sum::<f64>() / 1000.0;
            let std =
                (col.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / 1000.0).sqrt();
            assert!(mean.abs() < 4.0 / (1000.0f64).sqrt());
            assert!((0.9..=1.1).contains(&std));
        }
    }

    #[test]
    fn constant_features_match_rnf_shape() {
        let p = constant_features(&k2(), 2);
        assert_eq!(p.values.data(), &[1.0, 1.0, 1.0, 1.0]);
        assert_eq!(constant_features(&k2(), 20).values.cols(), RNF_DEFAULT_DIM);
    }

    #[test]
    fn all_pse_composition_on_k2() {
        let config = PseConfig {
            lap_pe_dim: Some(1),
            rwse_steps: Some(vec![2]),
            elstatic: false,
            hk_times: None,
            cycle_k_max: None,
            lap_eigval_dim: None,
        };
        let p = all_pse(&k2(), &config).unwrap();
        assert_eq!(p.width(), 2);
        for v in 0..2 {
            assert!((p.values.get(v, 0) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-9);
            assert_eq!(p.values.get(v, 1), 1.0);
        }
    }

    #[test]
    fn all_pse_rejects_empty_config() {
        let config = PseConfig {
            lap_pe_dim: None,
            rwse_steps: None,
            elstatic: false,
            hk_times: None,
            cycle_k_max: None,
            lap_eigval_dim: None,
        };
        assert!(matches!(all_pse(&k2(), &config), Err(Error::EmptyConfig)));
    }

    #[test]
    fn all_pse_broadcasts_cycle_count() {
        let config = PseConfig {
            lap_pe_dim: None,
            rwse_steps: None,
            elstatic: false,
            hk_times: None,
            cycle_k_max: Some(3),
            lap_eigval_dim: None,
        };
        let p = all_pse(&triangle(), &config).unwrap();
        for v in 0..3 {
            assert_eq!(p.values.get(v, 0), 1.0);
        }
    }

    #[test]
    fn normalization_examples() {
        let p = PseVector {
            kind: PseKind::RWSE,
            level: PseLevel::Node,
            values: DenseMatrix::from_rows(&[vec![1.0, 5.0], vec![2.0, 5.0], vec![3.0, 5.0]]),
            params: serde_json::json!({}),
        };
        let q = normalize_per_graph(&p).unwrap();
        let scale = (1.5f64).sqrt();
        assert!((q.values.get(0, 0) + scale).abs() < 1e-12);
        assert_eq!(q.values.get(1, 0), 0.0);
        assert!((q.values.get(2, 0) - scale).abs() < 1e-12);
        for v in 0..3 {
            assert_eq!(q.values.get(v, 1), 0.0);
        }
        // contract: mean ~ 0, std in {0, 1}
        for j in 0..2 {
            let col: Vec<f64> = (0..3).map(|v| q.values.get(v, j)).collect();
            let mean = col.iter().sum::<f64>() / 3.0;
            let std = (col.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / 3.0).sqrt();
            assert!(mean.abs() <= 1e-12);
            assert!(std.abs() <= 1e-12 || (std - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn normalization_rejects_graph_level() {
        let p = cycle_se(&triangle(), 3).unwrap();
        assert!(matches!(normalize_per_graph(&p), Err(Error::NotNodeLevel)));
    }
}

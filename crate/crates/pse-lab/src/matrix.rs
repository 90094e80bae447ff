//! Row-major dense matrices and the graph matrices derived from [`Graph`].
//!
//! Target graphs stay below a few hundred nodes, so dense O(n^2) storage is
//! used everywhere.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix", into = "RawMatrix")]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

/// Serialized form: shape plus a row-major float array, checked on load.
#[derive(Serialize, Deserialize)]
struct RawMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl TryFrom<RawMatrix> for DenseMatrix {
    type Error = Error;

    fn try_from(raw: RawMatrix) -> Result<Self> {
        if raw.data.len() != raw.rows * raw.cols {
            return Err(Error::LengthMismatch {
                got: raw.data.len(),
                expected: raw.rows * raw.cols,
            });
        }
        Ok(DenseMatrix { rows: raw.rows, cols: raw.cols, data: raw.data })
    }
}

impl From<DenseMatrix> for RawMatrix {
    fn from(m: DenseMatrix) -> Self {
        RawMatrix { rows: m.rows, cols: m.cols, data: m.data }
    }
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        DenseMatrix { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, &x| m.max(x.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Checks |a_ij - a_ji| <= 1e-12 * max|a| for all entries.
    pub fn check_symmetric(&self) -> Result<()> {
        if self.rows != self.cols {
            return Err(Error::NotSymmetric);
        }
        let tol = 1e-12 * self.max_abs().max(1.0);
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if (self.get(i, j) - self.get(j, i)).abs() > tol {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        Ok(())
    }
}

/// 0/1 adjacency matrix M.
pub fn adjacency_matrix(g: &Graph) -> DenseMatrix {
    let n = g.num_nodes();
    let mut m = DenseMatrix::zeros(n, n);
    for &(a, b) in g.edges() {
        m.set(a, b, 1.0);
        m.set(b, a, 1.0);
    }
    m
}

/// Combinatorial Laplacian L = D - M.
pub fn laplacian(g: &Graph) -> DenseMatrix {
    let n = g.num_nodes();
    let mut l = DenseMatrix::zeros(n, n);
    for v in 0..n {
        l.set(v, v, g.degree(v) as f64);
    }
    for &(a, b) in g.edges() {
        l.set(a, b, -1.0);
        l.set(b, a, -1.0);
    }
    l
}

/// Random-walk matrix P = D^-1 M. Rows of isolated nodes are all zero
/// (pseudo-inverse degree convention), so no NaN can propagate.
pub fn random_walk_matrix(g: &Graph) -> DenseMatrix {
    let n = g.num_nodes();
    let mut p = DenseMatrix::zeros(n, n);
    for v in 0..n {
        let d = g.degree(v);
        if d == 0 {
            continue;
        }
        let inv = 1.0 / d as f64;
        for &u in g.neighbors(v) {
            p.set(v, u, inv);
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        Graph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn laplacian_of_k2() {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        let l = laplacian(&g);
        assert_eq!(l.data(), &[1.0, -1.0, -1.0, 1.0]);
    }

    #[test]
    fn laplacian_of_triangle() {
        let l = laplacian(&triangle());
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { 2.0 } else { -1.0 };
                assert_eq!(l.get(i, j), expected);
            }
        }
    }

    #[test]
    fn laplacian_of_edgeless_graph_is_zero() {
        let l = laplacian(&Graph::new(3, &[]).unwrap());
        assert!(l.data().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn laplacian_rows_sum_to_zero() {
        let g = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]).unwrap();
        let l = laplacian(&g);
        for i in 0..5 {
            assert!(l.row(i).iter().sum::<f64>().abs() <= 1e-12);
        }
    }

    #[test]
    fn random_walk_rows() {
        let p = random_walk_matrix(&triangle());
        for i in 0..3 {
            let mut row = p.row(i).to_vec();
            row.sort_by(f64::total_cmp);
            assert_eq!(row, vec![0.0, 0.5, 0.5]);
        }
        let p = random_walk_matrix(&Graph::new(2, &[(0, 1)]).unwrap());
        assert_eq!(p.data(), &[0.0, 1.0, 1.0, 0.0]);
    }

    #[test]
    fn isolated_node_row_is_zero() {
        let p = random_walk_matrix(&Graph::new(3, &[(0, 1)]).unwrap());
        assert_eq!(p.row(2), &[0.0, 0.0, 0.0]);
    }
}

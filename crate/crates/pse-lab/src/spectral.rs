//! Dense symmetric eigendecomposition (cyclic Jacobi) and the spectral PSEs
//! built on it: LapPE, Laplacian eigenvalues, pseudoinverse, heat-kernel
//! diagonal.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matrix::{laplacian, DenseMatrix};

const MAX_SWEEPS: usize = 100;

#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    /// Ascending eigenvalues.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors as matrix columns, in eigenvalue order.
    pub eigenvectors: DenseMatrix,
    /// Eigenvalues below this are classified as trivial (zero).
    pub zero_threshold: f64,
}

impl EigenDecomposition {
    pub fn eigenvector(&self, i: usize) -> Vec<f64> {
        (0..self.eigenvectors.rows()).map(|r| self.eigenvectors.get(r, i)).collect()
    }

    /// Indices of non-trivial (nonzero) eigenvalues.
    pub fn nontrivial_indices(&self) -> Vec<usize> {
        (0..self.eigenvalues.len()).filter(|&i| self.eigenvalues[i] > self.zero_threshold).collect()
    }
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
///
/// Rotations are applied in a fixed sweep order, so identical input bytes
/// always produce identical output. Eigenvalues are sorted ascending and each
/// eigenvector's first nonzero entry is made positive.
pub fn eigh(m: &DenseMatrix) -> Result<EigenDecomposition> {
    m.check_symmetric()?;
    let n = m.rows();
    let mut a = m.clone();
    // Symmetrize exactly so the sweep sees a_ij == a_ji.
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (a.get(i, j) + a.get(j, i));
            a.set(i, j, avg);
            a.set(j, i, avg);
        }
    }
    let mut v = DenseMatrix::identity(n);
    let scale = m.frobenius_norm().max(1.0);
    let tol = 1e-12 * scale;

    let off = |a: &DenseMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += 2.0 * a.get(i, j) * a.get(i, j);
            }
        }
        s.sqrt()
    };

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off(&a) <= tol {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }
    if !converged && off(&a) > tol {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(i, i).total_cmp(&a.get(j, j)));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a.get(i, i)).collect();
    let mut eigenvectors = DenseMatrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        let mut sign = 1.0;
        for r in 0..n {
            let x = v.get(r, src);
            if x.abs() > 1e-12 {
                sign = x.signum();
                break;
            }
        }
        for r in 0..n {
            eigenvectors.set(r, col, sign * v.get(r, src));
        }
    }
    let lambda_max = eigenvalues.last().copied().unwrap_or(0.0).abs();
    Ok(EigenDecomposition { eigenvalues, eigenvectors, zero_threshold: 1e-8 * lambda_max.max(1.0) })
}

fn normalized_column(decomp: &EigenDecomposition, i: usize) -> Vec<f64> {
    let mut col = decomp.eigenvector(i);
    let norm = col.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in &mut col {
            *x /= norm;
        }
    }
    col
}

/// LapPE: |normalize(u_i)| for the first `m` non-trivial eigenvalues,
/// zero-padded when fewer exist. Returns an n x m node-level block.
pub fn lap_pe(g: &Graph, m: usize) -> Result<DenseMatrix> {
    let n = g.num_nodes();
    let decomp = eigh(&laplacian(g))?;
    let mut out = DenseMatrix::zeros(n, m);
    for (j, &i) in decomp.nontrivial_indices().iter().take(m).enumerate() {
        let col = normalized_column(&decomp, i);
        for (r, x) in col.iter().enumerate() {
            out.set(r, j, x.abs());
        }
    }
    Ok(out)
}

/// First `m` non-trivial Laplacian eigenvalues as a graph-level vector,
/// zero-padded.
pub fn lap_eigenvalues(g: &Graph, m: usize) -> Result<Vec<f64>> {
    let decomp = eigh(&laplacian(g))?;
    let mut out = vec![0.0; m];
    for (j, &i) in decomp.nontrivial_indices().iter().take(m).enumerate() {
        out[j] = decomp.eigenvalues[i];
    }
    Ok(out)
}

/// Moore-Penrose pseudoinverse of a symmetric PSD matrix via its spectrum.
pub fn pseudoinverse(l: &DenseMatrix) -> Result<DenseMatrix> {
    let decomp = eigh(l)?;
    let n = l.rows();
    let mut out = DenseMatrix::zeros(n, n);
    for &i in &decomp.nontrivial_indices() {
        let u = decomp.eigenvector(i);
        let inv = 1.0 / decomp.eigenvalues[i];
        for r in 0..n {
            for c in 0..n {
                out.set(r, c, out.get(r, c) + inv * u[r] * u[c]);
            }
        }
    }
    Ok(out)
}

/// Heat-kernel diagonal: component t of node v is
/// sum over nonzero eigenvalues of exp(-t*lambda_i) * normalize(u_i)_v^2.
pub fn hk_diag_se(g: &Graph, times: &[f64]) -> Result<DenseMatrix> {
    for &t in times {
        if t <= 0.0 {
            return Err(Error::NonPositiveTime(t));
        }
    }
    let n = g.num_nodes();
    let decomp = eigh(&laplacian(g))?;
    let mut out = DenseMatrix::zeros(n, times.len());
    for &i in &decomp.nontrivial_indices() {
        let col = normalized_column(&decomp, i);
        for (j, &t) in times.iter().enumerate() {
            let w = (-t * decomp.eigenvalues[i]).exp();
            for (r, &x) in col.iter().enumerate() {
                out.set(r, j, out.get(r, j) + w * x * x);
            }
        }
    }
    Ok(out)
}

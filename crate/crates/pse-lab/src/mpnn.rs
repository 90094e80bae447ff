//! Forward-only GIN, GatedGCN, and GPSE encoder/decoder computation, plus the
//! constructive GatedGCN-simulates-GIN weight builder and its error-bound
//! verifier. No training happens anywhere in this crate: weights are random
//! (seeded), zero, or constructed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matrix::DenseMatrix;
use crate::pse::PseLevel;
use crate::rng::SplitMix64;

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn logit(y: f64) -> f64 {
    (y / (1.0 - y)).ln()
}

fn relu(x: f64) -> f64 {
    x.max(0.0)
}

/// y[v] = W h_v for every node row of `h`; W is (out x in).
fn apply_linear(h: &DenseMatrix, w: &DenseMatrix) -> DenseMatrix {
    assert_eq!(w.cols(), h.cols(), "weight input width mismatch");
    let mut out = DenseMatrix::zeros(h.rows(), w.rows());
    for v in 0..h.rows() {
        for o in 0..w.rows() {
            let mut acc = 0.0;
            for i in 0..w.cols() {
                acc += w.get(o, i) * h.get(v, i);
            }
            out.set(v, o, acc);
        }
    }
    out
}

fn map_relu(h: &mut DenseMatrix) {
    for v in 0..h.rows() {
        for j in 0..h.cols() {
            h.set(v, j, relu(h.get(v, j)));
        }
    }
}

/// Sums in a canonical order so the result is independent of neighbor
/// enumeration order, making message passing bit-exactly equivariant.
fn ordered_sum(terms: &mut Vec<f64>) -> f64 {
    terms.sort_by(f64::total_cmp);
    terms.iter().sum()
}

/// GIN layer: a two-layer MLP with ReLU after each linear map applied to
/// (1+eps) h_u + sum of neighbor features.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GinLayerWeights {
    pub epsilon: f64,
    pub mlp_w1: DenseMatrix,
    pub mlp_w2: DenseMatrix,
}

impl GinLayerWeights {
    pub fn input_width(&self) -> usize {
        self.mlp_w1.cols()
    }

    pub fn output_width(&self) -> usize {
        self.mlp_w2.rows()
    }

    pub fn validate(&self) -> Result<()> {
        if self.mlp_w2.cols() != self.mlp_w1.rows() {
            return Err(Error::WidthMismatch {
                got: self.mlp_w2.cols(),
                expected: self.mlp_w1.rows(),
            });
        }
        Ok(())
    }

    /// Random weights with entries uniform in [-bound, bound].
    pub fn random(d_in: usize, d_hid: usize, d_out: usize, bound: f64, rng: &mut SplitMix64) -> Self {
        let fill = |rows: usize, cols: usize, rng: &mut SplitMix64| {
            let mut m = DenseMatrix::zeros(rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    m.set(r, c, (2.0 * rng.next_f64() - 1.0) * bound);
                }
            }
            m
        };
        GinLayerWeights {
            epsilon: 2.0 * rng.next_f64() - 1.0,
            mlp_w1: fill(d_hid, d_in, rng),
            mlp_w2: fill(d_out, d_hid, rng),
        }
    }
}

pub fn gin_layer(h: &DenseMatrix, g: &Graph, w: &GinLayerWeights) -> Result<DenseMatrix> {
    w.validate()?;
    if h.cols() != w.input_width() {
        return Err(Error::WidthMismatch { got: h.cols(), expected: w.input_width() });
    }
    let n = g.num_nodes();
    assert_eq!(h.rows(), n);
    let mut z = DenseMatrix::zeros(n, h.cols());
    let mut terms = Vec::new();
    for v in 0..n {
        for j in 0..h.cols() {
            terms.clear();
            terms.extend(g.neighbors(v).iter().map(|&u| h.get(u, j)));
            z.set(v, j, (1.0 + w.epsilon) * h.get(v, j) + ordered_sum(&mut terms));
        }
    }
    let mut hidden = apply_linear(&z, &w.mlp_w1);
    map_relu(&mut hidden);
    let mut out = apply_linear(&hidden, &w.mlp_w2);
    map_relu(&mut out);
    Ok(out)
}

/// Runs a GIN stack, returning states for every layer including the input.
pub fn gin_forward(h0: &DenseMatrix, g: &Graph, stack: &[GinLayerWeights]) -> Result<Vec<DenseMatrix>> {
    let mut states = vec![h0.clone()];
    for w in stack {
        let next = gin_layer(states.last().unwrap(), g, w)?;
        states.push(next);
    }
    Ok(states)
}

/// GatedGCN layer weights. The gate's self term uses the receiving node (A),
/// the neighbor term the sender (B).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GatedGcnLayerWeights {
    pub u: DenseMatrix,
    pub v: DenseMatrix,
    pub a: DenseMatrix,
    pub b: DenseMatrix,
}

impl GatedGcnLayerWeights {
    pub fn input_width(&self) -> usize {
        self.u.cols()
    }

    pub fn output_width(&self) -> usize {
        self.u.rows()
    }

    pub fn validate(&self) -> Result<()> {
        for m in [&self.v, &self.a, &self.b] {
            if m.cols() != self.u.cols() {
                return Err(Error::WidthMismatch { got: m.cols(), expected: self.u.cols() });
            }
        }
        if self.v.rows() != self.u.rows() {
            return Err(Error::WidthMismatch { got: self.v.rows(), expected: self.u.rows() });
        }
        if self.a.rows() != self.v.rows() || self.b.rows() != self.v.rows() {
            return Err(Error::WidthMismatch { got: self.a.rows(), expected: self.v.rows() });
        }
        Ok(())
    }

    pub fn random(d_in: usize, d_out: usize, bound: f64, rng: &mut SplitMix64) -> Self {
        let fill = |rng: &mut SplitMix64| {
            let mut m = DenseMatrix::zeros(d_out, d_in);
            for r in 0..d_out {
                for c in 0..d_in {
                    m.set(r, c, (2.0 * rng.next_f64() - 1.0) * bound);
                }
            }
            m
        };
        GatedGcnLayerWeights { u: fill(rng), v: fill(rng), a: fill(rng), b: fill(rng) }
    }
}

/// h'_v = ReLU(U h_v + sum over neighbors u of sigmoid(A h_v + B h_u) (.) (V h_u)).
pub fn gatedgcn_layer(h: &DenseMatrix, g: &Graph, w: &GatedGcnLayerWeights) -> Result<DenseMatrix> {
    w.validate()?;
    if h.cols() != w.input_width() {
        return Err(Error::WidthMismatch { got: h.cols(), expected: w.input_width() });
    }
    let n = g.num_nodes();
    assert_eq!(h.rows(), n);
    let uh = apply_linear(h, &w.u);
    let vh = apply_linear(h, &w.v);
    let ah = apply_linear(h, &w.a);
    let bh = apply_linear(h, &w.b);
    let d_out = w.output_width();
    let mut out = DenseMatrix::zeros(n, d_out);
    let mut terms = Vec::new();
    for v in 0..n {
        for j in 0..d_out {
            terms.clear();
            terms.extend(
                g.neighbors(v)
                    .iter()
                    .map(|&u| sigmoid(ah.get(v, j) + bh.get(u, j)) * vh.get(u, j)),
            );
            out.set(v, j, relu(uh.get(v, j) + ordered_sum(&mut terms)));
        }
    }
    Ok(out)
}

/// One node-level or graph-level decoder head ŷ = ReLU(h W1) W2.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GpseHead {
    pub w1: DenseMatrix,
    pub w2: DenseMatrix,
    pub level: PseLevel,
}

/// Encoder input projection, GatedGCN stack, and decoder heads.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GpseWeights {
    pub w_inp: DenseMatrix,
    pub layers: Vec<GatedGcnLayerWeights>,
    pub heads: Vec<GpseHead>,
    /// Optional additive residual between GatedGCN layers. The published
    /// equations omit the residual connections mentioned in prose, so the
    /// default is the literal stack.
    #[serde(default)]
    pub residual: bool,
}

impl GpseWeights {
    /// Random weights with the toy inner dimension (default 32 rather than
    /// the production 512; the math is dimension-independent).
    pub fn random(input_dim: usize, inner_dim: usize, num_layers: usize, num_heads: usize, seed: u64) -> Self {
        let mut rng = SplitMix64::new(seed);
        let mut w_inp = DenseMatrix::zeros(inner_dim, input_dim);
        for r in 0..inner_dim {
            for c in 0..input_dim {
                w_inp.set(r, c, (2.0 * rng.next_f64() - 1.0) / (input_dim as f64).sqrt());
            }
        }
        let layers = (0..num_layers)
            .map(|_| GatedGcnLayerWeights::random(inner_dim, inner_dim, 1.0 / (inner_dim as f64).sqrt(), &mut rng))
            .collect();
        let heads = (0..num_heads)
            .map(|i| {
                let fill = |rows: usize, cols: usize, rng: &mut SplitMix64| {
                    let mut m = DenseMatrix::zeros(rows, cols);
                    for r in 0..rows {
                        for c in 0..cols {
                            m.set(r, c, (2.0 * rng.next_f64() - 1.0) / (cols as f64).sqrt());
                        }
                    }
                    m
                };
                GpseHead {
                    w1: fill(inner_dim, inner_dim, &mut rng),
                    w2: fill(1, inner_dim, &mut rng),
                    level: if i % 2 == 0 { PseLevel::Node } else { PseLevel::Graph },
                }
            })
            .collect();
        GpseWeights { w_inp, layers, heads, residual: false }
    }
}

pub const GPSE_DEFAULT_INNER_DIM: usize = 32;

/// GPSE encoder forward pass. `g` must already carry its virtual node and
/// `x` must have one feature row per node (virtual node included). Returns
/// final embeddings with the virtual-node row removed.
pub fn gpse_encoder_forward(g: &Graph, x: &DenseMatrix, w: &GpseWeights) -> Result<DenseMatrix> {
    let vn = g.virtual_node().ok_or(Error::MissingVirtualNode)?;
    if x.rows() != g.num_nodes() {
        return Err(Error::LengthMismatch { got: x.rows(), expected: g.num_nodes() });
    }
    if x.cols() != w.w_inp.cols() {
        return Err(Error::WidthMismatch { got: x.cols(), expected: w.w_inp.cols() });
    }
    let mut h = apply_linear(x, &w.w_inp);
    map_relu(&mut h);
    for layer in &w.layers {
        let next = gatedgcn_layer(&h, g, layer)?;
        if w.residual && next.cols() == h.cols() {
            let mut summed = next;
            for v in 0..h.rows() {
                for j in 0..h.cols() {
                    summed.set(v, j, summed.get(v, j) + h.get(v, j));
                }
            }
            h = summed;
        } else {
            h = next;
        }
    }
    let mut out = DenseMatrix::zeros(g.num_nodes() - 1, h.cols());
    let mut r = 0;
    for v in 0..g.num_nodes() {
        if v == vn {
            continue;
        }
        for j in 0..h.cols() {
            out.set(r, j, h.get(v, j));
        }
        r += 1;
    }
    Ok(out)
}

/// Decodes node embeddings through every head. Node-level heads emit one
/// scalar per node; graph-level heads sum the embeddings first.
pub fn gpse_decode(h: &DenseMatrix, heads: &[GpseHead]) -> Result<Vec<Vec<f64>>> {
    let mut out = Vec::with_capacity(heads.len());
    for head in heads {
        if head.w1.cols() != h.cols() {
            return Err(Error::WidthMismatch { got: h.cols(), expected: head.w1.cols() });
        }
        if head.w2.cols() != head.w1.rows() {
            return Err(Error::WidthMismatch { got: head.w2.cols(), expected: head.w1.rows() });
        }
        let decode_one = |row: &[f64]| -> f64 {
            let mut acc = 0.0;
            for o in 0..head.w2.cols() {
                let mut hidden = 0.0;
                for i in 0..head.w1.cols() {
                    hidden += head.w1.get(o, i) * row[i];
                }
                acc += head.w2.get(0, o) * relu(hidden);
            }
            acc
        };
        match head.level {
            PseLevel::Node => {
                out.push((0..h.rows()).map(|v| decode_one(h.row(v))).collect());
            }
            PseLevel::Graph => {
                let mut pooled = vec![0.0; h.cols()];
                for v in 0..h.rows() {
                    for j in 0..h.cols() {
                        pooled[j] += h.get(v, j);
                    }
                }
                out.push(vec![decode_one(&pooled)]);
            }
        }
    }
    Ok(out)
}

/// Emits three GatedGCN layers per GIN layer following the constructive
/// block layout: widths (1+d_in) -> (1+2 d_in) -> (1+d_hid) -> (1+d_out),
/// with a constant-1 channel threaded through every layer.
///
/// With an L-layer stack the scaling factors compound, so each layer is
/// built with alpha_layer = 1 - (1-alpha)^(1/L); the cumulative attenuation
/// after any prefix of layers then stays within the single-layer budget and
/// the overall error is bounded by alpha * max norm.
pub fn thm1_construct(
    gin_stack: &[GinLayerWeights],
    alpha: f64,
) -> Result<Vec<GatedGcnLayerWeights>> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    for w in gin_stack {
        w.validate()?;
    }
    let num_layers = gin_stack.len().max(1);
    let alpha_layer = 1.0 - (1.0 - alpha).powf(1.0 / num_layers as f64);
    let gate_fill = logit(1.0 - alpha_layer);
    let mut out = Vec::with_capacity(3 * gin_stack.len());
    for w in gin_stack {
        let d_in = w.input_width();
        let d_hid = w.mlp_w1.rows();
        let d_out = w.output_width();
        let beta = (1.0 + w.epsilon) * (1.0 - alpha_layer);

        // layer 1: gated neighborhood sum producing [1 | +p | -p] blocks
        let rows1 = 1 + 2 * d_in;
        let mut a = DenseMatrix::zeros(rows1, 1 + d_in);
        for r in 0..rows1 {
            a.set(r, 0, gate_fill);
        }
        let b = DenseMatrix::zeros(rows1, 1 + d_in);
        let mut v = DenseMatrix::zeros(rows1, 1 + d_in);
        let mut u = DenseMatrix::zeros(rows1, 1 + d_in);
        u.set(0, 0, 1.0);
        for i in 0..d_in {
            v.set(1 + i, 1 + i, 1.0);
            v.set(1 + d_in + i, 1 + i, -1.0);
            u.set(1 + i, 1 + i, beta);
            u.set(1 + d_in + i, 1 + i, -beta);
        }
        out.push(GatedGcnLayerWeights { u, v, a, b });

        // layer 2: first MLP linear map, recombining the +/- blocks
        let rows2 = 1 + d_hid;
        let mut u = DenseMatrix::zeros(rows2, rows1);
        u.set(0, 0, 1.0);
        for r in 0..d_hid {
            for c in 0..d_in {
                u.set(1 + r, 1 + c, w.mlp_w1.get(r, c));
                u.set(1 + r, 1 + d_in + c, -w.mlp_w1.get(r, c));
            }
        }
        out.push(GatedGcnLayerWeights {
            u,
            v: DenseMatrix::zeros(rows2, rows1),
            a: DenseMatrix::zeros(rows2, rows1),
            b: DenseMatrix::zeros(rows2, rows1),
        });

        // layer 3: second MLP linear map
        let rows3 = 1 + d_out;
        let mut u = DenseMatrix::zeros(rows3, rows2);
        u.set(0, 0, 1.0);
        for r in 0..d_out {
            for c in 0..d_hid {
                u.set(1 + r, 1 + c, w.mlp_w2.get(r, c));
            }
        }
        out.push(GatedGcnLayerWeights {
            u,
            v: DenseMatrix::zeros(rows3, rows2),
            a: DenseMatrix::zeros(rows3, rows2),
            b: DenseMatrix::zeros(rows3, rows2),
        });
    }
    Ok(out)
}

/// Prepends the constant-1 channel required by the construction.
pub fn with_constant_channel(h: &DenseMatrix) -> DenseMatrix {
    let mut out = DenseMatrix::zeros(h.rows(), h.cols() + 1);
    for v in 0..h.rows() {
        out.set(v, 0, 1.0);
        for j in 0..h.cols() {
            out.set(v, j + 1, h.get(v, j));
        }
    }
    out
}

/// Runs the GIN stack and its constructed GatedGCN counterpart side by side.
/// Returns (max over layers and nodes of the embedding error, the bound
/// alpha * max over layers and nodes of ||h||); the error never exceeds the
/// bound beyond float noise.
pub fn thm1_verify(
    g: &Graph,
    h0: &DenseMatrix,
    gin_stack: &[GinLayerWeights],
    alpha: f64,
) -> Result<(f64, f64)> {
    let gated_stack = thm1_construct(gin_stack, alpha)?;
    let gin_states = gin_forward(h0, g, gin_stack)?;
    let mut gated = with_constant_channel(h0);

    let mut max_error = 0.0f64;
    let mut max_norm = gin_states
        .iter()
        .flat_map(|s| (0..s.rows()).map(move |v| norm(s.row(v))))
        .fold(0.0f64, f64::max);
    max_norm = max_norm.max(0.0);

    for (l, chunk) in gated_stack.chunks(3).enumerate() {
        for layer in chunk {
            gated = gatedgcn_layer(&gated, g, layer)?;
        }
        let reference = &gin_states[l + 1];
        for v in 0..reference.rows() {
            // constant channel must survive exactly
            debug_assert_eq!(gated.get(v, 0), 1.0);
            let mut err = 0.0;
            for j in 0..reference.cols() {
                let d = reference.get(v, j) - gated.get(v, j + 1);
                err += d * d;
            }
            max_error = max_error.max(err.sqrt());
        }
    }
    let bound = alpha * max_norm;
    if max_error > bound + 1e-9 {
        return Err(Error::VerdictFailed(format!(
            "approximation error {max_error} exceeds bound {bound}"
        )));
    }
    Ok((max_error, bound))
}

fn norm(row: &[f64]) -> f64 {
    row.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        Graph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn identity_gin(d: usize, epsilon: f64) -> GinLayerWeights {
        GinLayerWeights { epsilon, mlp_w1: DenseMatrix::identity(d), mlp_w2: DenseMatrix::identity(d) }
    }

    #[test]
    fn gin_zero_weights_zero_output() {
        let w = GinLayerWeights {
            epsilon: 0.3,
            mlp_w1: DenseMatrix::zeros(2, 1),
            mlp_w2: DenseMatrix::zeros(1, 2),
        };
        let h = DenseMatrix::from_rows(&[vec![1.0], vec![2.0], vec![3.0]]);
        let out = gin_layer(&h, &triangle(), &w).unwrap();
        assert!(out.data().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn gin_triangle_identity_mlp() {
        let h = DenseMatrix::from_rows(&[vec![1.0], vec![1.0], vec![1.0]]);
        let out = gin_layer(&h, &triangle(), &identity_gin(1, 0.0)).unwrap();
        assert_eq!(out.data(), &[3.0, 3.0, 3.0]);
    }

    #[test]
    fn gin_k2_epsilon_one() {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        let h = DenseMatrix::from_rows(&[vec![1.0], vec![2.0]]);
        let out = gin_layer(&h, &g, &identity_gin(1, 1.0)).unwrap();
        assert_eq!(out.data(), &[4.0, 5.0]);
    }

    #[test]
    fn gatedgcn_zero_weights() {
        let w = GatedGcnLayerWeights {
            u: DenseMatrix::zeros(1, 1),
            v: DenseMatrix::zeros(1, 1),
            a: DenseMatrix::zeros(1, 1),
            b: DenseMatrix::zeros(1, 1),
        };
        let h = DenseMatrix::from_rows(&[vec![5.0], vec![-1.0], vec![2.0]]);
        let out = gatedgcn_layer(&h, &triangle(), &w).unwrap();
        assert!(out.data().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn gatedgcn_triangle_half_gate() {
        let w = GatedGcnLayerWeights {
            u: DenseMatrix::identity(1),
            v: DenseMatrix::identity(1),
            a: DenseMatrix::zeros(1, 1),
            b: DenseMatrix::zeros(1, 1),
        };
        let h = DenseMatrix::from_rows(&[vec![1.0], vec![1.0], vec![1.0]]);
        let out = gatedgcn_layer(&h, &triangle(), &w).unwrap();
        assert_eq!(out.data(), &[2.0, 2.0, 2.0]);
    }

    #[test]
    fn gatedgcn_isolated_node() {
        let g = Graph::new(2, &[]).unwrap();
        let w = GatedGcnLayerWeights {
            u: DenseMatrix::identity(1),
            v: DenseMatrix::identity(1),
            a: DenseMatrix::zeros(1, 1),
            b: DenseMatrix::zeros(1, 1),
        };
        let h = DenseMatrix::from_rows(&[vec![3.0], vec![-3.0]]);
        let out = gatedgcn_layer(&h, &g, &w).unwrap();
        assert_eq!(out.data(), &[3.0, 0.0]);
    }

    #[test]
    fn gpse_forward_drops_virtual_row() {
        let g = Graph::new(1, &[]).unwrap().add_virtual_node().unwrap();
        let w = GpseWeights::random(4, 8, 2, 2, 11);
        let mut x = DenseMatrix::zeros(2, 4);
        for v in 0..2 {
            for j in 0..4 {
                x.set(v, j, (v + j) as f64);
            }
        }
        let out = gpse_encoder_forward(&g, &x, &w).unwrap();
        assert_eq!(out.rows(), 1);
        let again = gpse_encoder_forward(&g, &x, &w).unwrap();
        assert_eq!(out.data(), again.data());
    }

    #[test]
    fn gpse_forward_zero_projection() {
        let g = Graph::new(2, &[(0, 1)]).unwrap().add_virtual_node().unwrap();
        let mut w = GpseWeights::random(3, 4, 1, 1, 5);
        w.w_inp = DenseMatrix::zeros(4, 3);
        for layer in &mut w.layers {
            layer.u = DenseMatrix::zeros(4, 4);
            layer.v = DenseMatrix::zeros(4, 4);
        }
        let x = DenseMatrix::from_rows(&[vec![1.0; 3], vec![2.0; 3], vec![3.0; 3]]);
        let out = gpse_encoder_forward(&g, &x, &w).unwrap();
        assert!(out.data().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn decode_graph_level_pools_before_mlp() {
        let h = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![1.0, 2.0]]);
        let head = GpseHead {
            w1: DenseMatrix::identity(2),
            w2: DenseMatrix::from_rows(&[vec![1.0, 1.0]]),
            level: PseLevel::Graph,
        };
        let out = gpse_decode(&h, &[head.clone()]).unwrap();
        // sum pooling happens before the head MLP
        let doubled = DenseMatrix::from_rows(&[vec![2.0, 4.0]]);
        let direct = gpse_decode(&doubled, &[head]).unwrap();
        assert_eq!(out, direct);
    }

    #[test]
    fn decode_zero_heads_zero_predictions() {
        let h = DenseMatrix::from_rows(&[vec![1.0, -2.0]]);
        let head = GpseHead {
            w1: DenseMatrix::zeros(2, 2),
            w2: DenseMatrix::zeros(1, 2),
            level: PseLevel::Node,
        };
        assert_eq!(gpse_decode(&h, &[head]).unwrap(), vec![vec![0.0]]);
    }

    #[test]
    fn construct_alpha_half_zero_gate() {
        let stack = vec![identity_gin(2, 0.0)];
        let layers = thm1_construct(&stack, 0.5).unwrap();
        assert_eq!(layers.len(), 3);
        assert_eq!(layers[0].a.get(0, 0), 0.0); // logit(0.5) = 0
        assert!(matches!(thm1_construct(&stack, 1.0), Err(Error::AlphaOutOfRange(_))));
    }

    #[test]
    fn construct_block_widths() {
        let mut rng = SplitMix64::new(3);
        let stack = vec![GinLayerWeights::random(2, 2, 2, 1.0, &mut rng)];
        let layers = thm1_construct(&stack, 0.1).unwrap();
        assert_eq!((layers[0].u.cols(), layers[0].u.rows()), (3, 5));
        assert_eq!((layers[1].u.cols(), layers[1].u.rows()), (5, 3));
        assert_eq!((layers[2].u.cols(), layers[2].u.rows()), (3, 3));
    }

    #[test]
    fn verify_bound_on_triangle() {
        let mut rng = SplitMix64::new(17);
        let stack = vec![
            GinLayerWeights::random(2, 3, 2, 1.0, &mut rng),
            GinLayerWeights::random(2, 3, 2, 1.0, &mut rng),
        ];
        let h0 = DenseMatrix::from_rows(&[vec![0.3, -0.2], vec![0.1, 0.9], vec![-0.5, 0.4]]);
        let (err, bound) = thm1_verify(&triangle(), &h0, &stack, 0.1).unwrap();
        assert!(err <= bound + 1e-9);
    }

    #[test]
    fn verify_error_scales_with_alpha() {
        let mut rng = SplitMix64::new(23);
        let stack = vec![GinLayerWeights::random(2, 2, 2, 1.0, &mut rng)];
        let h0 = DenseMatrix::from_rows(&[vec![0.5, 0.25], vec![1.0, -0.5], vec![0.75, 0.1]]);
        let (e1, _) = thm1_verify(&triangle(), &h0, &stack, 0.1).unwrap();
        let (e2, _) = thm1_verify(&triangle(), &h0, &stack, 0.001).unwrap();
        if e2 > 0.0 {
            let ratio = e1 / e2;
            assert!(ratio > 50.0 && ratio < 200.0, "ratio {ratio}");
        }
    }

    #[test]
    fn verify_zero_weights_zero_error() {
        let stack = vec![GinLayerWeights {
            epsilon: 0.0,
            mlp_w1: DenseMatrix::zeros(2, 2),
            mlp_w2: DenseMatrix::zeros(2, 2),
        }];
        let h0 = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0]]);
        let (err, _) = thm1_verify(&triangle(), &h0, &stack, 0.2).unwrap();
        assert_eq!(err, 0.0);
    }

    #[test]
    fn constant_channel_survives_every_layer() {
        let mut rng = SplitMix64::new(31);
        let stack = vec![
            GinLayerWeights::random(2, 4, 3, 1.0, &mut rng),
            GinLayerWeights::random(3, 2, 2, 1.0, &mut rng),
        ];
        let gated_stack = thm1_construct(&stack, 0.3).unwrap();
        let h0 = DenseMatrix::from_rows(&[vec![0.1, 0.2], vec![-0.3, 0.4], vec![0.5, -0.6]]);
        let mut h = with_constant_channel(&h0);
        for layer in &gated_stack {
            h = gatedgcn_layer(&h, &triangle(), layer).unwrap();
            for v in 0..h.rows() {
                assert_eq!(h.get(v, 0), 1.0);
            }
        }
    }
}

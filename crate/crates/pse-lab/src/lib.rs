//! Exact positional and structural encodings for small graphs, color
//! refinement expressivity experiments, and forward-only message-passing
//! computations, including a constructive GatedGCN-simulates-GIN weight
//! builder with a verified error bound.
//!
//! Everything is deterministic: randomness always flows through the seeded
//! [`rng::SplitMix64`] generator, eigensolves use a fixed-order Jacobi sweep,
//! and the random-walk / electrostatic encodings are computed in exact
//! rational arithmetic before the final conversion to `f64`.
//!
//! Start with the `examples/` directory; each example exercises one
//! capability end to end. The `pse-lab` binary exposes the same operations
//! as subcommands for scripting.

pub mod cli;
pub mod datasets;
pub mod error;
pub mod graph;
pub mod matrix;
pub mod mpnn;
pub mod pse;
pub mod rng;
pub mod spectral;
pub mod wl;

pub use error::{Error, Result};
pub use graph::Graph;
pub use matrix::DenseMatrix;

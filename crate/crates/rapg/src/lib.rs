//! Riemannian composite optimization on the sphere and oblique manifolds.
//!
//! The crate implements a unified accelerated proximal gradient method for
//! objectives F = f + h where f is geodesically (strongly) convex and h is
//! retraction-convex up to a quadratic, together with a non-accelerated
//! proximal gradient baseline, an adaptive-restart safeguard that recovers
//! global convergence without convexity, exact geometry for the unit sphere
//! and the oblique manifold, and a sparse-PCA benchmark harness.
//!
//! See the `examples/` directory for one runnable program per capability and
//! the `rapg-bench` binary for the experiment CLI.

// Admissibility guards use `!(a > b)` so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod error;
pub mod geometry;
pub mod objective;
pub mod prox;
pub mod restart;
pub mod solvers;

pub use error::{Error, Result};

//! Construction and certification of nearly-orthogonal vector families.
//!
//! The library builds families of unit vectors in tensor-product form whose
//! non-orthogonality graph avoids a complete bipartite subgraph, and then
//! certifies spectral and rank inequalities about those graphs numerically:
//! Lovász theta of the complement, vector chromatic number, upper bounds on
//! the minimum semidefinite rank, and rectangle-cover lower bounds on the
//! nonnegative rank of the squared Gram matrix.
//!
//! Orthogonality between family members is always decided by exact integer
//! arithmetic on sign-vector factors; floating point enters only through the
//! Gram matrices, the eigensolver, and the SDP solvers built on top.
//!
//! The crate is `no_std`-compatible (`default-features = false`); it only
//! needs `alloc`. File formats, CSV/JSON export, and the command-line
//! front end live in the companion `orthorep-cli` crate.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod construction;
pub mod error;
mod fp;
pub mod graph;
pub mod hypercube;
pub mod matrix;
pub mod nonneg_rank;
pub mod sdp;
pub mod spectral;

pub use error::Error;
pub use graph::Graph;
pub use hypercube::{SignVector, TensorVector};
pub use matrix::SymMatrix;

/// Default classification tolerance for explicit-coordinate representations.
///
/// Inner products with magnitude below `tol / 10` count as zero, above `tol`
/// as nonzero; the band in between is reported as indeterminate instead of
/// being classified. Factored representations ignore the tolerance entirely
/// (their zero tests are exact).
pub const DEFAULT_TOL: f64 = 1e-8;

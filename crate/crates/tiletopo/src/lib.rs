//! Self-affine tiles `T(A, D)` generated by expanding upper-triangular
//! matrices with product digit sets: point-cloud construction, closed-form
//! topology classification, and a numerically verified piecewise-linear
//! deformation taking a slant prism onto the tile.
//!
//! The matrix family is
//!
//! ```text
//!     A = | A1  -s |      A1 = diag(p_1, ..., p_{d-1}),   |p_j| >= 2,
//!         | 0  p_d |      s in R^{d-1},
//! ```
//!
//! with digit set `D = {(i_1, ..., i_d) : 0 <= i_j < |p_j|}`, optionally
//! shifted per vertical layer. The crate is organized around five library
//! modules plus a thin CLI:
//!
//! * [`linalg`] — words over a finite alphabet, base-`m` expansion values,
//!   componentwise vector algebra, and the exact-rational numeric backend.
//! * [`tile`] — self-affine pairs, digit expansions via triangular
//!   back-substitution, level-`n` tile approximations, Monte-Carlo measure
//!   and tiling-overlap estimates.
//! * [`criteria`] — the closed-form connectedness / interior-connectedness /
//!   tame-ball classifiers for this family, the 2-D two-digit-row criterion,
//!   and the 3-D ball criterion.
//! * [`prism`] — transition path functions, boundary partition of the unit
//!   box, and the five-stage piecewise-linear iteration that deforms a slant
//!   prism into a union of sub-prisms converging to the tile.
//! * [`verify`] — Hausdorff distances (grid-accelerated and streamed),
//!   injectivity / height-behaviour sampling harnesses, and reports.
//!
//! Everything is deterministic given a seed; sampling uses the named
//! ChaCha8 generator and block-structured reductions so results are
//! value-identical for any worker count.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod cli;
pub mod config;
pub mod criteria;
pub mod error;
pub mod io;
pub mod linalg;
pub mod parallel;
pub mod prism;
pub mod spatial;
pub mod tile;
pub mod verify;

pub use error::{Error, Result};
pub use linalg::{Scalar, Vector, Word};
pub use tile::{DigitSet, SelfAffinePair, TileApproximation};

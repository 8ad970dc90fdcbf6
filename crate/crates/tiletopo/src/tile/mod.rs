//! Self-affine pairs `(A, D)`, digit expansions, level-`n` tile
//! approximations, and Monte-Carlo tiling diagnostics.

mod approx;
mod measure;
mod pair;

pub use approx::{adjacency_connected, approximate, TileApproximation};
pub use measure::{estimate_measure, tiling_overlap_check, MeasureEstimate, OverlapReport};
pub use pair::{DigitSet, SelfAffinePair};

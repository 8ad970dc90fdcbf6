//! The prism-to-tile deformation machinery: transition path functions,
//! the boundary partition of the unit box, slant prisms, and the
//! five-stage piecewise-linear iteration.

mod boundary;
mod iterate;
mod profile;
mod shape;

pub use boundary::{partition_boundary, BoundaryMembership};
pub use iterate::{compose_h, iterate_once, IterationMap, SlabIteration};
pub use profile::PathProfile;
pub use shape::{
    cylinder_prism, default_profile, derived_interface_offsets, prism_for_pair, Prism,
};

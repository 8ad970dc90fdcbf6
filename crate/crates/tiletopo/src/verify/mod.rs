//! Numerical verification harness: Hausdorff distances, injectivity and
//! height-behaviour sampling for the prism deformation, and reproducible
//! reports.

mod checks;
mod hausdorff;
mod report;

pub use checks::{check_convergence, check_height_properties, check_injectivity};
pub use hausdorff::{hausdorff, hausdorff_brute, hausdorff_vs_level_cloud};
pub use report::{fmt_f64, VerificationReport};

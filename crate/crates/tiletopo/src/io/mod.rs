//! Artifact formats: CSV point clouds, OBJ surface meshes, and binary
//! PGM rasters.

mod csv;
mod obj;
mod pgm;

pub use csv::{read_cloud, write_cloud, CloudData};
pub use obj::{prism_surface_mesh, write_obj};
pub use pgm::{rasterize, write_pgm};

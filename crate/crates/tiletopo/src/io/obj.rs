use std::io::Write;

use crate::error::{Error, Result};
use crate::prism::Prism;
use crate::verify::fmt_f64;

/// Structured surface mesh of a 3-D slant prism: the six faces sampled
/// on `g x g` vertex grids, quads split into triangles. Vertices are
/// duplicated along shared edges, which OBJ viewers accept.
pub fn prism_surface_mesh(prism: &Prism, g: usize) -> Result<(Vec<f64>, Vec<[u32; 3]>)> {
    if prism.dim != 3 {
        return Err(Error::Unsupported(
            "OBJ export requires a 3-dimensional prism".into(),
        ));
    }
    let g = g.max(2);
    let step = |i: usize| i as f64 / (g - 1) as f64;
    let mut vertices: Vec<f64> = Vec::new();
    let mut faces: Vec<[u32; 3]> = Vec::new();

    // each face is a map (a, b) in [0,1]^2 -> (w1, w2, t)
    type FaceMap = Box<dyn Fn(f64, f64) -> ([f64; 2], f64)>;
    let face_maps: Vec<FaceMap> = vec![
        Box::new(|a, b| ([a - 0.5, b - 0.5], 0.0)), // bottom
        Box::new(|a, b| ([a - 0.5, b - 0.5], 1.0)), // top
        Box::new(|a, b| ([-0.5, a - 0.5], b)),      // four walls
        Box::new(|a, b| ([0.5, a - 0.5], b)),
        Box::new(|a, b| ([a - 0.5, -0.5], b)),
        Box::new(|a, b| ([a - 0.5, 0.5], b)),
    ];
    for fm in &face_maps {
        let base = (vertices.len() / 3) as u32;
        for i in 0..g {
            for j in 0..g {
                let (w, t) = fm(step(i), step(j));
                vertices.extend(prism.embed(&w, t));
            }
        }
        for i in 0..g - 1 {
            for j in 0..g - 1 {
                let v00 = base + (i * g + j) as u32;
                let v10 = base + ((i + 1) * g + j) as u32;
                let v11 = base + ((i + 1) * g + j + 1) as u32;
                let v01 = base + (i * g + j + 1) as u32;
                faces.push([v00, v10, v11]);
                faces.push([v00, v11, v01]);
            }
        }
    }
    Ok((vertices, faces))
}

/// ASCII OBJ with `v` and `f` records only.
pub fn write_obj<W: Write>(out: &mut W, vertices: &[f64], faces: &[[u32; 3]]) -> Result<()> {
    for v in vertices.chunks(3) {
        writeln!(out, "v {} {} {}", fmt_f64(v[0]), fmt_f64(v[1]), fmt_f64(v[2]))?;
    }
    for f in faces {
        writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Vector;

    #[test]
    fn mesh_counts_and_obj_shape() {
        let prism = Prism {
            dim: 3,
            y_lo: 0.0,
            height: 1.0,
            bottom_center: Vector::new(vec![0.5, 0.5]),
            slant: Vector::new(vec![1.0, 0.9]),
        };
        let (vertices, faces) = prism_surface_mesh(&prism, 4).unwrap();
        assert_eq!(vertices.len() / 3, 6 * 16);
        assert_eq!(faces.len(), 6 * 9 * 2);
        let mut out = Vec::new();
        write_obj(&mut out, &vertices, &faces).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("v "));
        assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), faces.len());
        // all face indices are valid and 1-based
        for line in text.lines().filter(|l| l.starts_with("f ")) {
            for idx in line[2..].split_whitespace() {
                let i: usize = idx.parse().unwrap();
                assert!(i >= 1 && i <= vertices.len() / 3);
            }
        }
    }

    #[test]
    fn two_dimensional_prisms_are_rejected() {
        let prism = Prism {
            dim: 2,
            y_lo: 0.0,
            height: 1.0,
            bottom_center: Vector::new(vec![0.5]),
            slant: Vector::new(vec![0.0]),
        };
        assert!(matches!(
            prism_surface_mesh(&prism, 4),
            Err(Error::Unsupported(_))
        ));
    }
}

use std::io::Write;

use crate::error::{Error, Result};

/// Rasterizes a 2-D cloud onto a `width x height` grid over its bounding
/// box; pixel values are occupancy counts scaled to 0..255 (0 = empty).
pub fn rasterize(points: &[f64], dim: usize, width: usize, height: usize) -> Result<Vec<u8>> {
    if dim != 2 {
        return Err(Error::Unsupported(
            "PGM rasters are for 2-dimensional clouds".into(),
        ));
    }
    if width == 0 || height == 0 || points.is_empty() {
        return Err(Error::InvalidArgument("empty raster or cloud".into()));
    }
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in points.chunks(2) {
        for j in 0..2 {
            lo[j] = lo[j].min(p[j]);
            hi[j] = hi[j].max(p[j]);
        }
    }
    let span = [
        (hi[0] - lo[0]).max(1e-300),
        (hi[1] - lo[1]).max(1e-300),
    ];
    let mut counts = vec![0u32; width * height];
    for p in points.chunks(2) {
        let ix = (((p[0] - lo[0]) / span[0]) * width as f64) as usize;
        let iy = (((p[1] - lo[1]) / span[1]) * height as f64) as usize;
        let ix = ix.min(width - 1);
        // image rows go top-down; larger second coordinate is higher
        let iy = height - 1 - iy.min(height - 1);
        counts[iy * width + ix] += 1;
    }
    let max = *counts.iter().max().unwrap() as f64;
    Ok(counts
        .iter()
        .map(|&c| {
            if c == 0 {
                0u8
            } else {
                (55.0 + 200.0 * c as f64 / max).round().min(255.0) as u8
            }
        })
        .collect())
}

/// Binary (P5) PGM.
pub fn write_pgm<W: Write>(out: &mut W, width: usize, height: usize, pixels: &[u8]) -> Result<()> {
    if pixels.len() != width * height {
        return Err(Error::InvalidArgument("pixel buffer size mismatch".into()));
    }
    write!(out, "P5\n{width} {height}\n255\n")?;
    out.write_all(pixels)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn raster_marks_occupied_cells() {
        let points = vec![0.0, 0.0, 1.0, 1.0, 1.0, 0.0];
        let px = rasterize(&points, 2, 4, 4).unwrap();
        // corners: (0,0) lower-left -> bottom row; (1,1) -> top-right
        assert!(px[3 * 4] > 0); // bottom-left
        assert!(px[3] > 0); // top-right
        assert!(px[3 * 4 + 3] > 0); // bottom-right
        assert_eq!(px.iter().filter(|&&c| c > 0).count(), 3);

        let mut out = Vec::new();
        write_pgm(&mut out, 4, 4, &px).unwrap();
        assert!(out.starts_with(b"P5\n4 4\n255\n"));
        assert_eq!(out.len(), 11 + 16);
    }

    #[test]
    fn non_planar_clouds_rejected() {
        assert!(matches!(
            rasterize(&[0.0, 0.0, 0.0], 3, 4, 4),
            Err(Error::Unsupported(_))
        ));
    }
}

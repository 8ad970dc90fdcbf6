use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::parallel::{block_ranges, block_rng, run_blocks};
use crate::spatial::{PointGrid, MAX_GRID_DIM};
use crate::tile::{approximate, DigitSet, SelfAffinePair, TileApproximation};

/// Monte-Carlo estimate of the Lebesgue measure of the level-`n` cell
/// covering (each cloud point carries its exact digit-tail box).
#[derive(Clone, Debug)]
pub struct MeasureEstimate {
    pub measure: f64,
    pub covered_fraction: f64,
    pub box_volume: f64,
    pub level: usize,
    pub samples: u64,
    pub seed: u64,
}

/// Coverage / overlap diagnostics for a set of translates of the level-`n`
/// cell covering over a sample box.
#[derive(Clone, Debug)]
pub struct OverlapReport {
    pub coverage_fraction: f64,
    pub overlap_measure: f64,
    pub box_volume: f64,
    pub duplicate_translates: bool,
    pub level: usize,
    pub samples: u64,
    pub seed: u64,
}

struct CellCovering {
    grid: PointGrid,
    tail_lo: Vec<f64>,
    tail_hi: Vec<f64>,
    dim: usize,
}

impl CellCovering {
    fn build(approx: &TileApproximation<f64>) -> Result<Self> {
        let dim = approx.dim();
        if dim > MAX_GRID_DIM {
            return Err(Error::Unsupported(format!(
                "cell covering supports dimension <= {MAX_GRID_DIM}"
            )));
        }
        let mut cell = 1e-9f64;
        for j in 0..dim {
            cell = cell.max(approx.tail_hi[j] - approx.tail_lo[j]);
        }
        Ok(CellCovering {
            grid: PointGrid::build(approx.flat().to_vec(), dim, cell),
            tail_lo: approx.tail_lo.clone(),
            tail_hi: approx.tail_hi.clone(),
            dim,
        })
    }

    /// Whether `q` lies in some cloud cell `x + [tail_lo, tail_hi]`.
    fn covers(&self, q: &[f64]) -> bool {
        // q in x + tail-box  <=>  x in q - tail-box
        let mut lo = [0.0f64; MAX_GRID_DIM];
        let mut hi = [0.0f64; MAX_GRID_DIM];
        for j in 0..self.dim {
            lo[j] = q[j] - self.tail_hi[j];
            hi[j] = q[j] - self.tail_lo[j];
        }
        self.grid.search_box(&lo[..self.dim], &hi[..self.dim], |_, x| {
            (0..self.dim).all(|j| x[j] >= lo[j] && x[j] <= hi[j])
        })
    }

    /// Bounding box of the covering.
    fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for i in 0..self.grid.len() {
            let p = self.grid.point(i);
            for j in 0..self.dim {
                lo[j] = lo[j].min(p[j] + self.tail_lo[j]);
                hi[j] = hi[j].max(p[j] + self.tail_hi[j]);
            }
        }
        (lo, hi)
    }
}

const SAMPLE_BLOCK: u64 = 4096;

fn require_standard_integer_digits(pair: &SelfAffinePair<f64>) -> Result<()> {
    match pair.digit_set() {
        DigitSet::Standard => Ok(()),
        DigitSet::LayerOffsets(_) => Err(Error::Unsupported(
            "measure/overlap estimators require the standard integer digit set".into(),
        )),
    }
}

/// Monte-Carlo Lebesgue measure of the level-`n` cell covering of the
/// tile. For a `Z^d`-tile with standard integer digits this converges to 1
/// as `n` grows. Deterministic given `seed`, for any `threads`.
pub fn estimate_measure(
    pair: &SelfAffinePair<f64>,
    n: usize,
    samples: u64,
    seed: u64,
    budget: u64,
    threads: usize,
) -> Result<MeasureEstimate> {
    require_standard_integer_digits(pair)?;
    if n == 0 || samples == 0 {
        return Err(Error::InvalidParameter(
            "measure estimation needs n >= 1 and samples >= 1".into(),
        ));
    }
    let approx = approximate(pair, n, budget)?;
    let covering = CellCovering::build(&approx)?;
    let (lo, hi) = covering.bounding_box();
    let volume: f64 = (0..covering.dim).map(|j| hi[j] - lo[j]).product();

    let blocks = block_ranges(samples, SAMPLE_BLOCK);
    let hits: Vec<u64> = run_blocks(threads, blocks.len(), |b| {
        let (_, len) = blocks[b];
        let mut rng = block_rng(seed, b as u64);
        let mut q = vec![0.0; covering.dim];
        let mut hit = 0u64;
        for _ in 0..len {
            for j in 0..covering.dim {
                q[j] = lo[j] + (hi[j] - lo[j]) * rng.gen::<f64>();
            }
            if covering.covers(&q) {
                hit += 1;
            }
        }
        hit
    });
    let hit_total: u64 = hits.iter().sum();
    let fraction = hit_total as f64 / samples as f64;
    Ok(MeasureEstimate {
        measure: fraction * volume,
        covered_fraction: fraction,
        box_volume: volume,
        level: n,
        samples,
        seed,
    })
}

/// Samples `box_lo..box_hi` and reports (a) the fraction covered by at
/// least one translate of the level-`n` cell covering and (b) the
/// estimated measure covered by two or more distinct list entries.
/// Duplicate translates are flagged (their shared interior then counts as
/// overlap, which surfaces as roughly the measure of the tile itself).
#[allow(clippy::too_many_arguments)]
pub fn tiling_overlap_check(
    pair: &SelfAffinePair<f64>,
    translates: &[Vector<f64>],
    n: usize,
    samples: u64,
    seed: u64,
    box_lo: &[f64],
    box_hi: &[f64],
    budget: u64,
    threads: usize,
) -> Result<OverlapReport> {
    require_standard_integer_digits(pair)?;
    if translates.is_empty() {
        return Err(Error::InvalidArgument("empty translate list".into()));
    }
    let d = pair.dim();
    if box_lo.len() != d || box_hi.len() != d {
        return Err(Error::Dimension("sample box has wrong dimension".into()));
    }
    for t in translates {
        if t.dim() != d {
            return Err(Error::Dimension("translate has wrong dimension".into()));
        }
        if t.iter().any(|c| (c - c.round()).abs() > 1e-9) {
            return Err(Error::InvalidArgument(format!(
                "translates must lie in Z^{d}"
            )));
        }
    }
    let mut keys: Vec<Vec<i64>> = translates
        .iter()
        .map(|t| t.iter().map(|c| c.round() as i64).collect())
        .collect();
    keys.sort();
    let duplicate_translates = keys.windows(2).any(|w| w[0] == w[1]);

    let approx = approximate(pair, n, budget)?;
    let covering = CellCovering::build(&approx)?;
    let volume: f64 = (0..d).map(|j| box_hi[j] - box_lo[j]).product();

    let blocks = block_ranges(samples, SAMPLE_BLOCK);
    let counts: Vec<(u64, u64)> = run_blocks(threads, blocks.len(), |b| {
        let (_, len) = blocks[b];
        let mut rng = block_rng(seed, b as u64);
        let mut q = vec![0.0; d];
        let mut shifted = vec![0.0; d];
        let (mut covered, mut multi) = (0u64, 0u64);
        for _ in 0..len {
            for j in 0..d {
                q[j] = box_lo[j] + (box_hi[j] - box_lo[j]) * rng.gen::<f64>();
            }
            let mut count = 0u32;
            for t in translates {
                for j in 0..d {
                    shifted[j] = q[j] - t[j];
                }
                if covering.covers(&shifted) {
                    count += 1;
                    if count >= 2 {
                        break;
                    }
                }
            }
            if count >= 1 {
                covered += 1;
            }
            if count >= 2 {
                multi += 1;
            }
        }
        (covered, multi)
    });
    let covered: u64 = counts.iter().map(|c| c.0).sum();
    let multi: u64 = counts.iter().map(|c| c.1).sum();
    Ok(OverlapReport {
        coverage_fraction: covered as f64 / samples as f64,
        overlap_measure: multi as f64 / samples as f64 * volume,
        box_volume: volume,
        duplicate_translates,
        level: n,
        samples,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> SelfAffinePair<f64> {
        SelfAffinePair::standard(vec![2, 2], Vector::new(vec![0.0])).unwrap()
    }

    #[test]
    fn unit_square_measure_close_to_one() {
        let est = estimate_measure(&unit_square(), 8, 100_000, 42, 200_000, 1).unwrap();
        assert!(
            (est.measure - 1.0).abs() < 0.01,
            "measure = {}",
            est.measure
        );
    }

    #[test]
    fn zero_samples_rejected() {
        assert!(matches!(
            estimate_measure(&unit_square(), 4, 0, 1, 100_000, 1),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn offset_digits_unsupported_for_measure() {
        let pair = SelfAffinePair::new(
            vec![2, 2],
            Vector::new(vec![0.0]),
            DigitSet::LayerOffsets(vec![
                Vector::new(vec![0.0]),
                Vector::new(vec![0.5]),
            ]),
        )
        .unwrap();
        assert!(matches!(
            estimate_measure(&pair, 4, 10, 1, 100_000, 1),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn far_box_has_zero_coverage() {
        let t = vec![Vector::new(vec![0.0, 0.0])];
        let rep = tiling_overlap_check(
            &unit_square(),
            &t,
            6,
            20_000,
            7,
            &[50.0, 50.0],
            &[51.0, 51.0],
            100_000,
            1,
        )
        .unwrap();
        assert_eq!(rep.coverage_fraction, 0.0);
        assert_eq!(rep.overlap_measure, 0.0);
    }

    #[test]
    fn unit_square_tiling_covers_with_tiny_overlap() {
        let mut translates = Vec::new();
        for i in -1..=2 {
            for j in -1..=2 {
                translates.push(Vector::new(vec![i as f64, j as f64]));
            }
        }
        let rep = tiling_overlap_check(
            &unit_square(),
            &translates,
            8,
            50_000,
            3,
            &[0.0, 0.0],
            &[1.0, 1.0],
            200_000,
            1,
        )
        .unwrap();
        assert!(rep.coverage_fraction >= 0.99, "{}", rep.coverage_fraction);
        assert!(rep.overlap_measure <= 0.02, "{}", rep.overlap_measure);
        assert!(!rep.duplicate_translates);
    }

    #[test]
    fn duplicate_translate_flagged_and_overlaps() {
        let t = vec![
            Vector::new(vec![0.0, 0.0]),
            Vector::new(vec![0.0, 0.0]),
        ];
        let rep = tiling_overlap_check(
            &unit_square(),
            &t,
            6,
            20_000,
            9,
            &[-0.25, -0.25],
            &[1.25, 1.25],
            100_000,
            1,
        )
        .unwrap();
        assert!(rep.duplicate_translates);
        // overlap is about the measure of T itself (= 1)
        assert!((rep.overlap_measure - 1.0).abs() < 0.1, "{}", rep.overlap_measure);
    }

    #[test]
    fn empty_translates_rejected() {
        assert!(matches!(
            tiling_overlap_check(
                &unit_square(),
                &[],
                4,
                10,
                1,
                &[0.0, 0.0],
                &[1.0, 1.0],
                100_000,
                1
            ),
            Err(Error::InvalidArgument(_))
        ));
    }
}

use crate::error::{Error, Result};
use crate::linalg::{Scalar, Vector};
use crate::spatial::{PointGrid, UnionFind, MAX_GRID_DIM};
use crate::tile::SelfAffinePair;

/// Default enumeration budget: `#D^n` may not exceed this unless the
/// caller raises it.
pub const DEFAULT_POINT_BUDGET: u64 = 2_000_000;

/// All level-`n` truncated digit sums of a pair, stored flat in
/// lexicographic word order (first summand's digit varies slowest).
///
/// Each point carries the residual digit tail inside `point + [tail_lo,
/// tail_hi]`; these boxes cover the tile and are the covering cells for
/// the measure and adjacency oracles. `cell_radius` is the sup-norm bound
/// `max_j max(|lo_j|, |hi_j|)` on the distance from a point to its tile
/// piece.
#[derive(Clone, Debug)]
pub struct TileApproximation<S> {
    pub level: usize,
    dim: usize,
    data: Vec<S>,
    pub cell_radius: f64,
    pub tail_lo: Vec<f64>,
    pub tail_hi: Vec<f64>,
}

impl<S: Scalar> TileApproximation<S> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point_count(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn point(&self, i: usize) -> &[S] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter_points(&self) -> impl Iterator<Item = &[S]> {
        self.data.chunks(self.dim)
    }

    pub fn flat(&self) -> &[S] {
        &self.data
    }

    pub fn to_f64(&self) -> TileApproximation<f64> {
        TileApproximation {
            level: self.level,
            dim: self.dim,
            data: self.data.iter().map(|s| s.to_f64()).collect(),
            cell_radius: self.cell_radius,
            tail_lo: self.tail_lo.clone(),
            tail_hi: self.tail_hi.clone(),
        }
    }

    /// Componentwise bounding box of the cloud.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for p in self.iter_points() {
            for j in 0..self.dim {
                let x = p[j].to_f64();
                lo[j] = lo[j].min(x);
                hi[j] = hi[j].max(x);
            }
        }
        (lo, hi)
    }
}

/// Enumerates every length-`n` digit word and its truncated sum.
///
/// Cost is `#D^n` vector additions off a precomputed `A^{-l} d` table;
/// exceeding `budget` is an error rather than an attempt.
pub fn approximate<S: Scalar>(
    pair: &SelfAffinePair<S>,
    n: usize,
    budget: u64,
) -> Result<TileApproximation<S>> {
    let digit_count = pair.digit_count();
    let total = digit_count.checked_pow(n as u32).ok_or_else(|| {
        Error::Resource(format!("#D^{n} overflows the point counter"))
    })?;
    if total > budget as u128 {
        return Err(Error::Resource(format!(
            "level-{n} cloud needs {total} points, budget is {budget}"
        )));
    }
    let d = pair.dim();
    let fpair = pair.to_f64();
    let (tail_lo, tail_hi) = fpair.tail_hull_at_level(n);
    let cell_radius = fpair.cell_radius(n);

    // table[l][k] = A^{-(l+1)} d_k
    let digits: Vec<Vector<S>> = (0..digit_count as u64)
        .map(|k| pair.digit(k))
        .collect::<Result<_>>()?;
    let mut table: Vec<Vec<Vector<S>>> = Vec::with_capacity(n);
    for l in 0..n {
        let prev: Option<&Vec<Vector<S>>> = if l == 0 { None } else { Some(&table[l - 1]) };
        let row: Vec<Vector<S>> = (0..digits.len())
            .map(|k| {
                let base = match prev {
                    None => digits[k].clone(),
                    Some(p) => p[k].clone(),
                };
                pair.back_substitute(&base)
            })
            .collect::<Result<_>>()?;
        table.push(row);
    }

    let mut data: Vec<S> = Vec::with_capacity(total as usize * d);
    let mut acc: Vec<Vector<S>> = vec![Vector::zeros(d); n + 1];
    // depth-first odometer over words, partial sums kept per depth
    fn rec<S: Scalar>(
        depth: usize,
        n: usize,
        table: &[Vec<Vector<S>>],
        acc: &mut Vec<Vector<S>>,
        data: &mut Vec<S>,
    ) {
        if depth == n {
            data.extend(acc[n].components().iter().cloned());
            return;
        }
        for k in 0..table[depth].len() {
            acc[depth + 1] = acc[depth].add(&table[depth][k]).expect("dims");
            rec(depth + 1, n, table, acc, data);
        }
    }
    rec(0, n, &table, &mut acc, &mut data);

    Ok(TileApproximation {
        level: n,
        dim: d,
        data,
        cell_radius,
        tail_lo: tail_lo.components().to_vec(),
        tail_hi: tail_hi.components().to_vec(),
    })
}

/// Connectivity of the cell-adjacency graph: each cloud point carries its
/// covering cell `point + [tail_lo, tail_hi]`, and two cells are adjacent
/// iff the closed boxes intersect, i.e. `|Δ_j| <= tail width_j` in every
/// coordinate. Connectivity of this graph is the desk-scale
/// connectedness oracle for the tile: a connected tile always yields a
/// connected graph (cells cover the tile pieces), and a disconnected
/// graph certifies a disconnected tile.
pub fn adjacency_connected(approx: &TileApproximation<f64>) -> Result<bool> {
    if approx.dim > MAX_GRID_DIM {
        return Err(Error::Unsupported(format!(
            "adjacency oracle supports dimension <= {MAX_GRID_DIM}"
        )));
    }
    let n = approx.point_count();
    if n == 0 {
        return Ok(true);
    }
    let width: Vec<f64> = (0..approx.dim)
        .map(|j| {
            let w = approx.tail_hi[j] - approx.tail_lo[j];
            w + w * 1e-12 + 1e-300
        })
        .collect();
    let cell = width.iter().cloned().fold(1e-12f64, f64::max);
    let grid = PointGrid::build(approx.data.clone(), approx.dim, cell);
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        let p = approx.point(i);
        let lo: Vec<f64> = (0..approx.dim).map(|j| p[j] - width[j]).collect();
        let hi: Vec<f64> = (0..approx.dim).map(|j| p[j] + width[j]).collect();
        grid.for_each_in_box(&lo, &hi, |j, q| {
            if (j as usize) > i {
                let adjacent = (0..approx.dim).all(|k| (p[k] - q[k]).abs() <= width[k]);
                if adjacent {
                    uf.union(i as u32, j);
                }
            }
        });
    }
    Ok(uf.component_count() == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Rational;

    fn unit_square_pair() -> SelfAffinePair<f64> {
        SelfAffinePair::standard(vec![2, 2], Vector::new(vec![0.0])).unwrap()
    }

    #[test]
    fn level_zero_is_single_origin_point() {
        let approx = approximate(&unit_square_pair(), 0, 10).unwrap();
        assert_eq!(approx.point_count(), 1);
        assert_eq!(approx.point(0), &[0.0, 0.0]);
        assert!(approx.cell_radius > 0.9); // the whole-tile bound
    }

    #[test]
    fn level_one_is_digit_images() {
        let pair = unit_square_pair();
        let approx = approximate(&pair, 1, 10).unwrap();
        assert_eq!(approx.point_count(), 4);
        let mut pts: Vec<(f64, f64)> = approx.iter_points().map(|p| (p[0], p[1])).collect();
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(pts, vec![(0.0, 0.0), (0.0, 0.5), (0.5, 0.0), (0.5, 0.5)]);
    }

    #[test]
    fn budget_is_enforced() {
        let pair = unit_square_pair();
        assert!(matches!(
            approximate(&pair, 8, 1000),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn unit_square_level8_bounding_box() {
        // s = 0 decouples the coordinates into two base-2 expansions, so
        // the cloud is the dyadic lattice of [0,1)^2 at pitch 2^-8.
        let approx = approximate(&unit_square_pair(), 8, 100_000).unwrap();
        assert_eq!(approx.point_count(), 65536);
        let (lo, hi) = approx.bounding_box();
        let step = 1.0 / 256.0;
        assert_eq!(lo, vec![0.0, 0.0]);
        assert!((hi[0] - (1.0 - step)).abs() < 1e-12);
        assert!((hi[1] - (1.0 - step)).abs() < 1e-12);
        // oracle: the product of 1-D base-2 expansions hits every lattice
        // point exactly once
        let mut seen = vec![false; 65536];
        for p in approx.iter_points() {
            let i = (p[0] / step).round() as usize;
            let j = (p[1] / step).round() as usize;
            let idx = i * 256 + j;
            assert!((p[0] - i as f64 * step).abs() < 1e-12);
            assert!(!seen[idx]);
            seen[idx] = true;
        }
    }

    #[test]
    fn refinement_nesting_is_exact() {
        // every level-n point reappears among level-(n+1) points (append
        // the zero digit), in exact arithmetic
        let pair: SelfAffinePair<Rational> =
            SelfAffinePair::standard(vec![3, -2], Vector::new(vec![Rational::from_ratio(5, 2)]))
                .unwrap();
        let small = approximate(&pair, 2, 1000).unwrap();
        let big = approximate(&pair, 3, 1000).unwrap();
        for p in small.iter_points() {
            assert!(big.iter_points().any(|q| q == p));
        }
    }

    #[test]
    fn set_equation_holds_as_multisets() {
        // A * points(n+1) = points(n) + D, exactly
        let pair: SelfAffinePair<Rational> =
            SelfAffinePair::standard(vec![3, 3], Vector::from_ints(&[2])).unwrap();
        let n0 = approximate(&pair, 1, 1000).unwrap();
        let n1 = approximate(&pair, 2, 1000).unwrap();
        let mut lhs: Vec<Vec<Rational>> = n1
            .iter_points()
            .map(|q| {
                pair.apply(&Vector::new(q.to_vec()))
                    .unwrap()
                    .into_components()
            })
            .collect();
        let mut rhs: Vec<Vec<Rational>> = Vec::new();
        for p in n0.iter_points() {
            for k in 0..pair.digit_count() as u64 {
                let d = pair.digit(k).unwrap();
                rhs.push(
                    Vector::new(p.to_vec())
                        .add(&d)
                        .unwrap()
                        .into_components(),
                );
            }
        }
        let key = |v: &Vec<Rational>| {
            v.iter()
                .map(|c| format!("{c}"))
                .collect::<Vec<_>>()
                .join(",")
        };
        let mut lhs_keys: Vec<String> = lhs.drain(..).map(|v| key(&v)).collect();
        let mut rhs_keys: Vec<String> = rhs.drain(..).map(|v| key(&v)).collect();
        lhs_keys.sort();
        rhs_keys.sort();
        assert_eq!(lhs_keys, rhs_keys);
    }

    #[test]
    fn rational_and_float_backends_agree() {
        let rpair: SelfAffinePair<Rational> =
            SelfAffinePair::standard(vec![4, -3, 5], Vector::from_ints(&[10, -7])).unwrap();
        let fpair = rpair.to_f64();
        let word = [5u64, 0, 58, 13, 27, 9, 41, 2, 33, 17];
        let rp = rpair.digit_expansion_point(&word).unwrap();
        let fp = fpair.digit_expansion_point(&word).unwrap();
        for j in 0..3 {
            assert!((rp[j].to_f64() - fp[j]).abs() < 1e-10);
        }
    }

    #[test]
    fn adjacency_oracle_sees_connected_square_and_split_tile() {
        let approx = approximate(&unit_square_pair(), 4, 100_000).unwrap();
        assert!(adjacency_connected(&approx).unwrap());

        // p = (2, 4), s = (4): criterion value 2 > 1, consecutive layers
        // are a full box-width apart (gap 1) while the level-4 cell reach
        // is 2 * 0.4375, so the cell graph splits
        let split = SelfAffinePair::standard(vec![2, 4], Vector::new(vec![4.0])).unwrap();
        assert!((split.cell_radius(4) - 0.4296875).abs() < 1e-6);
        let approx = approximate(&split, 4, 100_000).unwrap();
        assert!(!adjacency_connected(&approx).unwrap());
    }
}

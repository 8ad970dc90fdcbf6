use crate::error::{Error, Result};
use crate::linalg::{Scalar, Vector};

/// Digit set of a pair. The standard set is the full product
/// `{(i_1, ..., i_d) : 0 <= i_j < |p_j|}`; the layered variant shifts the
/// horizontal digits of vertical layer `k` by an offset `a_k` in `R^{d-1}`.
#[derive(Clone, Debug, PartialEq)]
pub enum DigitSet<S> {
    Standard,
    /// One horizontal offset per vertical layer, `k = 0 .. |p_d| - 1`.
    LayerOffsets(Vec<Vector<S>>),
}

/// The self-affine pair: an expanding upper-triangular matrix
///
/// ```text
///     A = | diag(p_1 .. p_{d-1})  -s |
///         | 0                    p_d |
/// ```
///
/// together with a product digit set. All `|p_j| >= 2`, which makes `A`
/// expanding. The matrix is never materialized; `A^{-1}` is applied by
/// back-substitution on this structure.
#[derive(Clone, Debug)]
pub struct SelfAffinePair<S> {
    p: Vec<i64>,
    s: Vector<S>,
    digits: DigitSet<S>,
}

impl<S: Scalar> SelfAffinePair<S> {
    /// `p` lists the full diagonal `p_1, ..., p_d`; `s` is the slant column
    /// of length `d - 1`.
    pub fn new(p: Vec<i64>, s: Vector<S>, digits: DigitSet<S>) -> Result<Self> {
        if p.len() < 2 {
            return Err(Error::Dimension(format!(
                "need dimension >= 2, got {}",
                p.len()
            )));
        }
        if let Some(&bad) = p.iter().find(|&&pj| pj.abs() < 2) {
            return Err(Error::InvalidParameter(format!(
                "matrix is not expanding: diagonal entry {bad} has |entry| < 2"
            )));
        }
        if s.dim() != p.len() - 1 {
            return Err(Error::Dimension(format!(
                "slant has length {}, expected {}",
                s.dim(),
                p.len() - 1
            )));
        }
        if let DigitSet::LayerOffsets(offsets) = &digits {
            let layers = p[p.len() - 1].unsigned_abs() as usize;
            if offsets.len() != layers {
                return Err(Error::InvalidParameter(format!(
                    "expected {layers} layer offsets, got {}",
                    offsets.len()
                )));
            }
            if let Some(bad) = offsets.iter().find(|a| a.dim() != p.len() - 1) {
                return Err(Error::Dimension(format!(
                    "layer offset has length {}, expected {}",
                    bad.dim(),
                    p.len() - 1
                )));
            }
        }
        Ok(SelfAffinePair { p, s, digits })
    }

    pub fn standard(p: Vec<i64>, s: Vector<S>) -> Result<Self> {
        Self::new(p, s, DigitSet::Standard)
    }

    pub fn dim(&self) -> usize {
        self.p.len()
    }

    pub fn diagonal(&self) -> &[i64] {
        &self.p
    }

    /// Horizontal diagonal entries `p_1 .. p_{d-1}`.
    pub fn horizontal_diagonal(&self) -> &[i64] {
        &self.p[..self.p.len() - 1]
    }

    pub fn vertical_entry(&self) -> i64 {
        self.p[self.p.len() - 1]
    }

    pub fn slant(&self) -> &Vector<S> {
        &self.s
    }

    pub fn digit_set(&self) -> &DigitSet<S> {
        &self.digits
    }

    /// Number of vertical layers `r = |p_d|`.
    pub fn layers(&self) -> usize {
        self.vertical_entry().unsigned_abs() as usize
    }

    /// Per-coordinate digit counts `|p_1|, ..., |p_d|`.
    pub fn radices(&self) -> Vec<u64> {
        self.p.iter().map(|pj| pj.unsigned_abs()).collect()
    }

    /// `#D = |p_1 ... p_d|`, exact in 128 bits.
    pub fn digit_count(&self) -> u128 {
        self.p.iter().map(|pj| pj.unsigned_abs() as u128).product()
    }

    /// Decodes a digit index (mixed radix, first coordinate fastest) into
    /// the digit vector.
    pub fn digit(&self, index: u64) -> Result<Vector<S>> {
        let count = self.digit_count();
        if (index as u128) >= count {
            return Err(Error::InvalidWord {
                symbol: index,
                alphabet: count.min(u64::MAX as u128) as u64,
            });
        }
        let mut rest = index;
        let mut comps = Vec::with_capacity(self.dim());
        for pj in &self.p {
            let radix = pj.unsigned_abs();
            comps.push(S::from_int((rest % radix) as i64));
            rest /= radix;
        }
        if let DigitSet::LayerOffsets(offsets) = &self.digits {
            let layer = comps[self.dim() - 1].to_f64() as usize;
            let a = &offsets[layer];
            for j in 0..self.dim() - 1 {
                comps[j] = comps[j].clone() + a[j].clone();
            }
        }
        Ok(Vector::new(comps))
    }

    /// Hull `[min, max]` of each digit coordinate over the whole set.
    pub fn digit_hull(&self) -> (Vector<S>, Vector<S>) {
        let d = self.dim();
        let mut lo = vec![S::zero(); d];
        let mut hi: Vec<S> = self
            .radices()
            .iter()
            .map(|&r| S::from_int(r as i64 - 1))
            .collect();
        if let DigitSet::LayerOffsets(offsets) = &self.digits {
            for j in 0..d - 1 {
                let (mut off_lo, mut off_hi) = (S::zero(), S::zero());
                for a in offsets {
                    if a[j] < off_lo {
                        off_lo = a[j].clone();
                    }
                    if a[j] > off_hi {
                        off_hi = a[j].clone();
                    }
                }
                lo[j] = lo[j].clone() + off_lo;
                hi[j] = hi[j].clone() + off_hi;
            }
        }
        (Vector::new(lo), Vector::new(hi))
    }

    /// Solves `A w = x` by back-substitution: the last row gives
    /// `w_d = x_d / p_d`, then `w_j = (x_j + s_j w_d) / p_j`.
    pub fn back_substitute(&self, x: &Vector<S>) -> Result<Vector<S>> {
        self.solve_shifted(x, 0)
    }

    /// Solves `(A - t I) w = x` by the same back-substitution; used with
    /// `t = 1` for the geometric-series sums `(A - I)^{-1} v`.
    pub fn solve_shifted(&self, x: &Vector<S>, t: i64) -> Result<Vector<S>> {
        let d = self.dim();
        if x.dim() != d {
            return Err(Error::Dimension(format!(
                "point has length {}, expected {d}",
                x.dim()
            )));
        }
        let pd = S::from_int(self.p[d - 1] - t);
        let wd = x[d - 1].clone() / pd;
        let mut comps = Vec::with_capacity(d);
        for j in 0..d - 1 {
            let pj = S::from_int(self.p[j] - t);
            comps.push((x[j].clone() + self.s[j].clone() * wd.clone()) / pj);
        }
        comps.push(wd);
        Ok(Vector::new(comps))
    }

    /// Applies `A` to a point.
    pub fn apply(&self, w: &Vector<S>) -> Result<Vector<S>> {
        let d = self.dim();
        if w.dim() != d {
            return Err(Error::Dimension(format!(
                "point has length {}, expected {d}",
                w.dim()
            )));
        }
        let wd = w[d - 1].clone();
        let mut comps = Vec::with_capacity(d);
        for j in 0..d - 1 {
            comps.push(S::from_int(self.p[j]) * w[j].clone() - self.s[j].clone() * wd.clone());
        }
        comps.push(S::from_int(self.p[d - 1]) * wd);
        Ok(Vector::new(comps))
    }

    /// The truncated digit expansion `Σ_{k=1}^{|w|} A^{-k} d_{w_k}`,
    /// evaluated Horner-style with one back-substitution per symbol.
    pub fn digit_expansion_point(&self, word: &[u64]) -> Result<Vector<S>> {
        let mut acc = Vector::zeros(self.dim());
        for &sym in word.iter().rev() {
            let digit = self.digit(sym)?;
            acc = self.back_substitute(&acc.add(&digit)?)?;
        }
        Ok(acc)
    }

    pub fn to_f64(&self) -> SelfAffinePair<f64> {
        SelfAffinePair {
            p: self.p.clone(),
            s: self.s.to_f64(),
            digits: match &self.digits {
                DigitSet::Standard => DigitSet::Standard,
                DigitSet::LayerOffsets(offsets) => {
                    DigitSet::LayerOffsets(offsets.iter().map(|a| a.to_f64()).collect())
                }
            },
        }
    }
}

impl SelfAffinePair<f64> {
    /// Hull of the full digit-sum tail `Σ_{k>=1} A^{-k} D`, padded outward
    /// so the true tail set is contained even under float rounding. The
    /// tile `T` itself lies inside this box.
    pub fn tail_hull(&self) -> (Vector<f64>, Vector<f64>) {
        self.tail_hull_at_level(0)
    }

    /// Hull of the level-`n` tail `Σ_{k>n} A^{-k} D`.
    ///
    /// Digits choose independently per level, so the hull is the exact
    /// componentwise sum of the per-level piece hulls
    /// `hull(A^{-k} D) = p_j^{-k} [D_j] + c_k^{(j)} [D_d]`, with `c_k` the
    /// slant-coupling column of `A^{-k}` tracked by its recursion
    /// `c_{k+1} = A_1^{-1}(c_k + s / p_d^{k+1})`.
    pub fn tail_hull_at_level(&self, n: usize) -> (Vector<f64>, Vector<f64>) {
        // terms decay at least like 2^{-k}; 220 further levels are below
        // f64 resolution and the outward pad covers the remainder
        self.summed_piece_hull(n, n + 220)
    }

    /// Hull of the finite digit-sum block `Σ_{k=after+1}^{upto} A^{-k} D`.
    pub fn partial_tail_hull(&self, after: usize, upto: usize) -> (Vector<f64>, Vector<f64>) {
        self.summed_piece_hull(after, upto)
    }

    fn summed_piece_hull(&self, after: usize, upto: usize) -> (Vector<f64>, Vector<f64>) {
        let (dlo, dhi) = self.digit_hull();
        let (dlo, dhi) = (dlo.to_f64(), dhi.to_f64());
        let d = self.dim();
        let pd = self.p[d - 1] as f64;
        let mut lo = vec![0.0; d];
        let mut hi = vec![0.0; d];
        // per-coordinate signed scales p_j^{-k} and coupling c_k
        let mut scale: Vec<f64> = self.p.iter().map(|&pj| 1.0 / pj as f64).collect();
        let mut coupling: Vec<f64> =
            (0..d - 1).map(|j| self.s[j] / (self.p[j] as f64 * pd)).collect();
        let mut pd_scale = 1.0 / pd;
        for k in 1..=upto {
            if k > after {
                for j in 0..d - 1 {
                    let (a, b) = mul_iv(dlo[j], dhi[j], scale[j]);
                    let (c, e) = mul_iv(dlo[d - 1], dhi[d - 1], coupling[j]);
                    lo[j] += a + c;
                    hi[j] += b + e;
                }
                let (a, b) = mul_iv(dlo[d - 1], dhi[d - 1], scale[d - 1]);
                lo[d - 1] += a;
                hi[d - 1] += b;
            }
            pd_scale /= pd;
            for j in 0..d - 1 {
                scale[j] /= self.p[j] as f64;
                coupling[j] = (coupling[j] + self.s[j] * pd_scale) / self.p[j] as f64;
            }
            scale[d - 1] /= pd;
        }
        for j in 0..d {
            let pad = 1e-12 + 1e-12 * lo[j].abs().max(hi[j].abs());
            lo[j] -= pad;
            hi[j] += pad;
        }
        (Vector::new(lo), Vector::new(hi))
    }

    /// Sup-norm bound on the distance from a level-`n` truncated sum to any
    /// point of its residual tile piece.
    pub fn cell_radius(&self, n: usize) -> f64 {
        let (lo, hi) = self.tail_hull_at_level(n);
        let mut r: f64 = 0.0;
        for j in 0..self.dim() {
            r = r.max(lo[j].abs()).max(hi[j].abs());
        }
        r
    }

    /// Sup-norm diameter bound for the tile.
    pub fn diameter_bound(&self) -> f64 {
        let (lo, hi) = self.tail_hull();
        let mut r: f64 = 0.0;
        for j in 0..self.dim() {
            r = r.max(hi[j] - lo[j]);
        }
        r
    }
}

fn mul_iv(lo: f64, hi: f64, c: f64) -> (f64, f64) {
    if c >= 0.0 {
        (lo * c, hi * c)
    } else {
        (hi * c, lo * c)
    }
}

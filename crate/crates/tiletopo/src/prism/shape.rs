use crate::error::{Error, Result};
use crate::linalg::{Scalar, Vector};
use crate::prism::PathProfile;
use crate::tile::SelfAffinePair;

/// A slant prism: cross-sections are unit boxes whose center moves
/// affinely from `bottom_center` at height `y_lo` to
/// `bottom_center + slant` at height `y_lo + height`. This is the shape
/// of the convex-combination hull of the tile's bottom and top surfaces,
/// and of every refinement stage of the deformation.
#[derive(Clone, Debug, PartialEq)]
pub struct Prism {
    pub dim: usize,
    pub y_lo: f64,
    pub height: f64,
    pub bottom_center: Vector<f64>,
    pub slant: Vector<f64>,
}

impl Prism {
    pub fn y_hi(&self) -> f64 {
        self.y_lo + self.height
    }

    pub fn top_center(&self) -> Vector<f64> {
        self.bottom_center.add(&self.slant).expect("dims")
    }

    /// Center of the cross-section at height `y` (clamped to the slab).
    pub fn center_at(&self, y: f64) -> Vector<f64> {
        let t = ((y - self.y_lo) / self.height).clamp(0.0, 1.0);
        self.bottom_center
            .add(&self.slant.scale(&t))
            .expect("dims")
    }

    /// Embeds box coordinates `w` in `[-1/2, 1/2]^{d-1}` and height
    /// fraction `t` in `[0, 1]` into ambient space.
    pub fn embed(&self, w: &[f64], t: f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.dim);
        for j in 0..self.dim - 1 {
            out.push(self.bottom_center[j] + w[j] + t * self.slant[j]);
        }
        out.push(self.y_lo + t * self.height);
        out
    }

    /// Membership with tolerance `tol` (sup-norm in the box coordinates).
    pub fn contains(&self, z: &[f64], tol: f64) -> bool {
        let y = z[self.dim - 1];
        if y < self.y_lo - tol || y > self.y_hi() + tol {
            return false;
        }
        let c = self.center_at(y);
        (0..self.dim - 1).all(|j| (z[j] - c[j]).abs() <= 0.5 + tol)
    }

    /// Roughly `target` points on a regular grid through the solid prism,
    /// faces included; returned flat.
    pub fn volume_grid(&self, target: usize) -> Vec<f64> {
        let g = (target as f64).powf(1.0 / self.dim as f64).ceil() as usize;
        let g = g.max(2);
        let steps: Vec<f64> = (0..g).map(|i| i as f64 / (g - 1) as f64).collect();
        let hdim = self.dim - 1;
        let mut out = Vec::with_capacity(g.pow(self.dim as u32) * self.dim);
        let mut idx = vec![0usize; self.dim];
        let mut w = vec![0.0; hdim];
        loop {
            for j in 0..hdim {
                w[j] = steps[idx[j]] - 0.5;
            }
            let t = steps[idx[hdim]];
            out.extend(self.embed(&w, t));
            let mut j = 0;
            loop {
                if j == self.dim {
                    return out;
                }
                idx[j] += 1;
                if idx[j] < g {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
        }
    }

    /// Grid samples of the boundary: top and bottom surfaces plus all
    /// vertical walls, `g` steps per axis; returned flat.
    pub fn surface_grid(&self, g: usize) -> Vec<f64> {
        let g = g.max(2);
        let steps: Vec<f64> = (0..g).map(|i| i as f64 / (g - 1) as f64).collect();
        let hdim = self.dim - 1;
        let mut out = Vec::new();
        // top and bottom
        let mut idx = vec![0usize; hdim];
        let mut w = vec![0.0; hdim];
        'caps: loop {
            for j in 0..hdim {
                w[j] = steps[idx[j]] - 0.5;
            }
            out.extend(self.embed(&w, 0.0));
            out.extend(self.embed(&w, 1.0));
            let mut j = 0;
            loop {
                if j == hdim {
                    break 'caps;
                }
                idx[j] += 1;
                if idx[j] < g {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
        }
        // walls: coordinate `jw` pinned to a side, remaining box coords x height
        for jw in 0..hdim {
            for side in [-0.5, 0.5] {
                let mut idx = vec![0usize; hdim]; // last slot drives t
                loop {
                    for j in 0..hdim {
                        w[j] = if j == jw { side } else { steps[idx[j]] - 0.5 };
                    }
                    let t = steps[idx[jw]];
                    // reuse slot jw for the height parameter
                    out.extend(self.embed(&w, t));
                    let mut j = 0;
                    loop {
                        if j == hdim {
                            break;
                        }
                        idx[j] += 1;
                        if idx[j] < g {
                            break;
                        }
                        idx[j] = 0;
                        j += 1;
                    }
                    if idx.iter().all(|&i| i == 0) {
                        break;
                    }
                }
            }
        }
        out
    }
}

fn require_positive_diagonal<S: Scalar>(pair: &SelfAffinePair<S>) -> Result<()> {
    if pair.diagonal().iter().any(|&pj| pj < 2) {
        return Err(Error::Unsupported(
            "the prism iteration requires all diagonal entries positive (p_j >= 2); \
             negative entries permute the layer order per level and are out of scope"
                .into(),
        ));
    }
    Ok(())
}

/// The digit whose horizontal part is the centroid of layer `k`'s
/// horizontal digit box, as a full `R^d` vector `((p-1)/2 + a_k, k)`.
fn layer_centroid_digit(pair: &SelfAffinePair<f64>, k: usize) -> Vector<f64> {
    let d = pair.dim();
    let mut comps: Vec<f64> = pair
        .horizontal_diagonal()
        .iter()
        .map(|&pj| (pj.unsigned_abs() as f64 - 1.0) / 2.0)
        .collect();
    if let crate::tile::DigitSet::LayerOffsets(offsets) = pair.digit_set() {
        for j in 0..d - 1 {
            comps[j] += offsets[k][j];
        }
    }
    comps.push(k as f64);
    Vector::new(comps)
}

/// Geometric-series sum `(A - I)^{-1} v = Σ_{k>=1} A^{-k} v`.
fn tail_sum(pair: &SelfAffinePair<f64>, v: &Vector<f64>) -> Vector<f64> {
    pair.solve_shifted(v, 1).expect("dims")
}

/// The slant prism spanned by the tile's bottom and top surfaces: for a
/// vertical word `w` it is the prism of the corresponding vertical
/// cylinder of the refinement, with unit cross-section. Closed form: the
/// bottom (top) surface center is the digit sum over `w` followed by the
/// all-`0` (all-`r-1`) vertical tail, horizontal digits at their layer
/// centroids.
pub fn cylinder_prism(pair: &SelfAffinePair<f64>, word: &[u32]) -> Result<Prism> {
    require_positive_diagonal(pair)?;
    let r = pair.layers();
    if let Some(&bad) = word.iter().find(|&&k| k as usize >= r) {
        return Err(Error::InvalidWord {
            symbol: bad as u64,
            alphabet: r as u64,
        });
    }
    let g0 = tail_sum(pair, &layer_centroid_digit(pair, 0));
    let g1 = tail_sum(pair, &layer_centroid_digit(pair, r - 1));
    let corner = |tail: &Vector<f64>| -> Vector<f64> {
        let mut acc = tail.clone();
        for &k in word.iter().rev() {
            let step = layer_centroid_digit(pair, k as usize).add(&acc).expect("dims");
            acc = pair.back_substitute(&step).expect("dims");
        }
        acc
    };
    let bottom = corner(&g0);
    let top = corner(&g1);
    let (bh, bv) = bottom.split_height()?;
    let (th, tv) = top.split_height()?;
    Ok(Prism {
        dim: pair.dim(),
        y_lo: bv,
        height: tv - bv,
        bottom_center: bh.clone(),
        slant: th.sub(&bh)?,
    })
}

/// The root prism of a pair: convex combinations of the tile's bottom and
/// top surfaces.
pub fn prism_for_pair(pair: &SelfAffinePair<f64>) -> Result<Prism> {
    cylinder_prism(pair, &[])
}

/// The horizontal offsets between consecutive layer prisms of one
/// refinement step: the bottom surface of layer `k` minus the top surface
/// of layer `k-1`,
///
/// ```text
///   u_k = [ A^{-1}( d(k) - d(k-1) + (A-I)^{-1}(d(0) - d(r-1)) ) ]_h
/// ```
///
/// with `d(k)` the layer-centroid digit. For the standard digit set this
/// reduces to `u_k = -s_j / (p_j (p_j - 1))` per coordinate, the quantity
/// the connectedness criterion compares against 1.
pub fn derived_interface_offsets(pair: &SelfAffinePair<f64>) -> Result<Vec<Vector<f64>>> {
    require_positive_diagonal(pair)?;
    let r = pair.layers();
    let span = layer_centroid_digit(pair, 0)
        .sub(&layer_centroid_digit(pair, r - 1))
        .expect("dims");
    let base = tail_sum(pair, &span);
    let mut out = Vec::with_capacity(r - 1);
    for k in 1..r {
        let diff = layer_centroid_digit(pair, k)
            .sub(&layer_centroid_digit(pair, k - 1))
            .expect("dims");
        let jump = pair.back_substitute(&diff.add(&base).expect("dims"))?;
        let (h, v) = jump.split_height()?;
        debug_assert!(v.abs() < 1e-12, "interface offsets must be horizontal");
        out.push(h);
    }
    Ok(out)
}

/// The default iteration profile of a pair: `r = p_d` layers over the
/// prism height, window half-width a quarter layer, and the derived
/// interface offsets. Fails when some offset reaches sup-norm 1, i.e.
/// exactly when the tile's interior is disconnected and no prism-to-tile
/// homeomorphism exists.
pub fn default_profile(pair: &SelfAffinePair<f64>) -> Result<PathProfile<f64>> {
    let prism = prism_for_pair(pair)?;
    let r = pair.layers();
    let u = derived_interface_offsets(pair)?;
    PathProfile::new(r, prism.height, prism.height / (4.0 * r as f64), u).map_err(|e| match e {
        Error::InvalidParameter(msg) => Error::InvalidParameter(format!(
            "{msg}; a layer offset at sup-norm >= 1 means the tile interior is \
             disconnected, so the prism iteration is undefined"
        )),
        other => other,
    })
}

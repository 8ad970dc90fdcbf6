//! The five-stage iteration on a slant prism and its depth-`n`
//! composition.
//!
//! One iteration factors into five bijections of `R^d`:
//!
//! 1. shear removing the prism's slant,
//! 2. height-dependent horizontal squeeze by the factor path `rho(y)`,
//! 3. height-dependent horizontal translation by the path `x(y)`,
//! 4. flattening: a piecewise-linear vertical reparametrization per
//!    horizontal position that collapses the transition windows onto the
//!    layer interfaces,
//! 5. shear restoring the original top surface.
//!
//! Stages act nontrivially only inside the prism's slab and inside a
//! large horizontal core box; outside the slab the three translation
//! stages continue their boundary behaviour constantly and cancel
//! exactly, and beyond the core every horizontal action fades
//! piecewise-linearly to the identity. The centers and widths are chosen
//! so that the prism's image is exactly the union of the `r` layer
//! prisms of the refinement, i.e. the `A^{-1}`-images of the prism
//! translated through the vertical digit layers.

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::prism::{PathProfile, Prism};
use crate::tile::SelfAffinePair;

/// Width of the piecewise-linear fade band beyond the core box.
const FADE_SPAN: f64 = 1.0;
/// Horizontal penetration depth over which the flattening fades to the
/// identity outside the layer boxes.
const FADE_DELTA: f64 = 0.5;

/// Monotone piecewise-linear evaluation through `knots` (strictly
/// increasing sources); identity outside the knot range (the boundary
/// knots always lie on the diagonal).
fn pl_eval(knots: &[(f64, f64)], x: f64) -> f64 {
    if knots.is_empty() || x <= knots[0].0 {
        return x;
    }
    for i in 0..knots.len() - 1 {
        let (x0, y0) = knots[i];
        let (x1, y1) = knots[i + 1];
        if x <= x1 {
            // identity segments must stay bit-exact
            if x0 == y0 && x1 == y1 {
                return x;
            }
            if x1 <= x0 {
                return y1;
            }
            return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
        }
    }
    x
}

fn pl_eval_inverse(knots: &[(f64, f64)], y: f64) -> f64 {
    if knots.is_empty() || y <= knots[0].1 {
        return y;
    }
    for i in 0..knots.len() - 1 {
        let (x0, y0) = knots[i];
        let (x1, y1) = knots[i + 1];
        if y <= y1 {
            if x0 == y0 && x1 == y1 {
                return y;
            }
            if y1 <= y0 {
                return x1;
            }
            return x0 + (x1 - x0) * (y - y0) / (y1 - y0);
        }
    }
    y
}

/// Translation by `t` acting fully inside `[-core, core]` and fading to
/// the identity over a band beyond it.
fn fade_translate(x: f64, t: f64, core: f64) -> f64 {
    if t == 0.0 {
        return x;
    }
    let span = FADE_SPAN + 2.0 * t.abs();
    let knots = [
        (-core - span, -core - span),
        (-core, -core + t),
        (core, core + t),
        (core + span, core + span),
    ];
    pl_eval(&knots, x)
}

fn fade_translate_inv(x: f64, t: f64, core: f64) -> f64 {
    if t == 0.0 {
        return x;
    }
    let span = FADE_SPAN + 2.0 * t.abs();
    let knots = [
        (-core - span, -core - span),
        (-core, -core + t),
        (core, core + t),
        (core + span, core + span),
    ];
    pl_eval_inverse(&knots, x)
}

/// Squeeze of the width-1 box centred at `kappa` by factor `rho` in
/// `(0, 1]`, identity beyond one fade span.
fn squeeze(x: f64, kappa: f64, rho: f64) -> f64 {
    if rho == 1.0 {
        return x;
    }
    let knots = [
        (kappa - 0.5 - FADE_SPAN, kappa - 0.5 - FADE_SPAN),
        (kappa - 0.5, kappa - 0.5 * rho),
        (kappa + 0.5, kappa + 0.5 * rho),
        (kappa + 0.5 + FADE_SPAN, kappa + 0.5 + FADE_SPAN),
    ];
    pl_eval(&knots, x)
}

fn squeeze_inv(x: f64, kappa: f64, rho: f64) -> f64 {
    if rho == 1.0 {
        return x;
    }
    let knots = [
        (kappa - 0.5 - FADE_SPAN, kappa - 0.5 - FADE_SPAN),
        (kappa - 0.5, kappa - 0.5 * rho),
        (kappa + 0.5, kappa + 0.5 * rho),
        (kappa + 0.5 + FADE_SPAN, kappa + 0.5 + FADE_SPAN),
    ];
    pl_eval_inverse(&knots, x)
}

/// The five-stage composite for one prism of the current refinement.
#[derive(Clone, Debug)]
pub struct SlabIteration {
    dim: usize,
    y_lo: f64,
    y_hi: f64,
    r: usize,
    eps: f64,
    bottom_center: Vec<f64>,
    slant: Vec<f64>,
    /// plateau box centers; `centers[0] = bottom_center`
    centers: Vec<Vec<f64>>,
    /// interface offsets, `u[k-1]` between plateau `k-1` and `k`
    u: Vec<Vec<f64>>,
    /// `slant - (centers[r-1] - centers[0])`: the restoring shear
    shear_out: Vec<f64>,
    core: f64,
}

impl SlabIteration {
    fn new(
        dim: usize,
        y_lo: f64,
        y_hi: f64,
        eps: f64,
        bottom_center: Vec<f64>,
        slant: Vec<f64>,
        u: Vec<Vec<f64>>,
        core: f64,
    ) -> Self {
        let r = u.len() + 1;
        let hdim = dim - 1;
        let mut centers = vec![bottom_center.clone()];
        for uk in &u {
            let prev = centers.last().unwrap();
            centers.push((0..hdim).map(|j| prev[j] + uk[j]).collect());
        }
        let shear_out = (0..hdim)
            .map(|j| slant[j] - (centers[r - 1][j] - centers[0][j]))
            .collect();
        SlabIteration {
            dim,
            y_lo,
            y_hi,
            r,
            eps,
            bottom_center,
            slant,
            centers,
            u,
            shear_out,
            core,
        }
    }

    pub fn y_range(&self) -> (f64, f64) {
        (self.y_lo, self.y_hi)
    }

    fn height(&self) -> f64 {
        self.y_hi - self.y_lo
    }

    fn layer_height(&self) -> f64 {
        self.height() / self.r as f64
    }

    fn interface(&self, k: usize) -> f64 {
        self.y_lo + k as f64 * self.layer_height()
    }

    fn lambda(&self, y: f64) -> f64 {
        ((y - self.y_lo) / self.height()).clamp(0.0, 1.0)
    }

    /// `Some((k, tau))` when `y` lies in window `k`; `tau` in `[0, 1]`
    /// ramps across the window.
    fn window_at(&self, y: f64) -> Option<(usize, f64)> {
        let guess = ((y - self.y_lo) / self.layer_height()).round() as i64;
        let k = guess.clamp(1, self.r as i64 - 1) as usize;
        let yk = self.interface(k);
        if (y - yk).abs() <= self.eps {
            Some((k, (y - (yk - self.eps)) / (2.0 * self.eps)))
        } else {
            None
        }
    }

    fn plateau_at(&self, y: f64) -> usize {
        (((y - self.y_lo) / self.layer_height()).floor() as i64)
            .clamp(0, self.r as i64 - 1) as usize
    }

    /// Absolute translation path: `v_k` on plateau `k`, ramping by `u_k`
    /// across window `k`. Constant continuation outside the slab.
    fn path_x(&self, y: f64) -> Vec<f64> {
        let hdim = self.dim - 1;
        if y <= self.y_lo {
            return vec![0.0; hdim];
        }
        if y >= self.y_hi {
            return (0..hdim)
                .map(|j| self.centers[self.r - 1][j] - self.centers[0][j])
                .collect();
        }
        if let Some((k, tau)) = self.window_at(y) {
            return (0..hdim)
                .map(|j| {
                    self.centers[k - 1][j] - self.centers[0][j] + tau * self.u[k - 1][j]
                })
                .collect();
        }
        let k = self.plateau_at(y);
        (0..hdim)
            .map(|j| self.centers[k][j] - self.centers[0][j])
            .collect()
    }

    /// Squeeze factors: all ones off the windows.
    fn path_rho(&self, y: f64) -> Option<(usize, Vec<f64>)> {
        if y <= self.y_lo || y >= self.y_hi {
            return None;
        }
        let (k, _) = self.window_at(y)?;
        let ramp = (y - self.interface(k)).abs() / self.eps;
        Some((
            k,
            self.u[k - 1]
                .iter()
                .map(|uj| 1.0 - uj.abs() + ramp * uj.abs())
                .collect(),
        ))
    }

    /// Flattening breakpoint for window `k` at horizontal position `w`:
    /// the height `S` at which the inside-fiber meets the moving
    /// cross-section boundary, its target `G` on the interface plane, and
    /// the fade toward the identity outside the layer boxes.
    fn window_breakpoint(&self, w: &[f64], k: usize) -> (f64, f64) {
        let hdim = self.dim - 1;
        let yk = self.interface(k);
        let uk = &self.u[k - 1];
        let low = &self.centers[k - 1];
        let mut a = 0.5f64;
        let mut c = 0.5f64;
        let mut pen = 0.0f64;
        for j in 0..hdim {
            let uj = uk[j];
            if uj == 0.0 {
                let dist = ((w[j] - low[j]).abs() - 0.5).max(0.0);
                pen = pen.max(dist);
            } else {
                let sg = uj.signum();
                let xi = sg * w[j];
                let left = sg * low[j] - 0.5;
                let uu = uj.abs();
                let alpha = (xi - left) / uu;
                let beta = alpha - 1.0 / uu;
                a = a.min(alpha.min(1.0) / 2.0);
                c = c.max((1.0 + beta.max(0.0)) / 2.0);
                pen = pen.max(((-alpha).max(beta - 1.0)).max(0.0) * uu);
            }
        }
        let t = (a + c - 0.5).clamp(0.0, 1.0);
        let s = (yk - self.eps) + 2.0 * self.eps * t;
        let q = (pen / FADE_DELTA).clamp(0.0, 1.0);
        let g = yk + q * (s - yk);
        (s, g)
    }

    /// Knots of the vertical fiber map at horizontal position `w`:
    /// identity pins leave each window's action confined to a band of
    /// half-width `min(2 eps, layer/2)` around its interface, so heights
    /// on the plateaus never move.
    fn fiber_knots(&self, w: &[f64]) -> Vec<(f64, f64)> {
        let pin = (2.0 * self.eps).min(self.layer_height() / 2.0);
        let mut knots = Vec::with_capacity(3 * self.r);
        knots.push((self.y_lo, self.y_lo));
        for k in 1..self.r {
            let yk = self.interface(k);
            let (s, g) = self.window_breakpoint(w, k);
            push_knot(&mut knots, (yk - pin, yk - pin));
            push_knot(&mut knots, (s, g));
            push_knot(&mut knots, (yk + pin, yk + pin));
        }
        push_knot(&mut knots, (self.y_hi, self.y_hi));
        knots
    }

    fn stage1(&self, z: &mut [f64]) {
        let lam = self.lambda(z[self.dim - 1]);
        for j in 0..self.dim - 1 {
            z[j] = fade_translate(z[j], -self.slant[j] * lam, self.core);
        }
    }

    fn stage1_inv(&self, z: &mut [f64]) {
        let lam = self.lambda(z[self.dim - 1]);
        for j in 0..self.dim - 1 {
            z[j] = fade_translate_inv(z[j], -self.slant[j] * lam, self.core);
        }
    }

    fn stage2(&self, z: &mut [f64]) {
        if let Some((_, rho)) = self.path_rho(z[self.dim - 1]) {
            for j in 0..self.dim - 1 {
                z[j] = squeeze(z[j], self.bottom_center[j], rho[j]);
            }
        }
    }

    fn stage2_inv(&self, z: &mut [f64]) {
        if let Some((_, rho)) = self.path_rho(z[self.dim - 1]) {
            for j in 0..self.dim - 1 {
                z[j] = squeeze_inv(z[j], self.bottom_center[j], rho[j]);
            }
        }
    }

    fn stage3(&self, z: &mut [f64]) {
        let t = self.path_x(z[self.dim - 1]);
        for j in 0..self.dim - 1 {
            z[j] = fade_translate(z[j], t[j], self.core);
        }
    }

    fn stage3_inv(&self, z: &mut [f64]) {
        let t = self.path_x(z[self.dim - 1]);
        for j in 0..self.dim - 1 {
            z[j] = fade_translate_inv(z[j], t[j], self.core);
        }
    }

    fn stage4(&self, z: &mut [f64]) {
        let y = z[self.dim - 1];
        if y <= self.y_lo || y >= self.y_hi {
            return;
        }
        let knots = self.fiber_knots(&z[..self.dim - 1]);
        z[self.dim - 1] = pl_eval(&knots, y);
    }

    fn stage4_inv(&self, z: &mut [f64]) {
        let y = z[self.dim - 1];
        if y <= self.y_lo || y >= self.y_hi {
            return;
        }
        let knots = self.fiber_knots(&z[..self.dim - 1]);
        z[self.dim - 1] = pl_eval_inverse(&knots, y);
    }

    fn stage5(&self, z: &mut [f64]) {
        let lam = self.lambda(z[self.dim - 1]);
        for j in 0..self.dim - 1 {
            z[j] = fade_translate(z[j], self.shear_out[j] * lam, self.core);
        }
    }

    fn stage5_inv(&self, z: &mut [f64]) {
        let lam = self.lambda(z[self.dim - 1]);
        for j in 0..self.dim - 1 {
            z[j] = fade_translate_inv(z[j], self.shear_out[j] * lam, self.core);
        }
    }

    pub fn apply_in_place(&self, z: &mut [f64]) {
        self.stage1(z);
        self.stage2(z);
        self.stage3(z);
        self.stage4(z);
        self.stage5(z);
    }

    pub fn apply_inverse_in_place(&self, z: &mut [f64]) {
        self.stage5_inv(z);
        self.stage4_inv(z);
        self.stage3_inv(z);
        self.stage2_inv(z);
        self.stage1_inv(z);
    }

    /// Forward evaluation of a single stage (1 ..= 5); for the
    /// invertibility checks.
    pub fn apply_stage(&self, stage: usize, z: &mut [f64]) {
        match stage {
            1 => self.stage1(z),
            2 => self.stage2(z),
            3 => self.stage3(z),
            4 => self.stage4(z),
            5 => self.stage5(z),
            _ => panic!("stage out of range"),
        }
    }

    pub fn invert_stage(&self, stage: usize, z: &mut [f64]) {
        match stage {
            1 => self.stage1_inv(z),
            2 => self.stage2_inv(z),
            3 => self.stage3_inv(z),
            4 => self.stage4_inv(z),
            5 => self.stage5_inv(z),
            _ => panic!("stage out of range"),
        }
    }

    /// The `r` prisms the slab maps onto.
    pub fn child_prisms(&self) -> Vec<Prism> {
        let hdim = self.dim - 1;
        (0..self.r)
            .map(|k| {
                let lam = k as f64 / self.r as f64;
                let bottom_center: Vec<f64> = (0..hdim)
                    .map(|j| self.centers[k][j] + lam * self.shear_out[j])
                    .collect();
                let slant: Vec<f64> =
                    (0..hdim).map(|j| self.shear_out[j] / self.r as f64).collect();
                Prism {
                    dim: self.dim,
                    y_lo: self.interface(k),
                    height: self.layer_height(),
                    bottom_center: Vector::new(bottom_center),
                    slant: Vector::new(slant),
                }
            })
            .collect()
    }

    /// The iterations of the `r` child prisms: same construction one
    /// scale down, with interface offsets contracted by `A_1^{-1}`.
    fn children(&self, hdiag: &[i64]) -> Vec<SlabIteration> {
        let child_u: Vec<Vec<f64>> = self
            .u
            .iter()
            .map(|uk| {
                uk.iter()
                    .zip(hdiag)
                    .map(|(uj, &pj)| uj / pj as f64)
                    .collect()
            })
            .collect();
        self.child_prisms()
            .into_iter()
            .map(|prism| {
                SlabIteration::new(
                    self.dim,
                    prism.y_lo,
                    prism.y_hi(),
                    self.eps / self.r as f64,
                    prism.bottom_center.components().to_vec(),
                    prism.slant.components().to_vec(),
                    child_u.clone(),
                    self.core,
                )
            })
            .collect()
    }
}

fn push_knot(knots: &mut Vec<(f64, f64)>, knot: (f64, f64)) {
    if let Some(&last) = knots.last() {
        if knot.0 <= last.0 {
            return;
        }
    }
    knots.push(knot);
}

struct Level {
    y0: f64,
    b: f64,
    slabs: Vec<SlabIteration>,
}

impl Level {
    fn locate(&self, y: f64) -> usize {
        let slab_h = self.b / self.slabs.len() as f64;
        (((y - self.y0) / slab_h).floor() as i64)
            .clamp(0, self.slabs.len() as i64 - 1) as usize
    }

    fn apply(&self, z: &mut [f64], safe: f64, forward: bool) {
        let dim = self.slabs[0].dim;
        let y = z[dim - 1];
        if y < self.y0 || y > self.y0 + self.b {
            return;
        }
        let in_core = z[..dim - 1].iter().all(|w| w.abs() <= safe);
        if in_core {
            // every other slab's composite is the exact identity here
            let slab = &self.slabs[self.locate(y)];
            if forward {
                slab.apply_in_place(z);
            } else {
                slab.apply_inverse_in_place(z);
            }
        } else if forward {
            for slab in &self.slabs {
                slab.apply_in_place(z);
            }
        } else {
            for slab in self.slabs.iter().rev() {
                slab.apply_inverse_in_place(z);
            }
        }
    }
}

/// A depth-`n` composition of iterations: level `m` applies one iteration
/// inside each of the `r^{m-1}` prisms of the current refinement.
/// Evaluation at any point of `R^d` is supported, forward and inverse.
pub struct IterationMap {
    pub dim: usize,
    levels: Vec<Level>,
    /// shortcut bound: inside this box only the containing slab acts
    safe: f64,
}

impl IterationMap {
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn apply(&self, z: &[f64]) -> Vec<f64> {
        self.apply_prefix(z, self.depth())
    }

    /// Applies only the first `depth` levels.
    pub fn apply_prefix(&self, z: &[f64], depth: usize) -> Vec<f64> {
        let mut v = z.to_vec();
        for level in &self.levels[..depth] {
            level.apply(&mut v, self.safe, true);
        }
        v
    }

    pub fn apply_inverse(&self, z: &[f64]) -> Vec<f64> {
        let mut v = z.to_vec();
        for level in self.levels.iter().rev() {
            level.apply(&mut v, self.safe, false);
        }
        v
    }

    /// Heights of the orbit after each level prefix, `1 ..= depth`.
    pub fn height_trace(&self, z: &[f64]) -> Vec<f64> {
        let mut v = z.to_vec();
        let mut out = Vec::with_capacity(self.depth());
        for level in &self.levels {
            level.apply(&mut v, self.safe, true);
            out.push(v[self.dim - 1]);
        }
        out
    }

    /// Full orbit: the image after each level prefix, `1 ..= depth`.
    pub fn orbit(&self, z: &[f64]) -> Vec<Vec<f64>> {
        let mut v = z.to_vec();
        let mut out = Vec::with_capacity(self.depth());
        for level in &self.levels {
            level.apply(&mut v, self.safe, true);
            out.push(v.clone());
        }
        out
    }

    /// Half-width of the flattening bands of level `m` (`1 ..= depth`):
    /// heights farther than this from every level-`m` interface are fixed
    /// by level `m`.
    pub fn band_half_width(&self, m: usize) -> f64 {
        let slab = &self.levels[m - 1].slabs[0];
        (2.0 * slab.eps).min(slab.layer_height() / 2.0)
    }

    /// The prisms of the refinement after `m` levels (`1 ..= depth`), in
    /// height order: `r^m` prisms whose union is the image of the
    /// original prism under the depth-`m` prefix.
    pub fn level_prisms(&self, m: usize) -> Vec<Prism> {
        assert!(m >= 1 && m <= self.depth());
        self.levels[m - 1]
            .slabs
            .iter()
            .flat_map(|s| s.child_prisms())
            .collect()
    }

    /// The slab composites of level `m` (`1 ..= depth`); exposed for the
    /// per-stage invertibility checks.
    pub fn level_slabs(&self, m: usize) -> &[SlabIteration] {
        &self.levels[m - 1].slabs
    }

    /// Whether the five-stage windows of some level moved or could have
    /// moved the height `y`: true iff `y` lies in a flattening band of
    /// level `m`.
    pub fn in_flattening_band(&self, m: usize, y: f64) -> bool {
        let level = &self.levels[m - 1];
        if y < level.y0 || y > level.y0 + level.b {
            return false;
        }
        let slab = &level.slabs[level.locate(y)];
        let pin = (2.0 * slab.eps).min(slab.layer_height() / 2.0);
        (1..slab.r).any(|k| (y - slab.interface(k)).abs() <= pin)
    }
}

/// Horizontal core radius for a pair/profile: test regions and their
/// orbits stay far inside, so the fades never touch verified geometry.
fn core_radius(pair: &SelfAffinePair<f64>, profile: &PathProfile<f64>) -> f64 {
    let diam = pair.diameter_bound();
    let c = profile.horizontal_constant();
    let slant_bound: f64 = 4.0 * (1.0 + c);
    diam + 4.0 * (slant_bound + c) + 16.0
}

fn root_slab(
    prism: &Prism,
    pair: &SelfAffinePair<f64>,
    profile: &PathProfile<f64>,
) -> Result<SlabIteration> {
    if prism.dim != pair.dim() {
        return Err(Error::Inconsistent(format!(
            "prism dimension {} vs pair dimension {}",
            prism.dim,
            pair.dim()
        )));
    }
    if profile.layers() != pair.layers() {
        return Err(Error::Inconsistent(format!(
            "profile has {} layers, pair has {}",
            profile.layers(),
            pair.layers()
        )));
    }
    if profile.horizontal_dim() != pair.dim() - 1 {
        return Err(Error::Inconsistent(
            "profile offsets have the wrong dimension".into(),
        ));
    }
    if (profile.height() - prism.height).abs() > 1e-9 * prism.height.abs().max(1.0) {
        return Err(Error::Inconsistent(format!(
            "profile height {} does not match prism height {}",
            profile.height(),
            prism.height
        )));
    }
    if pair.diagonal().iter().any(|&pj| pj < 2) {
        return Err(Error::Unsupported(
            "the prism iteration requires all diagonal entries positive (p_j >= 2)".into(),
        ));
    }
    let u: Vec<Vec<f64>> = profile
        .offsets()
        .iter()
        .map(|uk| uk.components().to_vec())
        .collect();
    Ok(SlabIteration::new(
        prism.dim,
        prism.y_lo,
        prism.y_hi(),
        *profile.window_half_width(),
        prism.bottom_center.components().to_vec(),
        prism.slant.components().to_vec(),
        u,
        core_radius(pair, profile),
    ))
}

/// One iteration: the five-stage map plus the `r` sub-prisms whose union
/// is the image of `prism`.
pub fn iterate_once(
    prism: &Prism,
    pair: &SelfAffinePair<f64>,
    profile: &PathProfile<f64>,
) -> Result<(IterationMap, Vec<Prism>)> {
    let root = root_slab(prism, pair, profile)?;
    let subs = root.child_prisms();
    let core = root.core;
    let map = IterationMap {
        dim: prism.dim,
        levels: vec![Level {
            y0: prism.y_lo,
            b: prism.height,
            slabs: vec![root],
        }],
        safe: core - 2.0 * (profile.horizontal_constant() + 4.0) - 4.0,
    };
    Ok((map, subs))
}

/// The depth-`n` composition `h_n`: level 1 acts on the original prism,
/// level `m` acts within each of the `r^{m-1}` prisms produced by level
/// `m-1`, keeping their top and bottom surfaces unchanged. `n = 0` is the
/// identity.
pub fn compose_h(
    prism: &Prism,
    pair: &SelfAffinePair<f64>,
    profile: &PathProfile<f64>,
    depth: usize,
) -> Result<IterationMap> {
    let root = root_slab(prism, pair, profile)?;
    let safe = root.core - 2.0 * (profile.horizontal_constant() + 4.0) - 4.0;
    let mut levels: Vec<Level> = Vec::with_capacity(depth);
    if depth > 0 {
        let mut current = vec![root];
        for _ in 0..depth {
            let next: Vec<SlabIteration> = current
                .iter()
                .flat_map(|s| s.children(pair.horizontal_diagonal()))
                .collect();
            levels.push(Level {
                y0: prism.y_lo,
                b: prism.height,
                slabs: std::mem::replace(&mut current, next),
            });
        }
    }
    Ok(IterationMap {
        dim: prism.dim,
        levels,
        safe,
    })
}

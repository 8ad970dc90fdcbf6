use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::parallel::{block_ranges, block_rng, run_blocks};
use crate::prism::{compose_h, IterationMap, PathProfile, Prism};
use crate::tile::{approximate, SelfAffinePair};
use crate::verify::{hausdorff, hausdorff_vs_level_cloud, VerificationReport};

/// Interior samples keep this distance from the prism boundary (box
/// coordinates and height fraction alike).
const INTERIOR_COLLAR: f64 = 1e-3;
/// Image pairs closer than this count as coincident.
const COINCIDENCE_TOL: f64 = 1e-12;
/// Slack for the height-difference comparisons.
const HEIGHT_TOL: f64 = 1e-12;

const PAIR_BLOCK: u64 = 1024;

fn sup_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Uniform point of the solid prism.
fn sample_solid(prism: &Prism, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let hdim = prism.dim - 1;
    let mut w = vec![0.0; hdim];
    for wj in w.iter_mut() {
        *wj = rng.gen::<f64>() - 0.5;
    }
    prism.embed(&w, rng.gen::<f64>())
}

/// Uniform interior point, off the boundary by the collar.
fn sample_interior(prism: &Prism, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let hdim = prism.dim - 1;
    let span = 1.0 - 2.0 * INTERIOR_COLLAR;
    let mut w = vec![0.0; hdim];
    for wj in w.iter_mut() {
        *wj = -0.5 + INTERIOR_COLLAR + span * rng.gen::<f64>();
    }
    let t = INTERIOR_COLLAR + span * rng.gen::<f64>();
    prism.embed(&w, t)
}

/// Point on the vertical boundary: horizontal coordinates on the bottom
/// box boundary, interpolated along the slant; heights keep the collar
/// from the top and bottom surfaces.
fn sample_wall(prism: &Prism, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let hdim = prism.dim - 1;
    let mut w = vec![0.0; hdim];
    for wj in w.iter_mut() {
        *wj = rng.gen::<f64>() - 0.5;
    }
    let pinned = rng.gen_range(0..hdim);
    w[pinned] = if rng.gen::<bool>() { 0.5 } else { -0.5 };
    let span = 1.0 - 2.0 * INTERIOR_COLLAR;
    let t = INTERIOR_COLLAR + span * rng.gen::<f64>();
    prism.embed(&w, t)
}

/// Samples `pairs` point pairs of the solid prism at sup-separation at
/// least `delta` and reports the minimum image separation under every
/// depth prefix of `map`. Fails when any full-depth image pair is
/// coincident within `1e-12`.
pub fn check_injectivity(
    map: &IterationMap,
    region: &Prism,
    pairs: u64,
    delta: f64,
    seed: u64,
    threads: usize,
) -> Result<VerificationReport> {
    if pairs == 0 || delta <= 0.0 {
        return Err(Error::InvalidParameter(
            "injectivity check needs pairs >= 1 and delta > 0".into(),
        ));
    }
    let depth = map.depth();
    let blocks = block_ranges(pairs, PAIR_BLOCK);
    let mins: Vec<Vec<f64>> = run_blocks(threads, blocks.len(), |b| {
        let (_, len) = blocks[b];
        let mut rng = block_rng(seed, b as u64);
        let mut min_sep = vec![f64::INFINITY; depth];
        for _ in 0..len {
            let x = sample_solid(region, &mut rng);
            let mut y = sample_solid(region, &mut rng);
            let mut guard = 0;
            while sup_dist(&x, &y) < delta {
                y = sample_solid(region, &mut rng);
                guard += 1;
                assert!(guard < 10_000, "prism too small for the separation");
            }
            let ox = map.orbit(&x);
            let oy = map.orbit(&y);
            for m in 0..depth {
                let sep = sup_dist(&ox[m], &oy[m]);
                if sep < min_sep[m] {
                    min_sep[m] = sep;
                }
            }
        }
        min_sep
    });
    let mut min_sep = vec![f64::INFINITY; depth];
    for block in &mins {
        for m in 0..depth {
            min_sep[m] = min_sep[m].min(block[m]);
        }
    }
    let final_sep = *min_sep.last().unwrap_or(&f64::INFINITY);

    let mut report = VerificationReport::new("injectivity", seed);
    report
        .param("pairs", pairs)
        .param("delta", delta)
        .param("depth", depth)
        .param("tolerance", COINCIDENCE_TOL);
    for (m, sep) in min_sep.iter().enumerate() {
        report.stat(&format!("min_separation_depth_{}", m + 1), *sep);
    }
    report.stat("min_image_separation", final_sep);
    report.pass = final_sep > COINCIDENCE_TOL;
    Ok(report)
}

/// Height behaviour of the composed iteration:
///
/// (a) interior points (off the vertical boundary by a collar) must have
///     exactly stable heights from `stabilize_by` on — heights change
///     only inside the geometrically shrinking flattening bands, which
///     generic points eventually avoid forever;
///
/// (b) for pairs on the vertical boundary, the height difference never
///     drops across a step in which neither point sits in a flattening
///     band (it is exactly preserved), and for every step — windowed or
///     not — it drops by no more than the band allowance `4 * pin_m`.
///
/// The band condition in (b) is the testable form of the "mild
/// condition": pairs undergoing a window transition can land on a common
/// layer interface, so an unconditional per-step inequality cannot hold
/// for any deformation with flattened interfaces.
pub fn check_height_properties(
    map: &IterationMap,
    region: &Prism,
    samples: u64,
    seed: u64,
    stabilize_by: usize,
    threads: usize,
) -> Result<VerificationReport> {
    let depth = map.depth();
    if depth < 2 {
        return Err(Error::InvalidParameter(
            "height checks need a composition of depth >= 2".into(),
        ));
    }
    if stabilize_by > depth {
        return Err(Error::InvalidParameter(
            "stabilize_by exceeds the composed depth".into(),
        ));
    }

    // (a) interior stabilization
    let blocks = block_ranges(samples, PAIR_BLOCK);
    let idx_max: Vec<usize> = run_blocks(threads, blocks.len(), |b| {
        let (_, len) = blocks[b];
        let mut rng = block_rng(seed, b as u64);
        let mut worst = 0usize;
        for _ in 0..len {
            let x = sample_interior(region, &mut rng);
            let trace = map.height_trace(&x);
            let mut last_change = 0usize;
            let mut prev = x[map.dim - 1];
            for (m, h) in trace.iter().enumerate() {
                if *h != prev {
                    last_change = m + 1;
                }
                prev = *h;
            }
            if last_change > worst {
                worst = last_change;
            }
        }
        worst
    });
    let max_stab_index = idx_max.into_iter().max().unwrap_or(0);

    // (b) boundary-pair monotonicity
    let band: Vec<f64> = (1..=depth).map(|m| map.band_half_width(m)).collect();
    type BoundaryCounts = (u64, u64, u64, u64); // qualified, windowed, strict violations, allowance violations
    let counts: Vec<BoundaryCounts> = run_blocks(threads, blocks.len(), |b| {
        let (_, len) = blocks[b];
        let mut rng = block_rng(seed ^ 0x5eed_b0a2, b as u64);
        let (mut qualified, mut windowed, mut strict, mut allowance) = (0u64, 0u64, 0u64, 0u64);
        for _ in 0..len {
            let x = sample_wall(region, &mut rng);
            let y = sample_wall(region, &mut rng);
            let tx = map.height_trace(&x);
            let ty = map.height_trace(&y);
            let mut dx = (x[map.dim - 1] - y[map.dim - 1]).abs();
            let mut hx = x[map.dim - 1];
            let mut hy = y[map.dim - 1];
            for m in 1..=depth {
                let in_band =
                    map.in_flattening_band(m, hx) || map.in_flattening_band(m, hy);
                let next = (tx[m - 1] - ty[m - 1]).abs();
                if in_band {
                    windowed += 1;
                    if next < dx - (4.0 * band[m - 1] + HEIGHT_TOL) {
                        allowance += 1;
                    }
                } else {
                    qualified += 1;
                    if next < dx - HEIGHT_TOL {
                        strict += 1;
                    }
                    if next < dx - (4.0 * band[m - 1] + HEIGHT_TOL) {
                        allowance += 1;
                    }
                }
                dx = next;
                hx = tx[m - 1];
                hy = ty[m - 1];
            }
        }
        (qualified, windowed, strict, allowance)
    });
    let qualified: u64 = counts.iter().map(|c| c.0).sum();
    let windowed: u64 = counts.iter().map(|c| c.1).sum();
    let strict: u64 = counts.iter().map(|c| c.2).sum();
    let allowance: u64 = counts.iter().map(|c| c.3).sum();

    let mut report = VerificationReport::new("height_properties", seed);
    report
        .param("samples", samples)
        .param("depth", depth)
        .param("stabilize_by", stabilize_by)
        .stat("max_stabilization_index", max_stab_index as f64)
        .stat("qualified_steps", qualified as f64)
        .stat("windowed_steps", windowed as f64)
        .stat("monotonicity_violations", strict as f64)
        .stat("band_allowance_violations", allowance as f64);
    report.pass = max_stab_index <= stabilize_by && strict == 0 && allowance == 0;
    Ok(report)
}

/// Deforms a solid sample grid of the prism through the depth-`depth`
/// composition and measures the Hausdorff distance to the level-`level`
/// digit cloud. Clouds above `budget` points are streamed rather than
/// materialized.
#[allow(clippy::too_many_arguments)]
pub fn check_convergence(
    pair: &SelfAffinePair<f64>,
    prism: &Prism,
    profile: &PathProfile<f64>,
    depth: usize,
    level: usize,
    tolerance: f64,
    image_target: usize,
    budget: u64,
    threads: usize,
) -> Result<VerificationReport> {
    if depth > 24 {
        return Err(Error::Resource(format!("depth {depth} beyond budget")));
    }
    let cloud_size = pair.digit_count().checked_pow(level as u32);
    match cloud_size {
        None => return Err(Error::Resource(format!("level {level} beyond budget"))),
        Some(n) if n > 10_000_000_000 => {
            return Err(Error::Resource(format!("level {level} beyond budget")))
        }
        _ => {}
    }
    let map = compose_h(prism, pair, profile, depth)?;
    let grid = prism.volume_grid(image_target);
    let dim = pair.dim();
    let chunks: Vec<&[f64]> = grid.chunks(1024 * dim).collect();
    let image_parts: Vec<Vec<f64>> = run_blocks(threads, chunks.len(), |b| {
        let mut out = Vec::with_capacity(chunks[b].len());
        for z in chunks[b].chunks(dim) {
            out.extend(map.apply(z));
        }
        out
    });
    let image: Vec<f64> = image_parts.concat();

    let distance = if cloud_size.unwrap() <= budget as u128 {
        let cloud = approximate(pair, level, budget)?;
        hausdorff(&image, cloud.flat(), dim)?
    } else {
        hausdorff_vs_level_cloud(&image, pair, level, threads)?
    };

    let mut report = VerificationReport::new("convergence", 0);
    report
        .param("depth", depth)
        .param("level", level)
        .param("image_points", image.len() / dim)
        .param("tolerance", tolerance)
        .stat("hausdorff", distance);
    report.pass = distance <= tolerance;
    Ok(report)
}

//! Closed-form topology classifiers for the upper-triangular family.
//!
//! The family's whole topology story is carried by one number,
//! `max_j |s_j / (p_j (p_j - sign(p_d)))|`: the tile is connected iff it
//! is at most 1, has connected interior iff it is strictly below 1, and
//! interior-connectedness is equivalent to the tile being a tame ball.
//! Geometrically the quantity is the sup-norm of the horizontal offset
//! between consecutive unit-box layers of the tile, in units of the layer
//! width; offsets below 1 leave overlap for the interior to pass through.

use crate::error::{Error, Result};
use crate::linalg::Scalar;

/// Band half-width within which a float-mode criterion value counts as
/// exactly 1.
pub const FLOAT_EQUALITY_BAND: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    Disconnected,
    ConnectedNotInteriorConnected,
    TameBall,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let label = match self {
            Classification::Disconnected => "disconnected",
            Classification::ConnectedNotInteriorConnected => "connected_not_interior_connected",
            Classification::TameBall => "tame_ball",
        };
        f.write_str(label)
    }
}

/// Verdict of [`classify`]: the criterion value together with the
/// trichotomy. `equality_band` marks a float-mode comparison that was
/// decided inside the `1e-12` band around 1 rather than exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct TopologyVerdict<S> {
    pub criterion_value: S,
    pub classification: Classification,
    pub equality_band: bool,
}

fn check_entry(pj: i64) -> Result<()> {
    if pj.abs() < 2 {
        return Err(Error::InvalidParameter(format!(
            "diagonal entry {pj} must have absolute value >= 2"
        )));
    }
    Ok(())
}

/// `max_j |s_j / (p_j (p_j - sign(p_d)))|` for horizontal diagonal `p`,
/// slant `s`, and vertical entry `p_d`.
pub fn criterion_value<S: Scalar>(p: &[i64], s: &[S], p_d: i64) -> Result<S> {
    if p.is_empty() || p.len() != s.len() {
        return Err(Error::InvalidParameter(format!(
            "need matching nonempty p and s, got {} and {}",
            p.len(),
            s.len()
        )));
    }
    check_entry(p_d)?;
    let sign_pd = p_d.signum();
    let mut best = S::zero();
    for (&pj, sj) in p.iter().zip(s) {
        check_entry(pj)?;
        let denom = S::from_int(pj * (pj - sign_pd));
        let value = (sj.clone() / denom).abs();
        if value > best {
            best = value;
        }
    }
    Ok(best)
}

/// Trichotomy on the criterion value against 1: strictly below is a tame
/// ball (equivalently: connected interior), exactly 1 is connected with
/// disconnected interior, above 1 is disconnected. Exact backends compare
/// exactly; the float backend declares equality within
/// [`FLOAT_EQUALITY_BAND`] and flags that it did.
pub fn classify<S: Scalar>(p: &[i64], s: &[S], p_d: i64) -> Result<TopologyVerdict<S>> {
    let value = criterion_value(p, s, p_d)?;
    let one = S::one();
    let (classification, equality_band) = if S::EXACT {
        let class = if value < one {
            Classification::TameBall
        } else if value == one {
            Classification::ConnectedNotInteriorConnected
        } else {
            Classification::Disconnected
        };
        (class, false)
    } else {
        let v = value.to_f64();
        if (v - 1.0).abs() <= FLOAT_EQUALITY_BAND {
            (
                Classification::ConnectedNotInteriorConnected,
                v != 1.0,
            )
        } else if v < 1.0 {
            (Classification::TameBall, false)
        } else {
            (Classification::Disconnected, false)
        }
    };
    Ok(TopologyVerdict {
        criterion_value: value,
        classification,
        equality_band,
    })
}

/// The planar two-digit-row connectedness test for
/// `A = [[p, 0], [-a, q]]` with digits `(i, j + b_i)`:
/// for consecutive digit columns the quantity
///
/// ```text
///   | (b_{i+1} - b_i)/q + (sign(p)(b_0 - b_{|p|-1}) - a) / (q (q - sign(p))) |
/// ```
///
/// must be at most 1. Returns the per-`i` values and the combined verdict.
/// `cyclic` additionally pairs the last column with the first; the
/// published statement reads as consecutive pairs, so it defaults off at
/// the call sites.
pub fn deng_lau_2d<S: Scalar>(
    p: i64,
    q: i64,
    a: S,
    b: &[S],
    cyclic: bool,
) -> Result<(Vec<S>, bool)> {
    check_entry(p)?;
    check_entry(q)?;
    let cols = p.unsigned_abs() as usize;
    if b.len() != cols {
        return Err(Error::InvalidParameter(format!(
            "expected {cols} digit-row offsets, got {}",
            b.len()
        )));
    }
    let sign_p = S::from_int(p.signum());
    let qs = S::from_int(q);
    let shear_term = (sign_p * (b[0].clone() - b[cols - 1].clone()) - a)
        / (qs.clone() * S::from_int(q - q.signum()));
    let pair_count = if cyclic { cols } else { cols - 1 };
    let mut values = Vec::with_capacity(pair_count);
    for i in 0..pair_count {
        let next = &b[(i + 1) % cols];
        let v = ((next.clone() - b[i].clone()) / qs.clone() + shear_term.clone()).abs();
        values.push(v);
    }
    let connected = values.iter().all(|v| *v <= S::one());
    Ok((values, connected))
}

/// The 3-D ball criterion for `A = [[p,0,0],[0,q,0],[-t,-s,r]]` with the
/// standard digit set: under the hypothesis `s t >= 0`, the tile is
/// homeomorphic to a ball iff `|s + t| < |r (r - 1)|`. Inputs with
/// `s t < 0` are outside the theorem and are refused rather than guessed.
pub fn ball_3d<S: Scalar>(r: i64, s: S, t: S) -> Result<bool> {
    check_entry(r)?;
    if s.clone() * t.clone() < S::zero() {
        return Err(Error::Hypothesis(
            "the ball criterion requires s*t >= 0".into(),
        ));
    }
    let bound = S::from_int((r * (r - 1)).abs());
    Ok((s + t).abs() < bound)
}

//! Flat, plain-text run configuration: `[section]` headers over `key =
//! value` lines. Numbers are decimals or rationals `a/b`; both parse to
//! exact rationals so the exact backend sees unrounded inputs.
//!
//! ```text
//! [pair]
//! p = 3 3 3
//! s = 2 1.8
//! offset_1 = -0.55 -0.45     # optional per-layer digit offsets
//!
//! [profile]                  # optional overrides of the derived profile
//! eps = 1/12
//! u_1 = -1/3 -3/10
//!
//! [run]
//! level = 6
//! depth = 4
//! samples = 100000
//! seed = 7
//! ```

use num_bigint::BigInt;


use crate::error::{Error, Result};
use crate::linalg::{Rational, Scalar, Vector};
use crate::prism::{default_profile, derived_interface_offsets, prism_for_pair, PathProfile};
use crate::tile::{DigitSet, SelfAffinePair};

/// One exact number plus its float mirror.
#[derive(Clone, Debug, PartialEq)]
pub struct Num {
    pub exact: Rational,
    pub float: f64,
}

fn parse_num(token: &str, line: usize) -> Result<Num> {
    let bad = |msg: String| Error::Config { line, message: msg };
    let exact = if let Some((n, d)) = token.split_once('/') {
        let n: BigInt = n
            .trim()
            .parse()
            .map_err(|_| bad(format!("bad rational numerator {token:?}")))?;
        let d: BigInt = d
            .trim()
            .parse()
            .map_err(|_| bad(format!("bad rational denominator {token:?}")))?;
        if d == BigInt::from(0) {
            return Err(bad(format!("zero denominator in {token:?}")));
        }
        Rational::new(n, d)
    } else if let Some((int_part, frac_part)) = token.split_once('.') {
        // decimal strings are exact rationals with a power-of-ten denominator
        let digits = format!("{int_part}{frac_part}");
        let n: BigInt = digits
            .parse()
            .map_err(|_| bad(format!("bad decimal {token:?}")))?;
        let den = BigInt::from(10).pow(frac_part.len() as u32);
        Rational::new(n, den)
    } else {
        let n: BigInt = token
            .parse()
            .map_err(|_| bad(format!("bad number {token:?}")))?;
        Rational::from_integer(n)
    };
    let float = exact.to_f64();
    Ok(Num { exact, float })
}

fn parse_nums(value: &str, line: usize) -> Result<Vec<Num>> {
    value
        .split_whitespace()
        .map(|tok| parse_num(tok, line))
        .collect()
}

/// Parsed run configuration; see the module docs for the format.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub p: Vec<i64>,
    pub s: Vec<Num>,
    pub offsets: Option<Vec<Vec<Num>>>,
    pub profile_eps: Option<Num>,
    pub profile_u: Option<Vec<Vec<Num>>>,
    pub level: usize,
    pub depth: usize,
    pub samples: u64,
    pub pairs: u64,
    pub seed: u64,
    pub budget: u64,
    pub threads: usize,
    pub delta: f64,
    pub tolerance: f64,
    pub stabilize_by: usize,
    pub surface_grid: usize,
    pub raster: (usize, usize),
    pub translates: Vec<Vec<f64>>,
    pub sample_box: Option<(Vec<f64>, Vec<f64>)>,
    /// raw `(section.key, value)` pairs in file order, for artifact echo
    pub echo: Vec<(String, String)>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            p: Vec::new(),
            s: Vec::new(),
            offsets: None,
            profile_eps: None,
            profile_u: None,
            level: 4,
            depth: 4,
            samples: 100_000,
            pairs: 100_000,
            seed: 0,
            budget: 2_000_000,
            threads: 0,
            delta: 1e-3,
            tolerance: 0.1,
            stabilize_by: 12,
            surface_grid: 33,
            raster: (512, 512),
            translates: Vec::new(),
            sample_box: None,
            echo: Vec::new(),
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let mut section = String::new();
        let mut offsets: Vec<(usize, Vec<Num>)> = Vec::new();
        let mut profile_u: Vec<(usize, Vec<Num>)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let bad = |msg: String| Error::Config { line, message: msg };
            let content = match raw.split_once('#') {
                Some((before, _)) => before,
                None => raw,
            }
            .trim();
            if content.is_empty() {
                continue;
            }
            if let Some(name) = content.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| bad("unterminated section header".into()))?;
                section = name.trim().to_string();
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| bad(format!("expected 'key = value', got {content:?}")))?;
            let key = key.trim();
            let value = value.trim();
            cfg.echo.push((format!("{section}.{key}"), value.to_string()));
            match (section.as_str(), key) {
                ("pair", "p") => {
                    cfg.p = value
                        .split_whitespace()
                        .map(|t| {
                            t.parse::<i64>()
                                .map_err(|_| bad(format!("bad integer {t:?}")))
                        })
                        .collect::<Result<_>>()?;
                }
                ("pair", "s") => cfg.s = parse_nums(value, line)?,
                ("pair", k) if k.starts_with("offset_") => {
                    let layer: usize = k["offset_".len()..]
                        .parse()
                        .map_err(|_| bad(format!("bad offset index in {k:?}")))?;
                    offsets.push((layer, parse_nums(value, line)?));
                }
                ("profile", "eps") => cfg.profile_eps = Some(parse_num(value, line)?),
                ("profile", k) if k.starts_with("u_") => {
                    let index: usize = k["u_".len()..]
                        .parse()
                        .map_err(|_| bad(format!("bad offset index in {k:?}")))?;
                    if index == 0 {
                        return Err(bad("profile offsets are u_1 .. u_{r-1}".into()));
                    }
                    profile_u.push((index, parse_nums(value, line)?));
                }
                ("run", "level") => cfg.level = parse_usize(value, line)?,
                ("run", "depth") => cfg.depth = parse_usize(value, line)?,
                ("run", "samples") => cfg.samples = parse_u64(value, line)?,
                ("run", "pairs") => cfg.pairs = parse_u64(value, line)?,
                ("run", "seed") => cfg.seed = parse_u64(value, line)?,
                ("run", "budget") => cfg.budget = parse_u64(value, line)?,
                ("run", "threads") => cfg.threads = parse_usize(value, line)?,
                ("run", "stabilize_by") => cfg.stabilize_by = parse_usize(value, line)?,
                ("run", "surface_grid") => cfg.surface_grid = parse_usize(value, line)?,
                ("run", "delta") => cfg.delta = parse_num(value, line)?.float,
                ("run", "tolerance") => cfg.tolerance = parse_num(value, line)?.float,
                ("run", "grid") => {
                    let nums = parse_nums(value, line)?;
                    if nums.len() != 2 {
                        return Err(bad("grid needs two integers".into()));
                    }
                    cfg.raster = (nums[0].float as usize, nums[1].float as usize);
                }
                ("run", "translates") => {
                    cfg.translates = value
                        .split(';')
                        .filter(|chunk| !chunk.trim().is_empty())
                        .map(|chunk| {
                            parse_nums(chunk, line)
                                .map(|nums| nums.iter().map(|n| n.float).collect())
                        })
                        .collect::<Result<_>>()?;
                }
                ("run", "box") => {
                    let halves: Vec<&str> = value.split(';').collect();
                    if halves.len() != 2 {
                        return Err(bad("box needs 'lo ; hi'".into()));
                    }
                    let lo = parse_nums(halves[0], line)?;
                    let hi = parse_nums(halves[1], line)?;
                    cfg.sample_box = Some((
                        lo.iter().map(|n| n.float).collect(),
                        hi.iter().map(|n| n.float).collect(),
                    ));
                }
                _ => {
                    return Err(bad(format!(
                        "unknown key {key:?} in section [{section}]"
                    )));
                }
            }
        }
        if cfg.p.len() < 2 {
            return Err(Error::Config {
                line: 1,
                message: "section [pair] must define p with at least two entries".into(),
            });
        }
        if !offsets.is_empty() {
            let layers = cfg.p.last().unwrap().unsigned_abs() as usize;
            let mut table = vec![None; layers];
            for (layer, nums) in offsets {
                if layer >= layers {
                    return Err(Error::Config {
                        line: 1,
                        message: format!("offset_{layer} exceeds the {layers} layers"),
                    });
                }
                table[layer] = Some(nums);
            }
            cfg.offsets = Some(
                table
                    .into_iter()
                    .enumerate()
                    .map(|(k, o)| {
                        o.ok_or_else(|| Error::Config {
                            line: 1,
                            message: format!("missing offset_{k}"),
                        })
                    })
                    .collect::<Result<_>>()?,
            );
        }
        if !profile_u.is_empty() {
            let r = cfg.p.last().unwrap().unsigned_abs() as usize;
            let mut table = vec![None; r - 1];
            for (index, nums) in profile_u {
                if index > r - 1 {
                    return Err(Error::Config {
                        line: 1,
                        message: format!("u_{index} exceeds the {} interfaces", r - 1),
                    });
                }
                table[index - 1] = Some(nums);
            }
            cfg.profile_u = Some(
                table
                    .into_iter()
                    .enumerate()
                    .map(|(k, o)| {
                        o.ok_or_else(|| Error::Config {
                            line: 1,
                            message: format!("missing u_{}", k + 1),
                        })
                    })
                    .collect::<Result<_>>()?,
            );
        }
        Ok(cfg)
    }

    pub fn pair_f64(&self) -> Result<SelfAffinePair<f64>> {
        let s = Vector::new(self.s.iter().map(|n| n.float).collect());
        let digits = match &self.offsets {
            None => DigitSet::Standard,
            Some(offsets) => DigitSet::LayerOffsets(
                offsets
                    .iter()
                    .map(|a| Vector::new(a.iter().map(|n| n.float).collect()))
                    .collect(),
            ),
        };
        SelfAffinePair::new(self.p.clone(), s, digits)
    }

    pub fn pair_exact(&self) -> Result<SelfAffinePair<Rational>> {
        let s = Vector::new(self.s.iter().map(|n| n.exact.clone()).collect());
        let digits = match &self.offsets {
            None => DigitSet::Standard,
            Some(offsets) => DigitSet::LayerOffsets(
                offsets
                    .iter()
                    .map(|a| Vector::new(a.iter().map(|n| n.exact.clone()).collect()))
                    .collect(),
            ),
        };
        SelfAffinePair::new(self.p.clone(), s, digits)
    }

    /// The iteration profile: derived from the pair, with `eps` and `u_k`
    /// overridden when the `[profile]` section provides them.
    pub fn profile_f64(&self, pair: &SelfAffinePair<f64>) -> Result<PathProfile<f64>> {
        if self.profile_eps.is_none() && self.profile_u.is_none() {
            return default_profile(pair);
        }
        let prism = prism_for_pair(pair)?;
        let r = pair.layers();
        let eps = self
            .profile_eps
            .as_ref()
            .map(|n| n.float)
            .unwrap_or(prism.height / (4.0 * r as f64));
        let u = match &self.profile_u {
            Some(u) => u
                .iter()
                .map(|row| Vector::new(row.iter().map(|n| n.float).collect()))
                .collect(),
            None => derived_interface_offsets(pair)?,
        };
        PathProfile::new(r, prism.height, eps, u)
    }

    /// Exact slant entries for the classifiers.
    pub fn s_exact(&self) -> Vec<Rational> {
        self.s.iter().map(|n| n.exact.clone()).collect()
    }
}

fn parse_usize(value: &str, line: usize) -> Result<usize> {
    value.trim().parse().map_err(|_| Error::Config {
        line,
        message: format!("bad integer {value:?}"),
    })
}

fn parse_u64(value: &str, line: usize) -> Result<u64> {
    value.trim().parse().map_err(|_| Error::Config {
        line,
        message: format!("bad integer {value:?}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIGURE: &str = "\
[pair]
p = 3 3 3
s = 2 1.8            # slant column
[run]
level = 6
depth = 4
seed = 7
";

    #[test]
    fn parses_figure_configuration() {
        let cfg = RunConfig::parse(FIGURE).unwrap();
        assert_eq!(cfg.p, vec![3, 3, 3]);
        assert_eq!(cfg.s[1].exact, Rational::from_ratio(9, 5));
        assert_eq!(cfg.level, 6);
        assert_eq!(cfg.seed, 7);
        let pair = cfg.pair_f64().unwrap();
        assert_eq!(pair.dim(), 3);
        let profile = cfg.profile_f64(&pair).unwrap();
        assert_eq!(profile.layers(), 3);
        assert!((profile.offset(1)[0] - (-1.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn rationals_and_decimals_are_exact() {
        let cfg = RunConfig::parse("[pair]\np = 2 2\ns = 1/3\n").unwrap();
        assert_eq!(cfg.s[0].exact, Rational::from_ratio(1, 3));
        let cfg = RunConfig::parse("[pair]\np = 2 2\ns = -0.125\n").unwrap();
        assert_eq!(cfg.s[0].exact, Rational::from_ratio(-1, 8));
        assert!(!cfg.s[0].exact.is_negative() == false);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = "[pair]\np = 3 3\nbogus\n";
        match RunConfig::parse(text) {
            Err(Error::Config { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        let text = "[pair]\np = 3 3\ns = 1..2\n";
        match RunConfig::parse(text) {
            Err(Error::Config { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn layer_offsets_round_trip() {
        let text = "\
[pair]
p = 3 3 3
s = 2 1.8
offset_0 = 0 0
offset_1 = -0.55 -0.45
offset_2 = -1.25 -1.05
";
        let cfg = RunConfig::parse(text).unwrap();
        let pair = cfg.pair_f64().unwrap();
        match pair.digit_set() {
            DigitSet::LayerOffsets(offsets) => {
                assert_eq!(offsets.len(), 3);
                assert_eq!(offsets[2][0], -1.25);
            }
            _ => panic!("expected layer offsets"),
        }
    }

    #[test]
    fn translates_and_box_parse() {
        let text = "\
[pair]
p = 2 2
s = 0
[run]
translates = 0 0; 1 0; 0 1
box = 0 0 ; 1 1
";
        let cfg = RunConfig::parse(text).unwrap();
        assert_eq!(cfg.translates.len(), 3);
        assert_eq!(cfg.translates[1], vec![1.0, 0.0]);
        let (lo, hi) = cfg.sample_box.unwrap();
        assert_eq!(lo, vec![0.0, 0.0]);
        assert_eq!(hi, vec![1.0, 1.0]);
    }
}

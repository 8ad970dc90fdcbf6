use crate::error::{Error, Result};
use crate::linalg::Scalar;

/// Closed-form evaluation of eventually-periodic words is capped at this
/// combined prefix + repeating-block length.
pub const PERIODIC_LEN_CAP: usize = 64;

/// A word over the alphabet `{0, ..., m-1}`: either finite, or eventually
/// periodic (a finite prefix followed by a nonempty block repeated forever).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Word {
    Finite {
        symbols: Vec<u32>,
        alphabet: u32,
    },
    EventuallyPeriodic {
        prefix: Vec<u32>,
        block: Vec<u32>,
        alphabet: u32,
    },
}

impl Word {
    pub fn finite(symbols: Vec<u32>, alphabet: u32) -> Result<Self> {
        check_alphabet(alphabet)?;
        check_symbols(&symbols, alphabet)?;
        Ok(Word::Finite { symbols, alphabet })
    }

    /// `prefix` followed by `block` repeated forever. The block must be
    /// nonempty and `|prefix| + |block|` at most [`PERIODIC_LEN_CAP`].
    pub fn eventually_periodic(prefix: Vec<u32>, block: Vec<u32>, alphabet: u32) -> Result<Self> {
        check_alphabet(alphabet)?;
        check_symbols(&prefix, alphabet)?;
        check_symbols(&block, alphabet)?;
        if block.is_empty() {
            return Err(Error::InvalidParameter(
                "repeating block must be nonempty".into(),
            ));
        }
        if prefix.len() + block.len() > PERIODIC_LEN_CAP {
            return Err(Error::InvalidParameter(format!(
                "prefix + block length {} exceeds cap {}",
                prefix.len() + block.len(),
                PERIODIC_LEN_CAP
            )));
        }
        Ok(Word::EventuallyPeriodic {
            prefix,
            block,
            alphabet,
        })
    }

    pub fn alphabet(&self) -> u32 {
        match self {
            Word::Finite { alphabet, .. } | Word::EventuallyPeriodic { alphabet, .. } => *alphabet,
        }
    }

    /// Length of a finite word; `None` for eventually-periodic words.
    pub fn len(&self) -> Option<usize> {
        match self {
            Word::Finite { symbols, .. } => Some(symbols.len()),
            Word::EventuallyPeriodic { .. } => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// The base-`m` expansion value `Σ_{n>=1} i_n m^{-n}`, in `[0, 1]`.
    ///
    /// Finite words sum exactly `|w|` terms; eventually-periodic words use
    /// the geometric-series closed form, which is exact in the rational
    /// backend.
    pub fn value<S: Scalar>(&self) -> S {
        let m_inv = |sym_count: u32| S::from_ratio(1, sym_count as i64);
        match self {
            Word::Finite { symbols, alphabet } => {
                finite_value::<S>(symbols, m_inv(*alphabet))
            }
            Word::EventuallyPeriodic {
                prefix,
                block,
                alphabet,
            } => {
                let q = m_inv(*alphabet);
                let prefix_value = finite_value::<S>(prefix, q.clone());
                let block_value = finite_value::<S>(block, q.clone());
                // value = prefix + m^{-|prefix|} * block / (1 - m^{-|block|})
                let shift = q.powu(prefix.len() as u32);
                let tail_scale = S::one() - q.powu(block.len() as u32);
                prefix_value + shift * block_value / tail_scale
            }
        }
    }
}

/// Horner evaluation of `Σ_{n=1}^{k} i_n q^n` with `q = 1/m`.
fn finite_value<S: Scalar>(symbols: &[u32], q: S) -> S {
    let mut acc = S::zero();
    for &sym in symbols.iter().rev() {
        acc = (acc + S::from_int(sym as i64)) * q.clone();
    }
    acc
}

fn check_alphabet(alphabet: u32) -> Result<()> {
    if alphabet < 2 {
        return Err(Error::InvalidParameter(format!(
            "alphabet size must be >= 2, got {alphabet}"
        )));
    }
    Ok(())
}

fn check_symbols(symbols: &[u32], alphabet: u32) -> Result<()> {
    for &sym in symbols {
        if sym >= alphabet {
            return Err(Error::InvalidWord {
                symbol: sym as u64,
                alphabet: alphabet as u64,
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Rational;
    use proptest::prelude::*;

    #[test]
    fn all_zero_word_has_value_zero() {
        let w = Word::eventually_periodic(vec![], vec![0], 2).unwrap();
        assert_eq!(w.value::<Rational>(), Rational::zero());
        assert_eq!(w.value::<f64>(), 0.0);
    }

    #[test]
    fn single_binary_digit() {
        let w = Word::finite(vec![1], 2).unwrap();
        assert_eq!(w.value::<f64>(), 0.5);
        assert_eq!(w.value::<Rational>(), Rational::from_ratio(1, 2));
    }

    #[test]
    fn repeated_one_base_three_is_one_half() {
        // Closed form Σ 3^{-n} = 1/2; cross-checked below by a 50-term
        // partial sum, which must agree to the truncation tail.
        let w = Word::eventually_periodic(vec![], vec![1], 3).unwrap();
        assert_eq!(w.value::<Rational>(), Rational::from_ratio(1, 2));

        let partial = Word::finite(vec![1; 50], 3).unwrap();
        let diff = (w.value::<Rational>() - partial.value::<Rational>()).abs();
        // tail = Σ_{n>50} 3^{-n} = 3^{-50}/2
        let tail = Rational::from_ratio(1, 2) * Rational::from_ratio(1, 3).powu(50);
        assert_eq!(diff, tail);
        assert!((w.value::<f64>() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn out_of_range_symbol_rejected() {
        assert!(matches!(
            Word::finite(vec![0, 3], 3),
            Err(Error::InvalidWord { .. })
        ));
        assert!(matches!(
            Word::eventually_periodic(vec![1], vec![5], 4),
            Err(Error::InvalidWord { .. })
        ));
    }

    #[test]
    fn empty_block_and_cap_rejected() {
        assert!(Word::eventually_periodic(vec![1], vec![], 2).is_err());
        assert!(Word::eventually_periodic(vec![0; 60], vec![0; 5], 2).is_err());
        assert!(Word::eventually_periodic(vec![0; 60], vec![0; 4], 2).is_ok());
    }

    /// Carry identity: appending the digit (m-1) repeated is the same as a
    /// final-position increment, `value(w · (m-1)^k) = value(w) + m^{-|w|} - m^{-|w|-k}`;
    /// the spec's limit form `value(w (m-1)-repeated) = value(w) + m^{-|w|}`
    /// is the periodic case.
    #[test]
    fn carry_identity_exact() {
        let m = 5u32;
        let w = vec![2, 0, 4, 1];
        let base = Word::finite(w.clone(), m).unwrap();
        let carried = Word::eventually_periodic(w.clone(), vec![m - 1], m).unwrap();
        let expected = base.value::<Rational>()
            + Rational::from_ratio(1, m as i64).powu(w.len() as u32);
        assert_eq!(carried.value::<Rational>(), expected);
    }

    fn arb_word(max_len: usize) -> impl Strategy<Value = (Vec<u32>, u32)> {
        (2u32..6).prop_flat_map(move |m| {
            (
                proptest::collection::vec(0..m, 0..max_len),
                Just(m),
            )
        })
    }

    proptest! {
        /// Lexicographic monotonicity on equal-length words over the same
        /// alphabet.
        #[test]
        fn value_is_lex_monotone((symbols, m) in arb_word(12), perturb in 0usize..12) {
            prop_assume!(!symbols.is_empty());
            let i = perturb % symbols.len();
            prop_assume!(symbols[i] + 1 < m);
            let mut larger = symbols.clone();
            larger[i] += 1;
            // anything after position i is dominated by the increment
            let a = Word::finite(symbols, m).unwrap();
            let b = Word::finite(larger, m).unwrap();
            prop_assert!(a.value::<Rational>() < b.value::<Rational>());
        }

        /// The carry identity holds for arbitrary finite words.
        #[test]
        fn carry_identity_holds((symbols, m) in arb_word(10)) {
            let base = Word::finite(symbols.clone(), m).unwrap();
            let carried = Word::eventually_periodic(symbols.clone(), vec![m - 1], m).unwrap();
            let expected = base.value::<Rational>()
                + Rational::from_ratio(1, m as i64).powu(symbols.len() as u32);
            prop_assert_eq!(carried.value::<Rational>(), expected);
        }
    }
}

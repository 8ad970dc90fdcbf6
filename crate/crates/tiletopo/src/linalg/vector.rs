use std::ops::Index;

use crate::error::{Error, Result};
use crate::linalg::Scalar;

/// An immutable coordinate vector over a numeric backend. Depending on
/// context it lives in `R^d` (full points) or `R^{d-1}` (horizontal
/// coordinates). Components must be finite.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector<S>(Vec<S>);

pub type V64 = Vector<f64>;

impl<S: Scalar> Vector<S> {
    pub fn new(components: Vec<S>) -> Self {
        Vector(components)
    }

    pub fn zeros(dim: usize) -> Self {
        Vector(vec![S::zero(); dim])
    }

    /// The all-ones vector.
    pub fn ones(dim: usize) -> Self {
        Vector(vec![S::one(); dim])
    }

    pub fn from_ints(components: &[i64]) -> Self {
        Vector(components.iter().map(|&c| S::from_int(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[S] {
        &self.0
    }

    pub fn into_components(self) -> Vec<S> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, S> {
        self.0.iter()
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension(format!(
                "length mismatch: {} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Vector(
            self.iter()
                .zip(other.iter())
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Vector(
            self.iter()
                .zip(other.iter())
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        ))
    }

    pub fn scale(&self, factor: &S) -> Self {
        Vector(self.iter().map(|a| a.clone() * factor.clone()).collect())
    }

    /// Componentwise product: `(x_1 y_1, ..., x_d y_d)`.
    pub fn hadamard(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Vector(
            self.iter()
                .zip(other.iter())
                .map(|(a, b)| a.clone() * b.clone())
                .collect(),
        ))
    }

    /// Componentwise `(sign(x), |x|)`; the two satisfy
    /// `sign(x) ⊙ |x| = x` and `sign(x) ⊙ x = |x|`.
    pub fn sign_abs(&self) -> (Self, Self) {
        let sign = Vector(self.iter().map(|a| S::from_int(a.signum_int())).collect());
        let abs = Vector(self.iter().map(|a| a.abs()).collect());
        (sign, abs)
    }

    /// Splits a length-`d` point into horizontal coordinates
    /// `(x_1, ..., x_{d-1})` and the height `x_d`. Requires `d >= 2`.
    pub fn split_height(&self) -> Result<(Self, S)> {
        if self.dim() < 2 {
            return Err(Error::Dimension(format!(
                "need dimension >= 2 to split off a height, got {}",
                self.dim()
            )));
        }
        let horizontal = Vector(self.0[..self.dim() - 1].to_vec());
        Ok((horizontal, self.0[self.dim() - 1].clone()))
    }

    pub fn sup_norm(&self) -> S {
        let mut best = S::zero();
        for a in self.iter() {
            let m = a.abs();
            if m > best {
                best = m;
            }
        }
        best
    }

    pub fn to_f64(&self) -> Vector<f64> {
        Vector(self.iter().map(|a| a.to_f64()).collect())
    }
}

impl<S> Index<usize> for Vector<S> {
    type Output = S;
    fn index(&self, i: usize) -> &S {
        &self.0[i]
    }
}

/// Sup-norm distance between two equal-length slices; hot-loop form used
/// by the Hausdorff machinery.
pub fn sup_dist(a: &[f64], b: &[f64]) -> f64 {
    let mut best = 0.0f64;
    for (x, y) in a.iter().zip(b) {
        let d = (x - y).abs();
        if d > best {
            best = d;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Rational;

    #[test]
    fn hadamard_componentwise() {
        let x = Vector::<f64>::from_ints(&[1, 2]);
        let y = Vector::<f64>::from_ints(&[3, 4]);
        assert_eq!(x.hadamard(&y).unwrap(), Vector::from_ints(&[3, 8]));
    }

    #[test]
    fn hadamard_identity_and_zero() {
        let x = Vector::<Rational>::from_ints(&[5, -7, 11]);
        let ones = Vector::ones(3);
        let zeros = Vector::zeros(3);
        assert_eq!(x.hadamard(&ones).unwrap(), x);
        assert_eq!(x.hadamard(&zeros).unwrap(), zeros);
    }

    #[test]
    fn hadamard_length_mismatch_errors() {
        let x = Vector::<f64>::from_ints(&[1, 2]);
        let y = Vector::<f64>::from_ints(&[1, 2, 3]);
        assert!(matches!(x.hadamard(&y), Err(Error::Dimension(_))));
    }

    #[test]
    fn sign_abs_examples() {
        let x = Vector::<f64>::from_ints(&[-2, 0, 3]);
        let (sign, abs) = x.sign_abs();
        assert_eq!(sign, Vector::from_ints(&[-1, 0, 1]));
        assert_eq!(abs, Vector::from_ints(&[2, 0, 3]));

        // sign(x) ⊙ x = |x| on a fractional input
        let y = Vector::<f64>::new(vec![-0.5, 0.25]);
        let (sign, abs) = y.sign_abs();
        assert_eq!(sign.hadamard(&y).unwrap(), abs);
        assert_eq!(abs, Vector::new(vec![0.5, 0.25]));

        let z = Vector::<f64>::zeros(2);
        let (sign, abs) = z.sign_abs();
        assert_eq!(sign, z);
        assert_eq!(abs, z);
    }

    #[test]
    fn split_height_examples() {
        let x = Vector::<f64>::from_ints(&[1, 2, 3]);
        let (h, v) = x.split_height().unwrap();
        assert_eq!(h, Vector::from_ints(&[1, 2]));
        assert_eq!(v, 3.0);

        let one_dim = Vector::<f64>::from_ints(&[5]);
        assert!(matches!(one_dim.split_height(), Err(Error::Dimension(_))));

        let zero = Vector::<f64>::zeros(4);
        let (h, v) = zero.split_height().unwrap();
        assert_eq!(h, Vector::zeros(3));
        assert_eq!(v, 0.0);
    }
}

use crate::error::{Error, Result};
use crate::linalg::{Scalar, Vector};

/// The transition-path bundle driving one iteration on a prism of height
/// `b` with `r` vertical layers: interface heights `y_k = k b / r`, window
/// half-width `eps` with `0 < eps < b/(2r)`, and layer offsets
/// `u_1, ..., u_{r-1}` in `(-1, 1)^{d-1}`.
#[derive(Clone, Debug)]
pub struct PathProfile<S> {
    r: usize,
    b: S,
    eps: S,
    u: Vec<Vector<S>>,
    /// partial sums v_0 = 0, v_k = u_1 + ... + u_k
    v: Vec<Vector<S>>,
}

impl<S: Scalar> PathProfile<S> {
    pub fn new(r: usize, b: S, eps: S, u: Vec<Vector<S>>) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidParameter(format!(
                "need at least 2 layers, got {r}"
            )));
        }
        if b <= S::zero() {
            return Err(Error::InvalidParameter("prism height must be positive".into()));
        }
        if u.len() != r - 1 {
            return Err(Error::InvalidParameter(format!(
                "expected {} layer offsets, got {}",
                r - 1,
                u.len()
            )));
        }
        // 0 < eps < b / (2r), compared exactly as 2 r eps < b
        if eps <= S::zero() || S::from_int(2 * r as i64) * eps.clone() >= b {
            return Err(Error::InvalidParameter(
                "window half-width must satisfy 0 < eps < b/(2r)".into(),
            ));
        }
        let hdim = u[0].dim();
        let mut v = vec![Vector::zeros(hdim)];
        for (k, uk) in u.iter().enumerate() {
            if uk.dim() != hdim {
                return Err(Error::Dimension(format!(
                    "offset {} has length {}, expected {hdim}",
                    k + 1,
                    uk.dim()
                )));
            }
            if uk.sup_norm() >= S::one() {
                return Err(Error::InvalidParameter(format!(
                    "layer offset {} leaves (-1,1)^{hdim}",
                    k + 1
                )));
            }
            v.push(v[k].add(uk).expect("dims"));
        }
        Ok(PathProfile { r, b, eps, u, v })
    }

    pub fn layers(&self) -> usize {
        self.r
    }

    pub fn height(&self) -> &S {
        &self.b
    }

    pub fn window_half_width(&self) -> &S {
        &self.eps
    }

    /// Horizontal dimension `d - 1`.
    pub fn horizontal_dim(&self) -> usize {
        self.u[0].dim()
    }

    pub fn offsets(&self) -> &[Vector<S>] {
        &self.u
    }

    /// `u_k` for `k = 1 .. r-1`.
    pub fn offset(&self, k: usize) -> &Vector<S> {
        &self.u[k - 1]
    }

    /// `v_k = u_1 + ... + u_k`, with `v_0 = 0`.
    pub fn partial_sum(&self, k: usize) -> &Vector<S> {
        &self.v[k]
    }

    /// Interface height `y_k = k b / r`, `k = 0 ..= r`.
    pub fn interface_height(&self, k: usize) -> S {
        self.b.clone() * S::from_ratio(k as i64, self.r as i64)
    }

    /// `c = Σ_k ||u_k||_∞`.
    pub fn horizontal_constant(&self) -> S {
        let mut c = S::zero();
        for uk in &self.u {
            c = c + uk.sup_norm();
        }
        c
    }

    fn check_domain(&self, y: &S) -> Result<()> {
        if *y < S::zero() || *y > self.b {
            return Err(Error::Domain(
                "height outside the prism range [0, b]".into(),
            ));
        }
        Ok(())
    }

    /// Window index at height `y`: `Some(k)` iff `|y - y_k| <= eps` for an
    /// interior interface. Windows are closed; at `y = y_k ± eps` the
    /// window and plateau formulas agree.
    fn window_at(&self, y: &S) -> Option<usize> {
        for k in 1..self.r {
            if (y.clone() - self.interface_height(k)).abs() <= self.eps {
                return Some(k);
            }
        }
        None
    }

    /// Plateau index: the `k` with `y_k <= y <= y_{k+1}`, `0 <= k < r`.
    fn plateau_at(&self, y: &S) -> usize {
        let mut k = 0;
        while k + 1 < self.r && *y >= self.interface_height(k + 1) {
            k += 1;
        }
        k
    }

    /// The horizontal translation path: `v_k` on plateaus, and
    /// `(2 eps)^{-1} (eps + y - y_k) u_k + v_{k-1}` inside window `k`.
    pub fn path_x(&self, y: &S) -> Result<Vector<S>> {
        self.check_domain(y)?;
        if let Some(k) = self.window_at(y) {
            let two_eps = S::from_int(2) * self.eps.clone();
            let ramp = (self.eps.clone() + y.clone() - self.interface_height(k)) / two_eps;
            return self.u[k - 1].scale(&ramp).add(&self.v[k - 1]);
        }
        Ok(self.v[self.plateau_at(y)].clone())
    }

    /// The squeeze-factor path: all-ones off the windows, and
    /// `eps^{-1} |y - y_k| u_k^+ + 1 - u_k^+` inside window `k`. Values
    /// stay in `(0, 1]^{d-1}` because every `||u_k||_∞ < 1`.
    pub fn path_rho(&self, y: &S) -> Result<Vector<S>> {
        self.check_domain(y)?;
        let ones = Vector::ones(self.horizontal_dim());
        if let Some(k) = self.window_at(y) {
            let (_, u_abs) = self.u[k - 1].sign_abs();
            let ramp = (y.clone() - self.interface_height(k)).abs() / self.eps.clone();
            let rise = u_abs.scale(&ramp);
            return ones.sub(&u_abs)?.add(&rise);
        }
        Ok(ones)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Rational;

    fn profile_r3() -> PathProfile<Rational> {
        // r = 3, b = 1, eps = 1/12, u_1 = (-1/3, 1/4), u_2 = (1/2, -3/5)
        PathProfile::new(
            3,
            Rational::one(),
            Rational::from_ratio(1, 12),
            vec![
                Vector::new(vec![Rational::from_ratio(-1, 3), Rational::from_ratio(1, 4)]),
                Vector::new(vec![Rational::from_ratio(1, 2), Rational::from_ratio(-3, 5)]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn path_x_at_bottom_is_zero() {
        let p = profile_r3();
        assert_eq!(
            p.path_x(&Rational::zero()).unwrap(),
            Vector::zeros(2)
        );
    }

    #[test]
    fn path_x_at_interface_is_half_offset() {
        // x(y_k) = u_k / 2 + v_{k-1}
        let p = profile_r3();
        for k in 1..3 {
            let y = p.interface_height(k);
            let expected = p
                .offset(k)
                .scale(&Rational::from_ratio(1, 2))
                .add(p.partial_sum(k - 1))
                .unwrap();
            assert_eq!(p.path_x(&y).unwrap(), expected);
        }
    }

    #[test]
    fn path_x_window_exit_matches_plateau() {
        let p = profile_r3();
        for k in 1..3 {
            let y = p.interface_height(k) + Rational::from_ratio(1, 12);
            assert_eq!(p.path_x(&y).unwrap(), *p.partial_sum(k));
            let y = p.interface_height(k) - Rational::from_ratio(1, 12);
            assert_eq!(p.path_x(&y).unwrap(), *p.partial_sum(k - 1));
        }
    }

    #[test]
    fn path_rho_values() {
        let p = profile_r3();
        // plateau
        let y = Rational::from_ratio(1, 6);
        assert_eq!(p.path_rho(&y).unwrap(), Vector::ones(2));
        // window centre: 1 - u_k^+
        for k in 1..3 {
            let y = p.interface_height(k);
            let (_, u_abs) = p.offset(k).sign_abs();
            let expected = Vector::ones(2).sub(&u_abs).unwrap();
            assert_eq!(p.path_rho(&y).unwrap(), expected);
            // window edges collapse back to 1
            let edge = y + Rational::from_ratio(1, 12);
            assert_eq!(p.path_rho(&edge).unwrap(), Vector::ones(2));
        }
    }

    #[test]
    fn domain_checked() {
        let p = profile_r3();
        assert!(matches!(
            p.path_x(&Rational::from_int(2)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            p.path_rho(&Rational::from_int(-1)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn horizontal_constant_sums_sup_norms() {
        let p = profile_r3();
        // ||u_1|| = 1/3, ||u_2|| = 3/5
        assert_eq!(
            p.horizontal_constant(),
            Rational::from_ratio(1, 3) + Rational::from_ratio(3, 5)
        );

        let q = PathProfile::new(
            2,
            Rational::one(),
            Rational::from_ratio(1, 10),
            vec![Vector::new(vec![
                Rational::from_ratio(1, 2),
                Rational::from_ratio(-3, 10),
            ])],
        )
        .unwrap();
        assert_eq!(q.horizontal_constant(), Rational::from_ratio(1, 2));

        let zero = PathProfile::new(
            3,
            Rational::one(),
            Rational::from_ratio(1, 13),
            vec![Vector::zeros(1), Vector::zeros(1)],
        )
        .unwrap();
        assert_eq!(zero.horizontal_constant(), Rational::zero());
    }

    #[test]
    fn invalid_profiles_rejected() {
        // eps too large
        assert!(PathProfile::new(
            2,
            Rational::one(),
            Rational::from_ratio(1, 4),
            vec![Vector::zeros(1)],
        )
        .is_err());
        // offset outside (-1,1)
        assert!(PathProfile::new(
            2,
            Rational::one(),
            Rational::from_ratio(1, 10),
            vec![Vector::from_ints(&[1])],
        )
        .is_err());
    }
}

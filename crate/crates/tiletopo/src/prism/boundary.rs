use crate::error::{Error, Result};
use crate::linalg::{Scalar, Vector};

/// Membership of a boundary point of `U = [-1/2, 1/2]^{d-1}` in the three
/// (not necessarily disjoint) parts determined by a direction `u`:
/// faces whose outward coordinate sign matches `u`, their negatives, and
/// faces along coordinates where `u` vanishes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundaryMembership {
    pub plus: bool,
    pub minus: bool,
    pub neutral: bool,
}

/// Classifies `x` on the boundary of `U = [-1/2, 1/2]^{d-1}` with respect
/// to `u` in `(-1,1)^{d-1} \ {0}`:
///
/// * `plus`:    some `j` has `2 x_j = sign(u_j) != 0`,
/// * `minus`:   `-x` is in the plus part,
/// * `neutral`: some `j` has `2 x_j = ±1` while `u_j = 0`.
///
/// The three parts cover the boundary and `minus = -plus` by definition.
pub fn partition_boundary<S: Scalar>(u: &Vector<S>, x: &Vector<S>) -> Result<BoundaryMembership> {
    if u.dim() != x.dim() {
        return Err(Error::Dimension(format!(
            "direction has length {}, point has length {}",
            u.dim(),
            x.dim()
        )));
    }
    if u.iter().all(|c| c.is_zero()) {
        return Err(Error::InvalidParameter(
            "direction vector must be nonzero".into(),
        ));
    }
    let half = S::from_ratio(1, 2);
    let mut on_boundary = false;
    for c in x.iter() {
        if c.abs() > half {
            return Err(Error::Domain("point outside the unit box".into()));
        }
        if c.abs() == half {
            on_boundary = true;
        }
    }
    if !on_boundary {
        return Err(Error::Domain("point not on the box boundary".into()));
    }

    let mut membership = BoundaryMembership {
        plus: false,
        minus: false,
        neutral: false,
    };
    for j in 0..x.dim() {
        if x[j].abs() != half {
            continue;
        }
        let face_sign = x[j].signum_int();
        let dir_sign = u[j].signum_int();
        if dir_sign == 0 {
            membership.neutral = true;
        } else if face_sign == dir_sign {
            membership.plus = true;
        } else {
            membership.minus = true;
        }
    }
    Ok(membership)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector<f64> {
        Vector::new(c.to_vec())
    }

    #[test]
    fn mixed_direction_with_zero_component() {
        // ambient dimension 4, u = (-0.1, 0.2, 0)
        let u = v(&[-0.1, 0.2, 0.0]);

        // plus part: {-1/2} x I^2  union  I x {1/2} x I
        let m = partition_boundary(&u, &v(&[-0.5, 0.0, 0.0])).unwrap();
        assert_eq!(
            m,
            BoundaryMembership {
                plus: true,
                minus: false,
                neutral: false
            }
        );
        let m = partition_boundary(&u, &v(&[0.0, 0.5, 0.25])).unwrap();
        assert!(m.plus && !m.minus && !m.neutral);

        // minus part mirrors it
        let m = partition_boundary(&u, &v(&[0.5, 0.0, 0.0])).unwrap();
        assert!(!m.plus && m.minus && !m.neutral);
        let m = partition_boundary(&u, &v(&[0.0, -0.5, 0.0])).unwrap();
        assert!(m.minus && !m.plus);

        // neutral part: I^2 x {-1/2, 1/2}
        let m = partition_boundary(&u, &v(&[0.0, 0.0, 0.5])).unwrap();
        assert_eq!(
            m,
            BoundaryMembership {
                plus: false,
                minus: false,
                neutral: true
            }
        );
        let m = partition_boundary(&u, &v(&[0.0, 0.0, -0.5])).unwrap();
        assert!(m.neutral && !m.plus && !m.minus);
    }

    #[test]
    fn nowhere_zero_direction_has_empty_neutral_part() {
        let u = v(&[0.1, -0.2, -0.3]);
        // corners and faces all land in plus or minus, never neutral
        let pts = [
            [0.5, 0.0, 0.0],
            [-0.5, 0.25, -0.25],
            [0.1, -0.5, 0.3],
            [0.0, 0.0, -0.5],
            [0.5, 0.5, 0.5],
            [-0.5, -0.5, -0.5],
        ];
        for p in pts {
            let m = partition_boundary(&u, &v(&p)).unwrap();
            assert!(!m.neutral);
            assert!(m.plus || m.minus);
        }
        // the published memberships for this direction
        assert!(partition_boundary(&u, &v(&[0.5, 0.0, 0.0])).unwrap().plus);
        assert!(partition_boundary(&u, &v(&[0.0, -0.5, 0.0])).unwrap().plus);
        assert!(partition_boundary(&u, &v(&[0.0, 0.0, -0.5])).unwrap().plus);
        assert!(partition_boundary(&u, &v(&[-0.5, 0.0, 0.0])).unwrap().minus);
        assert!(partition_boundary(&u, &v(&[0.0, 0.5, 0.0])).unwrap().minus);
        assert!(partition_boundary(&u, &v(&[0.0, 0.0, 0.5])).unwrap().minus);
    }

    #[test]
    fn corners_can_sit_in_both_parts() {
        let u = v(&[0.3, -0.4]);
        let m = partition_boundary(&u, &v(&[0.5, 0.5])).unwrap();
        assert!(m.plus && m.minus);
    }

    #[test]
    fn errors() {
        let u = v(&[0.1, 0.2]);
        assert!(matches!(
            partition_boundary(&u, &v(&[0.2, 0.2])),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            partition_boundary(&u, &v(&[0.7, 0.0])),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            partition_boundary(&v(&[0.0, 0.0]), &v(&[0.5, 0.0])),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            partition_boundary(&u, &v(&[0.5])),
            Err(Error::Dimension(_))
        ));
    }
}

//! Canonical directions modulo pi.
//!
//! A [`DirectionKey`] is the exact, canonical name of a line direction:
//! denominators cleared, components divided by their gcd, and the sign fixed
//! so that `dy > 0`, or `dy == 0` and `dx > 0`. Keys are totally ordered by
//! angle in `[0, pi)`.

use crate::geom::Vec2;
use crate::scalar::Scalar;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DirectionKey {
    dx: BigInt,
    dy: BigInt,
}

impl DirectionKey {
    /// Canonicalizes a nonzero rational vector. Returns `None` for zero.
    pub fn from_vec(v: &Vec2) -> Option<DirectionKey> {
        if v.is_zero() {
            return None;
        }
        // Clear denominators: (xn/xd, yn/yd) ~ (xn*yd, yn*xd).
        let mut dx = v.x.numer() * v.y.denom();
        let mut dy = v.y.numer() * v.x.denom();
        let g = dx.gcd(&dy);
        if !g.is_zero() {
            dx /= &g;
            dy /= &g;
        }
        let flip = dy.is_negative() || (dy.is_zero() && dx.is_negative());
        if flip {
            dx = -dx;
            dy = -dy;
        }
        Some(DirectionKey { dx, dy })
    }

    pub fn from_ints(dx: i64, dy: i64) -> Option<DirectionKey> {
        use crate::scalar::scalar;
        DirectionKey::from_vec(&Vec2::new(scalar(dx), scalar(dy)))
    }

    pub fn dx(&self) -> &BigInt {
        &self.dx
    }

    pub fn dy(&self) -> &BigInt {
        &self.dy
    }

    /// The key as an exact vector (the canonical primitive representative).
    pub fn to_vec(&self) -> Vec2 {
        Vec2::new(
            Scalar::from_integer(self.dx.clone()),
            Scalar::from_integer(self.dy.clone()),
        )
    }

    /// Squared sine of the angle between the two direction lines:
    /// `cross(u,v)^2 / (|u|^2 |v|^2)`. This is the exact surrogate for
    /// circular distance on `[0, pi)` used throughout the spectrum logic
    /// (monotone in the line angle gap on `[0, pi/2]`).
    pub fn sin_sq_distance(&self, other: &DirectionKey) -> Scalar {
        let u = self.to_vec();
        let v = other.to_vec();
        let cr = u.cross(&v);
        Scalar::new(cr.numer() * cr.numer(), BigInt::from(1))
            / (u.norm_sq() * v.norm_sq())
    }

    /// True when the angular gap between the two lines is within the given
    /// bound on `sin^2(gap)`. Exact.
    pub fn within(&self, other: &DirectionKey, eps_sin_sq: &Scalar) -> bool {
        self.sin_sq_distance(other) <= *eps_sin_sq
    }

    /// Presentation-only angle in `[0, pi)`.
    pub fn angle_f64(&self) -> f64 {
        let dx = crate::scalar::to_f64(&Scalar::from_integer(self.dx.clone()));
        let dy = crate::scalar::to_f64(&Scalar::from_integer(self.dy.clone()));
        let a = dy.atan2(dx);
        if a < 0.0 {
            a + std::f64::consts::PI
        } else {
            a
        }
    }
}

impl Ord for DirectionKey {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.dx == other.dx && self.dy == other.dy {
            return Ordering::Equal;
        }
        // Both keys lie in the closed upper half plane with angle in [0, pi),
        // so the angle gap is under pi and the cross product sign decides.
        let cr = &self.dx * &other.dy - &self.dy * &other.dx;
        if cr.is_positive() {
            Ordering::Less
        } else if cr.is_negative() {
            Ordering::Greater
        } else {
            // Same line, same canonical sign: only reachable for equal keys.
            Ordering::Equal
        }
    }
}

impl PartialOrd for DirectionKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for DirectionKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{})", self.dx, self.dy)
    }
}

impl fmt::Display for DirectionKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{})", self.dx, self.dy)
    }
}

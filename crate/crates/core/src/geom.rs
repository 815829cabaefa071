//! Planar vectors, matrices, and exact geometric predicates over [`Scalar`].

use crate::scalar::{sign, Scalar};
use num_traits::Zero;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A point or displacement in the plane with exact rational components.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Vec2 {
    pub x: Scalar,
    pub y: Scalar,
}

impl Vec2 {
    pub fn new(x: Scalar, y: Scalar) -> Self {
        Vec2 { x, y }
    }

    pub fn zero() -> Self {
        Vec2 {
            x: Scalar::zero(),
            y: Scalar::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn dot(&self, other: &Vec2) -> Scalar {
        &self.x * &other.x + &self.y * &other.y
    }

    /// z-component of the cross product; positive when `other` is
    /// counterclockwise from `self`.
    pub fn cross(&self, other: &Vec2) -> Scalar {
        &self.x * &other.y - &self.y * &other.x
    }

    pub fn norm_sq(&self) -> Scalar {
        self.dot(self)
    }

    pub fn scale(&self, t: &Scalar) -> Vec2 {
        Vec2::new(&self.x * t, &self.y * t)
    }

    /// True when `other` is a positive multiple of `self` (both nonzero).
    pub fn same_ray(&self, other: &Vec2) -> bool {
        !self.is_zero()
            && !other.is_zero()
            && self.cross(other).is_zero()
            && sign(&self.dot(other)) > 0
    }

    /// True when the vectors are parallel (possibly opposite or zero).
    pub fn parallel(&self, other: &Vec2) -> bool {
        self.cross(other).is_zero()
    }
}

impl fmt::Debug for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add for &Vec2 {
    type Output = Vec2;
    fn add(self, rhs: &Vec2) -> Vec2 {
        Vec2::new(&self.x + &rhs.x, &self.y + &rhs.y)
    }
}

impl Sub for &Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: &Vec2) -> Vec2 {
        Vec2::new(&self.x - &rhs.x, &self.y - &rhs.y)
    }
}

impl Neg for &Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-&self.x, -&self.y)
    }
}

impl Mul<&Vec2> for &Scalar {
    type Output = Vec2;
    fn mul(self, rhs: &Vec2) -> Vec2 {
        rhs.scale(self)
    }
}

/// A 2x2 matrix acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2 {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
    pub d: Scalar,
}

impl Mat2 {
    pub fn new(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        use crate::scalar::scalar;
        Mat2::new(scalar(1), scalar(0), scalar(0), scalar(1))
    }

    /// `[[dx, dy], [-dy, dx]]`: maps direction `(dx, dy)` to the positive
    /// x-axis, scaling lengths by `|d|` and areas by `dx^2 + dy^2`.
    pub fn align_to_horizontal(dir: &Vec2) -> Self {
        Mat2::new(dir.x.clone(), dir.y.clone(), -&dir.y, dir.x.clone())
    }

    pub fn det(&self) -> Scalar {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn apply(&self, v: &Vec2) -> Vec2 {
        Vec2::new(&self.a * &v.x + &self.b * &v.y, &self.c * &v.x + &self.d * &v.y)
    }

    /// Inverse; `None` if singular.
    pub fn inverse(&self) -> Option<Mat2> {
        let det = self.det();
        if det.is_zero() {
            return None;
        }
        Some(Mat2::new(
            &self.d / &det,
            -&self.b / &det,
            -&self.c / &det,
            &self.a / &det,
        ))
    }
}

/// Orientation of the triangle `a, b, c`: 1 counterclockwise, -1 clockwise,
/// 0 collinear. Exact.
pub fn orient(a: &Vec2, b: &Vec2, c: &Vec2) -> i32 {
    sign(&(b - a).cross(&(c - a)))
}

/// Twice the signed area of a polygon given in vertex order.
pub fn twice_signed_area(vertices: &[Vec2]) -> Scalar {
    let mut acc = Scalar::zero();
    for i in 0..vertices.len() {
        let j = (i + 1) % vertices.len();
        acc += vertices[i].cross(&vertices[j]);
    }
    acc
}

/// True when `p` lies on the closed segment `[a, b]`.
pub fn point_on_segment(p: &Vec2, a: &Vec2, b: &Vec2) -> bool {
    if orient(a, b, p) != 0 {
        return false;
    }
    let ab = b - a;
    let t = ab.dot(&(p - a));
    sign(&t) >= 0 && t <= ab.norm_sq()
}

/// True when `p` lies strictly inside the open segment `(a, b)`.
pub fn point_in_open_segment(p: &Vec2, a: &Vec2, b: &Vec2) -> bool {
    if orient(a, b, p) != 0 {
        return false;
    }
    let ab = b - a;
    let t = ab.dot(&(p - a));
    sign(&t) > 0 && t < ab.norm_sq()
}

/// Containment of a point in a closed convex counterclockwise polygon.
pub fn point_in_convex(p: &Vec2, vertices: &[Vec2]) -> bool {
    for i in 0..vertices.len() {
        let j = (i + 1) % vertices.len();
        if orient(&vertices[i], &vertices[j], p) < 0 {
            return false;
        }
    }
    true
}

/// Strict convexity and counterclockwise orientation check: every
/// consecutive vertex triple must turn strictly left.
pub fn is_strictly_convex_ccw(vertices: &[Vec2]) -> bool {
    let n = vertices.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        if orient(&vertices[i], &vertices[(i + 1) % n], &vertices[(i + 2) % n]) <= 0 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, scalar};

    fn v(x: i64, y: i64) -> Vec2 {
        Vec2::new(scalar(x), scalar(y))
    }

    #[test]
    fn convexity() {
        let square = vec![v(0, 0), v(1, 0), v(1, 1), v(0, 1)];
        assert!(is_strictly_convex_ccw(&square));
        let cw: Vec<_> = square.iter().rev().cloned().collect();
        assert!(!is_strictly_convex_ccw(&cw));
        let degenerate = vec![v(0, 0), v(1, 0), v(2, 0), v(1, 1)];
        assert!(!is_strictly_convex_ccw(&degenerate));
        assert_eq!(twice_signed_area(&square), scalar(2));
    }

    #[test]
    fn segment_predicates() {
        let a = v(0, 0);
        let b = v(2, 2);
        let m = Vec2::new(frac(1, 2), frac(1, 2));
        assert!(point_on_segment(&m, &a, &b));
        assert!(point_in_open_segment(&m, &a, &b));
        assert!(point_on_segment(&a, &a, &b));
        assert!(!point_in_open_segment(&a, &a, &b));
        assert!(!point_on_segment(&v(3, 3), &a, &b));
    }

    #[test]
    fn matrix_roundtrip() {
        let m = Mat2::new(scalar(1), scalar(1), scalar(0), scalar(1));
        let inv = m.inverse().unwrap();
        let p = v(3, 5);
        assert_eq!(inv.apply(&m.apply(&p)), p);
        let r = Mat2::align_to_horizontal(&v(1, 1));
        assert_eq!(r.apply(&v(1, 1)), v(2, 0));
    }
}

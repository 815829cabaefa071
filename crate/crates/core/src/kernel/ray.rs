//! Exact first-exit computation for a ray inside one convex polygon.

use crate::geom::Vec2;
use crate::scalar::{sign, Scalar};
use num_traits::Zero;

/// Where a ray leaves a convex polygon.
#[derive(Clone, Debug)]
pub(crate) struct RayExit {
    /// Ray parameter of the exit point (`pos + t * dir`), strictly positive.
    pub t: Scalar,
    pub point: Vec2,
    pub hit: ExitHit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum ExitHit {
    /// Exit through the open interior of edge `i`.
    EdgeInterior(usize),
    /// Exit at vertex `i` (including the far endpoint when the ray runs
    /// along an edge).
    Vertex(usize),
}

/// First exit of the ray `pos + t * dir`, `t > 0`, from the closed convex
/// counterclockwise polygon. `pos` must lie in the closed polygon and `dir`
/// must be nonzero. Returns `None` when no forward exit exists, which means
/// `pos` sits on the boundary with `dir` pointing outward.
pub(crate) fn ray_exit(vertices: &[Vec2], pos: &Vec2, dir: &Vec2) -> Option<RayExit> {
    debug_assert!(!dir.is_zero());
    let n = vertices.len();
    let mut best: Option<(Scalar, usize, Scalar)> = None; // (t, edge, s)
    for i in 0..n {
        let a = &vertices[i];
        let b = &vertices[(i + 1) % n];
        let e = b - a;
        let ap = a - pos;
        let denom = dir.cross(&e);
        if denom.is_zero() {
            // Parallel. If collinear, the ray may run along the edge and
            // exit at the far endpoint.
            if !dir.cross(&ap).is_zero() {
                continue;
            }
            let dd = dir.norm_sq();
            let ta = &ap.dot(dir) / &dd;
            let tb = &(b - pos).dot(dir) / &dd;
            let t = if ta > tb { ta } else { tb };
            if sign(&t) <= 0 {
                continue;
            }
            let s = if (a - pos).norm_sq() > (b - pos).norm_sq() {
                Scalar::zero()
            } else {
                crate::scalar::scalar(1)
            };
            if best.as_ref().map_or(true, |(bt, _, _)| t < *bt) {
                best = Some((t, i, s));
            }
            continue;
        }
        let t = &ap.cross(&e) / &denom;
        let s = &ap.cross(dir) / &denom;
        if sign(&t) <= 0 || sign(&s) < 0 || s > crate::scalar::scalar(1) {
            continue;
        }
        if best.as_ref().map_or(true, |(bt, _, _)| t < *bt) {
            best = Some((t, i, s));
        }
    }
    let (t, edge, s) = best?;
    let point = pos + &dir.scale(&t);
    let hit = if s.is_zero() {
        ExitHit::Vertex(edge)
    } else if s == crate::scalar::scalar(1) {
        ExitHit::Vertex((edge + 1) % n)
    } else {
        ExitHit::EdgeInterior(edge)
    };
    Some(RayExit { t, point, hit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, scalar};

    fn v(x: i64, y: i64) -> Vec2 {
        Vec2::new(scalar(x), scalar(y))
    }

    fn square() -> Vec<Vec2> {
        vec![v(0, 0), v(1, 0), v(1, 1), v(0, 1)]
    }

    #[test]
    fn interior_exit() {
        let p = Vec2::new(frac(1, 2), frac(1, 2));
        let e = ray_exit(&square(), &p, &v(1, 0)).unwrap();
        assert_eq!(e.hit, ExitHit::EdgeInterior(1));
        assert_eq!(e.point, Vec2::new(scalar(1), frac(1, 2)));
        assert_eq!(e.t, frac(1, 2));
    }

    #[test]
    fn vertex_exit() {
        let p = v(0, 0);
        let e = ray_exit(&square(), &p, &v(1, 1)).unwrap();
        assert_eq!(e.hit, ExitHit::Vertex(2));
        assert_eq!(e.point, v(1, 1));
    }

    #[test]
    fn along_edge() {
        // Start mid-bottom-edge heading along it: exit at the far corner.
        let p = Vec2::new(frac(1, 4), scalar(0));
        let e = ray_exit(&square(), &p, &v(1, 0)).unwrap();
        assert_eq!(e.hit, ExitHit::Vertex(1));
        assert_eq!(e.point, v(1, 0));
    }

    #[test]
    fn outward_none() {
        let p = v(0, 0);
        assert!(ray_exit(&square(), &p, &v(-1, -1)).is_none());
        assert!(ray_exit(&square(), &p, &v(0, -1)).is_none());
    }
}

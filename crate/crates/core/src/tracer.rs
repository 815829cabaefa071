//! Exact geodesic tracing.
//!
//! [`trace`] follows a straight line from a start point until it reaches a
//! stopping anchor, runs into the open interior of a slit, leaves through a
//! boundary edge, closes up, or exhausts its length budget. All decisions
//! are made in exact rational arithmetic: an event is reported if and only
//! if the ideal geodesic passes exactly through the event point.

use crate::geom::Vec2;
use crate::kernel::ray::{ray_exit, ExitHit};
use crate::kernel::{CanonPoint, EdgeRef, SlitSurface, SurfacePoint};
use crate::scalar::{scalar, sign, Scalar};
use num_traits::Zero;
use thiserror::Error;

/// Which anchors terminate a trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopSet {
    /// Only marked points (members of Sigma).
    Sigma,
    /// Every anchor, including unmarked slit endpoints.
    AllAnchors,
}

#[derive(Clone, Debug)]
pub struct TraceConfig {
    /// Maximum squared trace length. The trace never reports an event
    /// beyond this length; it returns [`TraceEnd::BudgetExceeded`] instead.
    pub budget_sq: Scalar,
    /// Whether slit interiors terminate the trace. Disabled by the cylinder
    /// machinery when tracing along known-safe leaves.
    pub stop_at_slits: bool,
    pub stop_set: StopSet,
}

impl TraceConfig {
    pub fn new(budget_sq: Scalar) -> Self {
        TraceConfig {
            budget_sq,
            stop_at_slits: true,
            stop_set: StopSet::Sigma,
        }
    }
}

/// One straight chord of the trace inside a single polygon chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrajectoryStep {
    pub polygon: usize,
    pub a: Vec2,
    pub b: Vec2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceEnd {
    /// Reached an anchor of the stop set.
    HitAnchor { anchor: usize },
    /// Ran into the open interior of a slit (or along it).
    HitSlitInterior { slit: usize },
    /// Left the surface through an unglued edge.
    HitBoundary { edge: EdgeRef },
    /// Returned to the start point with the start direction.
    Closed,
    /// The next event lies beyond the length budget.
    BudgetExceeded,
}

#[derive(Clone, Debug)]
pub struct TraceResult {
    pub steps: Vec<TrajectoryStep>,
    pub end: TraceEnd,
    /// Multiple of the direction vector traced so far.
    pub t_total: Scalar,
    /// Squared euclidean length of the traced path.
    pub length_sq: Scalar,
    /// Developed displacement, `t_total * dir`.
    pub holonomy: Vec2,
    pub end_point: SurfacePoint,
}

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("direction is zero")]
    ZeroDirection,
    #[error("start point lies outside its polygon")]
    StartOutside,
    #[error(
        "start at a cone point requires the corner chart whose sector contains the direction"
    )]
    AmbiguousStart,
    #[error("internal tracing inconsistency: {0}")]
    Internal(String),
}

/// Current chart state of the walk.
#[derive(Clone, Debug, PartialEq, Eq)]
struct State {
    polygon: usize,
    pos: Vec2,
    dir: Vec2,
}

/// Chart-independent key of a state: position canonicalized, direction
/// mapped into the canonical chart. Used for closure detection.
fn canon_state(surf: &SlitSurface, st: &State) -> (CanonPoint, Vec2) {
    let canon = surf.canonicalize(&SurfacePoint::new(st.polygon, st.pos.clone()));
    match &canon {
        CanonPoint::Edge { edge, .. } => {
            let here = find_edge_rep(surf, st).unwrap_or(*edge);
            if here != *edge {
                // The canonical chart is the partner side; map the
                // direction along.
                let (_, flip) = surf.partner(here).unwrap();
                let dir = if flip { -&st.dir } else { st.dir.clone() };
                return (canon, dir);
            }
            (canon, st.dir.clone())
        }
        CanonPoint::Vertex(_) => {
            // Normalize through the vertex so both closure ends agree on a
            // chart. Falls back to the raw direction at cone points, where
            // closure cannot occur anyway.
            match find_vertex_index(surf, st.polygon, &st.pos)
                .and_then(|v| surf.pass_through_vertex(st.polygon, v, &st.dir))
            {
                Some((_, _, d)) => (canon, d),
                None => (canon, st.dir.clone()),
            }
        }
        _ => (canon, st.dir.clone()),
    }
}

fn find_vertex_index(surf: &SlitSurface, polygon: usize, pos: &Vec2) -> Option<usize> {
    surf.polygon(polygon)
        .vertices
        .iter()
        .position(|v| v == pos)
}

/// The edge of `st.polygon` containing `st.pos` in its open interior.
fn find_edge_rep(surf: &SlitSurface, st: &State) -> Option<EdgeRef> {
    let poly = surf.polygon(st.polygon);
    (0..poly.len())
        .find(|&e| {
            crate::geom::point_in_open_segment(&st.pos, &poly.vertices[e], poly.vertex(e + 1))
        })
        .map(|e| EdgeRef::new(st.polygon, e))
}

/// Moves a start state into a chart where the direction points into the
/// (closed) polygon. Fails with `AmbiguousStart` at cone points when the
/// supplied corner's sector does not contain the direction.
fn resolve_start(surf: &SlitSurface, st: State) -> Result<Result<State, EdgeRef>, TraceError> {
    let poly = surf.polygon(st.polygon);
    if !crate::geom::point_in_convex(&st.pos, &poly.vertices) {
        return Err(TraceError::StartOutside);
    }
    if let Some(v) = find_vertex_index(surf, st.polygon, &st.pos) {
        let n = poly.len();
        let d1 = poly.edge_vector(v);
        let d2 = poly.vertex((v + n - 1) % n) - poly.vertex(v);
        let inside = st.dir.same_ray(&d1)
            || st.dir.same_ray(&d2)
            || (sign(&d1.cross(&st.dir)) > 0 && sign(&st.dir.cross(&d2)) > 0);
        if inside {
            return Ok(Ok(st));
        }
        let class = &surf.vertex_classes()[surf.class_of_corner(st.polygon, v)];
        if class.on_boundary || class.halfturns != 2 {
            return Err(TraceError::AmbiguousStart);
        }
        let (q, w, d) = surf
            .pass_through_vertex(st.polygon, v, &st.dir)
            .ok_or(TraceError::AmbiguousStart)?;
        return Ok(Ok(State {
            polygon: q,
            pos: surf.polygon(q).vertices[w].clone(),
            dir: d,
        }));
    }
    if let Some(here) = find_edge_rep(surf, &st) {
        let e = surf.polygon(here.polygon).edge_vector(here.edge);
        if sign(&e.cross(&st.dir)) < 0 {
            // Points out of this chart: move to the glued partner, or leave
            // through the boundary immediately.
            return match surf.partner(here) {
                Some((other, flip)) => {
                    let pos = surf.map_across(here, other, flip, &st.pos);
                    let dir = if flip { -&st.dir } else { st.dir.clone() };
                    Ok(Ok(State {
                        polygon: other.polygon,
                        pos,
                        dir,
                    }))
                }
                None => Ok(Err(here)),
            };
        }
    }
    Ok(Ok(st))
}

/// A stopping candidate found inside the current chord.
#[derive(Clone, Debug)]
enum Event {
    Anchor(usize),
    Slit(usize),
    MaybeClosed,
}

/// Precedence at equal parameter: anchors beat closure beats slits.
fn event_rank(e: &Event) -> u8 {
    match e {
        Event::Anchor(_) => 0,
        Event::MaybeClosed => 1,
        Event::Slit(_) => 2,
    }
}

pub fn trace(
    surf: &SlitSurface,
    start: &SurfacePoint,
    dir: &Vec2,
    cfg: &TraceConfig,
) -> Result<TraceResult, TraceError> {
    if dir.is_zero() {
        return Err(TraceError::ZeroDirection);
    }
    if start.polygon >= surf.polygons().len() {
        return Err(TraceError::StartOutside);
    }
    let init = State {
        polygon: start.polygon,
        pos: start.position.clone(),
        dir: dir.clone(),
    };
    let mut st = match resolve_start(surf, init)? {
        Ok(st) => st,
        Err(edge) => {
            return Ok(TraceResult {
                steps: Vec::new(),
                end: TraceEnd::HitBoundary { edge },
                t_total: Scalar::zero(),
                length_sq: Scalar::zero(),
                holonomy: Vec2::zero(),
                end_point: start.clone(),
            })
        }
    };
    let start_key = canon_state(surf, &st);
    let start_is_anchor = surf.anchor_at(&start_key.0).is_some();
    let dir_norm_sq = dir.norm_sq();

    // Chart locations of stopping anchors, and of each slit's endpoints
    // (transversal passes through endpoints are allowed).
    let stop_anchors: Vec<(usize, Vec2, usize)> = surf
        .anchors()
        .iter()
        .filter(|a| match cfg.stop_set {
            StopSet::Sigma => a.in_sigma,
            StopSet::AllAnchors => true,
        })
        .flat_map(|a| a.locations.iter().map(move |(p, v)| (*p, v.clone(), a.id)))
        .collect();
    let endpoint_locs: Vec<Vec<(usize, Vec2)>> = (0..surf.slits().len())
        .map(|i| {
            let (s, e) = &surf.slit_endpoint_canons()[i];
            let mut locs = surf.locations_of(s);
            locs.extend(surf.locations_of(e));
            locs
        })
        .collect();

    let mut steps: Vec<TrajectoryStep> = Vec::new();
    let mut t_done = Scalar::zero();
    let finish = |steps: Vec<TrajectoryStep>, end, t_done: Scalar, st: &State| TraceResult {
        length_sq: &(&t_done * &t_done) * &dir_norm_sq,
        holonomy: dir.scale(&t_done),
        end,
        steps,
        t_total: t_done,
        end_point: SurfacePoint::new(st.polygon, st.pos.clone()),
    };
    let within_budget = |t: &Scalar| (t * t) * &dir_norm_sq <= cfg.budget_sq;

    for iter in 0usize.. {
        if iter > 5_000_000 {
            return Err(TraceError::Internal("step limit exceeded".into()));
        }
        let poly = surf.polygon(st.polygon);
        let exit = match ray_exit(&poly.vertices, &st.pos, &st.dir) {
            Some(e) => e,
            None => {
                // On the boundary pointing outward.
                let edge = find_edge_rep(surf, &st)
                    .or_else(|| {
                        find_vertex_index(surf, st.polygon, &st.pos)
                            .map(|v| EdgeRef::new(st.polygon, v))
                    })
                    .ok_or_else(|| TraceError::Internal("no forward exit".into()))?;
                return Ok(finish(steps, TraceEnd::HitBoundary { edge }, t_done, &st));
            }
        };

        // Collect the earliest event strictly inside (0, exit.t].
        let mut best: Option<(Scalar, Event)> = None;
        let consider = |t: Scalar, ev: Event, best: &mut Option<(Scalar, Event)>| {
            let replace = match best {
                None => true,
                Some((bt, be)) => {
                    t < *bt || (t == *bt && event_rank(&ev) < event_rank(be))
                }
            };
            if replace {
                *best = Some((t, ev));
            }
        };

        // Anchor hits.
        for (p, loc, id) in stop_anchors.iter().filter(|(p, _, _)| *p == st.polygon) {
            let _ = p;
            if let Some(t) = ray_param(&st.pos, &st.dir, loc) {
                if sign(&t) > 0 && t <= exit.t {
                    consider(t, Event::Anchor(*id), &mut best);
                }
            }
        }
        // Closure: the start point acts as a pseudo-anchor when it is not
        // already a stopping anchor.
        if !start_is_anchor {
            for (p, loc) in surf.locations_of(&start_key.0) {
                if p != st.polygon {
                    continue;
                }
                if let Some(t) = ray_param(&st.pos, &st.dir, &loc) {
                    if sign(&t) > 0 && t <= exit.t {
                        consider(t, Event::MaybeClosed, &mut best);
                    }
                }
            }
        }
        // Slit interiors.
        if cfg.stop_at_slits {
            for piece in surf.slit_pieces_in(st.polygon) {
                if let Some(t) = slit_hit(
                    &st.pos,
                    &st.dir,
                    &piece.a,
                    &piece.b,
                    st.polygon,
                    &endpoint_locs[piece.slit],
                    steps.is_empty() && t_done.is_zero(),
                ) {
                    if t <= exit.t {
                        consider(t, Event::Slit(piece.slit), &mut best);
                    }
                }
            }
        }

        if let Some((t, ev)) = best {
            let t_abs = &t_done + &t;
            if !within_budget(&t_abs) {
                return Ok(finish(steps, TraceEnd::BudgetExceeded, t_done, &st));
            }
            let hit_point = &st.pos + &st.dir.scale(&t);
            let arrived = State {
                polygon: st.polygon,
                pos: hit_point.clone(),
                dir: st.dir.clone(),
            };
            match ev {
                Event::Anchor(id) => {
                    if !t.is_zero() {
                        steps.push(TrajectoryStep {
                            polygon: st.polygon,
                            a: st.pos.clone(),
                            b: hit_point,
                        });
                    }
                    return Ok(finish(steps, TraceEnd::HitAnchor { anchor: id }, t_abs, &arrived));
                }
                Event::Slit(slit) => {
                    if !t.is_zero() {
                        steps.push(TrajectoryStep {
                            polygon: st.polygon,
                            a: st.pos.clone(),
                            b: hit_point,
                        });
                    }
                    return Ok(finish(
                        steps,
                        TraceEnd::HitSlitInterior { slit },
                        t_abs,
                        &arrived,
                    ));
                }
                Event::MaybeClosed => {
                    if canon_state(surf, &arrived) == start_key {
                        steps.push(TrajectoryStep {
                            polygon: st.polygon,
                            a: st.pos.clone(),
                            b: hit_point,
                        });
                        return Ok(finish(steps, TraceEnd::Closed, t_abs, &arrived));
                    }
                    // A transparent pass through the start point: keep
                    // walking the remainder of this chord from the hit
                    // point. Progress is strictly positive, so this
                    // terminates.
                    steps.push(TrajectoryStep {
                        polygon: st.polygon,
                        a: st.pos.clone(),
                        b: hit_point.clone(),
                    });
                    t_done = t_abs;
                    st.pos = hit_point;
                    continue;
                }
            }
        }

        // No event inside the chord: advance to the exit.
        let t_abs = &t_done + &exit.t;
        if !within_budget(&t_abs) {
            return Ok(finish(steps, TraceEnd::BudgetExceeded, t_done, &st));
        }
        steps.push(TrajectoryStep {
            polygon: st.polygon,
            a: st.pos.clone(),
            b: exit.point.clone(),
        });
        t_done = t_abs;
        match exit.hit {
            ExitHit::EdgeInterior(e) => {
                let here = EdgeRef::new(st.polygon, e);
                match surf.partner(here) {
                    Some((other, flip)) => {
                        st.pos = surf.map_across(here, other, flip, &exit.point);
                        st.polygon = other.polygon;
                        if flip {
                            st.dir = -&st.dir;
                        }
                    }
                    None => {
                        let arrived = State {
                            polygon: st.polygon,
                            pos: exit.point,
                            dir: st.dir.clone(),
                        };
                        return Ok(finish(
                            steps,
                            TraceEnd::HitBoundary { edge: here },
                            t_done,
                            &arrived,
                        ));
                    }
                }
            }
            ExitHit::Vertex(v) => {
                // Non-anchor vertex: flat interior point, pass through; a
                // boundary-class vertex ends the trace.
                match surf.pass_through_vertex(st.polygon, v, &st.dir) {
                    Some((q, w, d)) => {
                        st.polygon = q;
                        st.pos = surf.polygon(q).vertices[w].clone();
                        st.dir = d;
                    }
                    None => {
                        let arrived = State {
                            polygon: st.polygon,
                            pos: exit.point,
                            dir: st.dir.clone(),
                        };
                        return Ok(finish(
                            steps,
                            TraceEnd::HitBoundary {
                                edge: EdgeRef::new(st.polygon, v),
                            },
                            t_done,
                            &arrived,
                        ));
                    }
                }
            }
        }
    }
    unreachable!()
}

/// Parameter of `loc` on the ray `pos + t * dir`, if it lies on it.
fn ray_param(pos: &Vec2, dir: &Vec2, loc: &Vec2) -> Option<Scalar> {
    let d = loc - pos;
    if !dir.cross(&d).is_zero() {
        return None;
    }
    let t = &d.dot(dir) / &dir.norm_sq();
    if sign(&t) >= 0 {
        Some(t)
    } else {
        None
    }
}

/// First parameter at which the ray meets the slit piece `[a, b]` in a
/// blocking way: transversally through the open interior, or entering a
/// collinear overlap (possibly at parameter zero for a start on the slit
/// heading along it). Returns `None` when the only contact is a transversal
/// pass through a slit endpoint.
#[allow(clippy::too_many_arguments)]
fn slit_hit(
    pos: &Vec2,
    dir: &Vec2,
    a: &Vec2,
    b: &Vec2,
    polygon: usize,
    endpoints: &[(usize, Vec2)],
    allow_zero: bool,
) -> Option<Scalar> {
    let e = b - a;
    let ap = a - pos;
    let denom = dir.cross(&e);
    if denom.is_zero() {
        // Parallel: blocking only if collinear and overlapping forward.
        if !dir.cross(&ap).is_zero() {
            return None;
        }
        let dd = dir.norm_sq();
        let ta = &ap.dot(dir) / &dd;
        let tb = &(b - pos).dot(dir) / &dd;
        let (lo, hi) = if ta <= tb { (ta, tb) } else { (tb, ta) };
        if sign(&hi) <= 0 {
            return None; // Entirely behind, or a single touch point behind.
        }
        let enter = if sign(&lo) < 0 { Scalar::zero() } else { lo };
        if enter.is_zero() && !allow_zero {
            // Mid-trace states never start on a slit heading along it;
            // treat defensively as an immediate hit anyway.
            return Some(enter);
        }
        return Some(enter);
    }
    let t = &ap.cross(&e) / &denom;
    let s = &ap.cross(dir) / &denom;
    if sign(&t) <= 0 || sign(&s) < 0 || s > scalar(1) {
        return None;
    }
    let hit = pos + &dir.scale(&t);
    if (s.is_zero() || s == scalar(1))
        && endpoints.iter().any(|(p, v)| *p == polygon && *v == hit)
    {
        return None; // Transversal pass through a slit endpoint.
    }
    Some(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::tests::square_torus;
    use crate::kernel::{Convention, GluingPair, Polygon, SlitSpec};
    use crate::scalar::{frac, scalar};

    fn v(x: i64, y: i64) -> Vec2 {
        Vec2::new(scalar(x), scalar(y))
    }

    fn cfg(budget: i64) -> TraceConfig {
        TraceConfig::new(scalar(budget))
    }

    #[test]
    fn closed_geodesic_on_torus() {
        let t = square_torus(vec![]).unwrap();
        let start = SurfacePoint::new(0, Vec2::new(frac(1, 2), frac(1, 2)));
        let r = trace(&t, &start, &v(1, 0), &cfg(100)).unwrap();
        assert_eq!(r.end, TraceEnd::Closed);
        assert_eq!(r.t_total, scalar(1));
        assert_eq!(r.length_sq, scalar(1));
        assert_eq!(r.holonomy, v(1, 0));
    }

    #[test]
    fn hits_marked_vertex() {
        let t = square_torus(vec![]).unwrap();
        let start = SurfacePoint::new(0, Vec2::new(frac(1, 2), frac(1, 2)));
        let r = trace(&t, &start, &v(1, 1), &cfg(100)).unwrap();
        assert_eq!(r.end, TraceEnd::HitAnchor { anchor: 0 });
        assert_eq!(r.length_sq, frac(1, 2));
    }

    #[test]
    fn budget_stops_before_event() {
        let t = square_torus(vec![]).unwrap();
        let start = SurfacePoint::new(0, Vec2::new(frac(1, 2), frac(1, 2)));
        let r = trace(&t, &start, &v(1, 2), &cfg(1)).unwrap();
        assert_eq!(r.end, TraceEnd::BudgetExceeded);
        assert!(r.length_sq <= scalar(1));
        // With a sufficient budget the same trajectory closes up.
        let r = trace(&t, &start, &v(1, 2), &cfg(5)).unwrap();
        assert_eq!(r.end, TraceEnd::Closed);
        assert_eq!(r.length_sq, scalar(5));
    }

    #[test]
    fn slit_blocks_transversal_crossing() {
        let t = square_torus(vec![SlitSpec::Interior {
            start: SurfacePoint::new(0, v(0, 0)),
            holonomy: Vec2::new(frac(1, 2), scalar(0)),
        }])
        .unwrap();
        let start = SurfacePoint::new(0, Vec2::new(frac(1, 4), frac(1, 2)));
        let r = trace(&t, &start, &v(0, 1), &cfg(100)).unwrap();
        assert_eq!(r.end, TraceEnd::HitSlitInterior { slit: 0 });
        assert_eq!(r.length_sq, frac(1, 4));
        // Crossing beyond the slit tip passes unhindered and closes up.
        let start = SurfacePoint::new(0, Vec2::new(frac(3, 4), frac(1, 2)));
        let r = trace(&t, &start, &v(0, 1), &cfg(100)).unwrap();
        assert_eq!(r.end, TraceEnd::Closed);
    }

    #[test]
    fn endpoint_is_transparent_transversally_but_blocks_along() {
        let t = square_torus(vec![SlitSpec::Interior {
            start: SurfacePoint::new(0, Vec2::new(frac(1, 4), frac(1, 2))),
            holonomy: Vec2::new(frac(1, 2), scalar(0)),
        }])
        .unwrap();
        // Straight through the left endpoint, transversally: hits the
        // endpoint anchor under the marked convention.
        let start = SurfacePoint::new(0, Vec2::new(frac(1, 4), frac(1, 4)));
        let r = trace(&t, &start, &v(0, 1), &cfg(100)).unwrap();
        assert_eq!(r.end, TraceEnd::HitAnchor { anchor: 0 });
        // Starting at the endpoint heading along the slit: blocked at once.
        let tip = SurfacePoint::new(0, Vec2::new(frac(1, 4), frac(1, 2)));
        let r = trace(&t, &tip, &v(1, 0), &cfg(100)).unwrap();
        assert_eq!(r.end, TraceEnd::HitSlitInterior { slit: 0 });
        assert_eq!(r.length_sq, scalar(0));
        // Head-on into the tip from outside: under the marked convention
        // the tip is a stopping anchor and wins over the slit.
        let before = SurfacePoint::new(0, Vec2::new(frac(1, 8), frac(1, 2)));
        let r = trace(&t, &before, &v(1, 0), &cfg(100)).unwrap();
        assert_eq!(r.end, TraceEnd::HitAnchor { anchor: 0 });
        assert_eq!(r.length_sq, frac(1, 64));
    }

    #[test]
    fn unmarked_tip_blocks_head_on() {
        use crate::kernel::{build_surface, EdgeRef};
        let square = Polygon::new(0, vec![v(0, 0), v(1, 0), v(1, 1), v(0, 1)]);
        let pairs = vec![
            GluingPair {
                a: EdgeRef::new(0, 0),
                b: EdgeRef::new(0, 2),
                flip: false,
            },
            GluingPair {
                a: EdgeRef::new(0, 1),
                b: EdgeRef::new(0, 3),
                flip: false,
            },
        ];
        let t = build_surface(
            vec![square],
            pairs,
            vec![SlitSpec::Interior {
                start: SurfacePoint::new(0, Vec2::new(frac(1, 4), frac(1, 2))),
                holonomy: Vec2::new(frac(1, 2), scalar(0)),
            }],
            vec![],
            Convention::SlitEndpointsUnmarked,
        )
        .unwrap();
        // The tip is not in Sigma, so the collinear trajectory is stopped
        // by the slit itself, exactly at the tip.
        let before = SurfacePoint::new(0, Vec2::new(frac(1, 8), frac(1, 2)));
        let r = trace(&t, &before, &v(1, 0), &cfg(100)).unwrap();
        assert_eq!(r.end, TraceEnd::HitSlitInterior { slit: 0 });
        assert_eq!(r.length_sq, frac(1, 64));
        // Transversally through the tip: passes and closes up.
        let below = SurfacePoint::new(0, Vec2::new(frac(1, 4), frac(1, 4)));
        let r = trace(&t, &below, &v(0, 1), &cfg(100)).unwrap();
        assert_eq!(r.end, TraceEnd::Closed);
    }

    #[test]
    fn passes_through_unmarked_flat_vertex() {
        let t = square_torus(vec![SlitSpec::Interior {
            start: SurfacePoint::new(0, Vec2::new(frac(1, 4), frac(1, 8))),
            holonomy: Vec2::new(frac(1, 4), scalar(0)),
        }])
        .unwrap();
        // Sigma holds the two slit endpoints; the vertex class is flat and
        // unmarked, so the diagonal passes through it and closes up.
        let start = SurfacePoint::new(0, Vec2::new(frac(1, 2), frac(1, 2)));
        let r = trace(&t, &start, &v(1, 1), &cfg(100)).unwrap();
        assert_eq!(r.end, TraceEnd::Closed);
        assert_eq!(r.length_sq, scalar(2));
    }

    #[test]
    fn cone_point_start_needs_sector() {
        let oct = Polygon::new(
            0,
            vec![
                v(2, 0),
                v(3, 1),
                v(3, 2),
                v(2, 3),
                v(1, 3),
                v(0, 2),
                v(0, 1),
                v(1, 0),
            ],
        );
        let pairs = (0..4)
            .map(|i| GluingPair {
                a: crate::kernel::EdgeRef::new(0, i),
                b: crate::kernel::EdgeRef::new(0, i + 4),
                flip: false,
            })
            .collect();
        let s = crate::kernel::build_surface(
            vec![oct],
            pairs,
            vec![],
            vec![],
            Convention::SlitEndpointsMarked,
        )
        .unwrap();
        let corner = SurfacePoint::new(0, v(2, 0));
        // Direction inside the corner's sector: fine.
        assert!(trace(&s, &corner, &v(0, 1), &cfg(100)).is_ok());
        // Direction outside every sector of this corner: ambiguous.
        assert!(matches!(
            trace(&s, &corner, &v(0, -1), &cfg(100)),
            Err(TraceError::AmbiguousStart)
        ));
    }

    #[test]
    fn saddle_connection_between_slit_endpoints() {
        let t = square_torus(vec![SlitSpec::Interior {
            start: SurfacePoint::new(0, v(0, 0)),
            holonomy: Vec2::new(frac(1, 2), scalar(0)),
        }])
        .unwrap();
        // From the vertex-class endpoint in direction (1, 2): lands on the
        // edge-interior endpoint (1/2, 0) after wrapping vertically twice.
        let start = SurfacePoint::new(0, v(0, 0));
        let r = trace(&t, &start, &v(1, 2), &cfg(100)).unwrap();
        assert_eq!(r.end, TraceEnd::HitAnchor { anchor: 1 });
        assert_eq!(r.length_sq, frac(5, 4));
    }
}

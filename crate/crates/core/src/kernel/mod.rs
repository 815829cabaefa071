//! Immutable slit translation surfaces.
//!
//! A [`SlitSurface`] is built once by [`build_surface`] from convex polygons,
//! edge gluings, slits, and marked points; validation computes vertex
//! classes, cone angles, the marked set, per-polygon slit pieces, genus, and
//! area. After construction the value is immutable and all operations on it
//! are pure, so surfaces can be shared freely across threads.

mod build;
pub use build::components;
pub mod format;
pub(crate) mod ray;

use crate::geom::{Mat2, Vec2};
use crate::scalar::Scalar;
use std::collections::HashMap;
use thiserror::Error;

/// A convex polygon chart. Vertices are counterclockwise and the polygon is
/// strictly convex; `id` equals the polygon's index in the surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polygon {
    pub id: usize,
    pub vertices: Vec<Vec2>,
}

impl Polygon {
    pub fn new(id: usize, vertices: Vec<Vec2>) -> Self {
        Polygon { id, vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> &Vec2 {
        &self.vertices[i % self.vertices.len()]
    }

    /// Edge `i` runs from vertex `i` to vertex `i+1 (mod n)`.
    pub fn edge_vector(&self, i: usize) -> Vec2 {
        self.vertex(i + 1) - self.vertex(i)
    }
}

/// Reference to edge `edge` of polygon `polygon`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeRef {
    pub polygon: usize,
    pub edge: usize,
}

impl EdgeRef {
    pub fn new(polygon: usize, edge: usize) -> Self {
        EdgeRef { polygon, edge }
    }
}

/// One identified pair of edges. `flip = false` glues by a translation
/// (boundary orientations reverse, so the edge vectors are opposite);
/// `flip = true` glues by a point reflection `z -> -z + c` (edge vectors
/// equal) and is only accepted on half-translation inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GluingPair {
    pub a: EdgeRef,
    pub b: EdgeRef,
    pub flip: bool,
}

/// A point in a specific polygon chart.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SurfacePoint {
    pub polygon: usize,
    pub position: Vec2,
}

impl SurfacePoint {
    pub fn new(polygon: usize, position: Vec2) -> Self {
        SurfacePoint { polygon, position }
    }
}

/// A slit: an interior straight segment given by a start point and an exact
/// holonomy vector, or a whole unglued boundary edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SlitSpec {
    Interior { start: SurfacePoint, holonomy: Vec2 },
    Boundary { edge: EdgeRef },
}

/// Whether slit endpoints belong to the marked set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    /// Slit endpoints are marked points (saddle connections may end there).
    SlitEndpointsMarked,
    /// Slit endpoints are not marked; trajectories pass through them.
    SlitEndpointsUnmarked,
}

/// Whether flip gluings are accepted (half-translation inputs only).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Structure {
    Translation,
    HalfTranslation,
}

/// A class of identified polygon corners.
#[derive(Clone, Debug)]
pub struct VertexClass {
    /// Corners `(polygon, vertex)` in counterclockwise order around the
    /// point (a cycle for interior classes, a path for boundary classes).
    pub corners: Vec<(usize, usize)>,
    /// Cone angle in multiples of pi. Meaningful for interior classes.
    pub halfturns: u64,
    pub on_boundary: bool,
}

/// Canonical name of a surface point modulo the gluing identifications.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CanonPoint {
    /// A vertex class, by index.
    Vertex(usize),
    /// An edge-interior point, expressed on the canonical (smaller) side of
    /// the gluing pair.
    Edge { edge: EdgeRef, position: Vec2 },
    /// A polygon-interior point.
    Interior { polygon: usize, position: Vec2 },
}

/// A member of the anchor table: every point that can terminate a
/// trajectory. `in_sigma` marks membership in the saddle-connection marked
/// set; slit endpoints under the unmarked convention stay in the table (the
/// cylinder machinery traces from them) but leave Sigma.
#[derive(Clone, Debug)]
pub struct Anchor {
    pub id: usize,
    pub canon: CanonPoint,
    pub in_sigma: bool,
    /// Cone order: angle `2*pi*(order+1)` for vertex classes; 0 for marked
    /// regular points. For half-translation surfaces this is only set when
    /// the cone angle is a multiple of `2*pi`; `halfturns` is always exact.
    pub order: u64,
    /// Cone angle in multiples of pi (2 for regular points).
    pub halfturns: u64,
    /// Every chart representation `(polygon, position)` of the point.
    pub locations: Vec<(usize, Vec2)>,
    pub is_cone: bool,
    pub is_slit_endpoint: bool,
    pub is_user_mark: bool,
}

/// A straight sub-segment of a slit inside one polygon chart.
#[derive(Clone, Debug)]
pub struct SlitPiece {
    pub slit: usize,
    pub polygon: usize,
    pub a: Vec2,
    pub b: Vec2,
    /// Set when the piece lies along a polygon edge (edge-carrier slits are
    /// registered on both sides of the gluing).
    pub on_edge: Option<usize>,
}

/// Singularity data of the associated stratum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumSignature {
    /// Cone orders, one per marked point, sorted descending. Order 0 entries
    /// are marked regular points.
    pub orders: Vec<u64>,
    pub genus: u64,
    /// Complex dimension `2g + |Sigma| - 1` of the stratum with marked
    /// points.
    pub dimension: u64,
}

#[derive(Debug, Error)]
pub enum KernelError {
    #[error("polygon {0} is not strictly convex counterclockwise")]
    NonConvexPolygon(usize),
    #[error("glued edges {0:?} and {1:?} have incompatible edge vectors")]
    EdgeVectorMismatch(EdgeRef, EdgeRef),
    #[error("surface is not connected")]
    DisconnectedSurface,
    #[error("vertex class has cone angle {halfturns}*pi, not a multiple of 2*pi")]
    ConeAngleNotMultipleOf2Pi { halfturns: u64 },
    #[error("slit {0} leaves the surface through a boundary edge")]
    SlitLeavesSurface(usize),
    #[error("slit {0} has zero holonomy")]
    DegenerateSlit(usize),
    #[error("slit {0} passes through a singular or marked point")]
    SlitThroughSingularity(usize),
    #[error("mark lies in the open interior of slit {0}")]
    MarkInSlitInterior(usize),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix reverses orientation")]
    OrientationReversing,
    #[error("invalid surface data: {0}")]
    Invalid(String),
}

/// A validated, immutable slit translation surface.
#[derive(Clone, Debug)]
pub struct SlitSurface {
    pub(crate) polygons: Vec<Polygon>,
    pub(crate) pairs: Vec<GluingPair>,
    pub(crate) partner: HashMap<EdgeRef, (EdgeRef, bool)>,
    pub(crate) slits: Vec<SlitSpec>,
    pub(crate) user_marks: Vec<SurfacePoint>,
    pub(crate) convention: Convention,
    pub(crate) structure: Structure,
    pub(crate) vertex_classes: Vec<VertexClass>,
    pub(crate) corner_class: HashMap<(usize, usize), usize>,
    pub(crate) anchors: Vec<Anchor>,
    pub(crate) slit_pieces: Vec<SlitPiece>,
    pub(crate) pieces_by_polygon: Vec<Vec<usize>>,
    /// Developed endpoints of each slit: (start canonical, end canonical).
    pub(crate) slit_endpoints: Vec<(CanonPoint, CanonPoint)>,
    pub(crate) slit_holonomies: Vec<Vec2>,
    pub(crate) area: Scalar,
    pub(crate) genus: Option<u64>,
    pub(crate) has_boundary: bool,
}

/// Validates raw inputs and assembles a surface. See the module docs for
/// what is derived.
pub fn build_surface(
    polygons: Vec<Polygon>,
    pairs: Vec<GluingPair>,
    slits: Vec<SlitSpec>,
    user_marks: Vec<SurfacePoint>,
    convention: Convention,
) -> Result<SlitSurface, KernelError> {
    build::build(
        polygons,
        pairs,
        slits,
        user_marks,
        convention,
        Structure::Translation,
    )
}

/// As [`build_surface`] but accepting flip gluings and cone angles that are
/// any positive multiple of pi.
pub fn build_half_translation_surface(
    polygons: Vec<Polygon>,
    pairs: Vec<GluingPair>,
    slits: Vec<SlitSpec>,
    user_marks: Vec<SurfacePoint>,
    convention: Convention,
) -> Result<SlitSurface, KernelError> {
    build::build(
        polygons,
        pairs,
        slits,
        user_marks,
        convention,
        Structure::HalfTranslation,
    )
}

impl SlitSurface {
    pub fn polygons(&self) -> &[Polygon] {
        &self.polygons
    }

    pub fn polygon(&self, id: usize) -> &Polygon {
        &self.polygons[id]
    }

    pub fn gluing_pairs(&self) -> &[GluingPair] {
        &self.pairs
    }

    /// The glued partner of an edge, with the flip flag. `None` for
    /// boundary edges.
    pub fn partner(&self, e: EdgeRef) -> Option<(EdgeRef, bool)> {
        self.partner.get(&e).copied()
    }

    pub fn is_boundary_edge(&self, e: EdgeRef) -> bool {
        !self.partner.contains_key(&e)
    }

    pub fn slits(&self) -> &[SlitSpec] {
        &self.slits
    }

    pub fn slit_holonomy(&self, slit: usize) -> &Vec2 {
        &self.slit_holonomies[slit]
    }

    /// Canonical endpoints `(start, end)` of each slit, as developed.
    pub fn slit_endpoint_canons(&self) -> &[(CanonPoint, CanonPoint)] {
        &self.slit_endpoints
    }

    pub fn user_marks(&self) -> &[SurfacePoint] {
        &self.user_marks
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn structure(&self) -> Structure {
        self.structure
    }

    pub fn vertex_classes(&self) -> &[VertexClass] {
        &self.vertex_classes
    }

    pub fn class_of_corner(&self, polygon: usize, vertex: usize) -> usize {
        self.corner_class[&(polygon, vertex)]
    }

    pub fn anchors(&self) -> &[Anchor] {
        &self.anchors
    }

    /// Anchor at a canonical point, if any.
    pub fn anchor_at(&self, canon: &CanonPoint) -> Option<&Anchor> {
        self.anchors.iter().find(|a| &a.canon == canon)
    }

    pub fn slit_pieces(&self) -> &[SlitPiece] {
        &self.slit_pieces
    }

    pub fn slit_pieces_in(&self, polygon: usize) -> impl Iterator<Item = &SlitPiece> {
        self.pieces_by_polygon[polygon]
            .iter()
            .map(move |&i| &self.slit_pieces[i])
    }

    pub fn area(&self) -> &Scalar {
        &self.area
    }

    pub fn genus(&self) -> Option<u64> {
        self.genus
    }

    pub fn has_boundary(&self) -> bool {
        self.has_boundary
    }

    /// Squared diameter upper bound: the sum over polygons of squared
    /// vertex-span. Used only to size default trace budgets.
    pub fn diameter_sq_bound(&self) -> Scalar {
        use num_traits::Zero;
        let mut acc = Scalar::zero();
        for p in &self.polygons {
            for i in 0..p.len() {
                for j in (i + 1)..p.len() {
                    let d = (&p.vertices[i] - &p.vertices[j]).norm_sq();
                    if d > acc {
                        acc = d;
                    }
                }
            }
        }
        // Worst case a segment crosses every polygon once.
        acc * crate::scalar::scalar((self.polygons.len() * self.polygons.len()) as i64)
    }

    /// Canonical representative of a chart point modulo gluing.
    pub fn canonicalize(&self, point: &SurfacePoint) -> CanonPoint {
        let poly = &self.polygons[point.polygon];
        let n = poly.len();
        for v in 0..n {
            if poly.vertices[v] == point.position {
                return CanonPoint::Vertex(self.class_of_corner(point.polygon, v));
            }
        }
        for e in 0..n {
            let a = &poly.vertices[e];
            let b = poly.vertex(e + 1);
            if crate::geom::point_in_open_segment(&point.position, a, b) {
                let here = EdgeRef::new(point.polygon, e);
                return match self.partner(here) {
                    Some((other, flip)) if other < here => {
                        let mapped = self.map_across(here, other, flip, &point.position);
                        CanonPoint::Edge {
                            edge: other,
                            position: mapped,
                        }
                    }
                    _ => CanonPoint::Edge {
                        edge: here,
                        position: point.position.clone(),
                    },
                };
            }
        }
        CanonPoint::Interior {
            polygon: point.polygon,
            position: point.position.clone(),
        }
    }

    /// Maps a point on edge `from` to the chart of its partner `to`.
    /// `flip` selects the point-reflection map.
    pub fn map_across(&self, from: EdgeRef, to: EdgeRef, flip: bool, pos: &Vec2) -> Vec2 {
        let a0 = self.polygons[from.polygon].vertex(from.edge).clone();
        let b1 = self.polygons[to.polygon].vertex(to.edge + 1).clone();
        if flip {
            // z -> -z + c with c = a0 + b1.
            &(&a0 + &b1) - pos
        } else {
            // z -> z + c with c = b1 - a0.
            &(&b1 - &a0) + pos
        }
    }

    /// Cone orders of the marked set, one entry per Sigma member, sorted
    /// descending.
    pub fn singularity_orders(&self) -> Vec<u64> {
        let mut orders: Vec<u64> = self
            .anchors
            .iter()
            .filter(|a| a.in_sigma)
            .map(|a| a.order)
            .collect();
        orders.sort_unstable_by(|a, b| b.cmp(a));
        orders
    }

    /// The stratum associated to the surface: slits are forgotten but their
    /// endpoints stay marked under the marked convention.
    pub fn stratum(&self) -> Result<StratumSignature, KernelError> {
        let genus = self.genus.ok_or_else(|| {
            KernelError::Invalid("stratum undefined for surfaces with boundary".into())
        })?;
        let orders = self.singularity_orders();
        let sigma = orders.len() as u64;
        Ok(StratumSignature {
            orders,
            genus,
            dimension: 2 * genus + sigma - 1,
        })
    }

    /// `(1, d)` with `d` the stratum dimension: the proven range of the
    /// Cantor-Bendixson rank of the direction spectrum.
    pub fn cb_rank_bounds(&self) -> Result<(u64, u64), KernelError> {
        Ok((1, self.stratum()?.dimension))
    }

    /// Applies a nonsingular orientation-preserving linear map to every
    /// coordinate. Gluing combinatorics and cone orders are unchanged.
    pub fn apply_linear(&self, m: &Mat2) -> Result<SlitSurface, KernelError> {
        use crate::scalar::sign;
        let det = m.det();
        match sign(&det) {
            0 => return Err(KernelError::SingularMatrix),
            -1 => return Err(KernelError::OrientationReversing),
            _ => {}
        }
        let polygons = self
            .polygons
            .iter()
            .map(|p| Polygon::new(p.id, p.vertices.iter().map(|v| m.apply(v)).collect()))
            .collect();
        let slits = self
            .slits
            .iter()
            .map(|s| match s {
                SlitSpec::Interior { start, holonomy } => SlitSpec::Interior {
                    start: SurfacePoint::new(start.polygon, m.apply(&start.position)),
                    holonomy: m.apply(holonomy),
                },
                SlitSpec::Boundary { edge } => SlitSpec::Boundary { edge: *edge },
            })
            .collect();
        let marks = self
            .user_marks
            .iter()
            .map(|p| SurfacePoint::new(p.polygon, m.apply(&p.position)))
            .collect();
        build::build(
            polygons,
            self.pairs.clone(),
            slits,
            marks,
            self.convention,
            self.structure,
        )
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::scalar::{frac, scalar};

    fn v(x: i64, y: i64) -> Vec2 {
        Vec2::new(scalar(x), scalar(y))
    }

    pub(crate) fn square_torus(slits: Vec<SlitSpec>) -> Result<SlitSurface, KernelError> {
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
        build_surface(vec![square], pairs, slits, vec![], Convention::SlitEndpointsMarked)
    }

    #[test]
    fn bare_torus() {
        let t = square_torus(vec![]).unwrap();
        assert_eq!(t.vertex_classes().len(), 1);
        assert_eq!(t.vertex_classes()[0].halfturns, 2);
        assert_eq!(t.genus(), Some(1));
        assert_eq!(t.area(), &scalar(1));
        // Empty marked set falls back to marking the vertex class.
        let s = t.stratum().unwrap();
        assert_eq!(s.orders, vec![0]);
        assert_eq!(s.dimension, 2);
        assert_eq!(t.cb_rank_bounds().unwrap(), (1, 2));
    }

    #[test]
    fn one_slit_torus() {
        let t = square_torus(vec![SlitSpec::Interior {
            start: SurfacePoint::new(0, v(0, 0)),
            holonomy: Vec2::new(frac(1, 2), scalar(0)),
        }])
        .unwrap();
        // Slit endpoints: the vertex class and an edge-interior point.
        let sigma: Vec<_> = t.anchors().iter().filter(|a| a.in_sigma).collect();
        assert_eq!(sigma.len(), 2);
        assert!(sigma.iter().all(|a| a.is_slit_endpoint && a.order == 0));
        let s = t.stratum().unwrap();
        assert_eq!(s.orders, vec![0, 0]);
        assert_eq!(s.dimension, 3);
        // The slit lies along the glued bottom/top edge: registered twice.
        assert_eq!(t.slit_pieces().len(), 2);
        assert!(t.slit_pieces().iter().all(|p| p.on_edge.is_some()));
    }

    #[test]
    fn unmarked_convention_keeps_endpoints_out_of_sigma() {
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
                start: SurfacePoint::new(0, Vec2::new(frac(1, 4), frac(1, 4))),
                holonomy: Vec2::new(frac(1, 4), scalar(0)),
            }],
            vec![],
            Convention::SlitEndpointsUnmarked,
        )
        .unwrap();
        // Endpoints stay in the anchor table but Sigma falls back to the
        // vertex class.
        let endpoints: Vec<_> = t.anchors().iter().filter(|a| a.is_slit_endpoint).collect();
        assert_eq!(endpoints.len(), 2);
        assert!(endpoints.iter().all(|a| !a.in_sigma));
        assert_eq!(t.singularity_orders(), vec![0]);
    }

    #[test]
    fn genus_two_from_octagon() {
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
                a: EdgeRef::new(0, i),
                b: EdgeRef::new(0, i + 4),
                flip: false,
            })
            .collect();
        let s = build_surface(vec![oct], pairs, vec![], vec![], Convention::SlitEndpointsMarked)
            .unwrap();
        assert_eq!(s.genus(), Some(2));
        assert_eq!(s.vertex_classes().len(), 1);
        assert_eq!(s.vertex_classes()[0].halfturns, 6);
        assert_eq!(s.singularity_orders(), vec![2]);
        assert_eq!(s.stratum().unwrap().dimension, 4);
    }

    #[test]
    fn rejects_bad_input() {
        let cw = Polygon::new(0, vec![v(0, 0), v(0, 1), v(1, 1), v(1, 0)]);
        assert!(matches!(
            build_surface(vec![cw], vec![], vec![], vec![], Convention::SlitEndpointsMarked),
            Err(KernelError::NonConvexPolygon(0))
        ));

        let square = Polygon::new(0, vec![v(0, 0), v(1, 0), v(1, 1), v(0, 1)]);
        let bad = vec![
            GluingPair {
                a: EdgeRef::new(0, 0),
                b: EdgeRef::new(0, 1),
                flip: false,
            },
            GluingPair {
                a: EdgeRef::new(0, 2),
                b: EdgeRef::new(0, 3),
                flip: false,
            },
        ];
        assert!(matches!(
            build_surface(vec![square], bad, vec![], vec![], Convention::SlitEndpointsMarked),
            Err(KernelError::EdgeVectorMismatch(..))
        ));
    }

    #[test]
    fn slit_errors() {
        assert!(matches!(
            square_torus(vec![SlitSpec::Interior {
                start: SurfacePoint::new(0, v(0, 0)),
                holonomy: Vec2::zero(),
            }]),
            Err(KernelError::DegenerateSlit(0))
        ));
        // A slit of holonomy (2, 0) wraps through its own start point.
        assert!(square_torus(vec![SlitSpec::Interior {
            start: SurfacePoint::new(0, v(0, 0)),
            holonomy: v(2, 0),
        }])
        .is_err());
        // Full-wrap slit with coinciding endpoints is fine.
        let t = square_torus(vec![SlitSpec::Interior {
            start: SurfacePoint::new(0, v(0, 0)),
            holonomy: v(1, 0),
        }])
        .unwrap();
        let sigma: Vec<_> = t.anchors().iter().filter(|a| a.in_sigma).collect();
        assert_eq!(sigma.len(), 1);
    }

    #[test]
    fn apply_linear_preserves_combinatorics() {
        let t = square_torus(vec![]).unwrap();
        let m = Mat2::new(scalar(1), scalar(1), scalar(0), scalar(1));
        let sheared = t.apply_linear(&m).unwrap();
        assert_eq!(sheared.genus(), Some(1));
        assert_eq!(sheared.area(), &scalar(1));
        assert!(matches!(
            t.apply_linear(&Mat2::new(scalar(1), scalar(0), scalar(0), scalar(0))),
            Err(KernelError::SingularMatrix)
        ));
        assert!(matches!(
            t.apply_linear(&Mat2::new(scalar(-1), scalar(0), scalar(0), scalar(1))),
            Err(KernelError::OrientationReversing)
        ));
    }

    #[test]
    fn format_roundtrip() {
        let t = square_torus(vec![SlitSpec::Interior {
            start: SurfacePoint::new(0, v(0, 0)),
            holonomy: Vec2::new(frac(1, 2), scalar(0)),
        }])
        .unwrap();
        let text = format::write_surface(&t);
        let back = format::read_surface(&text).unwrap();
        assert_eq!(back.polygons(), t.polygons());
        assert_eq!(back.gluing_pairs(), t.gluing_pairs());
        assert_eq!(back.slits(), t.slits());
        assert_eq!(format::write_surface(&back), text);
    }

    #[test]
    fn format_errors_carry_line_numbers() {
        let e = format::parse("slitsurf 1\npolygon 0\nv 1 bogus\n").unwrap_err();
        assert!(e.to_string().starts_with("line 3:"));
        assert!(format::parse("nonsense\n").is_err());
    }
}

//! Exact-arithmetic kernel for slit translation surfaces.
//!
//! Surfaces are unions of convex rational polygons with translation (and,
//! for half-translation surfaces, point-reflection) edge identifications,
//! carrying straight slits that act as barriers. On top of the kernel the
//! crate provides exact geodesic tracing, complete saddle-connection
//! enumeration, cylinder decomposition in a given direction, direction
//! spectra with finite-scale derived-set analysis, and builders for a
//! family of example surfaces.

pub mod scalar;
pub mod geom;
pub mod direction;
pub mod kernel;
pub mod tracer;
pub mod enumerate;
pub mod decompose;
pub mod spectrum;
pub mod construct;

pub use direction::DirectionKey;
pub use geom::{Mat2, Vec2};
pub use kernel::{
    build_half_translation_surface, build_surface, Anchor, CanonPoint, Convention, EdgeRef,
    GluingPair, KernelError, Polygon, SlitPiece, SlitSpec, SlitSurface, StratumSignature,
    Structure, SurfacePoint, VertexClass,
};
pub use scalar::Scalar;

//! Builders for the example surfaces.

mod cover;
pub mod dirichlet;

pub use cover::{double, double_cover, CoverOutcome};

use crate::geom::Vec2;
use crate::kernel::{
    build_half_translation_surface, build_surface, Convention, EdgeRef, GluingPair, KernelError,
    Polygon, SlitSpec, SlitSurface, SurfacePoint,
};
use crate::scalar::{frac, scalar};
use std::collections::BTreeMap;

fn v(x: i64, y: i64) -> Vec2 {
    Vec2::new(scalar(x), scalar(y))
}

fn unit_square(id: usize, origin: Vec2) -> Polygon {
    let offsets = [v(0, 0), v(1, 0), v(1, 1), v(0, 1)];
    Polygon::new(id, offsets.iter().map(|o| &origin + o).collect())
}

/// The unit square torus (bottom glued to top, right to left) with the
/// given slits.
pub fn torus_with_slits(
    slits: Vec<SlitSpec>,
    convention: Convention,
) -> Result<SlitSurface, KernelError> {
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
    build_surface(
        vec![unit_square(0, v(0, 0))],
        pairs,
        slits,
        vec![],
        convention,
    )
}

fn interior_slit(x: crate::Scalar, y: crate::Scalar, dx: crate::Scalar, dy: crate::Scalar) -> SlitSpec {
    SlitSpec::Interior {
        start: SurfacePoint::new(0, Vec2::new(x, y)),
        holonomy: Vec2::new(dx, dy),
    }
}

/// Staircase surface with `n + 1` unit squares: square `2k-1` sits right of
/// square `2k-2`, square `2k` sits on top of square `2k-1`. Besides the
/// shared edges, each row wraps left to right and each column bottom to
/// top. One slit runs along the bottom edge of square 0.
pub fn staircase(n: usize) -> Result<SlitSurface, KernelError> {
    let mut origins = vec![v(0, 0)];
    for i in 1..=n {
        let prev = origins[i - 1].clone();
        origins.push(if i % 2 == 1 {
            &prev + &v(1, 0)
        } else {
            &prev + &v(0, 1)
        });
    }
    let polygons: Vec<Polygon> = origins
        .iter()
        .enumerate()
        .map(|(i, o)| unit_square(i, o.clone()))
        .collect();

    // Integer grid coordinates of each square.
    let grid: Vec<(i64, i64)> = {
        let mut g = vec![(0, 0)];
        for i in 1..=n {
            let (x, y) = g[i - 1];
            g.push(if i % 2 == 1 { (x + 1, y) } else { (x, y + 1) });
        }
        g
    };
    let at = |x: i64, y: i64| grid.iter().position(|&p| p == (x, y));

    let mut pairs = Vec::new();
    // Edge order of `unit_square`: 0 bottom, 1 right, 2 top, 3 left.
    for (i, &(x, y)) in grid.iter().enumerate() {
        if let Some(j) = at(x + 1, y) {
            pairs.push(GluingPair {
                a: EdgeRef::new(i, 1),
                b: EdgeRef::new(j, 3),
                flip: false,
            });
        }
        if let Some(j) = at(x, y + 1) {
            pairs.push(GluingPair {
                a: EdgeRef::new(i, 2),
                b: EdgeRef::new(j, 0),
                flip: false,
            });
        }
    }
    // Row wraps: rightmost right edge to leftmost left edge.
    let mut rows: BTreeMap<i64, Vec<(i64, usize)>> = BTreeMap::new();
    let mut cols: BTreeMap<i64, Vec<(i64, usize)>> = BTreeMap::new();
    for (i, &(x, y)) in grid.iter().enumerate() {
        rows.entry(y).or_default().push((x, i));
        cols.entry(x).or_default().push((y, i));
    }
    for (_, mut row) in rows {
        row.sort_unstable();
        let left = row.first().unwrap().1;
        let right = row.last().unwrap().1;
        pairs.push(GluingPair {
            a: EdgeRef::new(right, 1),
            b: EdgeRef::new(left, 3),
            flip: false,
        });
    }
    for (_, mut col) in cols {
        col.sort_unstable();
        let bottom = col.first().unwrap().1;
        let top = col.last().unwrap().1;
        pairs.push(GluingPair {
            a: EdgeRef::new(bottom, 0),
            b: EdgeRef::new(top, 2),
            flip: false,
        });
    }

    let slit = SlitSpec::Interior {
        start: SurfacePoint::new(0, v(0, 0)),
        holonomy: v(1, 0),
    };
    build_surface(
        polygons,
        pairs,
        vec![slit],
        vec![],
        Convention::SlitEndpointsMarked,
    )
}

/// The pillowcase: the double of the unit square across all four edges,
/// realized as two counterclockwise squares with flip gluings. Four cone
/// points of angle pi. Optionally carries slits.
pub fn pillowcase(slits: Vec<SlitSpec>) -> Result<SlitSurface, KernelError> {
    // The mirror copy sits below the square; shared horizontal edges glue
    // by translations, the vertical edge pairs by point reflections.
    let p = unit_square(0, v(0, 0));
    let q = unit_square(1, v(0, -1));
    let pairs = vec![
        GluingPair {
            a: EdgeRef::new(0, 0),
            b: EdgeRef::new(1, 2),
            flip: false,
        },
        GluingPair {
            a: EdgeRef::new(0, 2),
            b: EdgeRef::new(1, 0),
            flip: false,
        },
        GluingPair {
            a: EdgeRef::new(0, 1),
            b: EdgeRef::new(1, 1),
            flip: true,
        },
        GluingPair {
            a: EdgeRef::new(0, 3),
            b: EdgeRef::new(1, 3),
            flip: true,
        },
    ];
    build_half_translation_surface(
        vec![p, q],
        pairs,
        slits,
        vec![],
        Convention::SlitEndpointsMarked,
    )
}

/// A flat cylinder (left and right edges of the unit square glued) whose
/// top and bottom edges are boundary slits. Input for the doubling
/// construction.
pub fn boundary_slit_square() -> Result<SlitSurface, KernelError> {
    let pairs = vec![GluingPair {
        a: EdgeRef::new(0, 1),
        b: EdgeRef::new(0, 3),
        flip: false,
    }];
    let slits = vec![
        SlitSpec::Boundary {
            edge: EdgeRef::new(0, 0),
        },
        SlitSpec::Boundary {
            edge: EdgeRef::new(0, 2),
        },
    ];
    build_surface(
        vec![unit_square(0, v(0, 0))],
        pairs,
        slits,
        vec![],
        Convention::SlitEndpointsMarked,
    )
}

/// Builds a preset surface by name. Slit coordinates of the `fig*` presets
/// live on a ninth-integer grid inside the unit torus.
pub fn preset(name: &str) -> Result<SlitSurface, KernelError> {
    match name {
        "fig1-left" => torus_with_slits(
            vec![
                interior_slit(scalar(0), scalar(0), frac(4, 9), frac(4, 3)),
                interior_slit(scalar(1), scalar(0), frac(-4, 9), frac(4, 3)),
                interior_slit(frac(1, 3), frac(4, 9), frac(1, 3), scalar(0)),
            ],
            Convention::SlitEndpointsMarked,
        ),
        "fig1-right" => torus_with_slits(
            vec![
                interior_slit(scalar(0), scalar(0), scalar(1), scalar(0)),
                interior_slit(scalar(0), scalar(0), scalar(0), scalar(1)),
            ],
            Convention::SlitEndpointsMarked,
        ),
        "fig2-left" => torus_with_slits(
            vec![
                interior_slit(scalar(0), scalar(0), frac(1, 3), scalar(1)),
                interior_slit(scalar(1), scalar(0), frac(-1, 3), scalar(1)),
            ],
            Convention::SlitEndpointsMarked,
        ),
        "fig2-right" => torus_with_slits(
            vec![interior_slit(scalar(0), scalar(0), scalar(1), scalar(0))],
            Convention::SlitEndpointsMarked,
        ),
        "one-slit-torus" => torus_with_slits(
            vec![interior_slit(scalar(0), scalar(0), frac(1, 2), scalar(0))],
            Convention::SlitEndpointsMarked,
        ),
        "pillowcase-slit" => pillowcase(vec![SlitSpec::Interior {
            start: SurfacePoint::new(0, Vec2::new(frac(1, 4), frac(1, 4))),
            holonomy: Vec2::new(frac(1, 4), scalar(0)),
        }]),
        "boundary-slit-square" => boundary_slit_square(),
        _ => {
            if let Some(n) = name.strip_prefix("sn:") {
                let n: usize = n.parse().map_err(|_| {
                    KernelError::Invalid(format!("bad staircase index in preset `{}`", name))
                })?;
                if n == 0 {
                    return Err(KernelError::Invalid("staircase index must be >= 1".into()));
                }
                return staircase(n);
            }
            Err(KernelError::Invalid(format!("unknown preset `{}`", name)))
        }
    }
}

/// Names accepted by [`preset`] (the staircase family is `sn:<n>`).
pub const PRESET_NAMES: &[&str] = &[
    "fig1-left",
    "fig1-right",
    "fig2-left",
    "fig2-right",
    "one-slit-torus",
    "pillowcase-slit",
    "boundary-slit-square",
    "sn:<n>",
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn staircase_strata() {
        // Even n: one cone of order n. Odd n: two points of order (n-1)/2.
        // Stratum dimension is n + 2 throughout.
        for n in 1..=6u64 {
            let s = staircase(n as usize).unwrap();
            let st = s.stratum().unwrap();
            let expected = if n % 2 == 0 {
                vec![n]
            } else {
                vec![(n - 1) / 2, (n - 1) / 2]
            };
            assert_eq!(st.orders, expected, "orders for n = {}", n);
            assert_eq!(st.dimension, n + 2, "dimension for n = {}", n);
            assert_eq!(s.area(), &scalar(n as i64 + 1));
        }
    }

    #[test]
    fn figure_presets_build() {
        for name in ["fig1-left", "fig1-right", "fig2-left", "fig2-right", "one-slit-torus"] {
            let s = preset(name).unwrap();
            assert_eq!(s.genus(), Some(1), "{}", name);
            assert_eq!(s.area(), &scalar(1), "{}", name);
        }
        assert!(preset("unknown").is_err());
    }

    #[test]
    fn fig_slit_counts() {
        // Three slits with six distinct endpoints minus identifications.
        let s = preset("fig1-left").unwrap();
        assert_eq!(s.slits().len(), 3);
        assert!(s.anchors().iter().all(|a| a.in_sigma));
        // Full-edge slits: endpoints collapse onto the vertex class.
        let s = preset("fig1-right").unwrap();
        assert_eq!(s.slits().len(), 2);
        assert_eq!(s.singularity_orders().len(), 1);
        // Coinciding endpoints on the right figure.
        let s = preset("fig2-right").unwrap();
        assert_eq!(s.singularity_orders(), vec![0]);
    }

    #[test]
    fn pillowcase_is_a_sphere_with_four_half_points() {
        let s = pillowcase(vec![]).unwrap();
        assert_eq!(s.genus(), Some(0));
        let halves = s
            .vertex_classes()
            .iter()
            .filter(|c| c.halfturns == 1)
            .count();
        assert_eq!(halves, 4);
        assert_eq!(s.area(), &scalar(2));
        assert!(preset("pillowcase-slit").is_ok());
    }

    #[test]
    fn boundary_square_has_boundary() {
        let s = boundary_slit_square().unwrap();
        assert!(s.has_boundary());
        assert_eq!(s.genus(), None);
        assert!(s.stratum().is_err());
    }
}

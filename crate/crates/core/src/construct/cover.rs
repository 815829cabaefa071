//! Orientation double cover and the doubling of a surface with boundary
//! slits.

use crate::kernel::{
    build_surface, components, Convention, EdgeRef, GluingPair, KernelError, Polygon,
    SlitSpec, SlitSurface, Structure, SurfacePoint,
};

#[derive(Debug)]
pub enum CoverOutcome {
    Connected(SlitSurface),
    /// The input already carried a global translation structure; the cover
    /// splits into two isomorphic copies.
    Split(Box<SlitSurface>, Box<SlitSurface>),
}

fn negated(p: &Polygon, new_id: usize) -> Polygon {
    Polygon::new(new_id, p.vertices.iter().map(|v| -v).collect())
}

struct DoubledData {
    polygons: Vec<Polygon>,
    pairs: Vec<GluingPair>,
    slits: Vec<SlitSpec>,
    marks: Vec<SurfacePoint>,
}

/// Two copies of the input, the second rotated by pi, with all gluings
/// lifted: translation pairs stay within a copy, flip pairs become
/// translation pairs across the copies.
fn doubled_data(base: &SlitSurface) -> DoubledData {
    let n = base.polygons().len();
    let mut polygons: Vec<Polygon> = base.polygons().to_vec();
    polygons.extend(base.polygons().iter().map(|p| negated(p, p.id + n)));

    let shift = |e: EdgeRef| EdgeRef::new(e.polygon + n, e.edge);
    let mut pairs = Vec::new();
    for pair in base.gluing_pairs() {
        if pair.flip {
            pairs.push(GluingPair {
                a: pair.a,
                b: shift(pair.b),
                flip: false,
            });
            pairs.push(GluingPair {
                a: shift(pair.a),
                b: pair.b,
                flip: false,
            });
        } else {
            pairs.push(*pair);
            pairs.push(GluingPair {
                a: shift(pair.a),
                b: shift(pair.b),
                flip: false,
            });
        }
    }

    let mut slits = Vec::new();
    for slit in base.slits() {
        match slit {
            SlitSpec::Interior { start, holonomy } => {
                slits.push(slit.clone());
                slits.push(SlitSpec::Interior {
                    start: SurfacePoint::new(start.polygon + n, -&start.position),
                    holonomy: -holonomy,
                });
            }
            SlitSpec::Boundary { edge } => {
                slits.push(slit.clone());
                slits.push(SlitSpec::Boundary { edge: shift(*edge) });
            }
        }
    }

    let mut marks: Vec<SurfacePoint> = base.user_marks().to_vec();
    marks.extend(
        base.user_marks()
            .iter()
            .map(|m| SurfacePoint::new(m.polygon + n, -&m.position)),
    );

    DoubledData {
        polygons,
        pairs,
        slits,
        marks,
    }
}

fn extract(
    data: &DoubledData,
    comp: &[usize],
    convention: Convention,
) -> Result<SlitSurface, KernelError> {
    let mut new_id = vec![usize::MAX; data.polygons.len()];
    for (i, &p) in comp.iter().enumerate() {
        new_id[p] = i;
    }
    let polygons = comp
        .iter()
        .map(|&p| Polygon::new(new_id[p], data.polygons[p].vertices.clone()))
        .collect();
    let remap = |e: EdgeRef| EdgeRef::new(new_id[e.polygon], e.edge);
    let pairs = data
        .pairs
        .iter()
        .filter(|pr| new_id[pr.a.polygon] != usize::MAX)
        .map(|pr| GluingPair {
            a: remap(pr.a),
            b: remap(pr.b),
            flip: pr.flip,
        })
        .collect();
    let slits = data
        .slits
        .iter()
        .filter(|s| match s {
            SlitSpec::Interior { start, .. } => new_id[start.polygon] != usize::MAX,
            SlitSpec::Boundary { edge } => new_id[edge.polygon] != usize::MAX,
        })
        .map(|s| match s {
            SlitSpec::Interior { start, holonomy } => SlitSpec::Interior {
                start: SurfacePoint::new(new_id[start.polygon], start.position.clone()),
                holonomy: holonomy.clone(),
            },
            SlitSpec::Boundary { edge } => SlitSpec::Boundary { edge: remap(*edge) },
        })
        .collect();
    let marks = data
        .marks
        .iter()
        .filter(|m| new_id[m.polygon] != usize::MAX)
        .map(|m| SurfacePoint::new(new_id[m.polygon], m.position.clone()))
        .collect();
    build_surface(polygons, pairs, slits, marks, convention)
}

/// Verifies the cone angles of the cover against the branching rule: an
/// odd-angle class of the base lifts to a single class of doubled angle; an
/// even-angle class lifts to two classes of the same angle.
fn verify_cover(
    base: &SlitSurface,
    find: impl Fn(usize, usize) -> Option<(usize, usize, u64)>, // corner -> (surface, class, halfturns)
) -> Result<(), KernelError> {
    let n = base.polygons().len();
    for class in base.vertex_classes() {
        if class.on_boundary {
            continue;
        }
        let (p, v) = class.corners[0];
        let a = find(p, v).ok_or_else(|| {
            KernelError::Invalid("cover verification: missing corner".into())
        })?;
        let b = find(p + n, v).ok_or_else(|| {
            KernelError::Invalid("cover verification: missing corner".into())
        })?;
        let h = class.halfturns;
        let ok = if h % 2 == 1 {
            a == b && a.2 == 2 * h
        } else {
            (a.0, a.1) != (b.0, b.1) && a.2 == h && b.2 == h
        };
        if !ok {
            return Err(KernelError::Invalid(format!(
                "cover branching mismatch at a class of angle {}*pi (lifted to {}*pi / {}*pi)",
                h, a.2, b.2
            )));
        }
    }
    Ok(())
}

/// The canonical (orientation) double cover of a half-translation surface.
/// Odd-order singularities are branch points; their flat preimages are
/// marked. A base that is secretly a translation surface yields a split
/// cover.
pub fn double_cover(base: &SlitSurface) -> Result<CoverOutcome, KernelError> {
    let mut data = doubled_data(base);
    // Mark the flat preimage of every simple half-turn point; higher odd
    // angles lift to honest cone points and need no mark.
    for class in base.vertex_classes() {
        if !class.on_boundary && class.halfturns == 1 {
            let (p, v) = class.corners[0];
            data.marks
                .push(SurfacePoint::new(p, base.polygon(p).vertices[v].clone()));
        }
    }

    let comps = components(&data.polygons, &data.pairs);
    match comps.len() {
        1 => {
            let surf = build_surface(
                data.polygons.clone(),
                data.pairs.clone(),
                data.slits.clone(),
                data.marks.clone(),
                base.convention(),
            )?;
            verify_cover(base, |p, v| {
                let ci = surf.class_of_corner(p, v);
                Some((0, ci, surf.vertex_classes()[ci].halfturns))
            })?;
            Ok(CoverOutcome::Connected(surf))
        }
        2 => {
            let first = extract(&data, &comps[0], base.convention())?;
            let second = extract(&data, &comps[1], base.convention())?;
            let in_first: Vec<bool> = {
                let mut f = vec![false; data.polygons.len()];
                for &p in &comps[0] {
                    f[p] = true;
                }
                f
            };
            let pos_in = |comp: &[usize], p: usize| comp.iter().position(|&q| q == p).unwrap();
            verify_cover(base, |p, v| {
                if p >= data.polygons.len() {
                    return None;
                }
                let (surf, tag, local) = if in_first[p] {
                    (&first, 0usize, pos_in(&comps[0], p))
                } else {
                    (&second, 1usize, pos_in(&comps[1], p))
                };
                let ci = surf.class_of_corner(local, v);
                Some((tag, ci, surf.vertex_classes()[ci].halfturns))
            })?;
            Ok(CoverOutcome::Split(Box::new(first), Box::new(second)))
        }
        k => Err(KernelError::Invalid(format!(
            "double cover split into {} components",
            k
        ))),
    }
}

/// Doubles a translation surface with boundary slits: glues a rotated copy
/// along each boundary slit. Boundary slits become ordinary interior slits
/// of the closed result.
pub fn double(base: &SlitSurface) -> Result<SlitSurface, KernelError> {
    if base.structure() != Structure::Translation {
        return Err(KernelError::Invalid(
            "doubling expects a translation surface".into(),
        ));
    }
    let boundary_slits: Vec<EdgeRef> = base
        .slits()
        .iter()
        .filter_map(|s| match s {
            SlitSpec::Boundary { edge } => Some(*edge),
            _ => None,
        })
        .collect();
    if boundary_slits.is_empty() {
        return Err(KernelError::Invalid(
            "doubling expects at least one boundary slit".into(),
        ));
    }
    let n = base.polygons().len();
    let mut data = doubled_data(base);
    // Replace the two boundary-slit copies by one interior slit along the
    // now-glued edge.
    data.slits.retain(|s| matches!(s, SlitSpec::Interior { .. }));
    for edge in boundary_slits {
        data.pairs.push(GluingPair {
            a: edge,
            b: EdgeRef::new(edge.polygon + n, edge.edge),
            flip: false,
        });
        let tail = base.polygon(edge.polygon).vertices[edge.edge].clone();
        data.slits.push(SlitSpec::Interior {
            start: SurfacePoint::new(edge.polygon, tail),
            holonomy: base.polygon(edge.polygon).edge_vector(edge.edge),
        });
    }
    let surf = build_surface(
        data.polygons,
        data.pairs,
        data.slits,
        data.marks,
        base.convention(),
    )?;
    Ok(surf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{boundary_slit_square, pillowcase, preset};
    use crate::scalar::scalar;

    #[test]
    fn pillowcase_cover_is_marked_torus() {
        let base = pillowcase(vec![]).unwrap();
        match double_cover(&base).unwrap() {
            CoverOutcome::Connected(c) => {
                assert_eq!(c.genus(), Some(1));
                assert_eq!(c.area(), &scalar(4));
                // Four branch points, all flat and marked.
                assert_eq!(c.singularity_orders(), vec![0, 0, 0, 0]);
            }
            CoverOutcome::Split(..) => panic!("pillowcase cover must be connected"),
        }
    }

    #[test]
    fn translation_input_splits() {
        // A torus presented with no flips: the cover falls apart into two
        // copies of the torus.
        let base = crate::kernel::tests::square_torus(vec![]).unwrap();
        match double_cover(&base).unwrap() {
            CoverOutcome::Split(a, b) => {
                assert_eq!(a.genus(), Some(1));
                assert_eq!(b.genus(), Some(1));
            }
            CoverOutcome::Connected(_) => panic!("expected a split cover"),
        }
    }

    #[test]
    fn slit_pillowcase_cover() {
        let base = preset("pillowcase-slit").unwrap();
        match double_cover(&base).unwrap() {
            CoverOutcome::Connected(c) => {
                assert_eq!(c.genus(), Some(1));
                assert_eq!(c.slits().len(), 2);
            }
            CoverOutcome::Split(..) => panic!("expected a connected cover"),
        }
    }

    #[test]
    fn doubled_cylinder_is_torus() {
        let base = boundary_slit_square().unwrap();
        let d = double(&base).unwrap();
        assert_eq!(d.genus(), Some(1));
        assert_eq!(d.area(), &scalar(2));
        assert_eq!(d.slits().len(), 2);
        assert!(!d.has_boundary());
        // Both former boundary circles are flat marked classes.
        assert_eq!(d.singularity_orders(), vec![0, 0]);
    }
}

//! Surface assembly and validation.

use super::ray::{ray_exit, ExitHit};
use super::*;
use crate::geom::{
    is_strictly_convex_ccw, point_in_convex, point_in_open_segment, point_on_segment,
    twice_signed_area, Vec2,
};
use crate::scalar::{scalar, sign, Scalar};
use num_traits::Zero;
use std::collections::{HashMap, HashSet};

pub(super) fn build(
    polygons: Vec<Polygon>,
    pairs: Vec<GluingPair>,
    slits: Vec<SlitSpec>,
    user_marks: Vec<SurfacePoint>,
    convention: Convention,
    structure: Structure,
) -> Result<SlitSurface, KernelError> {
    if polygons.is_empty() {
        return Err(KernelError::Invalid("no polygons".into()));
    }
    for (i, p) in polygons.iter().enumerate() {
        if p.id != i {
            return Err(KernelError::Invalid(format!(
                "polygon ids must be consecutive from 0; found id {} at position {}",
                p.id, i
            )));
        }
        if !is_strictly_convex_ccw(&p.vertices) {
            return Err(KernelError::NonConvexPolygon(p.id));
        }
    }

    let partner = check_pairs(&polygons, &pairs, structure)?;
    check_connected(&polygons, &partner)?;
    let (vertex_classes, corner_class) = build_classes(&polygons, &partner);
    for class in &vertex_classes {
        if !class.on_boundary {
            match structure {
                Structure::Translation => {
                    if class.halfturns % 2 != 0 {
                        return Err(KernelError::ConeAngleNotMultipleOf2Pi {
                            halfturns: class.halfturns,
                        });
                    }
                }
                Structure::HalfTranslation => {
                    if class.halfturns == 0 {
                        return Err(KernelError::Invalid(
                            "vertex class with zero cone angle".into(),
                        ));
                    }
                }
            }
        }
    }

    let has_boundary = polygons
        .iter()
        .any(|p| (0..p.len()).any(|e| !partner.contains_key(&EdgeRef::new(p.id, e))));
    let genus = if has_boundary {
        None
    } else {
        Some(compute_genus(&polygons, &pairs, &vertex_classes, structure)?)
    };

    let mut area = Scalar::zero();
    for p in &polygons {
        area += twice_signed_area(&p.vertices);
    }
    area /= scalar(2);

    // Provisional surface: enough structure for slit tracing and
    // canonicalization; slit pieces and anchors filled in below.
    let mut surf = SlitSurface {
        pieces_by_polygon: vec![Vec::new(); polygons.len()],
        polygons,
        pairs,
        partner,
        slits,
        user_marks,
        convention,
        structure,
        vertex_classes,
        corner_class,
        anchors: Vec::new(),
        slit_pieces: Vec::new(),
        slit_endpoints: Vec::new(),
        slit_holonomies: Vec::new(),
        area,
        genus,
        has_boundary,
    };

    // Every unglued edge must carry a boundary slit: the boundary of a slit
    // surface consists of slits.
    let mut boundary_slit_edges: HashSet<EdgeRef> = HashSet::new();
    for s in &surf.slits {
        if let SlitSpec::Boundary { edge } = s {
            if !boundary_slit_edges.insert(*edge) {
                return Err(KernelError::Invalid(format!(
                    "edge {:?} carries two boundary slits",
                    edge
                )));
            }
        }
    }
    for p in &surf.polygons {
        for e in 0..p.len() {
            let er = EdgeRef::new(p.id, e);
            let unglued = !surf.partner.contains_key(&er);
            if unglued && !boundary_slit_edges.contains(&er) {
                return Err(KernelError::Invalid(format!(
                    "boundary edge {:?} is not covered by a boundary slit",
                    er
                )));
            }
            if !unglued && boundary_slit_edges.contains(&er) {
                return Err(KernelError::Invalid(format!(
                    "boundary slit on glued edge {:?}",
                    er
                )));
            }
        }
    }

    trace_all_slits(&mut surf)?;
    check_marks(&surf)?;
    surf.anchors = build_anchors(&surf);
    Ok(surf)
}

fn check_pairs(
    polygons: &[Polygon],
    pairs: &[GluingPair],
    structure: Structure,
) -> Result<HashMap<EdgeRef, (EdgeRef, bool)>, KernelError> {
    let mut partner = HashMap::new();
    let in_range =
        |e: EdgeRef| e.polygon < polygons.len() && e.edge < polygons[e.polygon].len();
    for pair in pairs {
        if !in_range(pair.a) || !in_range(pair.b) {
            return Err(KernelError::Invalid(format!(
                "gluing references a nonexistent edge: {:?}",
                pair
            )));
        }
        if pair.a == pair.b {
            // A self-glued edge has a fixed point at its midpoint, which
            // would put a singularity in the interior of an edge.
            return Err(KernelError::Invalid(format!(
                "edge {:?} glued to itself",
                pair.a
            )));
        }
        if pair.flip && structure == Structure::Translation {
            return Err(KernelError::Invalid(format!(
                "flip gluing {:?} on a translation surface",
                pair
            )));
        }
        let va = polygons[pair.a.polygon].edge_vector(pair.a.edge);
        let vb = polygons[pair.b.polygon].edge_vector(pair.b.edge);
        // Both polygons are counterclockwise, so a translation identifies
        // edges whose traversal vectors are opposite; a flip `z -> -z + c`
        // identifies edges with equal traversal vectors.
        let ok = if pair.flip { va == vb } else { va == -&vb };
        if !ok {
            return Err(KernelError::EdgeVectorMismatch(pair.a, pair.b));
        }
        for (x, y) in [(pair.a, pair.b), (pair.b, pair.a)] {
            if partner.insert(x, (y, pair.flip)).is_some() {
                return Err(KernelError::Invalid(format!(
                    "edge {:?} appears in two gluing pairs",
                    x
                )));
            }
        }
    }
    Ok(partner)
}

fn check_connected(
    polygons: &[Polygon],
    partner: &HashMap<EdgeRef, (EdgeRef, bool)>,
) -> Result<(), KernelError> {
    let mut seen = vec![false; polygons.len()];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(p) = stack.pop() {
        for e in 0..polygons[p].len() {
            if let Some((other, _)) = partner.get(&EdgeRef::new(p, e)) {
                if !seen[other.polygon] {
                    seen[other.polygon] = true;
                    stack.push(other.polygon);
                }
            }
        }
    }
    if seen.iter().all(|&s| s) {
        Ok(())
    } else {
        Err(KernelError::DisconnectedSurface)
    }
}

/// Connected components of the gluing graph, as sorted polygon id lists.
pub fn components(polygons: &[Polygon], pairs: &[GluingPair]) -> Vec<Vec<usize>> {
    let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
    for pair in pairs {
        adj.entry(pair.a.polygon).or_default().push(pair.b.polygon);
        adj.entry(pair.b.polygon).or_default().push(pair.a.polygon);
    }
    let mut seen = vec![false; polygons.len()];
    let mut out = Vec::new();
    for start in 0..polygons.len() {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(p) = stack.pop() {
            for &q in adj.get(&p).map(|v| v.as_slice()).unwrap_or(&[]) {
                if !seen[q] {
                    seen[q] = true;
                    comp.push(q);
                    stack.push(q);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Counterclockwise corner neighbor: rotate around the vertex of corner
/// `(p, v)` by crossing the incoming edge `v - 1`.
fn ccw_next(
    polygons: &[Polygon],
    partner: &HashMap<EdgeRef, (EdgeRef, bool)>,
    p: usize,
    v: usize,
) -> Option<((usize, usize), bool)> {
    let n = polygons[p].len();
    let e = EdgeRef::new(p, (v + n - 1) % n);
    let (other, flip) = *partner.get(&e)?;
    Some(((other.polygon, other.edge), flip))
}

/// Clockwise corner neighbor: cross the outgoing edge `v`.
fn cw_next(
    polygons: &[Polygon],
    partner: &HashMap<EdgeRef, (EdgeRef, bool)>,
    p: usize,
    v: usize,
) -> Option<((usize, usize), bool)> {
    let e = EdgeRef::new(p, v);
    let (other, flip) = *partner.get(&e)?;
    let m = polygons[other.polygon].len();
    Some(((other.polygon, (other.edge + 1) % m), flip))
}

fn build_classes(
    polygons: &[Polygon],
    partner: &HashMap<EdgeRef, (EdgeRef, bool)>,
) -> (Vec<VertexClass>, HashMap<(usize, usize), usize>) {
    let mut classes = Vec::new();
    let mut corner_class = HashMap::new();
    for p in 0..polygons.len() {
        for v in 0..polygons[p].len() {
            if corner_class.contains_key(&(p, v)) {
                continue;
            }
            // Walk counterclockwise until closure or boundary.
            let mut corners = vec![(p, v)];
            let mut on_boundary = false;
            let (mut cp, mut cv) = (p, v);
            loop {
                match ccw_next(polygons, partner, cp, cv) {
                    Some((next, _)) => {
                        if next == (p, v) {
                            break;
                        }
                        corners.push(next);
                        (cp, cv) = next;
                    }
                    None => {
                        on_boundary = true;
                        break;
                    }
                }
            }
            if on_boundary {
                // Extend clockwise to find the full boundary-to-boundary path.
                let (mut cp, mut cv) = (p, v);
                let mut before = Vec::new();
                while let Some((next, _)) = cw_next(polygons, partner, cp, cv) {
                    before.push(next);
                    (cp, cv) = next;
                }
                before.reverse();
                before.extend(corners);
                corners = before;
            }
            let halfturns = cone_halfturns(polygons, partner, &corners, on_boundary);
            let idx = classes.len();
            for &c in &corners {
                corner_class.insert(c, idx);
            }
            classes.push(VertexClass {
                corners,
                halfturns,
                on_boundary,
            });
        }
    }
    (classes, corner_class)
}

/// Cone angle of a corner class in multiples of pi, by counting how often
/// the concatenated corner sectors cross a fixed reference line. Flip
/// gluings negate the tracked direction, which preserves counterclockwise
/// sweeps, so the count is exact for half-translation surfaces too.
fn cone_halfturns(
    polygons: &[Polygon],
    partner: &HashMap<EdgeRef, (EdgeRef, bool)>,
    corners: &[(usize, usize)],
    on_boundary: bool,
) -> u64 {
    let dirs = |p: usize, v: usize| {
        let poly = &polygons[p];
        let n = poly.len();
        let d1 = poly.edge_vector(v);
        let d2 = poly.vertex((v + n - 1) % n) - poly.vertex(v);
        (d1, d2)
    };
    // Reference line through the first corner's outgoing edge direction.
    let (r, _) = dirs(corners[0].0, corners[0].1);
    let neg_r = -&r;
    let in_sector = |u: &Vec2, w: &Vec2, x: &Vec2| {
        x.same_ray(w) || (sign(&u.cross(x)) > 0 && sign(&x.cross(w)) > 0)
    };
    let mut s = 1i32;
    let mut count = 0u64;
    for (i, &(p, v)) in corners.iter().enumerate() {
        let (d1, d2) = dirs(p, v);
        let (u, w) = if s > 0 { (d1, d2) } else { (-&d1, -&d2) };
        if in_sector(&u, &w, &r) {
            count += 1;
        }
        if in_sector(&u, &w, &neg_r) {
            count += 1;
        }
        if i + 1 < corners.len() || !on_boundary {
            if let Some((_, flip)) = ccw_next(polygons, partner, p, v) {
                if flip {
                    s = -s;
                }
            }
        }
    }
    count
}

fn compute_genus(
    polygons: &[Polygon],
    pairs: &[GluingPair],
    classes: &[VertexClass],
    structure: Structure,
) -> Result<u64, KernelError> {
    let v = classes.len() as i64;
    let e = pairs.len() as i64;
    let f = polygons.len() as i64;
    let chi = v - e + f;
    if chi > 2 || chi % 2 != 0 {
        return Err(KernelError::Invalid(format!(
            "bad Euler characteristic {}",
            chi
        )));
    }
    let g = ((2 - chi) / 2) as u64;
    // Gauss-Bonnet consistency: total angle excess matches the genus.
    let excess: i64 = classes
        .iter()
        .map(|c| c.halfturns as i64 - 2)
        .sum();
    let expected = 4 * g as i64 - 4;
    let ok = match structure {
        Structure::Translation | Structure::HalfTranslation => excess == expected,
    };
    if !ok {
        return Err(KernelError::Invalid(format!(
            "cone angle bookkeeping: total excess {}*pi, expected {}*pi",
            excess, expected
        )));
    }
    Ok(g)
}

impl SlitSurface {
    /// Continues a direction through a flat (or marked regular) vertex:
    /// rotates around the vertex class of corner `(polygon, vertex)` to the
    /// unique corner whose sector contains the transported direction.
    /// Returns the corner and the direction in its chart. `None` for
    /// boundary classes or when no sector matches (cone point with the
    /// direction unresolvable, only possible on misuse).
    pub(crate) fn pass_through_vertex(
        &self,
        polygon: usize,
        vertex: usize,
        dir: &Vec2,
    ) -> Option<(usize, usize, Vec2)> {
        let class = &self.vertex_classes[self.corner_class[&(polygon, vertex)]];
        if class.on_boundary {
            return None;
        }
        let (mut p, mut v) = (polygon, vertex);
        let mut d = dir.clone();
        for _ in 0..class.corners.len() {
            let poly = &self.polygons[p];
            let n = poly.len();
            let d1 = poly.edge_vector(v);
            let d2 = poly.vertex((v + n - 1) % n) - poly.vertex(v);
            if d.same_ray(&d1) || (sign(&d1.cross(&d)) > 0 && sign(&d.cross(&d2)) > 0) {
                return Some((p, v, d));
            }
            let e = EdgeRef::new(p, (v + n - 1) % n);
            let (other, flip) = self.partner(e)?;
            (p, v) = (other.polygon, other.edge);
            if flip {
                d = -&d;
            }
        }
        None
    }

    /// All chart representations of a canonical point.
    pub fn locations_of(&self, canon: &CanonPoint) -> Vec<(usize, Vec2)> {
        match canon {
            CanonPoint::Vertex(ci) => self.vertex_classes[*ci]
                .corners
                .iter()
                .map(|&(p, v)| (p, self.polygons[p].vertices[v].clone()))
                .collect(),
            CanonPoint::Edge { edge, position } => {
                let mut out = vec![(edge.polygon, position.clone())];
                if let Some((other, flip)) = self.partner(*edge) {
                    out.push((
                        other.polygon,
                        self.map_across(*edge, other, flip, position),
                    ));
                }
                out
            }
            CanonPoint::Interior { polygon, position } => {
                vec![(*polygon, position.clone())]
            }
        }
    }
}

struct SlitTraceOut {
    /// Pieces in the charts actually traversed (edge mirrors added later).
    pieces: Vec<SlitPiece>,
    /// Canonical points where the trace crossed a chart boundary, with the
    /// global parameter in (0, 1).
    crossings: Vec<(Scalar, CanonPoint)>,
    end: SurfacePoint,
}

fn trace_slit(
    surf: &SlitSurface,
    slit_idx: usize,
    start: &SurfacePoint,
    holonomy: &Vec2,
) -> Result<SlitTraceOut, KernelError> {
    if holonomy.is_zero() {
        return Err(KernelError::DegenerateSlit(slit_idx));
    }
    if start.polygon >= surf.polygons.len()
        || !point_in_convex(&start.position, &surf.polygons[start.polygon].vertices)
    {
        return Err(KernelError::Invalid(format!(
            "slit {} starts outside its polygon",
            slit_idx
        )));
    }
    let mut p = start.polygon;
    let mut pos = start.position.clone();
    let mut rem = holonomy.clone();
    let mut done = Scalar::zero();
    let one = scalar(1);
    let mut pieces = Vec::new();
    let mut crossings = Vec::new();
    for _ in 0..100_000 {
        let exit = ray_exit(&surf.polygons[p].vertices, &pos, &rem)
            .ok_or(KernelError::SlitLeavesSurface(slit_idx))?;
        if exit.t >= one {
            let end = &pos + &rem;
            pieces.push(SlitPiece {
                slit: slit_idx,
                polygon: p,
                a: pos,
                b: end.clone(),
                on_edge: None,
            });
            return Ok(SlitTraceOut {
                pieces,
                crossings,
                end: SurfacePoint::new(p, end),
            });
        }
        pieces.push(SlitPiece {
            slit: slit_idx,
            polygon: p,
            a: pos.clone(),
            b: exit.point.clone(),
            on_edge: None,
        });
        done = &done + &(&exit.t * &(&one - &done));
        rem = rem.scale(&(&one - &exit.t));
        match exit.hit {
            ExitHit::EdgeInterior(e) => {
                let here = EdgeRef::new(p, e);
                let (other, flip) = surf
                    .partner(here)
                    .ok_or(KernelError::SlitLeavesSurface(slit_idx))?;
                crossings.push((
                    done.clone(),
                    surf.canonicalize(&SurfacePoint::new(p, exit.point.clone())),
                ));
                pos = surf.map_across(here, other, flip, &exit.point);
                p = other.polygon;
                if flip {
                    rem = -&rem;
                }
            }
            ExitHit::Vertex(v) => {
                let class_idx = surf.class_of_corner(p, v);
                let class = &surf.vertex_classes[class_idx];
                if class.on_boundary {
                    return Err(KernelError::SlitLeavesSurface(slit_idx));
                }
                let flat = match surf.structure {
                    Structure::Translation => class.halfturns == 2,
                    Structure::HalfTranslation => class.halfturns == 2,
                };
                if !flat {
                    return Err(KernelError::SlitThroughSingularity(slit_idx));
                }
                crossings.push((done.clone(), CanonPoint::Vertex(class_idx)));
                let (q, w, d) = surf
                    .pass_through_vertex(p, v, &rem)
                    .ok_or(KernelError::SlitThroughSingularity(slit_idx))?;
                p = q;
                pos = surf.polygons[q].vertices[w].clone();
                rem = d;
            }
        }
    }
    Err(KernelError::Invalid(format!(
        "slit {} trace exceeded the step limit",
        slit_idx
    )))
}

/// Edge index the closed segment `[a, b]` lies on, if any.
fn edge_of_piece(poly: &Polygon, a: &Vec2, b: &Vec2) -> Option<usize> {
    (0..poly.len()).find(|&i| {
        let va = &poly.vertices[i];
        let vb = poly.vertex(i + 1);
        point_on_segment(a, va, vb) && point_on_segment(b, va, vb)
    })
}

fn trace_all_slits(surf: &mut SlitSurface) -> Result<(), KernelError> {
    let mut all_pieces: Vec<SlitPiece> = Vec::new();
    let mut endpoints = Vec::new();
    let mut holonomies = Vec::new();
    for (idx, slit) in surf.slits.clone().iter().enumerate() {
        let (pieces, crossings, start_pt, end_pt, holonomy) = match slit {
            SlitSpec::Interior { start, holonomy } => {
                let out = trace_slit(surf, idx, start, holonomy)?;
                (out.pieces, out.crossings, start.clone(), out.end, holonomy.clone())
            }
            SlitSpec::Boundary { edge } => {
                let poly = &surf.polygons[edge.polygon];
                let a = poly.vertices[edge.edge].clone();
                let b = poly.vertex(edge.edge + 1).clone();
                let piece = SlitPiece {
                    slit: idx,
                    polygon: edge.polygon,
                    a: a.clone(),
                    b: b.clone(),
                    on_edge: Some(edge.edge),
                };
                (
                    vec![piece],
                    Vec::new(),
                    SurfacePoint::new(edge.polygon, a),
                    SurfacePoint::new(edge.polygon, b),
                    poly.edge_vector(edge.edge),
                )
            }
        };
        let start_canon = surf.canonicalize(&start_pt);
        let end_canon = surf.canonicalize(&end_pt);
        // Neither endpoint may lie in the slit's own open interior.
        for canon in [&start_canon, &end_canon] {
            for (t, crossing) in &crossings {
                if crossing == canon && sign(t) > 0 && *t < scalar(1) {
                    return Err(KernelError::Invalid(format!(
                        "slit {} passes through its own endpoint",
                        idx
                    )));
                }
            }
            for (cp, cpos) in surf.locations_of(canon) {
                for piece in pieces.iter().filter(|pc| pc.polygon == cp) {
                    if point_in_open_segment(&cpos, &piece.a, &piece.b) {
                        return Err(KernelError::Invalid(format!(
                            "slit {} contains one of its endpoints in its interior",
                            idx
                        )));
                    }
                }
            }
        }
        endpoints.push((start_canon, end_canon));
        holonomies.push(holonomy);
        // Register edge-carrier pieces on both sides of the gluing.
        let mut expanded = Vec::new();
        for mut piece in pieces {
            piece.on_edge = edge_of_piece(&surf.polygons[piece.polygon], &piece.a, &piece.b);
            if let Some(e) = piece.on_edge {
                let here = EdgeRef::new(piece.polygon, e);
                if let Some((other, flip)) = surf.partner(here) {
                    expanded.push(SlitPiece {
                        slit: idx,
                        polygon: other.polygon,
                        a: surf.map_across(here, other, flip, &piece.a),
                        b: surf.map_across(here, other, flip, &piece.b),
                        on_edge: Some(other.edge),
                    });
                }
            }
            expanded.push(piece);
        }
        all_pieces.extend(expanded);
    }
    let mut by_polygon = vec![Vec::new(); surf.polygons.len()];
    for (i, piece) in all_pieces.iter().enumerate() {
        by_polygon[piece.polygon].push(i);
    }
    surf.slit_pieces = all_pieces;
    surf.pieces_by_polygon = by_polygon;
    surf.slit_endpoints = endpoints;
    surf.slit_holonomies = holonomies;
    Ok(())
}

fn check_marks(surf: &SlitSurface) -> Result<(), KernelError> {
    for mark in &surf.user_marks {
        if mark.polygon >= surf.polygons.len()
            || !point_in_convex(&mark.position, &surf.polygons[mark.polygon].vertices)
        {
            return Err(KernelError::Invalid(format!(
                "mark {:?} lies outside its polygon",
                mark
            )));
        }
        let canon = surf.canonicalize(mark);
        for (p, pos) in surf.locations_of(&canon) {
            for piece in surf.slit_pieces_in(p) {
                if point_in_open_segment(&pos, &piece.a, &piece.b) {
                    return Err(KernelError::MarkInSlitInterior(piece.slit));
                }
            }
        }
    }
    Ok(())
}

fn build_anchors(surf: &SlitSurface) -> Vec<Anchor> {
    struct Acc {
        canon: CanonPoint,
        in_sigma: bool,
        halfturns: u64,
        is_cone: bool,
        is_slit_endpoint: bool,
        is_user_mark: bool,
    }
    let mut accs: Vec<Acc> = Vec::new();
    let upsert = |accs: &mut Vec<Acc>, canon: CanonPoint, halfturns: u64| -> usize {
        if let Some(i) = accs.iter().position(|a| a.canon == canon) {
            i
        } else {
            accs.push(Acc {
                canon,
                in_sigma: false,
                halfturns,
                is_cone: false,
                is_slit_endpoint: false,
                is_user_mark: false,
            });
            accs.len() - 1
        }
    };
    let class_halfturns = |surf: &SlitSurface, canon: &CanonPoint| match canon {
        CanonPoint::Vertex(ci) => surf.vertex_classes[*ci].halfturns,
        _ => 2,
    };

    for (ci, class) in surf.vertex_classes.iter().enumerate() {
        if !class.on_boundary && class.halfturns != 2 {
            let i = upsert(&mut accs, CanonPoint::Vertex(ci), class.halfturns);
            accs[i].in_sigma = true;
            accs[i].is_cone = true;
        }
    }
    let marked = surf.convention == Convention::SlitEndpointsMarked;
    for (start, end) in surf.slit_endpoints.clone() {
        for canon in [start, end] {
            let h = class_halfturns(surf, &canon);
            let i = upsert(&mut accs, canon, h);
            accs[i].is_slit_endpoint = true;
            if marked {
                accs[i].in_sigma = true;
            }
        }
    }
    for mark in &surf.user_marks {
        let canon = surf.canonicalize(mark);
        let h = class_halfturns(surf, &canon);
        let i = upsert(&mut accs, canon, h);
        accs[i].is_user_mark = true;
        accs[i].in_sigma = true;
    }
    if !accs.iter().any(|a| a.in_sigma) {
        // An empty marked set admits no saddle connections at all; mark
        // every interior vertex class as a regular marked point instead.
        for (ci, class) in surf.vertex_classes.iter().enumerate() {
            if !class.on_boundary {
                let i = upsert(&mut accs, CanonPoint::Vertex(ci), class.halfturns);
                accs[i].in_sigma = true;
            }
        }
    }
    accs.into_iter()
        .enumerate()
        .map(|(id, a)| Anchor {
            id,
            locations: surf.locations_of(&a.canon),
            order: if a.halfturns % 2 == 0 && a.halfturns >= 2 {
                a.halfturns / 2 - 1
            } else {
                0
            },
            halfturns: a.halfturns,
            canon: a.canon,
            in_sigma: a.in_sigma,
            is_cone: a.is_cone,
            is_slit_endpoint: a.is_slit_endpoint,
            is_user_mark: a.is_user_mark,
        })
        .collect()
}

//! The `slitsurf 1` text format.
//!
//! ```text
//! slitsurf 1
//! convention marked
//! polygon 0
//! v 0 0
//! v 1 0
//! v 1 1
//! v 0 1
//! glue 0.0 0.2
//! glue 0.1 0.3
//! slit 0 0 0 1/2 0
//! mark 0 1/2 1/2
//! ```
//!
//! Rationals are written `p/q` or as bare integers. `glue a.i b.j [flip]`
//! identifies edges; `slit <pid> <x> <y> <dx> <dy>` declares an interior
//! slit by start point and holonomy; `slit boundary <pid>.<edge>` declares a
//! boundary slit; `structure half-translation` switches validation to
//! half-translation rules. Blank lines and `#` comments are ignored.

use super::*;
use crate::geom::Vec2;
use crate::scalar::{format_scalar, parse_scalar};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// Raw surface description as read from a file, before validation.
#[derive(Clone, Debug, Default)]
pub struct SurfaceData {
    pub polygons: Vec<Polygon>,
    pub pairs: Vec<GluingPair>,
    pub slits: Vec<SlitSpec>,
    pub marks: Vec<SurfacePoint>,
    pub convention: Convention,
    pub structure: Structure,
}

impl Default for Convention {
    fn default() -> Self {
        Convention::SlitEndpointsMarked
    }
}

impl Default for Structure {
    fn default() -> Self {
        Structure::Translation
    }
}

impl SurfaceData {
    pub fn build(self) -> Result<SlitSurface, KernelError> {
        match self.structure {
            Structure::Translation => {
                build_surface(self.polygons, self.pairs, self.slits, self.marks, self.convention)
            }
            Structure::HalfTranslation => build_half_translation_surface(
                self.polygons,
                self.pairs,
                self.slits,
                self.marks,
                self.convention,
            ),
        }
    }
}

fn err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_edge_ref(tok: &str, line: usize) -> Result<EdgeRef, FormatError> {
    let (p, e) = tok
        .split_once('.')
        .ok_or_else(|| err(line, format!("expected <polygon>.<edge>, got `{}`", tok)))?;
    let polygon = p
        .parse()
        .map_err(|_| err(line, format!("bad polygon id `{}`", p)))?;
    let edge = e
        .parse()
        .map_err(|_| err(line, format!("bad edge index `{}`", e)))?;
    Ok(EdgeRef::new(polygon, edge))
}

fn parse_rat(tok: &str, line: usize) -> Result<crate::scalar::Scalar, FormatError> {
    parse_scalar(tok).ok_or_else(|| err(line, format!("bad rational `{}`", tok)))
}

/// Parses the text format without building the surface.
pub fn parse(text: &str) -> Result<SurfaceData, FormatError> {
    let mut data = SurfaceData::default();
    let mut saw_header = false;
    let mut current: Option<usize> = None;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if !saw_header {
            if toks != ["slitsurf", "1"] {
                return Err(err(lineno, "expected header `slitsurf 1`"));
            }
            saw_header = true;
            continue;
        }
        match toks[0] {
            "convention" => match toks.get(1) {
                Some(&"marked") => data.convention = Convention::SlitEndpointsMarked,
                Some(&"unmarked") => data.convention = Convention::SlitEndpointsUnmarked,
                _ => return Err(err(lineno, "expected `convention marked|unmarked`")),
            },
            "structure" => match toks.get(1) {
                Some(&"translation") => data.structure = Structure::Translation,
                Some(&"half-translation") => data.structure = Structure::HalfTranslation,
                _ => {
                    return Err(err(
                        lineno,
                        "expected `structure translation|half-translation`",
                    ))
                }
            },
            "polygon" => {
                let id: usize = toks
                    .get(1)
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| err(lineno, "expected `polygon <id>`"))?;
                if id != data.polygons.len() {
                    return Err(err(
                        lineno,
                        format!("polygon ids must be consecutive; expected {}", data.polygons.len()),
                    ));
                }
                data.polygons.push(Polygon::new(id, Vec::new()));
                current = Some(id);
            }
            "v" => {
                let id = current.ok_or_else(|| err(lineno, "`v` before any `polygon`"))?;
                if toks.len() != 3 {
                    return Err(err(lineno, "expected `v <x> <y>`"));
                }
                let x = parse_rat(toks[1], lineno)?;
                let y = parse_rat(toks[2], lineno)?;
                data.polygons[id].vertices.push(Vec2::new(x, y));
            }
            "glue" => {
                if toks.len() < 3 || toks.len() > 4 {
                    return Err(err(lineno, "expected `glue <a.i> <b.j> [flip]`"));
                }
                let flip = match toks.get(3) {
                    None => false,
                    Some(&"flip") => true,
                    Some(t) => return Err(err(lineno, format!("unexpected token `{}`", t))),
                };
                data.pairs.push(GluingPair {
                    a: parse_edge_ref(toks[1], lineno)?,
                    b: parse_edge_ref(toks[2], lineno)?,
                    flip,
                });
            }
            "slit" => {
                if toks.get(1) == Some(&"boundary") {
                    let edge = parse_edge_ref(
                        toks.get(2)
                            .ok_or_else(|| err(lineno, "expected `slit boundary <pid>.<edge>`"))?,
                        lineno,
                    )?;
                    data.slits.push(SlitSpec::Boundary { edge });
                } else {
                    if toks.len() != 6 {
                        return Err(err(lineno, "expected `slit <pid> <x> <y> <dx> <dy>`"));
                    }
                    let pid: usize = toks[1]
                        .parse()
                        .map_err(|_| err(lineno, format!("bad polygon id `{}`", toks[1])))?;
                    let x = parse_rat(toks[2], lineno)?;
                    let y = parse_rat(toks[3], lineno)?;
                    let dx = parse_rat(toks[4], lineno)?;
                    let dy = parse_rat(toks[5], lineno)?;
                    data.slits.push(SlitSpec::Interior {
                        start: SurfacePoint::new(pid, Vec2::new(x, y)),
                        holonomy: Vec2::new(dx, dy),
                    });
                }
            }
            "mark" => {
                if toks.len() != 4 {
                    return Err(err(lineno, "expected `mark <pid> <x> <y>`"));
                }
                let pid: usize = toks[1]
                    .parse()
                    .map_err(|_| err(lineno, format!("bad polygon id `{}`", toks[1])))?;
                let x = parse_rat(toks[2], lineno)?;
                let y = parse_rat(toks[3], lineno)?;
                data.marks.push(SurfacePoint::new(pid, Vec2::new(x, y)));
            }
            other => return Err(err(lineno, format!("unknown directive `{}`", other))),
        }
    }
    if !saw_header {
        return Err(err(1, "empty input; expected header `slitsurf 1`"));
    }
    Ok(data)
}

/// Parses and validates in one step.
pub fn read_surface(text: &str) -> Result<SlitSurface, FormatError> {
    Ok(parse(text)?.build()?)
}

/// Serializes a surface; `read_surface` of the output rebuilds an equal
/// surface.
pub fn write_surface(surf: &SlitSurface) -> String {
    let mut out = String::from("slitsurf 1\n");
    match surf.convention() {
        Convention::SlitEndpointsMarked => out.push_str("convention marked\n"),
        Convention::SlitEndpointsUnmarked => out.push_str("convention unmarked\n"),
    }
    if surf.structure() == Structure::HalfTranslation {
        out.push_str("structure half-translation\n");
    }
    for p in surf.polygons() {
        let _ = writeln!(out, "polygon {}", p.id);
        for v in &p.vertices {
            let _ = writeln!(out, "v {} {}", format_scalar(&v.x), format_scalar(&v.y));
        }
    }
    for pair in surf.gluing_pairs() {
        let _ = writeln!(
            out,
            "glue {}.{} {}.{}{}",
            pair.a.polygon,
            pair.a.edge,
            pair.b.polygon,
            pair.b.edge,
            if pair.flip { " flip" } else { "" }
        );
    }
    for slit in surf.slits() {
        match slit {
            SlitSpec::Interior { start, holonomy } => {
                let _ = writeln!(
                    out,
                    "slit {} {} {} {} {}",
                    start.polygon,
                    format_scalar(&start.position.x),
                    format_scalar(&start.position.y),
                    format_scalar(&holonomy.x),
                    format_scalar(&holonomy.y)
                );
            }
            SlitSpec::Boundary { edge } => {
                let _ = writeln!(out, "slit boundary {}.{}", edge.polygon, edge.edge);
            }
        }
    }
    for mark in surf.user_marks() {
        let _ = writeln!(
            out,
            "mark {} {} {}",
            mark.polygon,
            format_scalar(&mark.position.x),
            format_scalar(&mark.position.y)
        );
    }
    out
}

//! Built-in verification suites.
//!
//! Each suite returns a list of named checks; the `verify` subcommand
//! prints them as `CHECK <name> PASS|FAIL <detail>` lines and the process
//! exits nonzero when any check fails.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::Signed;
use slitflat::construct::{double, double_cover, CoverOutcome};
use slitflat::construct::dirichlet::dirichlet_cylinder_check;
use slitflat::construct::{boundary_slit_square, preset, staircase, torus_with_slits};
use slitflat::decompose::decompose;
use slitflat::enumerate::{enumerate_saddle_connections, EnumerateConfig};
use slitflat::scalar::{frac, scalar, sign};
use slitflat::spectrum::{accumulation_witnesses, derived_depth, theta_set, Witness};
use slitflat::{Convention, DirectionKey, Scalar, SlitSurface, Vec2};

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

fn fail(name: impl Into<String>, detail: impl Into<String>) -> Check {
    Check::new(name, false, detail)
}

/// Names accepted by `verify --suite`.
pub const SUITE_NAMES: &[&str] = &[
    "strata",
    "torus-oracle",
    "one-slit-cylinders",
    "theta-finite",
    "record-accumulation",
    "doubling",
    "cover",
    "dirichlet",
    "depth-hierarchy",
    "all",
];

pub fn run_suite(name: &str, quick: bool) -> Option<Vec<Check>> {
    match name {
        "strata" => Some(suite_strata()),
        "torus-oracle" => Some(suite_torus_oracle(if quick { 10 } else { 20 })),
        "one-slit-cylinders" => Some(suite_one_slit_cylinders(if quick { 8 } else { 20 })),
        "theta-finite" => Some(suite_theta_finite(if quick { 25 } else { 50 })),
        "record-accumulation" => Some(suite_record_accumulation(if quick { 15 } else { 30 })),
        "doubling" => Some(suite_doubling(10)),
        "cover" => Some(suite_cover(10)),
        "dirichlet" => Some(suite_dirichlet()),
        "depth-hierarchy" => Some(suite_depth_hierarchy(quick)),
        "all" => {
            let mut out = suite_strata();
            out.extend(suite_torus_oracle(if quick { 10 } else { 20 }));
            out.extend(suite_one_slit_cylinders(if quick { 8 } else { 20 }));
            out.extend(suite_theta_finite(if quick { 25 } else { 50 }));
            out.extend(suite_record_accumulation(if quick { 15 } else { 30 }));
            out.extend(suite_doubling(10));
            out.extend(suite_cover(10));
            out.extend(suite_dirichlet());
            out.extend(suite_depth_hierarchy(quick));
            Some(out)
        }
        _ => None,
    }
}

/// Cone orders and stratum dimension of the staircase family: the n-step
/// staircase lives in a stratum of complex dimension n + 2, with one cone
/// point of order n for even n and two of order (n - 1) / 2 for odd n.
pub fn suite_strata() -> Vec<Check> {
    let mut out = Vec::new();
    for n in 1usize..=6 {
        let name = format!("strata-s{}", n);
        let s = match staircase(n) {
            Ok(s) => s,
            Err(e) => {
                out.push(fail(name, format!("build failed: {}", e)));
                continue;
            }
        };
        let expected: Vec<u64> = if n % 2 == 0 {
            vec![n as u64]
        } else {
            vec![(n as u64 - 1) / 2; 2]
        };
        let orders = s.singularity_orders();
        let st = match s.stratum() {
            Ok(st) => st,
            Err(e) => {
                out.push(fail(name, format!("stratum failed: {}", e)));
                continue;
            }
        };
        let pass = orders == expected && st.dimension == n as u64 + 2;
        out.push(Check::new(
            name,
            pass,
            format!(
                "orders {:?} (want {:?}), dimension {} (want {})",
                orders,
                expected,
                st.dimension,
                n + 2
            ),
        ));
    }
    out
}

fn canonical_int_pair(h: &Vec2) -> Option<(i128, i128)> {
    if !h.x.is_integer() || !h.y.is_integer() {
        return None;
    }
    let mut x: i128 = h.x.to_integer().try_into().ok()?;
    let mut y: i128 = h.y.to_integer().try_into().ok()?;
    if y < 0 || (y == 0 && x < 0) {
        x = -x;
        y = -y;
    }
    Some((x, y))
}

/// On the bare square torus the saddle connections are exactly the
/// primitive lattice vectors, up to sign.
pub fn suite_torus_oracle(lmax: i64) -> Vec<Check> {
    let t = match torus_with_slits(vec![], Convention::SlitEndpointsMarked) {
        Ok(t) => t,
        Err(e) => return vec![fail("torus-oracle", format!("build failed: {}", e))],
    };
    let scan = enumerate_saddle_connections(&t, &EnumerateConfig::new(scalar(lmax * lmax)));
    if !scan.certificate.complete {
        return vec![fail("torus-oracle", "search certificate incomplete")];
    }
    let mut out = Vec::new();
    for l in 1..=lmax {
        let bound = scalar(l * l);
        let mut got = BTreeSet::new();
        let mut dup = false;
        for sc in scan.connections.iter().filter(|sc| sc.length_sq <= bound) {
            match canonical_int_pair(&sc.holonomy) {
                Some(pair) => {
                    if !got.insert(pair) {
                        dup = true;
                    }
                }
                None => dup = true,
            }
        }
        let mut want = BTreeSet::new();
        for p in -l..=l {
            for q in 0..=l {
                if q == 0 && p <= 0 {
                    continue;
                }
                if p * p + q * q <= l * l && p.gcd(&q) == 1 {
                    want.insert((p as i128, q as i128));
                }
            }
        }
        let pass = !dup && got == want;
        out.push(Check::new(
            format!("torus-oracle-l{}", l),
            pass,
            format!("{} connections (oracle {})", got.len(), want.len()),
        ));
    }
    out
}

/// One-slit torus, directions (n, 1): exactly one cylinder disjoint from
/// the slit, of area equal to the transverse-measure value
/// `1 - |slit x dir|`.
pub fn suite_one_slit_cylinders(nmax: i64) -> Vec<Check> {
    let s = match preset("one-slit-torus") {
        Ok(s) => s,
        Err(e) => return vec![fail("one-slit-cylinders", format!("build failed: {}", e))],
    };
    let slit = s.slit_holonomy(0).clone();
    let mut out = Vec::new();
    for n in 1..=nmax {
        let name = format!("one-slit-cylinders-n{}", n);
        let d = Vec2::new(scalar(n), scalar(1));
        let r = match decompose(&s, &d) {
            Ok(r) => r,
            Err(e) => {
                out.push(fail(name, format!("decompose failed: {}", e)));
                continue;
            }
        };
        // The closed leaf in a primitive direction has holonomy exactly
        // `d`, so the blocked strip has area |slit x d| and the rest is
        // one cylinder.
        let oracle = scalar(1) - slit.cross(&d).abs();
        let pass = r.complete && r.cylinders.len() == 1 && r.cylinders[0].area == oracle;
        let detail = if r.cylinders.len() == 1 {
            format!("area {} (oracle {})", r.cylinders[0].area, oracle)
        } else {
            format!("{} cylinders", r.cylinders.len())
        };
        out.push(Check::new(name, pass, detail));
    }
    out
}

fn direction_set(s: &SlitSurface, budget_sq: Scalar) -> BTreeSet<DirectionKey> {
    theta_set(s, &budget_sq)
        .entries
        .into_iter()
        .map(|e| e.direction)
        .collect()
}

/// The three-slit torus has a finite direction set: the spectrum stops
/// growing with the length bound.
pub fn suite_theta_finite(l: i64) -> Vec<Check> {
    let s = match preset("fig1-left") {
        Ok(s) => s,
        Err(e) => return vec![fail("theta-finite", format!("build failed: {}", e))],
    };
    let a = direction_set(&s, scalar(l * l));
    let b = direction_set(&s, scalar(4 * l * l));
    let pass = a == b;
    vec![Check::new(
        "theta-finite",
        pass,
        format!("{} directions at L = {}, {} at 2L", a.len(), l, b.len()),
    )]
}

/// Slit-disjoint cylinders on the one-slit torus: as the circumference
/// grows, the best angular distance to the slit direction keeps dropping,
/// by at least a factor 4 in angle (16 in the squared sine) over the
/// sweep.
pub fn suite_record_accumulation(circ_max: i64) -> Vec<Check> {
    let s = match preset("one-slit-torus") {
        Ok(s) => s,
        Err(e) => return vec![fail("record-accumulation", format!("build failed: {}", e))],
    };
    let slit_dir = DirectionKey::from_vec(s.slit_holonomy(0)).unwrap();
    let bound = scalar(circ_max * circ_max);
    let mut cylinders: Vec<(Scalar, Scalar)> = Vec::new();
    for p in -circ_max..=circ_max {
        for q in 0..=circ_max {
            if (q == 0 && p <= 0) || p * p + q * q > circ_max * circ_max || p.gcd(&q) != 1 {
                continue;
            }
            let dir = DirectionKey::from_ints(p, q).unwrap();
            if dir == slit_dir {
                continue;
            }
            let r = match decompose(&s, &dir.to_vec()) {
                Ok(r) => r,
                Err(_) => continue,
            };
            let dist = dir.sin_sq_distance(&slit_dir);
            for c in &r.cylinders {
                if c.circumference_sq <= bound {
                    cylinders.push((c.circumference_sq.clone(), dist.clone()));
                }
            }
        }
    }
    cylinders.sort();
    let mut records: Vec<Scalar> = Vec::new();
    for (_, dist) in &cylinders {
        if records.last().map_or(true, |best| dist < best) {
            records.push(dist.clone());
        }
    }
    let pass = match (records.first(), records.last()) {
        (Some(first), Some(last)) => records.len() >= 2 && last * &scalar(16) <= *first,
        _ => false,
    };
    vec![Check::new(
        "record-accumulation",
        pass,
        format!(
            "{} cylinders, {} records, first {} last {}",
            cylinders.len(),
            records.len(),
            records
                .first()
                .map(|x| x.to_string())
                .unwrap_or_else(|| "-".into()),
            records
                .last()
                .map(|x| x.to_string())
                .unwrap_or_else(|| "-".into()),
        ),
    )]
}

/// Doubling the square along its boundary slits leaves the direction set
/// unchanged.
pub fn suite_doubling(l: i64) -> Vec<Check> {
    let s = match boundary_slit_square() {
        Ok(s) => s,
        Err(e) => return vec![fail("doubling", format!("build failed: {}", e))],
    };
    let d = match double(&s) {
        Ok(d) => d,
        Err(e) => return vec![fail("doubling", format!("double failed: {}", e))],
    };
    let a = direction_set(&s, scalar(l * l));
    let b = direction_set(&d, scalar(l * l));
    vec![Check::new(
        "doubling",
        a == b,
        format!("{} directions on the base, {} on the double", a.len(), b.len()),
    )]
}

/// The orientation double cover of the slit pillowcase sees the same
/// directions as the base.
pub fn suite_cover(l: i64) -> Vec<Check> {
    let base = match preset("pillowcase-slit") {
        Ok(s) => s,
        Err(e) => return vec![fail("cover", format!("build failed: {}", e))],
    };
    let cover = match double_cover(&base) {
        Ok(CoverOutcome::Connected(c)) => c,
        Ok(CoverOutcome::Split(..)) => {
            return vec![fail("cover", "cover unexpectedly disconnected")]
        }
        Err(e) => return vec![fail("cover", format!("double_cover failed: {}", e))],
    };
    let a = direction_set(&base, scalar(l * l));
    let b = direction_set(&cover, scalar(l * l));
    vec![Check::new(
        "cover",
        a == b,
        format!("{} directions on the base, {} on the cover", a.len(), b.len()),
    )]
}

/// Continued-fraction convergents of the golden tail: whenever the
/// Dirichlet inequality is certified, the energy stays under the
/// `2 L^2 / q^2` bound, and the bounds themselves decrease to zero.
pub fn suite_dirichlet() -> Vec<Check> {
    let cf = vec![1u64; 16];
    let records = match dirichlet_cylinder_check(&cf, &scalar(1), 10) {
        Ok(r) => r,
        Err(e) => return vec![fail("dirichlet", format!("{}", e))],
    };
    let mut pass = true;
    let mut detail = String::new();
    for r in &records {
        if r.dirichlet == Some(true) && r.within_bound != Some(true) {
            pass = false;
            detail = format!("n = {}: bound not certified", r.n);
            break;
        }
    }
    for w in records.windows(2) {
        if w[1].decay_bound >= w[0].decay_bound {
            pass = false;
            detail = format!("bound not decreasing at n = {}", w[1].n);
            break;
        }
    }
    if let Some(last) = records.last() {
        if last.decay_bound >= frac(1, 100) {
            pass = false;
            detail = format!("final bound {} too large", last.decay_bound);
        }
    } else {
        pass = false;
        detail = "no records".into();
    }
    if pass {
        detail = format!(
            "{} convergents certified, final bound {}",
            records.len(),
            records.last().map(|r| r.decay_bound.to_string()).unwrap()
        );
    }
    vec![Check::new("dirichlet", pass, detail)]
}

/// Calibrated depth goldens: length bound, derivation scale (as a squared
/// sine), the expected depth, and whether it is exact or a lower bound.
struct DepthGolden {
    name: &'static str,
    preset: &'static str,
    lmax: i64,
    eps: (i64, i64),
    depth: usize,
    exact: bool,
}

const DEPTH_GOLDENS: &[DepthGolden] = &[
    DepthGolden {
        name: "depth-fig1-left",
        preset: "fig1-left",
        lmax: 50,
        eps: (1, 1_048_576),
        depth: 1,
        exact: true,
    },
    DepthGolden {
        name: "depth-fig2-left",
        preset: "fig2-left",
        lmax: 40,
        eps: (1, 4_194_304),
        depth: 2,
        exact: true,
    },
    DepthGolden {
        name: "depth-one-slit-torus",
        preset: "one-slit-torus",
        lmax: 25,
        eps: (1, 65_536),
        depth: 3,
        exact: false,
    },
    DepthGolden {
        name: "depth-s2",
        preset: "sn:2",
        lmax: 30,
        eps: (1, 1024),
        depth: 4,
        exact: false,
    },
];

const DEPTH_MAX_LEVELS: usize = 12;

/// The calibrated depth hierarchy: depth estimates of the four reference
/// surfaces at committed (L, eps), every first-level survivor explained by
/// a witness, and each estimate within the stratum-dimension bound.
pub fn suite_depth_hierarchy(quick: bool) -> Vec<Check> {
    let mut out = Vec::new();
    for g in DEPTH_GOLDENS {
        if quick && g.depth > 3 {
            continue;
        }
        let s = match preset(g.preset) {
            Ok(s) => s,
            Err(e) => {
                out.push(fail(g.name, format!("build failed: {}", e)));
                continue;
            }
        };
        let spec = theta_set(&s, &scalar(g.lmax * g.lmax));
        let eps = frac(g.eps.0, g.eps.1);
        let report = derived_depth(&spec, &eps, DEPTH_MAX_LEVELS);
        let depth_ok = if g.exact {
            report.depth == g.depth && !report.saturated
        } else {
            report.depth >= g.depth
        };
        let witnesses = accumulation_witnesses(&s, &spec, &report);
        let unexplained = witnesses
            .iter()
            .filter(|(_, w)| *w == Witness::Unexplained)
            .count();
        let dim = match s.stratum() {
            Ok(st) => st.dimension,
            Err(e) => {
                out.push(fail(g.name, format!("stratum failed: {}", e)));
                continue;
            }
        };
        let bound_ok = report.depth as u64 <= dim;
        out.push(Check::new(
            g.name,
            depth_ok && unexplained == 0,
            format!(
                "depth {}{} (want {}{}), {} survivors, {} unexplained",
                report.depth,
                if report.saturated { "+" } else { "" },
                if g.exact { "= " } else { ">= " },
                g.depth,
                witnesses.len(),
                unexplained
            ),
        ));
        out.push(Check::new(
            format!("{}-rank-bound", g.name),
            bound_ok,
            format!("depth {} <= stratum dimension {}", report.depth, dim),
        ));
    }
    out
}

/// The stratum-dimension bound on every builder surface at a common small
/// scale.
pub fn suite_rank_bound(lmax: i64, eps: &Scalar) -> Vec<Check> {
    let mut out = Vec::new();
    let names = ["fig1-left", "fig1-right", "fig2-left", "fig2-right", "one-slit-torus"];
    let builders = names
        .iter()
        .map(|n| (n.to_string(), preset(n)))
        .chain((1..=4).map(|n| (format!("sn:{}", n), staircase(n))));
    for (name, s) in builders {
        let check_name = format!("rank-bound-{}", name);
        let s = match s {
            Ok(s) => s,
            Err(e) => {
                out.push(fail(check_name, format!("build failed: {}", e)));
                continue;
            }
        };
        let spec = theta_set(&s, &scalar(lmax * lmax));
        let report = derived_depth(&spec, eps, DEPTH_MAX_LEVELS);
        let dim = match s.stratum() {
            Ok(st) => st.dimension,
            Err(e) => {
                out.push(fail(check_name, format!("stratum failed: {}", e)));
                continue;
            }
        };
        debug_assert!(sign(eps) > 0);
        out.push(Check::new(
            check_name,
            (report.depth as u64) <= dim,
            format!("depth {} <= stratum dimension {}", report.depth, dim),
        ));
    }
    out
}

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use slitflat::construct::{double, double_cover, CoverOutcome};
use slitflat::construct::dirichlet::dirichlet_cylinder_check;
use slitflat::construct::{preset, PRESET_NAMES};
use slitflat::decompose::{decompose, decompose_csv};
use slitflat::enumerate::{connections_csv, enumerate_saddle_connections, EnumerateConfig};
use slitflat::kernel::format::{parse as parse_surface, read_surface, write_surface};
use slitflat::scalar::{format_scalar, parse_scalar, sign, to_f64};
use slitflat::spectrum::{
    accumulation_witnesses, calibration_sweep, derived_depth, rose_svg, spectrum_csv, theta_set,
};
use slitflat::tracer::{trace, TraceConfig, TraceEnd};
use slitflat::{Convention, Scalar, SlitSurface, SurfacePoint, Vec2};

use slitflat_cli::checks;

#[derive(Parser)]
#[command(
    name = "slitflat",
    version,
    about = "Exact computations on slit translation surfaces"
)]
struct Cli {
    /// Worker threads for enumeration (default: SLITFLAT_THREADS or all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

/// Where the surface comes from: a named preset or a `slitsurf 1` file.
#[derive(Args)]
struct Source {
    /// Preset name (see `export-preset --list`).
    #[arg(long)]
    preset: Option<String>,
    /// Path to a surface in `slitsurf 1` text format.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Override the slit-endpoint convention.
    #[arg(long, value_parser = ["marked", "unmarked"])]
    convention: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate all saddle connections up to a length bound.
    Scan {
        #[command(flatten)]
        src: Source,
        /// Length bound (rational, positive).
        #[arg(long)]
        lmax: String,
        /// Write the connection table here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Decompose a direction into cylinders.
    Decompose {
        #[command(flatten)]
        src: Source,
        /// Direction as `dx,dy` (rationals).
        #[arg(long)]
        dir: String,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Direction spectrum with derived-set depth and witnesses.
    Spectrum {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        lmax: String,
        /// Derivation scale as a squared sine, or `auto` for a calibration
        /// sweep.
        #[arg(long, default_value = "auto")]
        eps: String,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write a rose plot of the spectrum here.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Trace a single geodesic and print its chords.
    Trace {
        #[command(flatten)]
        src: Source,
        /// Start point as `x,y`.
        #[arg(long)]
        start: String,
        /// Polygon chart of the start point.
        #[arg(long, default_value_t = 0)]
        polygon: usize,
        /// Direction as `dx,dy`.
        #[arg(long)]
        dir: String,
        /// Length budget.
        #[arg(long, default_value = "100")]
        budget: String,
    },
    /// Orientation double cover of a half-translation surface.
    DoubleCover {
        #[command(flatten)]
        src: Source,
        /// Write the cover in `slitsurf 1` format (`.2` suffix for the
        /// second component of a split cover).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Double a surface with boundary across its boundary circles.
    Double {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certified Dirichlet/cylinder bounds along continued-fraction
    /// convergents.
    Dirichlet {
        /// Continued-fraction coefficients `a0,a1,...` (needs nmax + 3).
        #[arg(long, value_delimiter = ',', default_value = "1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1")]
        cf: Vec<u64>,
        /// Slit length.
        #[arg(long, default_value = "1")]
        slit_len: String,
        #[arg(long, default_value_t = 10)]
        nmax: usize,
    },
    /// Run a built-in verification suite.
    Verify {
        /// One of: strata, torus-oracle, one-slit-cylinders, theta-finite,
        /// record-accumulation, doubling, cover, dirichlet,
        /// depth-hierarchy, all.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Smaller bounds, faster run.
        #[arg(long)]
        quick: bool,
    },
    /// Print a preset surface in `slitsurf 1` format.
    ExportPreset {
        #[arg(long)]
        preset: Option<String>,
        /// List the preset names and exit.
        #[arg(long)]
        list: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load_surface(src: &Source) -> Result<SlitSurface, String> {
    let surf = match (&src.preset, &src.input) {
        (Some(name), None) => preset(name).map_err(|e| e.to_string())?,
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| format!("{}: {}", path.display(), e))?;
            read_surface(&text).map_err(|e| e.to_string())?
        }
        _ => return Err("exactly one of --preset and --input is required".into()),
    };
    let Some(conv) = &src.convention else {
        return Ok(surf);
    };
    let convention = match conv.as_str() {
        "marked" => Convention::SlitEndpointsMarked,
        _ => Convention::SlitEndpointsUnmarked,
    };
    if convention == surf.convention() {
        return Ok(surf);
    }
    // Rebuild through the text roundtrip with the convention replaced.
    let mut data = parse_surface(&write_surface(&surf)).map_err(|e| e.to_string())?;
    data.convention = convention;
    data.build().map_err(|e| e.to_string())
}

fn positive_scalar(s: &str, what: &str) -> Result<Scalar, String> {
    let x = parse_scalar(s).ok_or_else(|| format!("{}: bad rational `{}`", what, s))?;
    if sign(&x) <= 0 {
        return Err(format!("{} must be positive, got `{}`", what, s));
    }
    Ok(x)
}

fn parse_pair(s: &str, what: &str) -> Result<Vec2, String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("{}: expected `x,y`, got `{}`", what, s))?;
    let x = parse_scalar(a.trim()).ok_or_else(|| format!("{}: bad rational `{}`", what, a))?;
    let y = parse_scalar(b.trim()).ok_or_else(|| format!("{}: bad rational `{}`", what, b))?;
    Ok(Vec2::new(x, y))
}

fn emit(text: &str, path: &Option<PathBuf>) -> Result<(), String> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {}", p.display(), e)),
        None => {
            print!("{}", text);
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), String> {
    if let Some(n) = cli
        .threads
        .or_else(|| std::env::var("SLITFLAT_THREADS").ok()?.parse().ok())
    {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    match cli.cmd {
        Cmd::Scan { src, lmax, csv } => {
            let l = positive_scalar(&lmax, "--lmax")?;
            let s = load_surface(&src)?;
            let result = enumerate_saddle_connections(&s, &EnumerateConfig::new(&l * &l));
            emit(&connections_csv(&result), &csv)?;
            eprintln!(
                "{} connections, {} states explored, complete: {}",
                result.connections.len(),
                result.certificate.states_explored,
                result.certificate.complete
            );
            Ok(())
        }
        Cmd::Decompose { src, dir, csv } => {
            let d = parse_pair(&dir, "--dir")?;
            let s = load_surface(&src)?;
            let report = decompose(&s, &d).map_err(|e| e.to_string())?;
            emit(&decompose_csv(&report), &csv)?;
            eprintln!(
                "{} cylinders, covered area {}, uncovered {}",
                report.cylinders.len(),
                format_scalar(&report.cylinder_area),
                format_scalar(&report.uncovered_area)
            );
            Ok(())
        }
        Cmd::Spectrum {
            src,
            lmax,
            eps,
            csv,
            svg,
        } => {
            let l = positive_scalar(&lmax, "--lmax")?;
            let s = load_surface(&src)?;
            let spec = theta_set(&s, &(&l * &l));
            let eps = if eps == "auto" {
                // Scales whose estimate exceeds the proven rank bound are
                // provably too coarse; prefer the coarsest admissible one.
                let cap = s.stratum().ok().map(|st| st.dimension as usize);
                let (rows, best) = calibration_sweep(&spec, 24, 16, cap);
                println!("eps_sin_sq,depth,saturated,chosen");
                for (i, r) in rows.iter().enumerate() {
                    println!(
                        "{},{}{},{}",
                        format_scalar(&r.eps_sin_sq),
                        r.depth,
                        if r.saturated { "+" } else { "" },
                        if i == best { ",*" } else { "," }
                    );
                }
                rows[best].eps_sin_sq.clone()
            } else {
                positive_scalar(&eps, "--eps")?
            };
            let report = derived_depth(&spec, &eps, 16);
            let witnesses = accumulation_witnesses(&s, &spec, &report);
            println!(
                "directions {}  depth {}{}  eps {}",
                spec.entries.len(),
                report.depth,
                if report.saturated { "+" } else { "" },
                format_scalar(&eps)
            );
            let unexplained = witnesses
                .iter()
                .filter(|(_, w)| w.label() == "unexplained")
                .count();
            println!(
                "survivors {}  unexplained {}",
                witnesses.len(),
                unexplained
            );
            if let Some(path) = &csv {
                emit(&spectrum_csv(&spec, &report, &witnesses), &Some(path.clone()))?;
            }
            if let Some(path) = &svg {
                emit(&rose_svg(&spec, &report), &Some(path.clone()))?;
            }
            Ok(())
        }
        Cmd::Trace {
            src,
            start,
            polygon,
            dir,
            budget,
        } => {
            let s = load_surface(&src)?;
            let p = parse_pair(&start, "--start")?;
            let d = parse_pair(&dir, "--dir")?;
            let b = positive_scalar(&budget, "--budget")?;
            let res = trace(
                &s,
                &SurfacePoint::new(polygon, p),
                &d,
                &TraceConfig::new(&b * &b),
            )
            .map_err(|e| e.to_string())?;
            println!("polygon,ax,ay,bx,by");
            for step in &res.steps {
                println!(
                    "{},{},{},{},{}",
                    step.polygon,
                    format_scalar(&step.a.x),
                    format_scalar(&step.a.y),
                    format_scalar(&step.b.x),
                    format_scalar(&step.b.y)
                );
            }
            let end = match &res.end {
                TraceEnd::HitAnchor { anchor } => format!("anchor {}", anchor),
                TraceEnd::HitSlitInterior { slit } => format!("slit {}", slit),
                TraceEnd::HitBoundary { edge } => {
                    format!("boundary {}.{}", edge.polygon, edge.edge)
                }
                TraceEnd::Closed => "closed".into(),
                TraceEnd::BudgetExceeded => "budget exceeded".into(),
            };
            println!(
                "end {} after t = {} (length^2 = {})",
                end,
                format_scalar(&res.t_total),
                format_scalar(&res.length_sq)
            );
            Ok(())
        }
        Cmd::DoubleCover { src, out } => {
            let s = load_surface(&src)?;
            match double_cover(&s).map_err(|e| e.to_string())? {
                CoverOutcome::Connected(c) => {
                    println!(
                        "connected cover: genus {:?}, area {}, {} slits",
                        c.genus(),
                        format_scalar(c.area()),
                        c.slits().len()
                    );
                    emit(&write_surface(&c), &out)
                }
                CoverOutcome::Split(a, b) => {
                    println!("split cover: two components of area {}", format_scalar(a.area()));
                    if let Some(path) = out {
                        emit(&write_surface(&a), &Some(path.clone()))?;
                        emit(&write_surface(&b), &Some(path.with_extension("2")))
                    } else {
                        print!("{}", write_surface(&a));
                        print!("{}", write_surface(&b));
                        Ok(())
                    }
                }
            }
        }
        Cmd::Double { src, out } => {
            let s = load_surface(&src)?;
            let d = double(&s).map_err(|e| e.to_string())?;
            println!(
                "doubled: genus {:?}, area {}, {} slits",
                d.genus(),
                format_scalar(d.area()),
                d.slits().len()
            );
            emit(&write_surface(&d), &out)
        }
        Cmd::Dirichlet { cf, slit_len, nmax } => {
            let l = positive_scalar(&slit_len, "--slit-len")?;
            let records = dirichlet_cylinder_check(&cf, &l, nmax).map_err(|e| e.to_string())?;
            println!("n,p,q,energy_lo,energy_hi,dirichlet,cylinder,within_bound,bound");
            let opt = |o: Option<bool>| match o {
                Some(true) => "yes",
                Some(false) => "no",
                None => "uncertified",
            };
            for r in &records {
                println!(
                    "{},{},{},{:.3e},{:.3e},{},{},{},{}",
                    r.n,
                    r.p,
                    r.q,
                    to_f64(&r.energy.lo),
                    to_f64(&r.energy.hi),
                    opt(r.dirichlet),
                    opt(r.cylinder),
                    opt(r.within_bound),
                    format_scalar(&r.decay_bound)
                );
            }
            Ok(())
        }
        Cmd::Verify { suite, quick } => {
            let checks = checks::run_suite(&suite, quick).ok_or_else(|| {
                format!(
                    "unknown suite `{}`; expected one of {}",
                    suite,
                    checks::SUITE_NAMES.join(", ")
                )
            })?;
            let mut failed = 0;
            for c in &checks {
                println!(
                    "CHECK {} {} {}",
                    c.name,
                    if c.pass { "PASS" } else { "FAIL" },
                    c.detail
                );
                if !c.pass {
                    failed += 1;
                }
            }
            if failed > 0 {
                return Err(format!("{} of {} checks failed", failed, checks.len()));
            }
            println!("all {} checks passed", checks.len());
            Ok(())
        }
        Cmd::ExportPreset { preset: name, list, out } => {
            if list {
                for n in PRESET_NAMES {
                    println!("{}", n);
                }
                return Ok(());
            }
            let name = name.ok_or("--preset is required (or --list)")?;
            let s = preset(&name).map_err(|e| e.to_string())?;
            emit(&write_surface(&s), &out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {}", msg);
            ExitCode::FAILURE
        }
    }
}

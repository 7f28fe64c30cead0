use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use huygens_torus::basins::{self, BasinGrid};
use huygens_torus::certifier::suite::{certify_suite, SuiteConfig};
use huygens_torus::certifier::{Interval, Status};
use huygens_torus::fixed_points::{enumerate_fixed_points, FixedPointKind};
use huygens_torus::io::{self as tables, TrajectoryRow};
use huygens_torus::lyapunov::{conjecture_support, eval_u, eval_v};
use huygens_torus::torus::torus_distance;
use huygens_torus::{Error, MapFamily, TorusPoint};

use crate::config::{ConfigError, Settings};

pub enum Failure {
    Config(ConfigError),
    Run(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidSpec(_) | Error::InvalidParameter(_) => {
                Failure::Config(ConfigError(e.to_string()))
            }
            other => Failure::Run(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Run(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::Run(format!("cannot create {}: {e}", path.display())))
}

fn output(s: &Settings) -> Result<Box<dyn Write>, Failure> {
    Ok(match s.out() {
        Some(p) => Box::new(create(&p)?),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

const DEFAULT_DENSITY: usize = 32;

pub fn orbit(s: &Settings) -> Outcome {
    let spec = s.spec()?;
    let x0: f64 = s.get("x0")?.ok_or_else(|| ConfigError("orbit needs --x0".into()))?;
    let y0: f64 = s.get("y0")?.ok_or_else(|| ConfigError("orbit needs --y0".into()))?;
    let steps: usize = s.get_or("steps", 200)?;
    let p0 = TorusPoint::new(x0, y0).map_err(|e| ConfigError(e.to_string()))?;
    let sinks: Vec<TorusPoint> = basins::continued_sinks(&spec)?
        .into_iter()
        .map(|r| r.location)
        .collect();
    let rows: Vec<TrajectoryRow> = spec
        .iterate(p0, steps)
        .into_iter()
        .enumerate()
        .map(|(n, p)| {
            let l = p.lift();
            let lyapunov = if l.y >= l.x { eval_v(l) } else { eval_u(l) };
            TrajectoryRow {
                n,
                point: p,
                lyapunov: Some(lyapunov),
                dist_to_sink: sinks
                    .iter()
                    .map(|&q| torus_distance(p, q))
                    .fold(f64::INFINITY, f64::min),
            }
        })
        .collect();
    let mut w = output(s)?;
    tables::write_trajectory(&mut w, &rows)?;
    w.flush()?;
    Ok(true)
}

pub fn fixed_points(s: &Settings) -> Outcome {
    let spec = s.spec()?;
    let density = s.get_or("density", DEFAULT_DENSITY)?;
    let census = enumerate_fixed_points(&spec, density)?;
    let mut w = output(s)?;
    tables::write_census(&mut w, &census)?;
    w.flush()?;
    Ok(true)
}

pub fn certify(s: &Settings) -> Outcome {
    let spec = s.spec()?;
    if spec.family() != MapFamily::RingG {
        return Err(ConfigError("certify applies to the unperturbed ring map only".into()).into());
    }
    let lo = spec.a();
    let hi = s.get_or("a-hi", lo)?;
    let a = Interval::try_new(lo, hi)
        .ok_or_else(|| ConfigError(format!("empty coupling interval [{lo}, {hi}]")))?;
    let mut cfg = SuiteConfig::new(a);
    cfg.exclusion_radius = s.get_or("exclusion-radius", cfg.exclusion_radius)?;
    cfg.max_depth = s.get_or("depth", cfg.max_depth)?;
    cfg.min_width = s.get_or("min-width", cfg.min_width)?;
    cfg.seed = s.get_or("seed", cfg.seed)?;
    cfg.negative_control = s.flag("negative-control")?;
    let rep = certify_suite(&cfg)?;
    let mut w = output(s)?;
    tables::write_suite_report(&mut w, &rep)?;
    w.flush()?;
    let proved = rep
        .obligations
        .iter()
        .filter(|o| o.status() == Status::Proved)
        .count();
    eprintln!(
        "certify: {proved}/{} obligations proved for a in {}; T2 sampled check {} ({} points, transport error {:e}); {:.2} s",
        rep.obligations.len(),
        rep.a,
        if rep.cross_check.passed { "passed" } else { "FAILED" },
        rep.cross_check.evaluated,
        rep.cross_check.max_transport_error,
        rep.total_time_s()
    );
    let control_refuted = rep
        .negative_control
        .as_ref()
        .is_some_and(|c| c.status() == Status::Refuted);
    if control_refuted {
        eprintln!("certify: negative control refuted as expected");
    }
    Ok(rep.all_proved() && !control_refuted)
}

fn summary_line(g: &BasinGrid) -> String {
    let fr: Vec<String> = g.fractions().iter().map(|f| f.to_string()).collect();
    format!(
        "sink fractions [{}], unresolved {}",
        fr.join(", "),
        g.unresolved_fraction()
    )
}

pub fn basins(s: &Settings) -> Outcome {
    let spec = s.spec()?;
    let n: usize = s.get_or("resolution", 512)?;
    let eps = s.get_or("eps", basins::DEFAULT_EPS)?;
    let max_iter = s.get_or("max-iter", basins::DEFAULT_MAX_ITER)?;
    let sinks: Vec<TorusPoint> = basins::continued_sinks(&spec)?
        .into_iter()
        .map(|r| r.location)
        .collect();
    let grid = basins::basin_grid_with_sinks(&spec, n, &sinks, eps, max_iter)?;
    if let Some(prefix) = s.out() {
        let with = |ext: &str| {
            let mut p = prefix.clone().into_os_string();
            p.push(ext);
            std::path::PathBuf::from(p)
        };
        let mut w = create(&with(".cells.csv"))?;
        tables::write_basin_cells(&mut w, &grid)?;
        w.flush()?;
        let mut w = create(&with(".summary.csv"))?;
        tables::write_basin_summary(&mut w, &grid)?;
        w.flush()?;
        let markers: Vec<TorusPoint> = enumerate_fixed_points(&spec, DEFAULT_DENSITY)?
            .into_iter()
            .map(|r| r.location)
            .collect();
        let mut w = create(&with(".ppm"))?;
        tables::write_ppm(&mut w, &tables::basin_raster(&grid, &markers))?;
        w.flush()?;
    }
    let mut out = io::stdout().lock();
    tables::write_basin_summary(&mut out, &grid)?;
    eprintln!("basins: {}", summary_line(&grid));
    Ok(true)
}

pub fn portrait(s: &Settings) -> Outcome {
    let spec = s.spec()?;
    let m: usize = s.get_or("resolution", 32)?;
    if m == 0 {
        return Err(ConfigError("resolution must be positive".into()).into());
    }
    let mut w = output(s)?;
    tables::write_portrait(&mut w, &tables::portrait_rows(&spec, m))?;
    w.flush()?;
    Ok(true)
}

pub fn conjecture(s: &Settings) -> Outcome {
    let spec = s.spec()?;
    if spec.family() != MapFamily::RingG {
        return Err(ConfigError("conjecture applies to the unperturbed ring map only".into()).into());
    }
    let n: usize = s.get_or("resolution", 2048)?;
    let r: f64 = s.get_or("exclusion-radius", 0.05)?;
    let fps: Vec<TorusPoint> = enumerate_fixed_points(&spec, DEFAULT_DENSITY)?
        .into_iter()
        .map(|r| r.location)
        .collect();
    let rep = conjecture_support(&spec, n, r, &fps)?;
    let mut w = output(s)?;
    tables::write_conjecture(&mut w, &rep)?;
    w.flush()?;
    eprintln!(
        "conjecture: max increment {:e} at {} over {} points; seam jumps x {:e}, y {:e}",
        rep.max_increment, rep.argmax, rep.points_evaluated, rep.seam_jump_x, rep.seam_jump_y
    );
    Ok(rep.max_increment < 0.0)
}

pub const SWEEP_HEADER: &str =
    "a,delta1,delta2,fixed_points,sources,saddles,sinks,resolved_fraction,unresolved_fraction";

pub fn sweep(s: &Settings) -> Outcome {
    let points = s.points()?;
    let n: usize = s.get_or("resolution", 128)?;
    let density = s.get_or("density", DEFAULT_DENSITY)?;
    let eps = s.get_or("eps", basins::DEFAULT_EPS)?;
    let max_iter = s.get_or("max-iter", basins::DEFAULT_MAX_ITER)?;
    let specs = points
        .iter()
        .map(|&(a, d1, d2)| s.spec_for(a, d1, d2))
        .collect::<Result<Vec<_>, _>>()?;
    let mut w = output(s)?;
    writeln!(w, "{SWEEP_HEADER}")?;
    for (&(a, d1, d2), spec) in points.iter().zip(&specs) {
        let census = enumerate_fixed_points(spec, density)?;
        let count = |k: FixedPointKind| census.iter().filter(|r| r.kind == k).count();
        let sinks: Vec<TorusPoint> = basins::continued_sinks(spec)?
            .into_iter()
            .map(|r| r.location)
            .collect();
        let g = basins::basin_grid_with_sinks(spec, n, &sinks, eps, max_iter)?;
        writeln!(
            w,
            "{a},{d1},{d2},{},{},{},{},{},{}",
            census.len(),
            count(FixedPointKind::Source),
            count(FixedPointKind::Saddle),
            count(FixedPointKind::Sink),
            g.resolved_fraction(),
            g.unresolved_fraction()
        )?;
    }
    w.flush()?;
    Ok(true)
}

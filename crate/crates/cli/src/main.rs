use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

mod commands;
mod config;

use config::{ConfigError, Settings};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Verb {
    Orbit,
    FixedPoints,
    Certify,
    Basins,
    Portrait,
    Conjecture,
    Sweep,
}

/// Phase-difference maps of three coupled clocks on the 2-torus.
///
/// Exit status: 0 on success, 1 when a claim is refuted or fails, 2 on an
/// invalid configuration. All angles are in radians.
#[derive(Debug, Parser)]
#[command(name = "huygens", version)]
struct Cli {
    #[arg(value_enum)]
    verb: Verb,
    /// key=value file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// ring or line
    #[arg(long)]
    map: Option<String>,
    /// Coupling strength, 0 < a < 1/3.
    #[arg(long)]
    a: Option<String>,
    /// Upper end of the coupling interval (certify only).
    #[arg(long = "a-hi")]
    a_hi: Option<String>,
    #[arg(long)]
    delta1: Option<String>,
    #[arg(long)]
    delta2: Option<String>,
    /// ones or none
    #[arg(long)]
    zeta: Option<String>,
    #[arg(long)]
    resolution: Option<String>,
    #[arg(long)]
    eps: Option<String>,
    #[arg(long = "max-iter")]
    max_iter: Option<String>,
    #[arg(long = "exclusion-radius")]
    exclusion_radius: Option<String>,
    #[arg(long)]
    depth: Option<String>,
    #[arg(long = "min-width")]
    min_width: Option<String>,
    /// Output path (a file prefix for basins).
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Initial point for orbit.
    #[arg(long)]
    x0: Option<String>,
    #[arg(long)]
    y0: Option<String>,
    /// Number of steps for orbit.
    #[arg(long)]
    steps: Option<String>,
    /// Seed lattice density for the fixed-point census.
    #[arg(long)]
    density: Option<String>,
    /// Add the deliberately false obligation to the certify run.
    #[arg(long = "negative-control")]
    negative_control: bool,
    /// Sweep points, `a,delta1,delta2;...`.
    #[arg(long)]
    points: Option<String>,
}

impl Cli {
    fn flags(&self) -> BTreeMap<String, String> {
        let pairs = [
            ("map", &self.map),
            ("a", &self.a),
            ("a-hi", &self.a_hi),
            ("delta1", &self.delta1),
            ("delta2", &self.delta2),
            ("zeta", &self.zeta),
            ("resolution", &self.resolution),
            ("eps", &self.eps),
            ("max-iter", &self.max_iter),
            ("exclusion-radius", &self.exclusion_radius),
            ("depth", &self.depth),
            ("min-width", &self.min_width),
            ("out", &self.out),
            ("seed", &self.seed),
            ("x0", &self.x0),
            ("y0", &self.y0),
            ("steps", &self.steps),
            ("density", &self.density),
            ("points", &self.points),
        ];
        let mut m: BTreeMap<String, String> = pairs
            .into_iter()
            .filter_map(|(k, v)| v.clone().map(|v| (k.to_string(), v)))
            .collect();
        if self.negative_control {
            m.insert("negative-control".into(), "true".into());
        }
        m
    }
}

fn settings(cli: &Cli) -> Result<Settings, ConfigError> {
    let file = match &cli.config {
        Some(p) => config::load_file(p)?,
        None => BTreeMap::new(),
    };
    Ok(Settings::new(file, cli.flags()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = settings(&cli).map_err(commands::Failure::Config).and_then(|s| match cli.verb {
        Verb::Orbit => commands::orbit(&s),
        Verb::FixedPoints => commands::fixed_points(&s),
        Verb::Certify => commands::certify(&s),
        Verb::Basins => commands::basins(&s),
        Verb::Portrait => commands::portrait(&s),
        Verb::Conjecture => commands::conjecture(&s),
        Verb::Sweep => commands::sweep(&s),
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(commands::Failure::Config(e)) => {
            eprintln!("huygens: invalid configuration: {e}");
            ExitCode::from(2)
        }
        Err(commands::Failure::Run(e)) => {
            eprintln!("huygens: {e}");
            ExitCode::from(1)
        }
    }
}

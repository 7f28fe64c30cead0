//! Run configuration: an optional `key=value` file overlaid by flags.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use huygens_torus::{MapFamily, MapSpec, Perturbation};

/// Keys accepted in a configuration file (the flag names without dashes).
pub const KEYS: [&str; 20] = [
    "map",
    "a",
    "a-hi",
    "delta1",
    "delta2",
    "zeta",
    "resolution",
    "eps",
    "max-iter",
    "exclusion-radius",
    "depth",
    "min-width",
    "out",
    "seed",
    "x0",
    "y0",
    "steps",
    "density",
    "negative-control",
    "points",
];

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_file(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(ConfigError(format!("config line {}: expected key=value", n + 1)));
        };
        let k = k.trim().replace('_', "-");
        if !KEYS.contains(&k.as_str()) {
            return Err(ConfigError(format!("config line {}: unknown key `{k}`", n + 1)));
        }
        out.insert(k, v.trim().to_string());
    }
    Ok(out)
}

pub fn load_file(path: &Path) -> Result<BTreeMap<String, String>, ConfigError> {
    let text = fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
    parse_file(&text)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    Ring,
    Line,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Zeta {
    Ones,
    None,
}

/// Merged settings with typed access.
#[derive(Debug, Clone, Default)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    pub fn new(file: BTreeMap<String, String>, flags: BTreeMap<String, String>) -> Self {
        let mut values = file;
        values.extend(flags);
        Self { values }
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError> {
        match self.raw(key) {
            None => Ok(None),
            Some(s) => s
                .parse()
                .map(Some)
                .map_err(|_| ConfigError(format!("invalid value `{s}` for {key}"))),
        }
    }

    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T, ConfigError> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    pub fn flag(&self, key: &str) -> Result<bool, ConfigError> {
        match self.raw(key) {
            None => Ok(false),
            Some("true" | "1" | "yes") => Ok(true),
            Some("false" | "0" | "no") => Ok(false),
            Some(s) => Err(ConfigError(format!("invalid boolean `{s}` for {key}"))),
        }
    }

    pub fn out(&self) -> Option<PathBuf> {
        self.raw("out").map(PathBuf::from)
    }

    pub fn map_kind(&self) -> Result<MapKind, ConfigError> {
        match self.raw("map").unwrap_or("ring") {
            "ring" => Ok(MapKind::Ring),
            "line" => Ok(MapKind::Line),
            other => Err(ConfigError(format!("--map must be ring or line, got `{other}`"))),
        }
    }

    pub fn zeta(&self) -> Result<Zeta, ConfigError> {
        match self.raw("zeta").unwrap_or("ones") {
            "ones" => Ok(Zeta::Ones),
            "none" => Ok(Zeta::None),
            other => Err(ConfigError(format!("--zeta must be ones or none, got `{other}`"))),
        }
    }

    pub fn a(&self) -> Result<f64, ConfigError> {
        self.get("a")?
            .ok_or_else(|| ConfigError("--a is required".to_string()))
    }

    /// The map for coupling `a` and amplitudes `(d1, d2)`.
    pub fn spec_for(&self, a: f64, d1: f64, d2: f64) -> Result<MapSpec, ConfigError> {
        let kind = self.map_kind()?;
        let zeta = self.zeta()?;
        let perturbed = d1 != 0.0 || d2 != 0.0;
        if perturbed && zeta == Zeta::None {
            return Err(ConfigError(
                "non-zero --delta1/--delta2 need a perturbation shape (--zeta ones)".to_string(),
            ));
        }
        let family = match (kind, perturbed) {
            (MapKind::Ring, false) => MapFamily::RingG,
            (MapKind::Line, false) => MapFamily::LineF,
            (MapKind::Ring, true) => MapFamily::RingGPerturbed,
            (MapKind::Line, true) => MapFamily::LineFPerturbed,
        };
        MapSpec::new(family, a, d1, d2, Perturbation::ConstantOnes)
            .map_err(|e| ConfigError(e.to_string()))
    }

    pub fn spec(&self) -> Result<MapSpec, ConfigError> {
        let a = self.a()?;
        let d1 = self.get_or("delta1", 0.0)?;
        let d2 = self.get_or("delta2", 0.0)?;
        self.spec_for(a, d1, d2)
    }

    /// `a,d1,d2;a,d1,d2;...`
    pub fn points(&self) -> Result<Vec<(f64, f64, f64)>, ConfigError> {
        let Some(s) = self.raw("points") else {
            return Err(ConfigError("sweep needs --points a,d1,d2;...".to_string()));
        };
        s.split(';')
            .filter(|t| !t.trim().is_empty())
            .map(|t| {
                let v: Vec<f64> = t
                    .split(',')
                    .map(|x| x.trim().parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| ConfigError(format!("bad sweep point `{t}`")))?;
                match v.as_slice() {
                    [a] => Ok((*a, 0.0, 0.0)),
                    [a, d1, d2] => Ok((*a, *d1, *d2)),
                    _ => Err(ConfigError(format!("sweep point `{t}` needs 1 or 3 values"))),
                }
            })
            .collect()
    }
}

//! The Klein four-group of symmetries commuting with the ring map, and the
//! straight invariant segments joining its fixed points.

use std::f64::consts::{PI, TAU};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::torus::{torus_distance, wrap, LiftPoint, MapSpec, TorusPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymmetryMap {
    /// Φ₁.
    Identity,
    /// Φ₂(x, y) = (2π - y, 2π - x).
    ReflAntiDiag,
    /// Φ₃(x, y) = (2π - x, 2π - y).
    RotPi,
    /// Φ₄(x, y) = (y, x).
    ReflDiag,
}

impl SymmetryMap {
    pub const ALL: [SymmetryMap; 4] = [
        SymmetryMap::Identity,
        SymmetryMap::ReflAntiDiag,
        SymmetryMap::RotPi,
        SymmetryMap::ReflDiag,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SymmetryMap::Identity => "phi1",
            SymmetryMap::ReflAntiDiag => "phi2",
            SymmetryMap::RotPi => "phi3",
            SymmetryMap::ReflDiag => "phi4",
        }
    }

    pub fn parse(s: &str) -> Option<SymmetryMap> {
        Self::ALL.into_iter().find(|m| m.name() == s)
    }

    pub fn apply_lift(self, p: LiftPoint) -> LiftPoint {
        match self {
            SymmetryMap::Identity => p,
            SymmetryMap::ReflAntiDiag => LiftPoint::new(TAU - p.y, TAU - p.x),
            SymmetryMap::RotPi => LiftPoint::new(TAU - p.x, TAU - p.y),
            SymmetryMap::ReflDiag => LiftPoint::new(p.y, p.x),
        }
    }

    pub fn apply(self, p: TorusPoint) -> TorusPoint {
        wrap(self.apply_lift(p.lift())).expect("symmetries preserve finiteness")
    }

    /// `self ∘ other`.
    pub fn compose(self, other: SymmetryMap) -> SymmetryMap {
        use SymmetryMap::*;
        match (self, other) {
            (Identity, s) | (s, Identity) => s,
            (a, b) if a == b => Identity,
            (ReflAntiDiag, RotPi) | (RotPi, ReflAntiDiag) => ReflDiag,
            (ReflAntiDiag, ReflDiag) | (ReflDiag, ReflAntiDiag) => RotPi,
            (RotPi, ReflDiag) | (ReflDiag, RotPi) => ReflAntiDiag,
            _ => unreachable!(),
        }
    }
}

impl fmt::Display for SymmetryMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `max_p d(G(Φ p), Φ(G p))` over uniform random torus points.
///
/// The symmetries are only expected to commute with the unperturbed ring
/// map; other families are accepted so that symmetry breaking can be
/// measured.
pub fn equivariance_residual(spec: &MapSpec, s: SymmetryMap, samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let p = TorusPoint::wrap_finite(rng.random_range(0.0..TAU), rng.random_range(0.0..TAU));
        let lhs = spec.apply(s.apply(p));
        let rhs = s.apply(spec.apply(p));
        worst = worst.max(torus_distance(lhs, rhs));
    }
    worst
}

/// Labels of the fixed points of the ring map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FixedPointId {
    /// (0, 0), the source.
    O,
    /// (0, π).
    A,
    /// (π, 0).
    B,
    /// (π, π).
    C,
    /// (2π/3, 4π/3), sink.
    P,
    /// (4π/3, 2π/3), sink.
    Q,
}

impl FixedPointId {
    pub const ALL: [FixedPointId; 6] = [
        FixedPointId::O,
        FixedPointId::A,
        FixedPointId::B,
        FixedPointId::C,
        FixedPointId::P,
        FixedPointId::Q,
    ];

    /// Location in units of π/3, reduced into `[0, 6)²`.
    pub fn third_pi(self) -> (i64, i64) {
        match self {
            FixedPointId::O => (0, 0),
            FixedPointId::A => (0, 3),
            FixedPointId::B => (3, 0),
            FixedPointId::C => (3, 3),
            FixedPointId::P => (2, 4),
            FixedPointId::Q => (4, 2),
        }
    }

    pub fn location(self) -> TorusPoint {
        let (i, j) = self.third_pi();
        TorusPoint::wrap_finite(i as f64 * PI / 3.0, j as f64 * PI / 3.0)
    }

    fn from_third_pi(v: (i64, i64)) -> Option<FixedPointId> {
        let r = (v.0.rem_euclid(6), v.1.rem_euclid(6));
        Self::ALL.into_iter().find(|id| id.third_pi() == r)
    }
}

/// The line `lx·x + ly·y + l0·π = 0` with coprime `lx`, `ly`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Line {
    pub lx: i64,
    pub ly: i64,
    pub l0: i64,
}

impl Line {
    pub const fn new(lx: i64, ly: i64, l0: i64) -> Self {
        Self { lx, ly, l0 }
    }

    fn value_third_pi(&self, v: (i64, i64)) -> i64 {
        self.lx * v.0 + self.ly * v.1 + 3 * self.l0
    }

    /// Distance from `p` to the union of the deck translates of the line.
    pub fn torus_distance(&self, p: LiftPoint) -> f64 {
        let v = self.lx as f64 * p.x + self.ly as f64 * p.y + self.l0 as f64 * PI;
        let r = v - TAU * (v / TAU).round();
        r.abs() / ((self.lx * self.lx + self.ly * self.ly) as f64).sqrt()
    }

    pub fn describe(&self) -> String {
        format!("{}x{:+}y{:+}pi=0", self.lx, self.ly, self.l0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantSegment {
    pub line: Line,
    /// Endpoints in units of π/3, in the closed square `[0, 6]²`.
    pub from_third_pi: (i64, i64),
    pub to_third_pi: (i64, i64),
    pub connects: (FixedPointId, FixedPointId),
}

impl InvariantSegment {
    pub fn endpoints(&self) -> (LiftPoint, LiftPoint) {
        let f = |v: (i64, i64)| LiftPoint::new(v.0 as f64 * PI / 3.0, v.1 as f64 * PI / 3.0);
        (f(self.from_third_pi), f(self.to_third_pi))
    }

    /// `samples` interior points at parameters `(k + 1/2)/samples`.
    pub fn sample_points(&self, samples: usize) -> Vec<LiftPoint> {
        let (p, q) = self.endpoints();
        (0..samples)
            .map(|k| {
                let t = (k as f64 + 0.5) / samples as f64;
                LiftPoint::new(p.x + t * (q.x - p.x), p.y + t * (q.y - p.y))
            })
            .collect()
    }

    pub fn name(&self) -> String {
        format!(
            "{:?}-{:?} on {}",
            self.connects.0,
            self.connects.1,
            self.line.describe()
        )
    }
}

/// Largest distance from the image of a sample point to the segment's line.
pub fn segment_invariance_residual(spec: &MapSpec, seg: &InvariantSegment, samples: usize) -> f64 {
    seg.sample_points(samples)
        .into_iter()
        .map(|p| seg.line.torus_distance(spec.apply_lift(p)))
        .fold(0.0, f64::max)
}

/// Connections as (line, endpoint, endpoint) in units of π/3.
const CONNECTIONS: [(Line, (i64, i64), (i64, i64)); 18] = [
    // x = 0
    (Line::new(1, 0, 0), (0, 0), (0, 3)),
    (Line::new(1, 0, 0), (0, 3), (0, 6)),
    // y = 0
    (Line::new(0, 1, 0), (0, 0), (3, 0)),
    (Line::new(0, 1, 0), (3, 0), (6, 0)),
    // y = x
    (Line::new(1, -1, 0), (0, 0), (3, 3)),
    (Line::new(1, -1, 0), (3, 3), (6, 6)),
    // y = π + x/2
    (Line::new(1, -2, 2), (0, 3), (2, 4)),
    (Line::new(1, -2, 2), (2, 4), (6, 6)),
    // y = 2x; the upper piece ends at (π, 2π) ≡ (π, 0)
    (Line::new(2, -1, 0), (0, 0), (2, 4)),
    (Line::new(2, -1, 0), (2, 4), (3, 6)),
    // y = 2π - x
    (Line::new(1, 1, -2), (0, 6), (2, 4)),
    (Line::new(1, 1, -2), (2, 4), (3, 3)),
    (Line::new(1, 1, -2), (3, 3), (4, 2)),
    (Line::new(1, 1, -2), (4, 2), (6, 0)),
    // y = x/2; the upper piece ends at (2π, π) ≡ (0, π)
    (Line::new(1, -2, 0), (0, 0), (4, 2)),
    (Line::new(1, -2, 0), (4, 2), (6, 3)),
    // y = 2x - 2π
    (Line::new(2, -1, -2), (3, 0), (4, 2)),
    (Line::new(2, -1, -2), (4, 2), (6, 6)),
];

/// Residual bound a candidate segment must meet to enter the registry.
pub const REGISTRY_TOLERANCE: f64 = 1e-10;
const REGISTRY_CHECK_COUPLINGS: [f64; 3] = [0.05, 0.15, 0.3];
const REGISTRY_CHECK_SAMPLES: usize = 257;

/// Builds a segment from two-point data and validates it: both endpoints
/// are fixed points, they lie on the line, no fixed point sits strictly
/// between them, and the image of the segment stays on the line.
pub fn build_segment(line: Line, from: (i64, i64), to: (i64, i64)) -> Result<InvariantSegment> {
    let fail = |residual: f64| Error::Registry {
        name: format!("{} from {:?} to {:?}", line.describe(), from, to),
        residual,
    };
    let (Some(a), Some(b)) = (FixedPointId::from_third_pi(from), FixedPointId::from_third_pi(to)) else {
        return Err(fail(f64::NAN));
    };
    if line.value_third_pi(from) != 0 || line.value_third_pi(to) != 0 {
        return Err(fail(f64::NAN));
    }
    // Interior lattice points of the segment at multiples of π/3.
    let (dx, dy) = (to.0 - from.0, to.1 - from.1);
    let steps = gcd(dx.abs(), dy.abs());
    for k in 1..steps {
        let v = (from.0 + k * dx / steps, from.1 + k * dy / steps);
        if FixedPointId::from_third_pi(v).is_some() {
            return Err(fail(f64::NAN));
        }
    }
    let seg = InvariantSegment {
        line,
        from_third_pi: from,
        to_third_pi: to,
        connects: (a, b),
    };
    for a in REGISTRY_CHECK_COUPLINGS {
        let spec = MapSpec::ring(a)?;
        let r = segment_invariance_residual(&spec, &seg, REGISTRY_CHECK_SAMPLES);
        if r > REGISTRY_TOLERANCE {
            return Err(fail(r));
        }
    }
    Ok(seg)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The 18 straight heteroclinic segments of the ring map.
pub fn segment_registry() -> Result<Vec<InvariantSegment>> {
    CONNECTIONS
        .iter()
        .map(|&(line, from, to)| build_segment(line, from, to))
        .collect()
}

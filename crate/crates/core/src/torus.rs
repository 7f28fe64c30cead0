//! Points on the 2-torus, the four synchronisation maps and their Jacobians.
//!
//! Every map is evaluated on the universal cover (the "lift") and reduced
//! modulo 2π once at the end of a step.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Values this close below 2π are folded onto 0 by [`wrap`].
pub const SEAM_CLAMP: f64 = 1e-15;

/// A point of the fundamental domain `[0, 2π)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusPoint {
    x: f64,
    y: f64,
}

/// A point of the universal cover ℝ².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftPoint {
    pub x: f64,
    pub y: f64,
}

impl LiftPoint {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

impl From<TorusPoint> for LiftPoint {
    fn from(p: TorusPoint) -> Self {
        p.lift()
    }
}

fn reduce(v: f64) -> f64 {
    let r = v.rem_euclid(TAU);
    if r >= TAU - SEAM_CLAMP {
        0.0
    } else {
        r
    }
}

/// Reduces a lifted point into `[0, 2π)²`.
pub fn wrap(p: LiftPoint) -> Result<TorusPoint> {
    if !p.x.is_finite() || !p.y.is_finite() {
        return Err(Error::NonFinite { x: p.x, y: p.y });
    }
    Ok(TorusPoint {
        x: reduce(p.x),
        y: reduce(p.y),
    })
}

impl TorusPoint {
    /// Wraps arbitrary finite coordinates onto the torus.
    pub fn new(x: f64, y: f64) -> Result<Self> {
        wrap(LiftPoint { x, y })
    }

    pub(crate) fn wrap_finite(x: f64, y: f64) -> Self {
        Self {
            x: reduce(x),
            y: reduce(y),
        }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    /// The representative of this point in `[0, 2π)²`, as a lift point.
    pub fn lift(&self) -> LiftPoint {
        LiftPoint {
            x: self.x,
            y: self.y,
        }
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

fn periodic_gap(d: f64) -> f64 {
    let d = d.abs().rem_euclid(TAU);
    d.min(TAU - d)
}

/// Shortest Euclidean distance between two torus points, i.e. the minimum over
/// the nearest deck translates.
pub fn torus_distance(p: TorusPoint, q: TorusPoint) -> f64 {
    periodic_gap(p.x - q.x).hypot(periodic_gap(p.y - q.y))
}

/// Torus distance between arbitrary lifted points.
pub fn lift_distance(p: LiftPoint, q: LiftPoint) -> f64 {
    periodic_gap(p.x - q.x).hypot(periodic_gap(p.y - q.y))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MapFamily {
    /// Three clocks coupled all-to-all (two sinks).
    RingG,
    /// Three clocks on a line with nearest-neighbour coupling (one sink).
    LineF,
    RingGPerturbed,
    LineFPerturbed,
}

impl MapFamily {
    pub fn is_perturbed(self) -> bool {
        matches!(self, MapFamily::RingGPerturbed | MapFamily::LineFPerturbed)
    }

    pub fn unperturbed(self) -> MapFamily {
        match self {
            MapFamily::RingG | MapFamily::RingGPerturbed => MapFamily::RingG,
            MapFamily::LineF | MapFamily::LineFPerturbed => MapFamily::LineF,
        }
    }

    pub fn perturbed(self) -> MapFamily {
        match self {
            MapFamily::RingG | MapFamily::RingGPerturbed => MapFamily::RingGPerturbed,
            MapFamily::LineF | MapFamily::LineFPerturbed => MapFamily::LineFPerturbed,
        }
    }

    fn is_ring(self) -> bool {
        self.unperturbed() == MapFamily::RingG
    }
}

/// A pair of scalar fields `(ζ₁, ζ₂)` on the torus shaping the perturbation.
pub trait PerturbationField: Send + Sync {
    fn value(&self, x: f64, y: f64) -> (f64, f64);

    /// `[[∂ζ₁/∂x, ∂ζ₁/∂y], [∂ζ₂/∂x, ∂ζ₂/∂y]]`, when known analytically.
    fn partials(&self, _x: f64, _y: f64) -> Option<[[f64; 2]; 2]> {
        None
    }
}

#[derive(Clone)]
pub enum Perturbation {
    /// `ζ ≡ (1, 1)`: clocks with slightly different natural frequencies.
    ConstantOnes,
    Custom(Arc<dyn PerturbationField>),
}

impl fmt::Debug for Perturbation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Perturbation::ConstantOnes => f.write_str("ConstantOnes"),
            Perturbation::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Selects one of the four diffeomorphisms together with its parameters.
///
/// Constructed only through validating constructors, so a `MapSpec` value
/// always satisfies `0 < a < 1/3` and has zero deltas for unperturbed families.
#[derive(Debug, Clone)]
pub struct MapSpec {
    family: MapFamily,
    a: f64,
    delta1: f64,
    delta2: f64,
    zeta: Perturbation,
}

impl MapSpec {
    pub fn new(
        family: MapFamily,
        a: f64,
        delta1: f64,
        delta2: f64,
        zeta: Perturbation,
    ) -> Result<Self> {
        if !a.is_finite() || a <= 0.0 || a >= 1.0 / 3.0 {
            return Err(Error::InvalidSpec(format!(
                "coupling a = {a} outside the diffeomorphism window (0, 1/3)"
            )));
        }
        if !delta1.is_finite() || !delta2.is_finite() {
            return Err(Error::InvalidSpec("non-finite perturbation amplitude".into()));
        }
        if !family.is_perturbed() && (delta1 != 0.0 || delta2 != 0.0) {
            return Err(Error::InvalidSpec(format!(
                "{family:?} is unperturbed but delta = ({delta1}, {delta2})"
            )));
        }
        Ok(Self {
            family,
            a,
            delta1,
            delta2,
            zeta,
        })
    }

    pub fn ring(a: f64) -> Result<Self> {
        Self::new(MapFamily::RingG, a, 0.0, 0.0, Perturbation::ConstantOnes)
    }

    pub fn line(a: f64) -> Result<Self> {
        Self::new(MapFamily::LineF, a, 0.0, 0.0, Perturbation::ConstantOnes)
    }

    pub fn ring_perturbed(a: f64, delta1: f64, delta2: f64) -> Result<Self> {
        Self::new(
            MapFamily::RingGPerturbed,
            a,
            delta1,
            delta2,
            Perturbation::ConstantOnes,
        )
    }

    pub fn line_perturbed(a: f64, delta1: f64, delta2: f64) -> Result<Self> {
        Self::new(
            MapFamily::LineFPerturbed,
            a,
            delta1,
            delta2,
            Perturbation::ConstantOnes,
        )
    }

    pub fn with_zeta(mut self, zeta: Perturbation) -> Self {
        self.zeta = zeta;
        self
    }

    /// Same map with new perturbation amplitudes; the family switches to its
    /// perturbed variant.
    pub fn with_deltas(&self, delta1: f64, delta2: f64) -> Result<Self> {
        Self::new(
            self.family.perturbed(),
            self.a,
            delta1,
            delta2,
            self.zeta.clone(),
        )
    }

    pub fn family(&self) -> MapFamily {
        self.family
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn delta1(&self) -> f64 {
        self.delta1
    }

    pub fn delta2(&self) -> f64 {
        self.delta2
    }

    pub fn zeta(&self) -> &Perturbation {
        &self.zeta
    }

    /// `apply_lift(p) - p`; 2π-periodic in both coordinates.
    pub fn displacement(&self, x: f64, y: f64) -> (f64, f64) {
        let a = self.a;
        let (sx, sy) = (x.sin(), y.sin());
        let (mut dx, mut dy) = if self.family.is_ring() {
            let sxy = (x - y).sin();
            (
                2.0 * a * sx + a * sy + a * sxy,
                a * sx + 2.0 * a * sy - a * sxy,
            )
        } else {
            (2.0 * a * sx + a * sy, a * sx + 2.0 * a * sy)
        };
        if self.family.is_perturbed() {
            let (z1, z2) = match &self.zeta {
                Perturbation::ConstantOnes => (1.0, 1.0),
                Perturbation::Custom(field) => field.value(x, y),
            };
            dx += self.delta1 * z1;
            dy += self.delta2 * z2;
        }
        (dx, dy)
    }

    /// The map on the universal cover, without reduction.
    pub fn apply_lift(&self, p: LiftPoint) -> LiftPoint {
        let (dx, dy) = self.displacement(p.x, p.y);
        LiftPoint {
            x: p.x + dx,
            y: p.y + dy,
        }
    }

    /// One step of the map on the torus.
    pub fn apply(&self, p: TorusPoint) -> TorusPoint {
        let q = self.apply_lift(p.lift());
        TorusPoint::wrap_finite(q.x, q.y)
    }

    pub fn jacobian(&self, p: TorusPoint) -> Result<Jacobian2> {
        self.jacobian_lift(p.lift())
    }

    pub fn jacobian_lift(&self, p: LiftPoint) -> Result<Jacobian2> {
        let a = self.a;
        let (cx, cy) = (p.x.cos(), p.y.cos());
        let mut m = if self.family.is_ring() {
            let cxy = (p.x - p.y).cos();
            [
                [1.0 + 2.0 * a * cx + a * cxy, a * cy - a * cxy],
                [a * cx - a * cxy, 1.0 + 2.0 * a * cy + a * cxy],
            ]
        } else {
            [[1.0 + 2.0 * a * cx, a * cy], [a * cx, 1.0 + 2.0 * a * cy]]
        };
        if self.family.is_perturbed() {
            if let Perturbation::Custom(field) = &self.zeta {
                let dz = field
                    .partials(p.x, p.y)
                    .ok_or(Error::UnsupportedJacobian)?;
                for (j, row) in dz[0].iter().enumerate() {
                    m[0][j] += self.delta1 * row;
                }
                for (j, row) in dz[1].iter().enumerate() {
                    m[1][j] += self.delta2 * row;
                }
            }
        }
        Ok(Jacobian2 { m })
    }

    /// The orbit `p0, f(p0), …, fⁿ(p0)`.
    pub fn iterate(&self, p0: TorusPoint, n: usize) -> Vec<TorusPoint> {
        let mut out = Vec::with_capacity(n + 1);
        let mut p = p0;
        out.push(p);
        for _ in 0..n {
            p = self.apply(p);
            out.push(p);
        }
        out
    }
}

/// A 2×2 derivative matrix, row major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jacobian2 {
    pub m: [[f64; 2]; 2],
}

impl Jacobian2 {
    pub fn trace(&self) -> f64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn det(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// The two eigenvalues, ordered by decreasing modulus (then by real part).
    pub fn eigenvalues(&self) -> [Complex64; 2] {
        let half_tr = 0.5 * self.trace();
        // (m00 - m11)²/4 + m01 m10 avoids cancellation in tr²/4 - det.
        let half_diff = 0.5 * (self.m[0][0] - self.m[1][1]);
        let disc = half_diff * half_diff + self.m[0][1] * self.m[1][0];
        let (l1, l2) = if disc >= 0.0 {
            let s = disc.sqrt();
            (
                Complex64::new(half_tr + s, 0.0),
                Complex64::new(half_tr - s, 0.0),
            )
        } else {
            let s = (-disc).sqrt();
            (
                Complex64::new(half_tr, s),
                Complex64::new(half_tr, -s),
            )
        };
        if l2.norm() > l1.norm() {
            [l2, l1]
        } else {
            [l1, l2]
        }
    }
}

/// The six fixed points of the ring map on the torus, in census order.
pub fn ring_census_locations() -> [TorusPoint; 6] {
    [
        TorusPoint { x: 0.0, y: 0.0 },
        TorusPoint { x: 0.0, y: PI },
        TorusPoint { x: PI, y: 0.0 },
        TorusPoint { x: PI, y: PI },
        TorusPoint {
            x: TAU / 3.0,
            y: 2.0 * TAU / 3.0,
        },
        TorusPoint {
            x: 2.0 * TAU / 3.0,
            y: TAU / 3.0,
        },
    ]
}

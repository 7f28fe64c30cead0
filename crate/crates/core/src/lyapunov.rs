//! Lyapunov candidates for the ring map and their discrete orbital derivatives.
//!
//! `V` lives on the closed triangle `S̄ = {y ≥ x} ∩ D`, `U` on `R̄`, both as
//! functions on the square `D = [0, 2π]²` rather than on the torus. The
//! quadratic `𝓛` is a candidate on the whole torus.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::region::{Region, RegionId};
use crate::torus::{lift_distance, LiftPoint, MapSpec, TorusPoint};

/// Boundary slack accepted when checking that a one-step image stayed in the
/// closed domain of `V` or `U`.
pub const DOMAIN_SLACK: f64 = 1e-12;

const SINK_UPPER: (f64, f64) = (TAU / 3.0, 2.0 * TAU / 3.0);
const SINK_LOWER: (f64, f64) = (2.0 * TAU / 3.0, TAU / 3.0);

/// `V(x, y) = |y - 2x| + |2π + x - 2y|`.
pub fn eval_v(p: LiftPoint) -> f64 {
    (p.y - 2.0 * p.x).abs() + (TAU + p.x - 2.0 * p.y).abs()
}

/// `U(x, y) = |x - 2y| + |2π + y - 2x|`, i.e. `V(y, x)`.
pub fn eval_u(p: LiftPoint) -> f64 {
    (p.x - 2.0 * p.y).abs() + (TAU + p.y - 2.0 * p.x).abs()
}

fn quadratic_about(x: f64, y: f64, cx: f64, cy: f64) -> f64 {
    let (u, v) = (x - cx, y - cy);
    u * u + v * v - u * v
}

/// The piecewise quadratic candidate `𝓛`, split at `y = x`, evaluated on the
/// representative in `[0, 2π)²`.
pub fn eval_l(p: TorusPoint) -> f64 {
    l_branch(p.x(), p.y(), p.y() >= p.x())
}

/// One branch of `𝓛` as a polynomial on the plane: `upper` is the `y ≥ x` piece.
pub fn l_branch(x: f64, y: f64, upper: bool) -> f64 {
    if upper {
        quadratic_about(x, y, SINK_UPPER.0, SINK_UPPER.1)
    } else {
        quadratic_about(y, x, SINK_UPPER.0, SINK_UPPER.1)
    }
}

/// The four auxiliary functions whose signs split the orbital derivative of `V`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Psi {
    /// `2π + x - 2y`
    One,
    /// `y - 2x`
    Two,
    /// `2x - y + 3a sin x - 3a sin(y - x)`
    Three,
    /// `2π + x - 2y - 3a sin y - 3a sin(y - x)`
    Four,
}

impl Psi {
    pub const ALL: [Psi; 4] = [Psi::One, Psi::Two, Psi::Three, Psi::Four];

    pub fn from_index(i: usize) -> Option<Psi> {
        match i {
            1 => Some(Psi::One),
            2 => Some(Psi::Two),
            3 => Some(Psi::Three),
            4 => Some(Psi::Four),
            _ => None,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Psi::One => 1,
            Psi::Two => 2,
            Psi::Three => 3,
            Psi::Four => 4,
        }
    }
}

pub fn psi(which: Psi, p: LiftPoint, a: f64) -> f64 {
    let LiftPoint { x, y } = p;
    match which {
        Psi::One => TAU + x - 2.0 * y,
        Psi::Two => y - 2.0 * x,
        Psi::Three => 2.0 * x - y + 3.0 * a * x.sin() - 3.0 * a * (y - x).sin(),
        Psi::Four => TAU + x - 2.0 * y - 3.0 * a * y.sin() - 3.0 * a * (y - x).sin(),
    }
}

/// `V̇ = -|ψ₁| - |ψ₂| + |ψ₃| + |ψ₄|`, the orbital derivative of `V` under the
/// ring map written without composing with the map.
pub fn vdot_closed_form(p: LiftPoint, a: f64) -> f64 {
    -psi(Psi::One, p, a).abs() - psi(Psi::Two, p, a).abs()
        + psi(Psi::Three, p, a).abs()
        + psi(Psi::Four, p, a).abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LyapunovFn {
    V,
    U,
    /// The conjectured complete Lyapunov function on the whole torus.
    Lconj,
}

impl LyapunovFn {
    /// The closed region the function is defined on; `None` for the torus.
    pub fn domain(self) -> Option<RegionId> {
        match self {
            LyapunovFn::V => Some(RegionId::S),
            LyapunovFn::U => Some(RegionId::R),
            LyapunovFn::Lconj => None,
        }
    }

    /// The minimiser (the sink the function certifies).
    pub fn minimiser(self) -> Option<LiftPoint> {
        match self {
            LyapunovFn::V => Some(LiftPoint::new(SINK_UPPER.0, SINK_UPPER.1)),
            LyapunovFn::U => Some(LiftPoint::new(SINK_LOWER.0, SINK_LOWER.1)),
            LyapunovFn::Lconj => None,
        }
    }

    pub fn eval(self, p: LiftPoint) -> Result<f64> {
        match self {
            LyapunovFn::V => Ok(eval_v(p)),
            LyapunovFn::U => Ok(eval_u(p)),
            LyapunovFn::Lconj => Ok(eval_l(TorusPoint::new(p.x, p.y)?)),
        }
    }
}

/// `f(map(p)) - f(p)`.
///
/// For `V` and `U` the point is read as a representative in `D`; the image is
/// taken in the lift, which keeps it in the same invariant triangle. For `𝓛`
/// both points are wrapped into `[0, 2π)²`.
pub fn orbital_derivative(f: LyapunovFn, spec: &MapSpec, p: LiftPoint) -> Result<f64> {
    match f.domain() {
        Some(id) => {
            let region = Region::get(id);
            if !region.contains_with_slack(p, DOMAIN_SLACK) {
                return Err(Error::OutsideDomain { x: p.x, y: p.y });
            }
            let q = spec.apply_lift(p);
            if !region.contains_with_slack(q, DOMAIN_SLACK) {
                return Err(Error::ImageLeftDomain { x: q.x, y: q.y });
            }
            Ok(f.eval(q)? - f.eval(p)?)
        }
        None => {
            let p = TorusPoint::new(p.x, p.y)?;
            Ok(eval_l(spec.apply(p)) - eval_l(p))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConjectureReport {
    pub resolution: usize,
    pub exclusion_radius: f64,
    pub points_evaluated: usize,
    /// Largest `𝓛∘G - 𝓛` over the grid minus the exclusion balls.
    pub max_increment: f64,
    pub argmax: TorusPoint,
    /// Largest `|𝓛(2π⁻, y) - 𝓛(0, y)|` over the seam sample.
    pub seam_jump_x: f64,
    /// Largest `|𝓛(x, 2π⁻) - 𝓛(x, 0)|` over the seam sample.
    pub seam_jump_y: f64,
    /// Largest `|upper - lower|` across the diagonal `y = x`.
    pub diagonal_jump: f64,
}

pub const SEAM_SAMPLES: usize = 4096;

/// Grid evaluation of the orbital increment of `𝓛` on cell centres, skipping
/// balls of `exclusion_radius` around `fixed_points`.
pub fn conjecture_support(
    spec: &MapSpec,
    resolution: usize,
    exclusion_radius: f64,
    fixed_points: &[TorusPoint],
) -> Result<ConjectureReport> {
    use rayon::prelude::*;
    if resolution == 0 {
        return Err(Error::InvalidParameter("resolution must be positive".into()));
    }
    let h = TAU / resolution as f64;
    let (max_increment, argmax, points_evaluated) = (0..resolution)
        .into_par_iter()
        .map(|i| {
            let mut best = (f64::NEG_INFINITY, TorusPoint::wrap_finite(0.0, 0.0), 0usize);
            for j in 0..resolution {
                let p = TorusPoint::wrap_finite((i as f64 + 0.5) * h, (j as f64 + 0.5) * h);
                if fixed_points
                    .iter()
                    .any(|&c| lift_distance(p.lift(), c.lift()) < exclusion_radius)
                {
                    continue;
                }
                best.2 += 1;
                let inc = eval_l(spec.apply(p)) - eval_l(p);
                if inc > best.0 {
                    best = (inc, p, best.2);
                }
            }
            best
        })
        .reduce(
            || (f64::NEG_INFINITY, TorusPoint::wrap_finite(0.0, 0.0), 0usize),
            |a, b| {
                let count = a.2 + b.2;
                // Ties keep the lexicographically first point.
                if b.0 > a.0 {
                    (b.0, b.1, count)
                } else {
                    (a.0, a.1, count)
                }
            },
        );

    let mut seam_jump_x = 0.0f64;
    let mut seam_jump_y = 0.0f64;
    let mut diagonal_jump = 0.0f64;
    for k in 0..SEAM_SAMPLES {
        let t = (k as f64 + 0.5) * TAU / SEAM_SAMPLES as f64;
        // Left limit x → 2π⁻ sits on the y < x branch (t < 2π).
        let left = l_branch(TAU, t, false);
        let right = eval_l(TorusPoint::wrap_finite(0.0, t));
        seam_jump_x = seam_jump_x.max((left - right).abs());
        let below = l_branch(t, TAU, true);
        let above = eval_l(TorusPoint::wrap_finite(t, 0.0));
        seam_jump_y = seam_jump_y.max((below - above).abs());
        diagonal_jump = diagonal_jump.max((l_branch(t, t, true) - l_branch(t, t, false)).abs());
    }

    Ok(ConjectureReport {
        resolution,
        exclusion_radius,
        points_evaluated,
        max_increment,
        argmax,
        seam_jump_x,
        seam_jump_y,
        diagonal_jump,
    })
}

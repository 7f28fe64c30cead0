//! Fixed-point location, classification and continuation in δ.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::torus::{torus_distance, Jacobian2, LiftPoint, MapSpec, TorusPoint};

/// Band around |λ| = 1 treated as non-hyperbolic.
pub const CLASSIFY_TOL: f64 = 1e-8;
/// Two Newton limits closer than this (torus metric) are the same fixed point.
pub const DEDUP_RADIUS: f64 = 1e-6;
/// Largest admissible jump of a continued fixed point between two steps.
pub const CONTINUATION_STEP_BOUND: f64 = 0.25;

const ENUMERATION_TOL: f64 = 1e-12;
const ENUMERATION_MAX_ITER: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FixedPointKind {
    Source,
    Sink,
    Saddle,
    NonHyperbolic,
}

impl FixedPointKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FixedPointKind::Source => "source",
            FixedPointKind::Sink => "sink",
            FixedPointKind::Saddle => "saddle",
            FixedPointKind::NonHyperbolic => "non-hyperbolic",
        }
    }
}

pub fn classify(eigenvalues: &[Complex64; 2], tol: f64) -> FixedPointKind {
    let above = eigenvalues.iter().filter(|l| l.norm() > 1.0 + tol).count();
    let below = eigenvalues.iter().filter(|l| l.norm() < 1.0 - tol).count();
    match (above, below) {
        (2, 0) => FixedPointKind::Source,
        (0, 2) => FixedPointKind::Sink,
        (1, 1) => FixedPointKind::Saddle,
        _ => FixedPointKind::NonHyperbolic,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointRecord {
    pub location: TorusPoint,
    pub jacobian: Jacobian2,
    pub eigenvalues: [Complex64; 2],
    pub kind: FixedPointKind,
    /// `torus_distance(location, f(location))`.
    pub residual: f64,
}

impl FixedPointRecord {
    pub fn at(spec: &MapSpec, location: TorusPoint) -> Result<Self> {
        let jacobian = spec.jacobian(location)?;
        let eigenvalues = jacobian.eigenvalues();
        Ok(Self {
            location,
            jacobian,
            kind: classify(&eigenvalues, CLASSIFY_TOL),
            eigenvalues,
            residual: torus_distance(location, spec.apply(location)),
        })
    }

    /// `min |(|λ| - 1)|` over both eigenvalues.
    pub fn hyperbolicity_margin(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|l| (l.norm() - 1.0).abs())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Newton's method on `f(p) - p = 0` in the lift; the result is wrapped.
pub fn newton_fixed_point(
    spec: &MapSpec,
    seed: TorusPoint,
    tol: f64,
    max_iter: usize,
) -> Result<FixedPointRecord> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance {tol} must be positive")));
    }
    let mut p = seed.lift();
    let mut residual = f64::INFINITY;
    for iter in 0..=max_iter {
        let (rx, ry) = spec.displacement(p.x, p.y);
        residual = rx.hypot(ry);
        if residual < tol {
            // Residual measured on the torus after wrapping; one more Newton
            // step only if wrapping spoiled it.
            let location = TorusPoint::new(p.x, p.y)?;
            let record = FixedPointRecord::at(spec, location)?;
            if record.residual < tol {
                return Ok(record);
            }
        }
        if iter == max_iter {
            break;
        }
        let j = spec.jacobian_lift(p)?;
        let (m00, m01, m10, m11) = (j.m[0][0] - 1.0, j.m[0][1], j.m[1][0], j.m[1][1] - 1.0);
        let det = m00 * m11 - m01 * m10;
        let scale = m00.abs().max(m01.abs()).max(m10.abs()).max(m11.abs());
        if !det.is_finite() || det.abs() <= 1e-14 * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::SingularJacobian { x: p.x, y: p.y });
        }
        let sx = (m11 * rx - m01 * ry) / det;
        let sy = (-m10 * rx + m00 * ry) / det;
        p = LiftPoint::new(p.x - sx, p.y - sy);
        if !p.x.is_finite() || !p.y.is_finite() {
            return Err(Error::NoConvergence {
                iterations: iter + 1,
                residual,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        residual,
    })
}

fn lexicographic(a: &FixedPointRecord, b: &FixedPointRecord) -> std::cmp::Ordering {
    a.location
        .x()
        .total_cmp(&b.location.x())
        .then(a.location.y().total_cmp(&b.location.y()))
}

/// Runs Newton from every node of a `grid_density × grid_density` lattice
/// (starting at the origin), deduplicates and sorts lexicographically.
pub fn enumerate_fixed_points(spec: &MapSpec, grid_density: usize) -> Result<Vec<FixedPointRecord>> {
    if grid_density < 8 {
        return Err(Error::InvalidParameter(format!(
            "grid density {grid_density} below 8"
        )));
    }
    let h = TAU / grid_density as f64;
    let mut found: Vec<FixedPointRecord> = (0..grid_density * grid_density)
        .into_par_iter()
        .filter_map(|k| {
            let (i, j) = (k / grid_density, k % grid_density);
            let seed = TorusPoint::new(i as f64 * h, j as f64 * h).ok()?;
            newton_fixed_point(spec, seed, ENUMERATION_TOL, ENUMERATION_MAX_ITER).ok()
        })
        .collect();
    // Best residual first within each cluster so the kept representative does
    // not depend on seed order.
    found.sort_by(|a, b| a.residual.total_cmp(&b.residual).then(lexicographic(a, b)));
    let mut unique: Vec<FixedPointRecord> = Vec::new();
    for rec in found {
        if unique
            .iter()
            .all(|u| torus_distance(u.location, rec.location) >= DEDUP_RADIUS)
        {
            unique.push(rec);
        }
    }
    unique.sort_by(lexicographic);
    Ok(unique)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuationPath {
    /// Homotopy parameter `t ∈ [0, 1]`; δ(t) = δ_base + t (δ_target - δ_base).
    pub parameters: Vec<f64>,
    pub records: Vec<FixedPointRecord>,
}

impl ContinuationPath {
    pub fn last(&self) -> &FixedPointRecord {
        self.records.last().expect("continuation path is never empty")
    }
}

/// Follows a fixed point of `base` to `target` by uniform steps in δ,
/// re-solving with Newton from the previous location at each step.
pub fn continue_fixed_point(
    base: &MapSpec,
    target: &MapSpec,
    start: &FixedPointRecord,
    steps: usize,
) -> Result<ContinuationPath> {
    if base.family().unperturbed() != target.family().unperturbed() || base.a() != target.a() {
        return Err(Error::InvalidParameter(
            "continuation endpoints must differ only in their delta fields".into(),
        ));
    }
    let steps = steps.max(1);
    let (b1, b2) = (base.delta1(), base.delta2());
    let (t1, t2) = (target.delta1(), target.delta2());
    let mut parameters = vec![0.0];
    let first = newton_fixed_point(base, start.location, ENUMERATION_TOL, ENUMERATION_MAX_ITER)
        .map_err(|e| Error::ContinuationBroken {
            t: 0.0,
            reason: e.to_string(),
        })?;
    if first.kind != start.kind {
        return Err(Error::ContinuationBroken {
            t: 0.0,
            reason: format!("start is a {:?}, base fixed point is a {:?}", start.kind, first.kind),
        });
    }
    let mut records = vec![first];
    for k in 1..=steps {
        let t = k as f64 / steps as f64;
        let spec = if k == steps {
            target.clone()
        } else if t1 == b1 && t2 == b2 {
            base.clone()
        } else {
            base.with_deltas(b1 + t * (t1 - b1), b2 + t * (t2 - b2))?
        };
        let prev = records.last().expect("non-empty").clone();
        let next = newton_fixed_point(&spec, prev.location, ENUMERATION_TOL, ENUMERATION_MAX_ITER)
            .map_err(|e| Error::ContinuationBroken {
                t,
                reason: e.to_string(),
            })?;
        if next.kind != prev.kind {
            return Err(Error::ContinuationBroken {
                t,
                reason: format!("kind changed from {:?} to {:?}", prev.kind, next.kind),
            });
        }
        let jump = torus_distance(prev.location, next.location);
        if jump >= CONTINUATION_STEP_BOUND {
            return Err(Error::ContinuationBroken {
                t,
                reason: format!("location jumped by {jump}"),
            });
        }
        parameters.push(t);
        records.push(next);
    }
    Ok(ContinuationPath {
        parameters,
        records,
    })
}

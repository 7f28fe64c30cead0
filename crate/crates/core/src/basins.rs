//! Basin classification on grids of cell centres and convergence rates.

use std::f64::consts::TAU;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fixed_points::{continue_fixed_point, enumerate_fixed_points, FixedPointKind, FixedPointRecord};
use crate::torus::{torus_distance, MapSpec, TorusPoint};

pub const DEFAULT_EPS: f64 = 1e-6;
pub const DEFAULT_MAX_ITER: usize = 100_000;
pub const MIN_RESOLUTION: usize = 16;
/// Distance band used for rate measurement.
pub const RATE_BAND: (f64, f64) = (1e-12, 1e-2);
const CENSUS_DENSITY: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Sink(usize),
    Unresolved,
}

impl Label {
    pub fn as_string(&self) -> String {
        match self {
            Label::Sink(k) => k.to_string(),
            Label::Unresolved => "unresolved".to_string(),
        }
    }

    pub fn parse(s: &str) -> Option<Label> {
        match s {
            "unresolved" => Some(Label::Unresolved),
            _ => s.parse().ok().map(Label::Sink),
        }
    }
}

/// Classification of a single orbit together with the step at which it was
/// decided (or `max_iter`).
pub fn classify_point_steps(
    spec: &MapSpec,
    p: TorusPoint,
    sinks: &[TorusPoint],
    eps: f64,
    max_iter: usize,
) -> (Label, usize) {
    let mut q = p;
    for n in 0..=max_iter {
        if let Some(k) = sinks.iter().position(|&s| torus_distance(q, s) < eps) {
            return (Label::Sink(k), n);
        }
        if n == max_iter {
            break;
        }
        let next = spec.apply(q);
        if next == q {
            // A floating-point fixed point outside every capture ball: the
            // orbit can never move again.
            return (Label::Unresolved, max_iter);
        }
        q = next;
    }
    (Label::Unresolved, max_iter)
}

/// First sink whose `eps`-ball the orbit enters, or `Unresolved`.
pub fn classify_point(
    spec: &MapSpec,
    p: TorusPoint,
    sinks: &[TorusPoint],
    eps: f64,
    max_iter: usize,
) -> Label {
    classify_point_steps(spec, p, sinks, eps, max_iter).0
}

/// Sinks of the map, located by enumeration on a seed lattice.
pub fn census_sinks(spec: &MapSpec) -> Result<Vec<FixedPointRecord>> {
    Ok(enumerate_fixed_points(spec, CENSUS_DENSITY)?
        .into_iter()
        .filter(|r| r.kind == FixedPointKind::Sink)
        .collect())
}

/// Steps used when continuing unperturbed sinks to a perturbed map.
pub const CONTINUATION_STEPS: usize = 10;

/// Sinks of a perturbed map obtained by continuation from the sinks of its
/// unperturbed family member; for an unperturbed map, the census sinks.
pub fn continued_sinks(spec: &MapSpec) -> Result<Vec<FixedPointRecord>> {
    if !spec.family().is_perturbed() {
        return census_sinks(spec);
    }
    let base = MapSpec::new(
        spec.family().unperturbed(),
        spec.a(),
        0.0,
        0.0,
        spec.zeta().clone(),
    )?;
    census_sinks(&base)?
        .iter()
        .map(|s| Ok(continue_fixed_point(&base, spec, s, CONTINUATION_STEPS)?.last().clone()))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasinGrid {
    pub resolution: usize,
    pub sinks: Vec<TorusPoint>,
    /// Row-major in `j` (the y index): `labels[j * N + i]`.
    pub labels: Vec<Label>,
}

impl BasinGrid {
    /// Centre of cell `(i, j)`.
    pub fn cell_center(resolution: usize, i: usize, j: usize) -> TorusPoint {
        let h = TAU / resolution as f64;
        TorusPoint::wrap_finite((i as f64 + 0.5) * h, (j as f64 + 0.5) * h)
    }

    pub fn label(&self, i: usize, j: usize) -> Label {
        self.labels[j * self.resolution + i]
    }

    pub fn counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.sinks.len()];
        for l in &self.labels {
            if let Label::Sink(k) = l {
                c[*k] += 1;
            }
        }
        c
    }

    pub fn unresolved_count(&self) -> usize {
        self.labels.iter().filter(|l| **l == Label::Unresolved).count()
    }

    fn cells(&self) -> f64 {
        (self.resolution * self.resolution) as f64
    }

    pub fn fractions(&self) -> Vec<f64> {
        let n = self.cells();
        self.counts().into_iter().map(|c| c as f64 / n).collect()
    }

    pub fn unresolved_fraction(&self) -> f64 {
        self.unresolved_count() as f64 / self.cells()
    }

    pub fn resolved_fraction(&self) -> f64 {
        self.fractions().iter().sum()
    }
}

/// Classifies every cell centre of an `N × N` grid against given sinks.
pub fn basin_grid_with_sinks(
    spec: &MapSpec,
    resolution: usize,
    sinks: &[TorusPoint],
    eps: f64,
    max_iter: usize,
) -> Result<BasinGrid> {
    if resolution < MIN_RESOLUTION {
        return Err(Error::InvalidParameter(format!(
            "resolution must be at least {MIN_RESOLUTION}, got {resolution}"
        )));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    let labels: Vec<Label> = (0..resolution * resolution)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx % resolution, idx / resolution);
            classify_point(spec, BasinGrid::cell_center(resolution, i, j), sinks, eps, max_iter)
        })
        .collect();
    Ok(BasinGrid {
        resolution,
        sinks: sinks.to_vec(),
        labels,
    })
}

/// Basin grid against the sinks of the map's own census.
pub fn basin_grid(spec: &MapSpec, resolution: usize, eps: f64, max_iter: usize) -> Result<BasinGrid> {
    let sinks: Vec<TorusPoint> = census_sinks(spec)?.into_iter().map(|r| r.location).collect();
    basin_grid_with_sinks(spec, resolution, &sinks, eps, max_iter)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEstimate {
    /// Mean of `log(d_{n+1}/d_n)` over steps inside [`RATE_BAND`].
    pub slope: f64,
    /// `log` of the largest eigenvalue modulus at the sink.
    pub predicted: f64,
    pub relative_error: f64,
    pub steps_used: usize,
}

/// Measures the exponential contraction rate of the orbit of `p` towards
/// `sink`.
pub fn convergence_rate(
    spec: &MapSpec,
    p: TorusPoint,
    sink: &FixedPointRecord,
    max_iter: usize,
) -> Result<RateEstimate> {
    let (lo, hi) = RATE_BAND;
    let mut q = p;
    let mut prev: Option<f64> = None;
    let mut sum = 0.0;
    let mut steps = 0usize;
    for _ in 0..max_iter {
        let d = torus_distance(q, sink.location);
        if d <= lo {
            break;
        }
        let in_band = d < hi;
        if let (Some(pd), true) = (prev, in_band) {
            sum += (d / pd).ln();
            steps += 1;
        }
        prev = in_band.then_some(d);
        q = spec.apply(q);
    }
    if steps < 1 {
        return Err(Error::RateWindowEmpty);
    }
    let slope = sum / steps as f64;
    let predicted = sink.eigenvalues[0].norm().ln();
    Ok(RateEstimate {
        slope,
        predicted,
        relative_error: ((slope - predicted) / predicted).abs(),
        steps_used: steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lyapunov::eval_v;
    use crate::symmetry::SymmetryMap;
    use std::f64::consts::PI;

    fn ring_sinks() -> Vec<TorusPoint> {
        census_sinks(&MapSpec::ring(0.1).unwrap())
            .unwrap()
            .into_iter()
            .map(|r| r.location)
            .collect()
    }

    #[test]
    fn classify_examples() {
        let spec = MapSpec::ring(0.1).unwrap();
        let sinks = ring_sinks();
        assert_eq!(sinks.len(), 2);
        let upper = sinks
            .iter()
            .position(|s| torus_distance(*s, TorusPoint::new(2.0 * PI / 3.0, 4.0 * PI / 3.0).unwrap()) < 1e-9)
            .unwrap();
        let (l, n) = classify_point_steps(&spec, sinks[upper], &sinks, DEFAULT_EPS, 10);
        assert_eq!((l, n), (Label::Sink(upper), 0));
        let p = TorusPoint::new(PI / 2.0, 1.5 * PI).unwrap();
        assert_eq!(classify_point(&spec, p, &sinks, DEFAULT_EPS, DEFAULT_MAX_ITER), Label::Sink(upper));
        let p = TorusPoint::new(1.5 * PI, PI / 2.0).unwrap();
        assert_eq!(
            classify_point(&spec, p, &sinks, DEFAULT_EPS, DEFAULT_MAX_ITER),
            Label::Sink(1 - upper)
        );
        // On the stable manifold of (π, π) the orbit never leaves the diagonal.
        let p = TorusPoint::new(1.0, 1.0).unwrap();
        assert_eq!(classify_point(&spec, p, &sinks, DEFAULT_EPS, DEFAULT_MAX_ITER), Label::Unresolved);
    }

    #[test]
    fn perturbed_sinks_are_continued() {
        let spec = MapSpec::ring_perturbed(0.1, 0.01, 0.02).unwrap();
        let sinks = continued_sinks(&spec).unwrap();
        assert_eq!(sinks.len(), 2);
        for (s, base) in sinks.iter().zip(ring_sinks()) {
            assert_eq!(s.kind, FixedPointKind::Sink);
            assert!(s.residual < 1e-10);
            // Linearising at the sink, J - I = -(3a/2) I.
            let predicted = 0.01f64.hypot(0.02) / 0.15;
            let d = torus_distance(s.location, base);
            assert!((d - predicted).abs() < 0.1 * predicted, "shift {d}");
        }
    }

    #[test]
    fn rejects_small_grid() {
        let spec = MapSpec::ring(0.1).unwrap();
        assert!(basin_grid(&spec, 15, DEFAULT_EPS, 10).is_err());
        assert!(basin_grid(&spec, 16, 0.0, 10).is_err());
    }

    #[test]
    fn fractions_partition_unity_on_power_of_two_grids() {
        let spec = MapSpec::ring(0.1).unwrap();
        let g = basin_grid(&spec, 64, DEFAULT_EPS, DEFAULT_MAX_ITER).unwrap();
        let total: f64 = g.fractions().iter().sum::<f64>() + g.unresolved_fraction();
        assert_eq!(total, 1.0);
    }

    #[test]
    fn refinement_does_not_increase_unresolved_fraction() {
        let spec = MapSpec::ring(0.1).unwrap();
        let coarse = basin_grid(&spec, 256, DEFAULT_EPS, DEFAULT_MAX_ITER).unwrap();
        let fine = basin_grid(&spec, 2048, DEFAULT_EPS, DEFAULT_MAX_ITER).unwrap();
        assert!(fine.unresolved_fraction() <= coarse.unresolved_fraction());
    }

    #[test]
    fn mirror_cells_swap_sinks() {
        let spec = MapSpec::ring(0.1).unwrap();
        let g = basin_grid(&spec, 128, DEFAULT_EPS, DEFAULT_MAX_ITER).unwrap();
        // Φ₄ sends cell (i, j) to cell (j, i) and swaps the two sinks.
        let swap = |k: usize| {
            let image = SymmetryMap::ReflDiag.apply(g.sinks[k]);
            g.sinks.iter().position(|s| torus_distance(*s, image) < 1e-9).unwrap()
        };
        let (mut resolved, mut agree) = (0usize, 0usize);
        for j in 0..g.resolution {
            for i in 0..g.resolution {
                if let (Label::Sink(a), Label::Sink(b)) = (g.label(i, j), g.label(j, i)) {
                    resolved += 1;
                    if swap(a) == b && a != b {
                        agree += 1;
                    }
                }
            }
        }
        assert!(agree as f64 >= 0.999 * resolved as f64);
    }

    #[test]
    fn v_decreases_along_resolved_orbits_in_s() {
        let spec = MapSpec::ring(0.1).unwrap();
        let sinks = ring_sinks();
        let n = 128;
        let target = TorusPoint::new(2.0 * PI / 3.0, 4.0 * PI / 3.0).unwrap();
        for j in 0..n {
            for i in 0..j {
                let p = BasinGrid::cell_center(n, i, j);
                if classify_point(&spec, p, &sinks, DEFAULT_EPS, DEFAULT_MAX_ITER) == Label::Unresolved {
                    continue;
                }
                let mut q = p;
                let mut v = eval_v(q.lift());
                while torus_distance(q, target) > 1e-9 {
                    let next = spec.apply(q);
                    let vn = eval_v(next.lift());
                    assert!(vn <= v, "V increased at {q} -> {next}");
                    q = next;
                    v = vn;
                }
            }
        }
    }

    #[test]
    fn rate_matches_sink_eigenvalue() {
        let spec = MapSpec::ring(0.1).unwrap();
        let sinks = census_sinks(&spec).unwrap();
        let p = TorusPoint::new(1.0, 2.0).unwrap();
        let sink = sinks
            .iter()
            .find(|s| classify_point(&spec, p, &[s.location], DEFAULT_EPS, DEFAULT_MAX_ITER) == Label::Sink(0))
            .unwrap();
        let r = convergence_rate(&spec, p, sink, 10_000).unwrap();
        assert!((r.predicted - 0.85f64.ln()).abs() < 1e-12);
        assert!(r.relative_error < 0.05, "{r:?}");
        assert_eq!(
            convergence_rate(&spec, sink.location, sink, 10_000),
            Err(Error::RateWindowEmpty)
        );

        let line = MapSpec::line(0.1).unwrap();
        let sink = census_sinks(&line).unwrap().remove(0);
        let r = convergence_rate(&line, TorusPoint::new(3.0, 3.3).unwrap(), &sink, 10_000).unwrap();
        assert!(r.relative_error < 0.05, "{r:?}");
    }
}

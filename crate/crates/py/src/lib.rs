//! Python bindings: `import pyhuygens`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use huygens_torus::basins::{self, Label};
use huygens_torus::certifier::suite::{certify_suite as run_suite, SuiteConfig};
use huygens_torus::certifier::{Interval, Status};
use huygens_torus::fixed_points::{enumerate_fixed_points, newton_fixed_point, FixedPointRecord};
use huygens_torus::lyapunov::{self, LyapunovFn};
use huygens_torus::symmetry::{self, SymmetryMap};
use huygens_torus::torus::{self, LiftPoint};
use huygens_torus::{Error, MapFamily, Perturbation, TorusPoint};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::InvalidSpec(_) | Error::InvalidParameter(_) | Error::NonFinite { .. } => {
            PyValueError::new_err(e.to_string())
        }
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn point(x: f64, y: f64) -> PyResult<TorusPoint> {
    TorusPoint::new(x, y).map_err(to_py)
}

/// One of the four maps with its parameters.
#[pyclass(name = "MapSpec", frozen, from_py_object)]
#[derive(Clone)]
struct PyMapSpec {
    inner: torus::MapSpec,
}

#[pymethods]
impl PyMapSpec {
    /// `family` is "ring" or "line"; non-zero deltas select the perturbed
    /// variant with the constant shape (1, 1).
    #[new]
    #[pyo3(signature = (family, a, delta1=0.0, delta2=0.0))]
    fn new(family: &str, a: f64, delta1: f64, delta2: f64) -> PyResult<Self> {
        let perturbed = delta1 != 0.0 || delta2 != 0.0;
        let fam = match (family, perturbed) {
            ("ring", false) => MapFamily::RingG,
            ("ring", true) => MapFamily::RingGPerturbed,
            ("line", false) => MapFamily::LineF,
            ("line", true) => MapFamily::LineFPerturbed,
            _ => return Err(PyValueError::new_err(format!("unknown family {family:?}"))),
        };
        let inner = torus::MapSpec::new(fam, a, delta1, delta2, Perturbation::ConstantOnes)
            .map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn a(&self) -> f64 {
        self.inner.a()
    }

    fn apply(&self, x: f64, y: f64) -> PyResult<(f64, f64)> {
        let q = self.inner.apply(point(x, y)?);
        Ok((q.x(), q.y()))
    }

    fn apply_lift(&self, x: f64, y: f64) -> (f64, f64) {
        let q = self.inner.apply_lift(LiftPoint::new(x, y));
        (q.x, q.y)
    }

    fn jacobian(&self, x: f64, y: f64) -> PyResult<[[f64; 2]; 2]> {
        Ok(self.inner.jacobian(point(x, y)?).map_err(to_py)?.m)
    }

    fn iterate(&self, x: f64, y: f64, n: usize) -> PyResult<Vec<(f64, f64)>> {
        Ok(self
            .inner
            .iterate(point(x, y)?, n)
            .into_iter()
            .map(|p| (p.x(), p.y()))
            .collect())
    }

    fn __repr__(&self) -> String {
        format!(
            "MapSpec({:?}, a={}, delta1={}, delta2={})",
            self.inner.family(),
            self.inner.a(),
            self.inner.delta1(),
            self.inner.delta2()
        )
    }
}

fn record_dict<'py>(py: Python<'py>, r: &FixedPointRecord) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("x", r.location.x())?;
    d.set_item("y", r.location.y())?;
    d.set_item("kind", r.kind.as_str())?;
    let ev: Vec<(f64, f64)> = r.eigenvalues.iter().map(|l| (l.re, l.im)).collect();
    d.set_item("eigenvalues", ev)?;
    d.set_item("residual", r.residual)?;
    Ok(d)
}

/// Fixed-point census as a list of dicts.
#[pyfunction]
#[pyo3(signature = (spec, density=32))]
fn fixed_points<'py>(py: Python<'py>, spec: &PyMapSpec, density: usize) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let census = py
        .detach(|| enumerate_fixed_points(&spec.inner, density))
        .map_err(to_py)?;
    census.iter().map(|r| record_dict(py, r)).collect()
}

#[pyfunction]
#[pyo3(signature = (spec, x, y, tol=1e-12, max_iter=60))]
fn newton<'py>(py: Python<'py>, spec: &PyMapSpec, x: f64, y: f64, tol: f64, max_iter: usize) -> PyResult<Bound<'py, PyDict>> {
    let r = newton_fixed_point(&spec.inner, point(x, y)?, tol, max_iter).map_err(to_py)?;
    record_dict(py, &r)
}

fn lyapunov_fn(name: &str) -> PyResult<LyapunovFn> {
    match name {
        "V" => Ok(LyapunovFn::V),
        "U" => Ok(LyapunovFn::U),
        "L" => Ok(LyapunovFn::Lconj),
        _ => Err(PyValueError::new_err(format!("unknown Lyapunov function {name:?}"))),
    }
}

/// Value of "V", "U" or "L" at a point of the closed square.
#[pyfunction]
fn lyapunov_value(name: &str, x: f64, y: f64) -> PyResult<f64> {
    lyapunov_fn(name)?.eval(LiftPoint::new(x, y)).map_err(to_py)
}

#[pyfunction]
fn orbital_derivative(name: &str, spec: &PyMapSpec, x: f64, y: f64) -> PyResult<f64> {
    lyapunov::orbital_derivative(lyapunov_fn(name)?, &spec.inner, LiftPoint::new(x, y)).map_err(to_py)
}

#[pyfunction]
fn vdot_closed_form(x: f64, y: f64, a: f64) -> f64 {
    lyapunov::vdot_closed_form(LiftPoint::new(x, y), a)
}

/// Runs the certification suite; returns (all_proved, rows).
#[pyfunction]
#[pyo3(signature = (a_lo, a_hi=None, exclusion_radius=0.05, negative_control=false, seed=0))]
fn certify_suite<'py>(
    py: Python<'py>,
    a_lo: f64,
    a_hi: Option<f64>,
    exclusion_radius: f64,
    negative_control: bool,
    seed: u64,
) -> PyResult<(bool, Vec<Bound<'py, PyDict>>)> {
    let hi = a_hi.unwrap_or(a_lo);
    let a = Interval::try_new(a_lo, hi)
        .ok_or_else(|| PyValueError::new_err(format!("empty interval [{a_lo}, {hi}]")))?;
    let mut cfg = SuiteConfig::new(a);
    cfg.exclusion_radius = exclusion_radius;
    cfg.negative_control = negative_control;
    cfg.seed = seed;
    let rep = py.detach(|| run_suite(&cfg)).map_err(to_py)?;
    let mut rows = Vec::new();
    for o in rep.obligations.iter().chain(rep.negative_control.iter()) {
        let d = PyDict::new(py);
        let c = &o.certificate;
        d.set_item("id", &o.id)?;
        d.set_item("region", c.region.name())?;
        d.set_item("target", c.target.name())?;
        d.set_item("sign", c.claim.symbol())?;
        d.set_item("status", c.status.as_str())?;
        d.set_item("boxes_proved", c.boxes_proved)?;
        d.set_item("boxes_undecided", c.boxes_undecided)?;
        d.set_item("depth", c.depth_reached)?;
        rows.push(d);
    }
    let ok = rep.all_proved()
        && rep
            .negative_control
            .as_ref()
            .is_none_or(|c| c.status() != Status::Refuted);
    Ok((ok, rows))
}

/// Basin labels (sink index, or -1 for unresolved) in row-major order
/// `labels[j * N + i]`, plus per-sink fractions.
#[pyfunction]
#[pyo3(signature = (spec, resolution, eps=1e-6, max_iter=100_000))]
fn basin_grid<'py>(
    py: Python<'py>,
    spec: &PyMapSpec,
    resolution: usize,
    eps: f64,
    max_iter: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let g = py
        .detach(|| -> huygens_torus::Result<_> {
            let sinks: Vec<TorusPoint> = basins::continued_sinks(&spec.inner)?
                .into_iter()
                .map(|r| r.location)
                .collect();
            basins::basin_grid_with_sinks(&spec.inner, resolution, &sinks, eps, max_iter)
        })
        .map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("resolution", g.resolution)?;
    let sinks: Vec<(f64, f64)> = g.sinks.iter().map(|s| (s.x(), s.y())).collect();
    d.set_item("sinks", sinks)?;
    let labels: Vec<i64> = g
        .labels
        .iter()
        .map(|l| match l {
            Label::Sink(k) => *k as i64,
            Label::Unresolved => -1,
        })
        .collect();
    d.set_item("labels", labels)?;
    d.set_item("fractions", g.fractions())?;
    d.set_item("unresolved_fraction", g.unresolved_fraction())?;
    Ok(d)
}

fn symmetry_of(name: &str) -> PyResult<SymmetryMap> {
    SymmetryMap::parse(name).ok_or_else(|| PyValueError::new_err(format!("unknown symmetry {name:?}")))
}

/// Applies "phi1".."phi4".
#[pyfunction]
fn apply_symmetry(name: &str, x: f64, y: f64) -> PyResult<(f64, f64)> {
    let q = symmetry_of(name)?.apply(point(x, y)?);
    Ok((q.x(), q.y()))
}

#[pyfunction]
#[pyo3(signature = (spec, name, samples=10_000, seed=0))]
fn equivariance_residual(spec: &PyMapSpec, name: &str, samples: usize, seed: u64) -> PyResult<f64> {
    Ok(symmetry::equivariance_residual(&spec.inner, symmetry_of(name)?, samples, seed))
}

/// The invariant segments as ((x0, y0), (x1, y1), residual at `a`).
#[pyfunction]
#[pyo3(signature = (a=0.1, samples=1000))]
fn invariant_segments(a: f64, samples: usize) -> PyResult<Vec<((f64, f64), (f64, f64), f64)>> {
    let spec = torus::MapSpec::ring(a).map_err(to_py)?;
    let reg = symmetry::segment_registry().map_err(to_py)?;
    Ok(reg
        .iter()
        .map(|s| {
            let (p, q) = s.endpoints();
            ((p.x, p.y), (q.x, q.y), symmetry::segment_invariance_residual(&spec, s, samples))
        })
        .collect())
}

#[pyfunction]
fn torus_distance(x0: f64, y0: f64, x1: f64, y1: f64) -> PyResult<f64> {
    Ok(torus::torus_distance(point(x0, y0)?, point(x1, y1)?))
}

#[pymodule]
fn pyhuygens(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMapSpec>()?;
    m.add_function(wrap_pyfunction!(fixed_points, m)?)?;
    m.add_function(wrap_pyfunction!(newton, m)?)?;
    m.add_function(wrap_pyfunction!(lyapunov_value, m)?)?;
    m.add_function(wrap_pyfunction!(orbital_derivative, m)?)?;
    m.add_function(wrap_pyfunction!(vdot_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(certify_suite, m)?)?;
    m.add_function(wrap_pyfunction!(basin_grid, m)?)?;
    m.add_function(wrap_pyfunction!(apply_symmetry, m)?)?;
    m.add_function(wrap_pyfunction!(equivariance_residual, m)?)?;
    m.add_function(wrap_pyfunction!(invariant_segments, m)?)?;
    m.add_function(wrap_pyfunction!(torus_distance, m)?)?;
    Ok(())
}

//! Python bindings. Structured results cross the boundary as JSON and come
//! back as plain dicts and lists.

use bubble_core::gauss::{self, AuditMode};
use bubble_core::perturb::{PerturbationFamily, PerturbationKind};
use bubble_core::profile::{GeneratingNetwork, WeightTriple};
use bubble_core::sphere::{self, Dimension};
use bubble_core::standard::{self, StandardBubbleGeometry};
use bubble_core::symmetrization::{symmetrize_certificate as certificate, PlanarRegion};
use bubble_core::unification::{self, ProblemInstance, SweepGrid};
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

create_exception!(double_bubble, ClassMismatchError, PyValueError);

fn err(e: bubble_core::Error) -> PyErr {
    use bubble_core::Error as E;
    match e {
        E::ClassMismatch { .. } => ClassMismatchError::new_err(e.to_string()),
        E::Numerical(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn to_py<'py, T: Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let s = serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (s,))
}

fn dim(n: u32) -> PyResult<Dimension> {
    Dimension::new(n).map_err(err)
}

fn instance(n: u32, v1: f64, v2: f64, w0: f64, w1: f64, w2: f64) -> PyResult<ProblemInstance> {
    ProblemInstance::from_parts(n, v1, v2, w0, w1, w2).map_err(err)
}

fn network(json: &str) -> PyResult<(GeneratingNetwork, Option<WeightTriple>)> {
    GeneratingNetwork::from_json(json).map_err(err)
}

/// The standard weighted double bubble for given volumes and weights.
#[pyclass(frozen, name = "StandardBubble")]
struct PyStandardBubble {
    inner: StandardBubbleGeometry,
}

#[pymethods]
impl PyStandardBubble {
    #[new]
    #[pyo3(signature = (n, v1, v2, w0=1.0, w1=1.0, w2=1.0))]
    fn new(n: u32, v1: f64, v2: f64, w0: f64, w1: f64, w2: f64) -> PyResult<Self> {
        let inner = standard::construct(&instance(n, v1, v2, w0, w1, w2)?).map_err(err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn dimension(&self) -> u32 {
        self.inner.dimension.get()
    }

    #[getter]
    fn weight_class(&self) -> String {
        self.inner.class.to_string()
    }

    /// NONE, DISJOINT, NESTED or SINGLE.
    #[getter]
    fn degenerate_kind(&self) -> PyResult<String> {
        serde_json::to_value(self.inner.degenerate_kind)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .ok_or_else(|| PyValueError::new_err("unserializable kind"))
    }

    #[getter]
    fn curvatures(&self) -> [f64; 3] {
        self.inner.curvatures
    }

    #[getter]
    fn radii(&self) -> [f64; 3] {
        self.inner.radii()
    }

    #[getter]
    fn junction_radius(&self) -> f64 {
        self.inner.junction_radius
    }

    #[getter]
    fn q(&self) -> f64 {
        self.inner.measured.q
    }

    /// Per-piece areas, volumes and `q`.
    fn measured<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.measured)
    }

    fn conormal_residual(&self) -> f64 {
        self.inner.conormal_residual()
    }

    /// Generating network as a JSON string, weights included.
    fn network_json(&self) -> PyResult<String> {
        self.inner.network().to_json(Some(self.inner.weights)).map_err(err)
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().map_err(err)
    }

    fn __repr__(&self) -> String {
        let m = &self.inner;
        format!(
            "StandardBubble(n={}, V=({}, {}), w=({}, {}, {}), q={})",
            m.dimension, m.volumes.v1, m.volumes.v2, m.weights.w0, m.weights.w1, m.weights.w2, m.measured.q
        )
    }
}

/// STRICT, BOUNDARY or VIOLATED.
#[pyfunction]
fn weight_class(w0: f64, w1: f64, w2: f64) -> PyResult<String> {
    Ok(WeightTriple::new(w0, w1, w2).map_err(err)?.classify().to_string())
}

#[pyfunction]
fn zone_area(n: u32, t1: f64, t2: f64) -> PyResult<f64> {
    sphere::zone_area(dim(n)?, t1, t2).map_err(err)
}

#[pyfunction]
fn cap_volume(n: u32, r: f64, theta: f64) -> PyResult<f64> {
    sphere::cap_volume(dim(n)?, r, theta).map_err(err)
}

#[pyfunction]
fn latitude_measure(n: u32, t: f64) -> PyResult<f64> {
    gauss::f(dim(n)?, t).map_err(err)
}

#[pyfunction]
fn cuff_ratio(n: u32, t: f64, beta: f64) -> PyResult<f64> {
    gauss::h(dim(n)?, t, beta).map_err(err)
}

#[pyfunction]
fn cap_perimeter_for_area(n: u32, area: f64) -> PyResult<f64> {
    gauss::cap_perimeter_for_area(dim(n)?, area).map_err(err)
}

/// Volumes `(V1, V2)` enclosed by a network.
#[pyfunction]
fn network_volumes(network_json: &str) -> PyResult<(f64, f64)> {
    let (net, _) = network(network_json)?;
    use bubble_core::profile::RegionLabel;
    Ok((net.volume(RegionLabel::B1).map_err(err)?, net.volume(RegionLabel::B2).map_err(err)?))
}

/// Relative area of a competitor; volumes default to the network's own.
#[pyfunction]
#[pyo3(signature = (network_json, w0, w1, w2, v1=None, v2=None))]
fn relative_area<'py>(
    py: Python<'py>,
    network_json: &str,
    w0: f64,
    w1: f64,
    w2: f64,
    v1: Option<f64>,
    v2: Option<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let (net, _) = network(network_json)?;
    let w = WeightTriple::new(w0, w1, w2).map_err(err)?;
    let r = match (v1, v2) {
        (Some(a), Some(b)) => {
            let alpha = instance(net.dimension.get(), a, b, w0, w1, w2)?;
            unification::relative_area(&net, &alpha)
        }
        (None, None) => unification::relative_area_own_class(&net, &w),
        _ => return Err(PyValueError::new_err("give both v1 and v2 or neither")),
    }
    .map_err(err)?;
    to_py(py, &r)
}

#[pyfunction]
fn sleeves_and_cuffs<'py>(py: Python<'py>, network_json: &str, w0: f64, w1: f64, w2: f64) -> PyResult<Bound<'py, PyAny>> {
    let (net, _) = network(network_json)?;
    let w = WeightTriple::new(w0, w1, w2).map_err(err)?;
    to_py(py, &gauss::sleeves_and_cuffs(&net, &w).map_err(err)?)
}

/// Calibration audit in the class of the network's own volumes; `assume`
/// sets every ratio to that `μ₀`.
#[pyfunction]
#[pyo3(signature = (network_json, w0, w1, w2, assume=None))]
fn calibration_audit<'py>(
    py: Python<'py>,
    network_json: &str,
    w0: f64,
    w1: f64,
    w2: f64,
    assume: Option<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let (net, _) = network(network_json)?;
    let (a, b) = network_volumes(network_json)?;
    let alpha = instance(net.dimension.get(), a, b, w0, w1, w2)?;
    let mode = assume.map_or(AuditMode::Measured, AuditMode::Assume);
    to_py(py, &gauss::calibration_audit(&net, &alpha, mode).map_err(err)?)
}

/// Overlap excess of a competitor against the standard bubble of its own volumes.
#[pyfunction]
fn overlap_excess<'py>(py: Python<'py>, network_json: &str, w0: f64, w1: f64, w2: f64) -> PyResult<Bound<'py, PyAny>> {
    let (net, _) = network(network_json)?;
    let (a, b) = network_volumes(network_json)?;
    let alpha = instance(net.dimension.get(), a, b, w0, w1, w2)?;
    let m = standard::construct(&alpha).map_err(err)?;
    to_py(py, &gauss::overlap_excess(&net, &alpha.weights, &m).map_err(err)?)
}

/// Competitor networks (JSON strings) of one perturbation family.
#[pyfunction]
#[pyo3(signature = (bubble, family, epsilon, volume_restoration=true))]
fn perturb(bubble: &PyStandardBubble, family: &str, epsilon: f64, volume_restoration: bool) -> PyResult<Vec<String>> {
    let kind: PerturbationKind = family.parse().map_err(err)?;
    let mut fam = PerturbationFamily::new(kind, epsilon);
    fam.volume_restoration = volume_restoration;
    let w = bubble.inner.weights;
    fam.competitors(&bubble.inner)
        .map_err(err)?
        .iter()
        .map(|c| c.to_json(Some(w)).map_err(err))
        .collect()
}

/// Perturbation sweep; omitted axes take the default grid's values.
#[pyfunction]
#[pyo3(signature = (dimensions=None, ratios=None, w0=None, w1=None, w2=None, epsilons=None, families=None))]
#[allow(clippy::too_many_arguments)]
fn sweep<'py>(
    py: Python<'py>,
    dimensions: Option<Vec<u32>>,
    ratios: Option<Vec<f64>>,
    w0: Option<Vec<f64>>,
    w1: Option<Vec<f64>>,
    w2: Option<f64>,
    epsilons: Option<Vec<f64>>,
    families: Option<Vec<String>>,
) -> PyResult<Bound<'py, PyAny>> {
    let d = SweepGrid::default();
    let families = match families {
        Some(f) => f.iter().map(|s| s.parse().map_err(err)).collect::<PyResult<_>>()?,
        None => d.families.clone(),
    };
    let grid = SweepGrid {
        dimensions: dimensions.unwrap_or(d.dimensions),
        ratios: ratios.unwrap_or(d.ratios),
        w0: w0.unwrap_or(d.w0),
        w1: w1.unwrap_or(d.w1),
        w2: w2.unwrap_or(d.w2),
        epsilons: epsilons.unwrap_or(d.epsilons),
        families,
        volume_restoration: d.volume_restoration,
    };
    let rows = py.detach(|| unification::sweep(&grid)).map_err(err)?;
    to_py(py, &rows)
}

/// Certificate for a planar region given as `{"loops": [[{"p", "q", "kappa"}, ...]]}`.
#[pyfunction]
fn symmetrize_certificate<'py>(py: Python<'py>, region_json: &str) -> PyResult<Bound<'py, PyAny>> {
    let r = PlanarRegion::from_json(region_json).map_err(err)?;
    to_py(py, &certificate(&r).map_err(err)?)
}

#[pymodule]
fn double_bubble(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyStandardBubble>()?;
    m.add("ClassMismatchError", m.py().get_type::<ClassMismatchError>())?;
    m.add_function(wrap_pyfunction!(weight_class, m)?)?;
    m.add_function(wrap_pyfunction!(zone_area, m)?)?;
    m.add_function(wrap_pyfunction!(cap_volume, m)?)?;
    m.add_function(wrap_pyfunction!(latitude_measure, m)?)?;
    m.add_function(wrap_pyfunction!(cuff_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(cap_perimeter_for_area, m)?)?;
    m.add_function(wrap_pyfunction!(network_volumes, m)?)?;
    m.add_function(wrap_pyfunction!(relative_area, m)?)?;
    m.add_function(wrap_pyfunction!(sleeves_and_cuffs, m)?)?;
    m.add_function(wrap_pyfunction!(calibration_audit, m)?)?;
    m.add_function(wrap_pyfunction!(overlap_excess, m)?)?;
    m.add_function(wrap_pyfunction!(perturb, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(symmetrize_certificate, m)?)?;
    Ok(())
}

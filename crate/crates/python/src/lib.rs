//! Python bindings for the modone toolkit: sequence generators, counting
//! statistics, Poisson reference laws, Diophantine-type estimation, and the
//! lattice-space bound checks, with reports returned as plain dicts.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyBool, PyDict, PyList, PyTuple};

use modone::diophantine;
use modone::lattice_space::{
    cone_bound_check, cusp_bound_check, iwasawa, lattice_count, sqrt_bound_check,
    AffineGroupElement, Mat2, Region,
};
use modone::reference_laws;
use modone::sequences::{
    gen_arithmetic, gen_directions, gen_iud, gen_sqrt, AffineLatticeSpec, ArithmeticKind,
    GeneratorDescriptor, TorusSequence,
};
use modone::statistics::{self, IntervalSet, TestFunction};
use modone::verify;

fn err(e: modone::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Convert a JSON value into the matching Python object.
fn json_to_py(py: Python<'_>, v: &serde_json::Value) -> PyResult<Py<PyAny>> {
    use serde_json::Value;
    Ok(match v {
        Value::Null => py.None(),
        Value::Bool(b) => PyBool::new(py, *b).to_owned().unbind().into(),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_pyobject(py)?.unbind().into()
            } else if let Some(u) = n.as_u64() {
                u.into_pyobject(py)?.unbind().into()
            } else {
                n.as_f64()
                    .ok_or_else(|| PyValueError::new_err("non-finite number in report"))?
                    .into_pyobject(py)?
                    .unbind()
                    .into()
            }
        }
        Value::String(s) => s.into_pyobject(py)?.unbind().into(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.unbind().into()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, val) in map {
                dict.set_item(k, json_to_py(py, val)?)?;
            }
            dict.unbind().into()
        }
    })
}

fn report_to_py<T: serde::Serialize>(py: Python<'_>, report: &T) -> PyResult<Py<PyAny>> {
    let value = serde_json::to_value(report)
        .map_err(|e| PyValueError::new_err(format!("report serialization failed: {e}")))?;
    json_to_py(py, &value)
}

fn interval_set(components: Vec<(f64, f64)>) -> PyResult<IntervalSet> {
    IntervalSet::new(&components).map_err(err)
}

fn mat2(entries: [f64; 4]) -> Mat2 {
    Mat2::new(entries[0], entries[1], entries[2], entries[3])
}

/// A finite sequence of points on the unit torus together with the
/// description of how it was generated.
#[pyclass(frozen, name = "Sequence")]
struct Sequence {
    inner: TorusSequence,
}

#[pymethods]
impl Sequence {
    /// The points, in generation order.
    fn points(&self) -> Vec<f64> {
        self.inner.points().to_vec()
    }

    /// The points in increasing order.
    fn sorted_points(&self) -> Vec<f64> {
        self.inner.sorted_points()
    }

    /// The generator descriptor as a dict (kind plus its parameters).
    fn descriptor(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        report_to_py(py, self.inner.meta())
    }

    fn __len__(&self) -> usize {
        self.inner.n_count()
    }

    fn __repr__(&self) -> String {
        format!(
            "Sequence({:?}, n={})",
            self.inner.meta(),
            self.inner.n_count()
        )
    }
}

// ---------------------------------------------------------------- generators

/// Fractional parts of sqrt(n) for 1 <= n <= t_max, perfect squares removed.
#[pyfunction]
fn sqrt_sequence(t_max: u64) -> PyResult<Sequence> {
    Ok(Sequence {
        inner: gen_sqrt(t_max).map_err(err)?,
    })
}

/// n independent uniform points from a seeded deterministic stream.
#[pyfunction]
#[pyo3(signature = (n, seed = 0))]
fn iud_sequence(n: u64, seed: u64) -> PyResult<Sequence> {
    Ok(Sequence {
        inner: gen_iud(n, seed).map_err(err)?,
    })
}

/// Fractional parts of alpha * a(n) + beta for an arithmetic family:
/// "linear", "quadratic", "power", "doubling", or "geometric".
#[pyfunction]
#[pyo3(signature = (family, alpha, n, beta = 0.0))]
fn arithmetic_sequence(family: &str, alpha: f64, n: u64, beta: f64) -> PyResult<Sequence> {
    let kind: ArithmeticKind = family.parse().map_err(|e: modone::Error| err(e))?;
    Ok(Sequence {
        inner: gen_arithmetic(kind, alpha, beta, n).map_err(err)?,
    })
}

/// Directions (as angles over the full turn) of the affine lattice points
/// (Z^2 + xi) M0 within Euclidean distance t_radius of the origin.
#[pyfunction]
#[pyo3(signature = (xi, t_radius, m0 = None))]
fn direction_sequence(xi: (f64, f64), t_radius: f64, m0: Option<[f64; 4]>) -> PyResult<Sequence> {
    let spec = match m0 {
        Some(entries) => AffineLatticeSpec::new(mat2(entries), [xi.0, xi.1]).map_err(err)?,
        None => AffineLatticeSpec::identity_with_shift([xi.0, xi.1]),
    };
    Ok(Sequence {
        inner: gen_directions(&spec, t_radius).map_err(err)?,
    })
}

/// Wrap externally produced points (already in [0, 1)) as a sequence.
#[pyfunction]
#[pyo3(signature = (points, label = "external"))]
fn external_sequence(points: Vec<f64>, label: &str) -> PyResult<Sequence> {
    Ok(Sequence {
        inner: TorusSequence::from_parts(
            points,
            GeneratorDescriptor::External {
                label: label.to_string(),
            },
        )
        .map_err(err)?,
    })
}

// ---------------------------------------------------------------- statistics

/// The counting variable: how many points land in x + I/N mod 1, with I a
/// union of intervals given as (lo, hi) pairs.
#[pyfunction]
fn count_stat(seq: &Sequence, x: f64, intervals: Vec<(f64, f64)>) -> PyResult<u64> {
    statistics::count_stat(&seq.inner, x, &interval_set(intervals)?).map_err(err)
}

/// Mixed moment of the counting variables over the given boxes (each a list
/// of (lo, hi) components) and exponents. Exact event-sweep integration by
/// default; pass grid for midpoint quadrature instead.
#[pyfunction]
#[pyo3(signature = (seq, boxes, powers, grid = None))]
fn moments(
    seq: &Sequence,
    boxes: Vec<Vec<(f64, f64)>>,
    powers: Vec<f64>,
    grid: Option<usize>,
) -> PyResult<f64> {
    let boxes: Vec<IntervalSet> = boxes
        .into_iter()
        .map(interval_set)
        .collect::<PyResult<_>>()?;
    match grid {
        None => statistics::moments_exact(&seq.inner, &boxes, &powers).map_err(err),
        Some(g) => statistics::moments(&seq.inner, &boxes, &powers, g).map_err(err),
    }
}

/// Distribution of the count vector over the boxes: a dict mapping count
/// tuples to the measure of x where they occur. Exact by default; pass grid
/// for the empirical midpoint-grid version.
#[pyfunction]
#[pyo3(signature = (seq, boxes, grid = None))]
fn counting_distribution(
    py: Python<'_>,
    seq: &Sequence,
    boxes: Vec<Vec<(f64, f64)>>,
    grid: Option<usize>,
) -> PyResult<Py<PyAny>> {
    let boxes: Vec<IntervalSet> = boxes
        .into_iter()
        .map(interval_set)
        .collect::<PyResult<_>>()?;
    let table = match grid {
        None => statistics::counting_distribution_exact(&seq.inner, &boxes).map_err(err)?,
        Some(g) => {
            statistics::empirical_counting_distribution(&seq.inner, &boxes, g).map_err(err)?
        }
    };
    let dict = PyDict::new(py);
    for (counts, mass) in table {
        dict.set_item(PyTuple::new(py, &counts)?, mass)?;
    }
    Ok(dict.unbind().into())
}

/// The N scaled circular k-th neighbor gaps (k = 1: nearest neighbor).
#[pyfunction]
#[pyo3(signature = (seq, k = 1))]
fn scaled_gaps(seq: &Sequence, k: usize) -> PyResult<Vec<f64>> {
    statistics::scaled_neighbor_gaps(&seq.inner, k).map_err(err)
}

/// Empirical CDF of the scaled k-th neighbor gaps evaluated on a grid.
#[pyfunction]
#[pyo3(signature = (seq, grid, k = 1))]
fn gap_cdf(seq: &Sequence, grid: Vec<f64>, k: usize) -> PyResult<Vec<f64>> {
    Ok(statistics::k_neighbor_distribution(&seq.inner, k, &grid)
        .map_err(err)?
        .masses)
}

/// Pair correlation against a triangular (hat) test function.
#[pyfunction]
#[pyo3(signature = (seq, center, halfwidth, height = 1.0))]
fn pair_correlation(seq: &Sequence, center: f64, halfwidth: f64, height: f64) -> PyResult<f64> {
    let f = TestFunction::hat(center, halfwidth, height).map_err(err)?;
    statistics::pair_correlation(&seq.inner, &f).map_err(err)
}

/// Histogram of scaled pair differences over [lo, hi), normalized so a
/// Poisson-like sequence has density about 1. Returns {"edges", "density"}.
#[pyfunction]
#[pyo3(signature = (seq, lo = 0.0, hi = 4.0, bins = 16))]
fn pair_correlation_histogram(
    py: Python<'_>,
    seq: &Sequence,
    lo: f64,
    hi: f64,
    bins: usize,
) -> PyResult<Py<PyAny>> {
    let h = statistics::pair_correlation_histogram(&seq.inner, lo, hi, bins).map_err(err)?;
    let dict = PyDict::new(py);
    dict.set_item("edges", h.bin_edges)?;
    dict.set_item("density", h.masses)?;
    Ok(dict.unbind().into())
}

// ------------------------------------------------------------ reference laws

/// Poisson probability of seeing r points in a window of the given length.
#[pyfunction]
fn poisson_pmf(r: u64, length: f64) -> PyResult<f64> {
    reference_laws::poisson_pmf(r, length).map_err(err)
}

/// Limit CDF of the scaled nearest-neighbor gap: 1 - exp(-a).
#[pyfunction]
fn exponential_gap_cdf(a: f64) -> PyResult<f64> {
    reference_laws::exponential_gap_cdf(a).map_err(err)
}

/// Limit CDF of the scaled k-th neighbor gap of a Poisson process.
#[pyfunction]
fn neighbor_spacing_cdf(k: usize, a: f64) -> PyResult<f64> {
    reference_laws::neighbor_spacing_cdf(k, a).map_err(err)
}

/// Poisson value of the pair correlation for a hat test function (its
/// integral).
#[pyfunction]
#[pyo3(signature = (center, halfwidth, height = 1.0))]
fn poisson_pair_value(center: f64, halfwidth: f64, height: f64) -> PyResult<f64> {
    let f = TestFunction::hat(center, halfwidth, height).map_err(err)?;
    Ok(reference_laws::poisson_pair_value(&f))
}

/// Poisson mixed second moment E[X(I1) X(I2)] for overlapping windows.
#[pyfunction]
fn poisson_mixed_second(i1: Vec<(f64, f64)>, i2: Vec<(f64, f64)>) -> PyResult<f64> {
    Ok(reference_laws::poisson_mixed_second(
        &interval_set(i1)?,
        &interval_set(i2)?,
    ))
}

// --------------------------------------------------------------- diophantine

/// Record-slope estimate of the Diophantine type of a scalar; returns a dict
/// with kappa_estimate, worst_witness, min_distance, search_bound.
#[pyfunction]
fn scalar_type_estimate(py: Python<'_>, omega: f64, k_max: u64) -> PyResult<Py<PyAny>> {
    report_to_py(
        py,
        &diophantine::scalar_type_estimate(omega, k_max).map_err(err)?,
    )
}

/// Same estimate for a plane vector, scanning |k1| + |k2| <= k_max.
#[pyfunction]
fn vector_type_estimate(py: Python<'_>, xi: (f64, f64), k_max: u64) -> PyResult<Py<PyAny>> {
    report_to_py(
        py,
        &diophantine::vector_type_estimate([xi.0, xi.1], k_max).map_err(err)?,
    )
}

/// Search for an exact rational line k . xi + l = 0 with |k| up to the
/// bound; returns the witness dict or None.
#[pyfunction]
fn rational_line_check(py: Python<'_>, xi: (f64, f64), bound: u64) -> PyResult<Py<PyAny>> {
    match diophantine::rational_line_check([xi.0, xi.1], bound).map_err(err)? {
        Some(w) => report_to_py(py, &w),
        None => Ok(py.None()),
    }
}

// ------------------------------------------------------------- lattice space

/// Iwasawa coordinates (u, v, phi) of a determinant-1 matrix given row-major.
#[pyfunction]
fn iwasawa_coordinates(m: [f64; 4]) -> PyResult<(f64, f64, f64)> {
    let c = iwasawa(&mat2(m)).map_err(err)?;
    Ok((c.u, c.v, c.phi))
}

/// Number of affine lattice points (Z^2 + xi) M0 inside a disc of the given
/// radius.
#[pyfunction]
#[pyo3(signature = (radius, xi = (0.0, 0.0), m0 = None))]
fn lattice_count_disc(radius: f64, xi: (f64, f64), m0: Option<[f64; 4]>) -> PyResult<u64> {
    let m = m0.map(mat2).unwrap_or(Mat2::IDENTITY);
    let g = AffineGroupElement::new(m, [xi.0, xi.1]).map_err(err)?;
    lattice_count(&g, &Region::disc(radius).map_err(err)?).map_err(err)
}

/// Check the cone bound: the window count of a direction sequence at x is
/// dominated by the padded-triangle lattice count. Returns a dict with lhs,
/// rhs, holds, n_count.
#[pyfunction]
#[pyo3(signature = (xi, x, interval, t, vartheta = 1e-2, scale_floor = 100.0, m0 = None))]
#[allow(clippy::too_many_arguments)]
fn cone_bound(
    py: Python<'_>,
    xi: (f64, f64),
    x: f64,
    interval: (f64, f64),
    t: f64,
    vartheta: f64,
    scale_floor: f64,
    m0: Option<[f64; 4]>,
) -> PyResult<Py<PyAny>> {
    let spec = match m0 {
        Some(entries) => AffineLatticeSpec::new(mat2(entries), [xi.0, xi.1]).map_err(err)?,
        None => AffineLatticeSpec::identity_with_shift([xi.0, xi.1]),
    };
    let r = cone_bound_check(&spec, x, interval, t, vartheta, scale_floor).map_err(err)?;
    let v = serde_json::json!({
        "lhs": r.lhs, "rhs": r.rhs, "holds": r.holds, "n_count": r.n_count,
    });
    json_to_py(py, &v)
}

/// Check the crude bound for the sqrt sequence: the window count at x is
/// dominated by the two parabola-sheet triangle counts. Returns a dict with
/// lhs, rhs, rhs_pos, rhs_neg, zero_window, holds, n_count.
#[pyfunction]
#[pyo3(signature = (x, interval, t_max, scale_floor = 100.0))]
fn sqrt_bound(
    py: Python<'_>,
    x: f64,
    interval: (f64, f64),
    t_max: u64,
    scale_floor: f64,
) -> PyResult<Py<PyAny>> {
    let r = sqrt_bound_check(x, interval, t_max, scale_floor).map_err(err)?;
    let v = serde_json::json!({
        "lhs": r.lhs, "rhs": r.rhs, "rhs_pos": r.rhs_pos, "rhs_neg": r.rhs_neg,
        "zero_window": r.zero_window, "holds": r.holds, "n_count": r.n_count,
    });
    json_to_py(py, &v)
}

/// Check the cusp bound for a disc region: the lattice count is dominated by
/// (2 r v^(1/2) + 1) times the shifted-integer count, with the exponentiated
/// variant when it applies. Returns a dict.
#[pyfunction]
#[pyo3(signature = (m0, xi, radius, exponent = 2.0))]
fn cusp_bound(
    py: Python<'_>,
    m0: [f64; 4],
    xi: (f64, f64),
    radius: f64,
    exponent: f64,
) -> PyResult<Py<PyAny>> {
    let g = AffineGroupElement::new(mat2(m0), [xi.0, xi.1]).map_err(err)?;
    let r = cusp_bound_check(&g, &Region::disc(radius).map_err(err)?, exponent).map_err(err)?;
    let v = serde_json::json!({
        "lhs": r.lhs, "rhs": r.rhs, "holds": r.holds,
        "count_factor": r.count_factor, "v": r.v, "radius": r.radius,
        "power": r.power.map(|p| serde_json::json!({
            "exponent": p.exponent, "lhs": p.lhs, "rhs": p.rhs, "holds": p.holds,
        })),
    });
    json_to_py(py, &v)
}

// -------------------------------------------------------------- verification

/// Names of the built-in verification suites, in canonical order.
#[pyfunction]
fn suite_names() -> Vec<String> {
    verify::SUITE_NAMES.iter().map(|s| s.to_string()).collect()
}

/// Run one verification suite; returns its report as a dict with suite,
/// checks (name/passed/details), and seconds.
#[pyfunction]
fn run_suite(py: Python<'_>, name: &str) -> PyResult<Py<PyAny>> {
    report_to_py(py, &verify::run_suite(name).map_err(err)?)
}

#[pymodule]
fn modone_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Sequence>()?;
    m.add_function(wrap_pyfunction!(sqrt_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(iud_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(arithmetic_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(direction_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(external_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(count_stat, m)?)?;
    m.add_function(wrap_pyfunction!(moments, m)?)?;
    m.add_function(wrap_pyfunction!(counting_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(scaled_gaps, m)?)?;
    m.add_function(wrap_pyfunction!(gap_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(pair_correlation, m)?)?;
    m.add_function(wrap_pyfunction!(pair_correlation_histogram, m)?)?;
    m.add_function(wrap_pyfunction!(poisson_pmf, m)?)?;
    m.add_function(wrap_pyfunction!(exponential_gap_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(neighbor_spacing_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(poisson_pair_value, m)?)?;
    m.add_function(wrap_pyfunction!(poisson_mixed_second, m)?)?;
    m.add_function(wrap_pyfunction!(scalar_type_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(vector_type_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(rational_line_check, m)?)?;
    m.add_function(wrap_pyfunction!(iwasawa_coordinates, m)?)?;
    m.add_function(wrap_pyfunction!(lattice_count_disc, m)?)?;
    m.add_function(wrap_pyfunction!(cone_bound, m)?)?;
    m.add_function(wrap_pyfunction!(sqrt_bound, m)?)?;
    m.add_function(wrap_pyfunction!(cusp_bound, m)?)?;
    m.add_function(wrap_pyfunction!(suite_names, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}

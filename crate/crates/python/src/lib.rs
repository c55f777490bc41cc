//! Python bindings. Build with `maturin develop` or
//! `cargo build -p frobtrace-py --features extension-module --release`.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use frobtrace::densities::{self, Cdf, DistributionModel};
use frobtrace::ec;
use frobtrace::equidist;
use frobtrace::poly::{self, IntPolynomial};
use frobtrace::sequence::RealSequence;
use frobtrace::Error;

create_exception!(frobtrace, ResourceError, PyException);
create_exception!(frobtrace, NumericError, PyException);

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Resource { .. } => ResourceError::new_err(e.to_string()),
        Error::NonConvergence { .. } | Error::Numeric(_) => NumericError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// Short Weierstrass curve y^2 = x^3 + a x + b.
#[pyclass(frozen, name = "Curve")]
struct PyCurve(ec::CurveSpec);

#[pymethods]
impl PyCurve {
    #[new]
    fn new(a: i64, b: i64) -> PyResult<Self> {
        ec::CurveSpec::new(a, b).map(PyCurve).map_err(py_err)
    }

    #[getter]
    fn a(&self) -> i64 {
        self.0.a()
    }

    #[getter]
    fn b(&self) -> i64 {
        self.0.b()
    }

    fn good_reduction(&self, p: u64) -> PyResult<bool> {
        self.0.good_reduction(p).map_err(py_err)
    }

    /// Returns (count, trace, character_sum).
    fn count_points(&self, p: u64) -> PyResult<(u64, i64, i64)> {
        let pc = ec::count_points(&self.0, p).map_err(py_err)?;
        Ok((pc.count, pc.trace, pc.character_sum))
    }

    fn frobenius_angle(&self, p: u64) -> PyResult<PyAngle> {
        let pc = ec::count_points(&self.0, p).map_err(py_err)?;
        ec::frobenius_angle(pc.trace, p).map(PyAngle).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Curve({}, {})", self.0.a(), self.0.b())
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

/// theta = arccos(a1 / 2 sqrt(p)) in extended precision.
#[pyclass(frozen, name = "FrobeniusAngle")]
struct PyAngle(ec::FrobeniusAngle);

#[pymethods]
impl PyAngle {
    #[new]
    #[pyo3(signature = (a1, p, bits = ec::DEFAULT_ANGLE_BITS))]
    fn new(a1: i64, p: u64, bits: u32) -> PyResult<Self> {
        ec::frobenius_angle_with_bits(a1, p, bits).map(PyAngle).map_err(py_err)
    }

    #[getter]
    fn a1(&self) -> i64 {
        self.0.a1()
    }

    #[getter]
    fn p(&self) -> u64 {
        self.0.p()
    }

    #[getter]
    fn theta(&self) -> f64 {
        self.0.theta_f64()
    }

    #[getter]
    fn err_bound(&self) -> f64 {
        self.0.err_bound()
    }

    #[getter]
    fn is_supersingular(&self) -> bool {
        self.0.is_supersingular()
    }

    #[pyo3(signature = (digits = 40))]
    fn theta_decimal(&self, digits: usize) -> String {
        self.0.theta().to_decimal(digits)
    }

    /// cos(n theta).
    fn cos_multiple(&self, n: u64) -> f64 {
        self.0.cos_multiple(n)
    }

    /// [alpha_1, ..., alpha_n].
    fn sequence(&self, n: usize) -> PyResult<Vec<f64>> {
        ec::normalized_trace_sequence(&self.0, n)
            .map(RealSequence::into_values)
            .map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("FrobeniusAngle(a1={}, p={}, theta={})", self.0.a1(), self.0.p(), self.0.theta_f64())
    }
}

/// a_n = tau^n + conj(tau)^n, returned as a decimal string.
#[pyfunction]
fn trace_power(a1: i64, p: u64, n: u32) -> PyResult<String> {
    ec::trace_power(a1, p, n).map(|v| v.to_string()).map_err(py_err)
}

fn seq(values: Vec<f64>, range: (f64, f64)) -> PyResult<RealSequence> {
    RealSequence::new(values, 1, range, "python").map_err(py_err)
}

/// Mean of exp(2 pi i k u_n); returns (real, imag).
#[pyfunction]
fn weyl_sum(values: Vec<f64>, k: i64) -> PyResult<(f64, f64)> {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
    let w = equidist::weyl_sum(&seq(values, (lo.min(hi), hi.max(lo)))?, k).map_err(py_err)?;
    Ok((w.sum_real, w.sum_imag))
}

/// Star discrepancy of samples in [0, 1].
#[pyfunction]
fn star_discrepancy(values: Vec<f64>) -> PyResult<f64> {
    equidist::star_discrepancy(&seq(values, (0.0, 1.0))?).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (values, cutoff = 10))]
fn erdos_turan_bound(values: Vec<f64>, cutoff: u32) -> PyResult<f64> {
    equidist::erdos_turan_bound(&seq(values, (0.0, 1.0))?, cutoff).map_err(py_err)
}

/// Reference law on [-1, 1] (or [lo, hi] for uniform).
#[pyclass(frozen, name = "Model")]
struct PyModel(DistributionModel);

#[pymethods]
impl PyModel {
    #[staticmethod]
    #[pyo3(signature = (lo = -1.0, hi = 1.0))]
    fn uniform(lo: f64, hi: f64) -> PyResult<Self> {
        DistributionModel::uniform(lo, hi).map(PyModel).map_err(py_err)
    }

    #[staticmethod]
    fn arcsine() -> Self {
        PyModel(DistributionModel::Arcsine)
    }

    #[staticmethod]
    fn semicircle() -> Self {
        PyModel(DistributionModel::Semicircle)
    }

    #[staticmethod]
    fn cm_mixture() -> Self {
        PyModel(DistributionModel::CmMixture)
    }

    #[staticmethod]
    fn gen_arcsine(d: u32) -> PyResult<Self> {
        DistributionModel::gen_arcsine(d).map(PyModel).map_err(py_err)
    }

    #[staticmethod]
    fn gen_arcsine_scaled(scale: f64) -> PyResult<Self> {
        DistributionModel::gen_arcsine_scaled(scale).map(PyModel).map_err(py_err)
    }

    #[getter]
    fn name(&self) -> String {
        self.0.name()
    }

    fn pdf(&self, t: f64) -> PyResult<f64> {
        self.0.pdf(t).map_err(py_err)
    }

    fn cdf(&self, t: f64) -> PyResult<f64> {
        self.0.cdf(t).map_err(py_err)
    }

    fn mass(&self, a: f64, b: f64) -> PyResult<f64> {
        self.0.mass(a, b).map_err(py_err)
    }

    /// Kolmogorov-Smirnov distance of the samples from this law.
    fn ks_distance(&self, values: Vec<f64>) -> PyResult<f64> {
        let (lo, hi) = self.0.domain();
        equidist::ks_distance(&seq(values, (lo, hi))?, &self.0).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Model({})", self.0.name())
    }
}

#[pyfunction]
fn bessel_j0(z: f64) -> PyResult<f64> {
    densities::bessel_j0(z).map_err(py_err)
}

/// Integer polynomial, coefficients listed from the leading term down.
#[pyclass(frozen, name = "Polynomial")]
struct PyPolynomial(IntPolynomial);

#[pymethods]
impl PyPolynomial {
    #[new]
    fn new(coeffs: Vec<i64>) -> PyResult<Self> {
        IntPolynomial::from_descending(&coeffs).map(PyPolynomial).map_err(py_err)
    }

    #[staticmethod]
    fn cyclotomic(n: u32) -> PyResult<Self> {
        poly::cyclotomic(n).map(PyPolynomial).map_err(py_err)
    }

    fn shift_constant(&self, c: i64) -> PyResult<Self> {
        poly::shift_constant(&self.0, c).map(PyPolynomial).map_err(py_err)
    }

    #[getter]
    fn degree(&self) -> usize {
        self.0.degree()
    }

    /// Roots as (re, im) pairs, sorted by real part.
    fn roots(&self) -> PyResult<Vec<(f64, f64)>> {
        let rs = self.0.roots().map_err(py_err)?;
        Ok(rs.roots().iter().map(|z| (z.re, z.im)).collect())
    }

    /// s_0..s_{count} as decimal strings.
    fn power_sums(&self, count: usize) -> PyResult<Vec<String>> {
        poly::newton_power_sums(&self.0, count)
            .map(|v| v.iter().map(|s| s.to_string()).collect())
            .map_err(py_err)
    }

    /// Returns (is_salem, tau, reasons).
    fn salem_classify(&self) -> (bool, Option<f64>, Vec<String>) {
        let v = poly::salem_classify(&self.0);
        (v.is_salem, v.tau, v.reasons.iter().map(|r| r.to_string()).collect())
    }

    /// frac(alpha^n) for n = 1..count, truncated at the certified length.
    fn power_mod1(&self, count: usize) -> PyResult<Vec<f64>> {
        poly::power_mod1_sequence(&self.0, count)
            .map(|m| m.sequence.into_values())
            .map_err(py_err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Polynomial({})", self.0)
    }
}

#[pymodule(name = "frobtrace")]
fn frobtrace_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCurve>()?;
    m.add_class::<PyAngle>()?;
    m.add_class::<PyModel>()?;
    m.add_class::<PyPolynomial>()?;
    m.add_function(wrap_pyfunction!(trace_power, m)?)?;
    m.add_function(wrap_pyfunction!(weyl_sum, m)?)?;
    m.add_function(wrap_pyfunction!(star_discrepancy, m)?)?;
    m.add_function(wrap_pyfunction!(erdos_turan_bound, m)?)?;
    m.add_function(wrap_pyfunction!(bessel_j0, m)?)?;
    m.add("ResourceError", m.py().get_type::<ResourceError>())?;
    m.add("NumericError", m.py().get_type::<NumericError>())?;
    Ok(())
}

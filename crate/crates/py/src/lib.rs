//! Python bindings for `wavecrit-core`.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use wavecrit_core::kac_rice::{abs_gaussian_montecarlo, abs_gaussian_reduction};
use wavecrit_core::wave::l_max_for_radius;
use wavecrit_core::{self as core, AbsQuadraticCoeffs, CriticalKind, Error, Method, SeriesSpec};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Consistency { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn method(name: &str) -> PyResult<Method> {
    match name {
        "direct" => Ok(Method::Direct),
        "asymptotic" => Ok(Method::Asymptotic),
        other => Err(PyValueError::new_err(format!("unknown method {other:?}"))),
    }
}

#[pyclass(frozen, skip_from_py_object, module = "wavecrit")]
#[derive(Clone)]
struct RegularityModel {
    inner: core::RegularityModel,
}

#[pymethods]
impl RegularityModel {
    #[new]
    fn new(s: f64) -> Self {
        Self { inner: core::RegularityModel::new(s) }
    }

    #[getter]
    fn s(&self) -> f64 {
        self.inner.s()
    }

    fn weight(&self, l: i64) -> f64 {
        self.inner.weight(l)
    }

    fn __repr__(&self) -> String {
        format!("RegularityModel(s={})", self.inner.s())
    }
}

#[pyclass(frozen, module = "wavecrit")]
struct CriticalPoint {
    #[pyo3(get)]
    r: f64,
    #[pyo3(get)]
    theta: f64,
    #[pyo3(get)]
    kind: &'static str,
    #[pyo3(get)]
    hessian_det: f64,
    #[pyo3(get)]
    residual: f64,
}

#[pymethods]
impl CriticalPoint {
    fn __repr__(&self) -> String {
        format!("CriticalPoint(r={}, theta={}, kind={:?})", self.r, self.theta, self.kind)
    }
}

#[pyclass(frozen, module = "wavecrit")]
struct WaveSample {
    inner: core::WaveSample,
}

#[pymethods]
impl WaveSample {
    /// Draw a sample; `l_max` defaults to the value needed for radius `radius`.
    #[new]
    #[pyo3(signature = (model, seed, l_max=None, radius=None))]
    fn new(model: &RegularityModel, seed: u64, l_max: Option<usize>, radius: Option<f64>) -> PyResult<Self> {
        let l_max = match (l_max, radius) {
            (Some(l), _) => l,
            (None, Some(r)) => l_max_for_radius(r),
            (None, None) => return Err(PyValueError::new_err("give l_max or radius")),
        };
        core::WaveSample::sample(&model.inner, seed, l_max).map(|inner| Self { inner }).map_err(to_py)
    }

    /// Sample with explicit coefficients `[a_1, a_2, ...]`.
    #[staticmethod]
    fn from_coeffs(model: &RegularityModel, coeffs: Vec<Complex64>) -> PyResult<Self> {
        core::WaveSample::from_coeffs(&model.inner, &coeffs).map(|inner| Self { inner }).map_err(to_py)
    }

    #[getter]
    fn l_max(&self) -> usize {
        self.inner.l_max()
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed()
    }

    fn coeff(&self, l: i64) -> Complex64 {
        self.inner.coeff(l)
    }

    /// `(u, (u_θ, u_r), ((u_θθ, u_rθ), (u_rθ, u_rr)))` at polar `(r, θ)`.
    #[allow(clippy::type_complexity)]
    fn evaluate(&self, r: f64, theta: f64) -> PyResult<(f64, (f64, f64), ((f64, f64), (f64, f64)))> {
        let e = self.inner.evaluate(r, theta).map_err(to_py)?;
        Ok((e.u, (e.du[0], e.du[1]), ((e.d2u[0][0], e.d2u[0][1]), (e.d2u[1][0], e.d2u[1][1]))))
    }

    #[pyo3(signature = (radius, grid_density=8.0, newton_tol=1e-10, r_min=0.5))]
    fn critical_points(&self, py: Python<'_>, radius: f64, grid_density: f64, newton_tol: f64, r_min: f64) -> PyResult<Vec<CriticalPoint>> {
        let params = core::SearchParams { grid_density, newton_tol, r_min, ..Default::default() };
        let pts = py
            .detach(|| core::wave::find_critical_points(&self.inner, radius, &params))
            .map_err(to_py)?;
        Ok(pts
            .into_iter()
            .map(|p| CriticalPoint {
                r: p.r,
                theta: p.theta,
                kind: match p.kind {
                    CriticalKind::Saddle => "saddle",
                    CriticalKind::Extremum => "extremum",
                    CriticalKind::Degenerate => "degenerate",
                },
                hessian_det: p.hessian_det,
                residual: p.residual,
            })
            .collect())
    }

    /// `f(φ)` and its first two derivatives.
    fn density(&self, phi: f64) -> (Complex64, Complex64, Complex64) {
        let [f, fp, fpp] = core::DensityRealization::from_sample(&self.inner).eval_all(phi);
        (f, fp, fpp)
    }

    /// `(count, locations, min |f|)` for the critical points of `|f|`.
    fn density_critical_points(&self) -> (usize, Vec<f64>, f64) {
        let c = core::DensityRealization::from_sample(&self.inner).critical_points();
        (c.count, c.locations, c.min_abs_f)
    }
}

/// `(kappa, exponent, log_power, regime)`.
#[pyfunction]
fn kappa_constant(s: f64) -> PyResult<(f64, f64, f64, &'static str)> {
    let k = core::kappa_constant(s).map_err(to_py)?;
    Ok((k.kappa, k.exponent, k.log_power, k.regime.as_str()))
}

#[pyfunction]
#[pyo3(signature = (s, m, m_prime, r, tol=1e-15))]
fn series_direct(s: f64, m: u32, m_prime: u32, r: f64, tol: f64) -> PyResult<f64> {
    let spec = SeriesSpec::new(core::RegularityModel::new(s), m, m_prime);
    core::series_direct(&spec, r, tol).map(|v| v.value).map_err(to_py)
}

#[pyfunction]
fn series_asymptotic(s: f64, m: u32, m_prime: u32, r: f64) -> PyResult<f64> {
    let spec = SeriesSpec::new(core::RegularityModel::new(s), m, m_prime);
    core::series_asymptotic(&spec, r).map(|v| v.value).map_err(to_py)
}

/// `E|A ξ₁² + B ξ₂² + 2C ξ₁ξ₃|`; with `samples` set, a Monte-Carlo `(mean, std_error)`.
#[pyfunction]
#[pyo3(signature = (a, b, c, samples=None, seed=0))]
fn abs_gaussian_integral(a: f64, b: f64, c: f64, samples: Option<usize>, seed: u64) -> (f64, f64) {
    let coeffs = AbsQuadraticCoeffs::new(a, b, c);
    match samples {
        Some(n) => abs_gaussian_montecarlo(coeffs, n, seed),
        None => (abs_gaussian_reduction(coeffs), 0.0),
    }
}

#[pyfunction]
#[pyo3(signature = (s, radius, r_min=std::f64::consts::PI, method="direct"))]
fn expected_critical_points(py: Python<'_>, s: f64, radius: f64, r_min: f64, method: &str) -> PyResult<f64> {
    let m = self::method(method)?;
    let model = core::RegularityModel::new(s);
    py.detach(|| core::expected_critical_points(&model, radius, r_min, m))
        .map(|e| e.value)
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (s, r, method="direct"))]
fn kac_rice_integrand(s: f64, r: f64, method: &str) -> PyResult<f64> {
    core::kac_rice_integrand(&core::RegularityModel::new(s), r, self::method(method)?).map_err(to_py)
}

#[pymodule]
fn wavecrit(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<RegularityModel>()?;
    m.add_class::<WaveSample>()?;
    m.add_class::<CriticalPoint>()?;
    m.add_function(wrap_pyfunction!(kappa_constant, m)?)?;
    m.add_function(wrap_pyfunction!(series_direct, m)?)?;
    m.add_function(wrap_pyfunction!(series_asymptotic, m)?)?;
    m.add_function(wrap_pyfunction!(abs_gaussian_integral, m)?)?;
    m.add_function(wrap_pyfunction!(expected_critical_points, m)?)?;
    m.add_function(wrap_pyfunction!(kac_rice_integrand, m)?)?;
    Ok(())
}

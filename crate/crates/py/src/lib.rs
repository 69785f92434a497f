//! Python bindings: load a run config, run the proof or only the eigendata
//! stage, and read back the certificate JSON and profile CSV.

use std::path::PathBuf;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use radproof::config::RunConfig as CoreConfig;
use radproof::pipeline;
use radproof::spectra::SpectralData;
use radproof::Interval;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn pair(x: Interval) -> (f64, f64) {
    (x.lo(), x.hi())
}

/// A validated run configuration.
#[pyclass(name = "RunConfig", module = "radproof_py", frozen)]
pub struct PyRunConfig {
    inner: CoreConfig,
}

#[pymethods]
impl PyRunConfig {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        CoreConfig::from_json(text).map(|inner| PyRunConfig { inner }).map_err(value_err)
    }

    /// Relative sample-file paths resolve against the config's directory.
    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        CoreConfig::load(&path).map(|inner| PyRunConfig { inner }).map_err(value_err)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string_pretty(&self.inner).map_err(value_err)
    }

    /// `r0 = ℓ r* + L`.
    #[getter]
    fn r0(&self) -> f64 {
        self.inner.geometry.r0().mid()
    }

    fn __repr__(&self) -> String {
        format!("RunConfig(r0={})", self.r0())
    }
}

/// Verified eigendata of `-DN(c)`.
#[pyclass(name = "Spectrum", module = "radproof_py", frozen)]
pub struct PySpectrum {
    inner: SpectralData,
}

#[pymethods]
impl PySpectrum {
    /// Enclosure of `min Re λ` as `(lo, hi)`.
    #[getter]
    fn lambda_hat(&self) -> (f64, f64) {
        pair(self.inner.lambda_hat)
    }

    /// Each eigenvalue as `((re_lo, re_hi), (im_lo, im_hi))`.
    #[getter]
    fn eigenvalues(&self) -> Vec<((f64, f64), (f64, f64))> {
        self.inner.lambda.iter().map(|z| (pair(z.re), pair(z.im))).collect()
    }

    fn report(&self) -> String {
        pipeline::spectral_report(&self.inner)
    }
}

/// A finished run.
#[pyclass(name = "ProofRun", module = "radproof_py", frozen)]
pub struct PyProofRun {
    inner: pipeline::ProofRun,
}

#[pymethods]
impl PyProofRun {
    #[getter]
    fn passed(&self) -> bool {
        self.inner.certificate.passed
    }

    #[getter]
    fn rho_bar(&self) -> f64 {
        self.inner.certificate.rho_bar
    }

    #[getter]
    fn c0_bound(&self) -> f64 {
        self.inner.certificate.c0_bound
    }

    #[getter]
    fn wall_time_s(&self) -> f64 {
        self.inner.certificate.wall_time_s
    }

    fn certificate_json(&self) -> String {
        pipeline::certificate_json(&self.inner.certificate)
    }

    /// Header `r,u1,...,uq,region`.
    fn profile_csv(&self) -> String {
        pipeline::profile_csv(&self.inner)
    }

    /// The reference profile at radius `r`.
    fn profile_at(&self, r: f64) -> Vec<f64> {
        let run = &self.inner;
        pipeline::profile_value(&run.ctx, &run.chi, &run.spectral, r)
    }

    fn report(&self) -> String {
        pipeline::report(&self.inner.certificate)
    }

    fn __repr__(&self) -> String {
        format!(
            "ProofRun(passed={}, c0_bound={:e})",
            self.inner.certificate.passed, self.inner.certificate.c0_bound
        )
    }
}

/// Full proof. Pipeline failures raise `RuntimeError` with a `[stage]` prefix.
#[pyfunction]
fn run_proof(py: Python<'_>, config: &PyRunConfig) -> PyResult<PyProofRun> {
    let cfg = config.inner.clone();
    py.detach(move || pipeline::run_proof(&cfg))
        .map(|inner| PyProofRun { inner })
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pyfunction]
fn eigen_only(config: &PyRunConfig) -> PyResult<PySpectrum> {
    pipeline::eigen_only(&config.inner)
        .map(|inner| PySpectrum { inner })
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// Reads a certificate file and renders it as text.
#[pyfunction]
fn report_certificate(path: PathBuf) -> PyResult<String> {
    let cert = pipeline::read_certificate(&path).map_err(value_err)?;
    Ok(pipeline::report(&cert))
}

#[pymodule]
pub fn radproof_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", pipeline::VERSION)?;
    m.add_class::<PyRunConfig>()?;
    m.add_class::<PySpectrum>()?;
    m.add_class::<PyProofRun>()?;
    m.add_function(wrap_pyfunction!(run_proof, m)?)?;
    m.add_function(wrap_pyfunction!(eigen_only, m)?)?;
    m.add_function(wrap_pyfunction!(report_certificate, m)?)?;
    Ok(())
}

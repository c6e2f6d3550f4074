//! Python bindings: invariants, components, densities, quadrature and the
//! verification suites. Structured results are returned as JSON strings.

use num_complex::Complex64;
use pyo3::exceptions::{PyIndexError, PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;

use plancherel_core::document::{parse_invariants, ComponentRecord, DensityDocument};
use plancherel_core::error::Error;
use plancherel_core::exactalg::{parse_factored, parse_ratfunc, FactoredExpr, RatFunc};
use plancherel_core::invariants::FundamentalInvariants;
use plancherel_core::plancherel::{
    density, enumerate_components, integrate_with_check, select_component, DensityReport,
};
use plancherel_core::{transfer, verify};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Index(_) => PyIndexError::new_err(e.to_string()),
        Error::Singularity(_) => PyZeroDivisionError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data")
}

fn point(z: Vec<(f64, f64)>) -> Vec<Complex64> {
    z.into_iter().map(|(re, im)| Complex64::new(re, im)).collect()
}

#[pyclass(name = "RatFunc", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyRatFunc(RatFunc);

#[pymethods]
impl PyRatFunc {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        parse_ratfunc(text).map(PyRatFunc).map_err(to_py)
    }

    fn eval(&self, q: f64) -> f64 {
        self.0.eval(q)
    }

    fn __mul__(&self, other: &PyRatFunc) -> PyRatFunc {
        PyRatFunc(&self.0 * &other.0)
    }

    fn __add__(&self, other: &PyRatFunc) -> PyRatFunc {
        PyRatFunc(&self.0 + &other.0)
    }

    fn __sub__(&self, other: &PyRatFunc) -> PyRatFunc {
        PyRatFunc(&self.0 - &other.0)
    }

    fn __truediv__(&self, other: &PyRatFunc) -> PyResult<PyRatFunc> {
        if other.0.is_zero() {
            return Err(PyZeroDivisionError::new_err("division by zero"));
        }
        Ok(PyRatFunc(&self.0 / &other.0))
    }

    fn __eq__(&self, other: &PyRatFunc) -> bool {
        self.0 == other.0
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("RatFunc({:?})", self.0.to_string())
    }
}

#[pyclass(name = "FactoredExpr", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyFactoredExpr(FactoredExpr);

#[pymethods]
impl PyFactoredExpr {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        parse_factored(text).map(PyFactoredExpr).map_err(to_py)
    }

    /// Value at `q` and a torus point given as `(re, im)` pairs.
    fn eval(&self, q: f64, z: Vec<(f64, f64)>) -> PyResult<(f64, f64)> {
        let v = self.0.eval(q, &point(z)).map_err(to_py)?;
        Ok((v.re, v.im))
    }

    fn exact_eq(&self, other: &PyFactoredExpr) -> bool {
        self.0.exact_eq(&other.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("FactoredExpr({:?})", self.0.to_string())
    }
}

#[pyclass(name = "Invariants", frozen)]
struct PyInvariants(FundamentalInvariants);

#[pymethods]
impl PyInvariants {
    /// Parse a JSON invariants document.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        parse_invariants(text).map(PyInvariants).map_err(to_py)
    }

    /// The Iwahori block of `GL(n)` over a field with `q` elements.
    #[staticmethod]
    fn iwahori(q: u64, n: u32) -> Self {
        PyInvariants(FundamentalInvariants::iwahori(q, n))
    }

    /// Violations as a JSON list; empty when the data are consistent.
    fn validate(&self) -> String {
        to_json(&self.0.validate())
    }

    /// Component records as a JSON list.
    fn components(&self) -> PyResult<String> {
        let specs = enumerate_components(&self.0).map_err(to_py)?;
        Ok(to_json(&specs.iter().map(ComponentRecord::new).collect::<Vec<_>>()))
    }

    fn density(&self, selector: &str) -> PyResult<PyDensity> {
        let spec = select_component(&self.0, selector).map_err(to_py)?;
        let kappa = transfer::kappa(&spec).ok();
        let report = density(&spec).map_err(to_py)?;
        Ok(PyDensity { report, kappa })
    }
}

#[pyclass(name = "Density", frozen)]
struct PyDensity {
    report: DensityReport,
    kappa: Option<transfer::Kappa>,
}

#[pymethods]
impl PyDensity {
    #[getter]
    fn selector(&self) -> String {
        self.report.selector.clone()
    }

    #[getter]
    fn torus_dim(&self) -> usize {
        self.report.torus_dim
    }

    #[getter]
    fn constant(&self) -> PyRatFunc {
        PyRatFunc(self.report.constant.clone())
    }

    #[getter]
    fn mu(&self) -> PyFactoredExpr {
        PyFactoredExpr(self.report.mu.clone())
    }

    #[getter]
    fn expr(&self) -> PyFactoredExpr {
        PyFactoredExpr(self.report.density_expr())
    }

    fn eval(&self, q: f64, z: Vec<(f64, f64)>) -> PyResult<f64> {
        self.report.eval(q, &point(z)).map_err(to_py)
    }

    /// Total mass and the difference to the half-grid result.
    #[pyo3(signature = (q, grid = 256))]
    fn integrate(&self, q: f64, grid: usize) -> PyResult<(f64, f64)> {
        let r = integrate_with_check(&self.report, q, grid).map_err(to_py)?;
        Ok((r.value, r.delta))
    }

    /// The ratio to the matching Iwahori density as JSON, or `None` when
    /// the component involves several cuspidals.
    fn kappa(&self) -> Option<String> {
        self.kappa.as_ref().map(to_json)
    }

    fn to_json(&self) -> String {
        to_json(&DensityDocument::new(&self.report))
    }
}

/// `λ(d, n')` as an expression in q.
#[pyfunction]
fn lambda_df(d: u32, n_prime: u32) -> PyResult<PyRatFunc> {
    transfer::lambda_df(d, n_prime).map(PyRatFunc).map_err(to_py)
}

/// Run the named suites, or all of them, and return the reports as JSON.
#[pyfunction]
#[pyo3(signature = (only = None))]
fn run_verify(only: Option<Vec<String>>) -> PyResult<String> {
    let reports = match only {
        None => verify::run_all(),
        Some(names) => names
            .iter()
            .map(|n| {
                verify::run_suite(n)
                    .ok_or_else(|| PyValueError::new_err(format!("unknown suite {n:?}")))
            })
            .collect::<PyResult<Vec<_>>>()?,
    };
    Ok(to_json(&reports))
}

#[pymodule]
fn plancherel(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRatFunc>()?;
    m.add_class::<PyFactoredExpr>()?;
    m.add_class::<PyInvariants>()?;
    m.add_class::<PyDensity>()?;
    m.add_function(wrap_pyfunction!(lambda_df, m)?)?;
    m.add_function(wrap_pyfunction!(run_verify, m)?)?;
    Ok(())
}

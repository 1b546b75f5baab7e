//! Python bindings. Integers cross the boundary as Python ints; sweeps
//! release the GIL while they run.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use pellfib::numerics::PrecisionPolicy;
use pellfib::pipeline::{self, DpSweep};
use pellfib::{kfib as kf, pell, Error};

create_exception!(pellfib, PellfibError, PyException);

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Domain(m) => PyValueError::new_err(m),
        other => PellfibError::new_err(other.to_string()),
    }
}

fn policy(precision: u64) -> PrecisionPolicy {
    PrecisionPolicy::new(precision, PrecisionPolicy::default().cap)
}

/// The orbit `x_n + y_n sqrt(d) = (x1 + y1 sqrt(d))^n`.
#[pyclass(name = "PellOrbit", frozen)]
struct PyPellOrbit(pell::PellOrbit);

#[pymethods]
impl PyPellOrbit {
    #[new]
    fn new(x1: BigInt, epsilon: i8) -> PyResult<Self> {
        let o = pell::PellOrbit::from_x1(x1, epsilon, 128)
            .and_then(|o| o.with_square_free_part())
            .map_err(py_err)?;
        Ok(PyPellOrbit(o))
    }

    #[getter]
    fn x1(&self) -> BigInt {
        self.0.x1.clone()
    }

    #[getter]
    fn epsilon(&self) -> i8 {
        self.0.epsilon
    }

    #[getter]
    fn y1(&self) -> Option<BigInt> {
        self.0.y1.clone()
    }

    #[getter]
    fn d(&self) -> Option<BigInt> {
        self.0.d.clone()
    }

    fn xn(&self, n: u64) -> BigInt {
        self.0.xn(n)
    }

    fn xn_mod(&self, n: u64, modulus: u64) -> PyResult<u64> {
        if modulus == 0 {
            return Err(PyValueError::new_err("modulus must be positive"));
        }
        Ok(self.0.xn_mod(n, modulus))
    }

    fn __repr__(&self) -> String {
        format!("PellOrbit(x1={}, epsilon={})", self.0.x1, self.0.epsilon)
    }
}

/// A verified solution `x_n = F_m^(k)`.
#[pyclass(name = "SolutionRecord", frozen)]
struct PyRecord(pipeline::SolutionRecord);

#[pymethods]
impl PyRecord {
    #[getter]
    fn k(&self) -> u64 {
        self.0.k
    }

    #[getter]
    fn n(&self) -> u64 {
        self.0.n
    }

    #[getter]
    fn m(&self) -> u64 {
        self.0.m
    }

    #[getter]
    fn x1(&self) -> BigInt {
        self.0.x1.clone()
    }

    #[getter]
    fn epsilon(&self) -> i8 {
        self.0.epsilon
    }

    #[getter]
    fn value(&self) -> BigInt {
        self.0.value.clone()
    }

    #[getter]
    fn provenance(&self) -> &'static str {
        self.0.provenance.as_str()
    }

    #[getter]
    fn witnesses(&self) -> u64 {
        self.0.witnesses
    }

    fn __repr__(&self) -> String {
        let r = &self.0;
        format!(
            "SolutionRecord(k={}, n={}, m={}, x1={}, epsilon={}, value={})",
            r.k, r.n, r.m, r.x1, r.epsilon, r.value
        )
    }
}

/// Outcome of a sweep over a grid of cells.
#[pyclass(name = "SweepReport", frozen)]
struct PyReport(pipeline::SweepReport);

#[pymethods]
impl PyReport {
    #[getter]
    fn sweep(&self) -> String {
        self.0.sweep.clone()
    }

    #[getter]
    fn grid(&self) -> String {
        self.0.grid.clone()
    }

    #[getter]
    fn stat(&self) -> BigInt {
        self.0.stat.clone()
    }

    #[getter]
    fn cells(&self) -> usize {
        self.0.cells.len()
    }

    #[getter]
    fn failures(&self) -> usize {
        self.0.failures
    }

    #[getter]
    fn extras(&self) -> BTreeMap<String, String> {
        self.0.extras.clone()
    }

    fn complete(&self) -> bool {
        self.0.complete()
    }

    fn to_jsonl(&self) -> String {
        self.0.to_jsonl()
    }

    fn __repr__(&self) -> String {
        let r = &self.0;
        format!(
            "SweepReport(sweep={:?}, stat={}, cells={}, failures={})",
            r.sweep,
            r.stat,
            r.cells.len(),
            r.failures
        )
    }
}

/// `F_m^(k)`, defined for every integer `m`.
#[pyfunction]
fn kfib(k: u64, m: i64) -> PyResult<BigInt> {
    if k < 2 {
        return Err(PyValueError::new_err("k must be at least 2"));
    }
    Ok(kf::kfib(k, m))
}

/// `F_m^(k)` from the closed binomial sum.
#[pyfunction]
fn cooper_howard(k: u64, m: i64) -> PyResult<BigInt> {
    kf::cooper_howard(k, m).map_err(py_err)
}

#[pyfunction]
fn fundamental_solution(d: u64) -> PyResult<PyPellOrbit> {
    pell::fundamental_solution(d, 128).map(PyPellOrbit).map_err(py_err)
}

/// The only `x1` whose orbit can have `x_b = y`.
#[pyfunction]
fn x1_from_bth_root(y: BigInt, b: u32) -> PyResult<BigInt> {
    if b == 0 {
        return Err(PyValueError::new_err("b must be positive"));
    }
    Ok(pell::x1_from_bth_root(&y, b))
}

#[pyfunction]
fn enumerate(py: Python<'_>, x1_max: u64, k_max: u64, m_max: u64) -> PyResult<Vec<PyRecord>> {
    let recs = py
        .detach(|| pipeline::enumerate_small_x1(x1_max, k_max, m_max))
        .map_err(py_err)?;
    Ok(recs.into_iter().map(PyRecord).collect())
}

/// The records `x_1 = F_((k+3)/2)^(k)` and `x_2 = F_(k+2)^(k)` for odd `k`.
#[pyfunction]
fn verify_family_i(k: u64) -> PyResult<(PyRecord, PyRecord)> {
    let (a, b) = pipeline::verify_family_i(k).map_err(py_err)?;
    Ok((PyRecord(a), PyRecord(b)))
}

/// The records `x_1 = F_(m1)^(k)` and `x_3 = F_(m2)^(k)` for parameter `a`.
#[pyfunction]
fn verify_family_ii(a: u32) -> PyResult<(PyRecord, PyRecord)> {
    let (r1, r3) = pipeline::verify_family_ii(a).map_err(py_err)?;
    Ok((PyRecord(r1), PyRecord(r3)))
}

#[pyfunction]
fn family_ii_params(a: u32) -> (u64, u64, u64) {
    pipeline::family_ii_params(a)
}

/// Certified check of the linear form inequality for a record.
#[pyfunction]
#[pyo3(signature = (record, precision = 350))]
fn check_gamma(record: &PyRecord, precision: u64) -> PyResult<bool> {
    pipeline::check_gamma_inequality(&record.0, &policy(precision)).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (k_min, k_max, depth, precision = 350))]
fn sweep_chi_quotients(py: Python<'_>, k_min: u64, k_max: u64, depth: usize, precision: u64) -> PyResult<PyReport> {
    let p = policy(precision);
    let r = py.detach(|| pipeline::sweep_chi_quotients(k_min, k_max, depth, &p));
    r.map(PyReport).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (m1_max, depth, precision = 350))]
fn sweep_delta_quotients(py: Python<'_>, m1_max: u64, depth: usize, precision: u64) -> PyResult<PyReport> {
    let p = policy(precision);
    let r = py.detach(|| pipeline::sweep_delta_quotients(m1_max, depth, &p));
    r.map(PyReport).map_err(py_err)
}

/// Reduction sweep with the published `q_200`, ladder and `M`, over
/// `k_min <= k <= k_max` and `2 <= m1 <= m1_max`.
#[pyfunction]
#[pyo3(signature = (k_min, k_max, m1_max = 221, precision = 350))]
fn sweep_dp(py: Python<'_>, k_min: u64, k_max: u64, m1_max: u64, precision: u64) -> PyResult<PyReport> {
    let params = DpSweep {
        k_min,
        m1_max,
        ..DpSweep::standard(k_max)
    };
    let p = policy(precision);
    let r = py.detach(|| pipeline::sweep_dp(&params, &p));
    r.map(PyReport).map_err(py_err)
}

#[pyfunction]
fn default_index_set() -> Vec<u32> {
    pipeline::default_index_set()
}

/// Survivors as `(y, k, m, b, x1, epsilon, exact)` tuples.
type SurvivorTuple = (BigInt, u64, u64, u32, BigInt, i8, bool);

#[pyfunction]
#[pyo3(signature = (k_max, m_max, modulus = 10_000_000_000, index_set = None))]
fn mod_sieve(
    py: Python<'_>,
    k_max: u64,
    m_max: u64,
    modulus: u64,
    index_set: Option<Vec<u32>>,
) -> PyResult<(PyReport, Vec<SurvivorTuple>)> {
    let set = index_set.unwrap_or_else(pipeline::default_index_set);
    let (r, s) = py
        .detach(|| pipeline::mod_sieve(k_max, m_max, modulus, &set))
        .map_err(py_err)?;
    let s = s
        .into_iter()
        .map(|s| (s.y, s.k, s.m, s.b, s.x1, s.eps, s.exact))
        .collect();
    Ok((PyReport(r), s))
}

#[pymodule]
#[pyo3(name = "pellfib")]
fn pellfib_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("PellfibError", m.py().get_type::<PellfibError>())?;
    m.add_class::<PyPellOrbit>()?;
    m.add_class::<PyRecord>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(kfib, m)?)?;
    m.add_function(wrap_pyfunction!(cooper_howard, m)?)?;
    m.add_function(wrap_pyfunction!(fundamental_solution, m)?)?;
    m.add_function(wrap_pyfunction!(x1_from_bth_root, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(verify_family_i, m)?)?;
    m.add_function(wrap_pyfunction!(verify_family_ii, m)?)?;
    m.add_function(wrap_pyfunction!(family_ii_params, m)?)?;
    m.add_function(wrap_pyfunction!(check_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_chi_quotients, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_delta_quotients, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_dp, m)?)?;
    m.add_function(wrap_pyfunction!(default_index_set, m)?)?;
    m.add_function(wrap_pyfunction!(mod_sieve, m)?)?;
    Ok(())
}

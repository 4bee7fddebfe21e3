//! Python bindings. Matrices cross the boundary as lists of rows of complex numbers.

use std::collections::BTreeMap;

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use winv_core::oracle::InverseSet;
use winv_core::{classic, decomp, gen, oracle, w123k, weighted};
use winv_core::{Matrix, WinvError};

create_exception!(winv, WinvException, PyException, "Base class for winv errors.");
create_exception!(winv, ExistenceFailure, WinvException, "r(WAW) differs from r(A).");
create_exception!(winv, IndexOutOfRange, WinvException, "Index too large for the operation, or k below the weighted index.");
create_exception!(winv, NotAMember, WinvException, "Candidate fails a defining equation.");
create_exception!(winv, ShapeMismatch, WinvException, "Operands do not conform.");

fn to_py(e: WinvError) -> PyErr {
    let msg = e.to_string();
    match e {
        WinvError::ExistenceFailure { .. } => ExistenceFailure::new_err(msg),
        WinvError::IndexTooLarge { .. } | WinvError::IndexTooSmall { .. } => IndexOutOfRange::new_err(msg),
        WinvError::NotAMember { .. } => NotAMember::new_err(msg),
        WinvError::ShapeMismatch { .. } => ShapeMismatch::new_err(msg),
        _ => WinvException::new_err(msg),
    }
}

type Rows = Vec<Vec<Complex64>>;

fn mat(rows: Rows) -> PyResult<Matrix> {
    Matrix::from_rows(&rows).map_err(to_py)
}

fn rows(m: &Matrix) -> Rows {
    m.to_rows()
}

fn set(name: &str) -> PyResult<InverseSet> {
    name.parse().map_err(to_py)
}

#[pyclass(name = "Tolerance", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyTolerance(winv_core::Tolerance);

#[pymethods]
impl PyTolerance {
    #[new]
    #[pyo3(signature = (rank_rel=None, eq_rel=winv_core::Tolerance::DEFAULT_EQ_REL))]
    fn new(rank_rel: Option<f64>, eq_rel: f64) -> PyResult<Self> {
        winv_core::Tolerance::new(rank_rel, eq_rel).map(PyTolerance).map_err(to_py)
    }

    /// Tolerance from `WINV_TOL_RANK` and `WINV_TOL_EQ`.
    #[staticmethod]
    fn from_env() -> PyResult<Self> {
        winv_core::Tolerance::from_env().map(PyTolerance).map_err(to_py)
    }

    #[getter]
    fn rank_rel(&self) -> Option<f64> {
        self.0.rank_rel()
    }

    #[getter]
    fn eq_rel(&self) -> f64 {
        self.0.eq_rel()
    }

    fn __repr__(&self) -> String {
        format!("Tolerance(rank_rel={:?}, eq_rel={:e})", self.0.rank_rel(), self.0.eq_rel())
    }
}

fn tol(t: Option<&PyTolerance>) -> winv_core::Tolerance {
    t.map(|t| t.0).unwrap_or_default()
}

#[pyclass(name = "VerificationReport", frozen)]
struct PyReport(oracle::VerificationReport);

#[pymethods]
impl PyReport {
    #[getter]
    fn set(&self) -> String {
        self.0.set_name.to_string()
    }

    #[getter]
    fn k(&self) -> usize {
        self.0.k_used
    }

    #[getter]
    fn residuals(&self) -> BTreeMap<String, f64> {
        self.0.residuals.clone()
    }

    #[getter]
    fn verdicts(&self) -> BTreeMap<String, bool> {
        self.0.verdicts.clone()
    }

    #[getter]
    fn passed(&self) -> bool {
        self.0.pass
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    fn __bool__(&self) -> bool {
        self.0.pass
    }

    fn __repr__(&self) -> String {
        format!("VerificationReport(set={:?}, k={}, pass={})", self.set(), self.0.k_used, self.0.pass)
    }
}

#[pyclass(name = "InverseFamily", frozen)]
struct PyFamily(classic::InverseFamily);

#[pymethods]
impl PyFamily {
    #[getter]
    fn set(&self) -> String {
        self.0.set_name().to_string()
    }

    #[getter]
    fn param_shape(&self) -> (usize, usize) {
        self.0.param_shape()
    }

    fn base(&self) -> Rows {
        rows(self.0.base())
    }

    fn member(&self, param: Rows) -> PyResult<Rows> {
        Ok(rows(&self.0.member(&mat(param)?).map_err(to_py)?))
    }

    /// Member for the seeded random parameter number `index`.
    #[pyo3(signature = (seed, index=0))]
    fn sample(&self, seed: u64, index: u64) -> PyResult<Rows> {
        let p = gen::random_parameter(self.0.param_shape(), seed, index);
        Ok(rows(&self.0.member(&p).map_err(to_py)?))
    }

    fn __repr__(&self) -> String {
        let (r, c) = self.0.param_shape();
        format!("InverseFamily(set={:?}, param_shape=({r}, {c}))", self.set())
    }
}

#[pyfunction]
#[pyo3(signature = (m, tol=None))]
fn pinv(m: Rows, tol: Option<&PyTolerance>) -> PyResult<Rows> {
    Ok(rows(&classic::moore_penrose(&mat(m)?, &self::tol(tol))))
}

#[pyfunction]
#[pyo3(signature = (m, tol=None))]
fn drazin(m: Rows, tol: Option<&PyTolerance>) -> PyResult<Rows> {
    Ok(rows(&classic::drazin(&mat(m)?, &self::tol(tol)).map_err(to_py)?))
}

#[pyfunction]
#[pyo3(signature = (a, w, tol=None))]
fn w_drazin(a: Rows, w: Rows, tol: Option<&PyTolerance>) -> PyResult<Rows> {
    Ok(rows(&classic::w_drazin(&mat(a)?, &mat(w)?, &self::tol(tol)).map_err(to_py)?))
}

#[pyfunction]
#[pyo3(signature = (a, w, tol=None))]
fn weighted_core(a: Rows, w: Rows, tol: Option<&PyTolerance>) -> PyResult<Rows> {
    Ok(rows(&classic::weighted_core(&mat(a)?, &mat(w)?, &self::tol(tol)).map_err(to_py)?))
}

#[pyfunction]
#[pyo3(signature = (a, w, tol=None))]
fn weighted_index(a: Rows, w: Rows, tol: Option<&PyTolerance>) -> PyResult<usize> {
    decomp::weighted_index(&mat(a)?, &mat(w)?, &self::tol(tol)).map_err(to_py)
}

/// Ranks and existence verdicts as a dict.
#[pyfunction]
#[pyo3(signature = (a, w, tol=None))]
fn existence<'py>(py: Python<'py>, a: Rows, w: Rows, tol: Option<&PyTolerance>) -> PyResult<Bound<'py, PyDict>> {
    let v = weighted::existence(&mat(a)?, &mat(w)?, &self::tol(tol)).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("rank_A", v.rank_a)?;
    d.set_item("rank_WAW", v.rank_waw)?;
    d.set_item("rank_AW", v.rank_aw)?;
    d.set_item("rank_WA", v.rank_wa)?;
    d.set_item("exists_w1", v.exists_w1)?;
    d.set_item("exists_w123", v.exists_w123)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (a, w, k=None, tol=None))]
fn w1231k_particular(a: Rows, w: Rows, k: Option<usize>, tol: Option<&PyTolerance>) -> PyResult<Rows> {
    Ok(rows(&w123k::w1231k_particular(&mat(a)?, &mat(w)?, k, &self::tol(tol)).map_err(to_py)?))
}

#[pyfunction]
#[pyo3(signature = (a, w, k=None, tol=None))]
fn w1241k_particular(a: Rows, w: Rows, k: Option<usize>, tol: Option<&PyTolerance>) -> PyResult<Rows> {
    Ok(rows(&w123k::w1241k_particular(&mat(a)?, &mat(w)?, k, &self::tol(tol)).map_err(to_py)?))
}

/// Parametrized family for `set` in {w1, w123, w124, w123-1k, w124-k1, 123}.
#[pyfunction]
#[pyo3(signature = (set, a, w=None, k=None, tol=None))]
fn family(set: &str, a: Rows, w: Option<Rows>, k: Option<usize>, tol: Option<&PyTolerance>) -> PyResult<PyFamily> {
    let s = self::set(set)?;
    let t = self::tol(tol);
    let a = mat(a)?;
    if s == InverseSet::Classic123 {
        return Ok(PyFamily(classic::one23_family(&a, &t)));
    }
    let w = mat(w.ok_or_else(|| WinvException::new_err(format!("set `{s}` needs W")))?)?;
    let fam = match s {
        InverseSet::W1 => weighted::w1_family(&a, &w, &t),
        InverseSet::W123 => weighted::w123_family(&a, &w, &t),
        InverseSet::W124 => weighted::w124_family(&a, &w, &t),
        InverseSet::W1231k => w123k::w1231k_family(&a, &w, k, &t),
        InverseSet::W124k1 => w123k::w1241k_family(&a, &w, k, &t),
        _ => return Err(WinvException::new_err(format!("set `{s}` has no free parameter"))),
    };
    fam.map(PyFamily).map_err(to_py)
}

/// Residual report for every defining equation of `set`. `w` may be omitted
/// for the classical sets.
#[pyfunction]
#[pyo3(signature = (set, a, x, w=None, k=None, tol=None))]
fn check_membership(
    set: &str,
    a: Rows,
    x: Rows,
    w: Option<Rows>,
    k: Option<usize>,
    tol: Option<&PyTolerance>,
) -> PyResult<PyReport> {
    let s = self::set(set)?;
    let w = match w {
        Some(w) => mat(w)?,
        None if !s.is_weighted() => Matrix::zeros(0, 0),
        None => return Err(WinvException::new_err(format!("set `{s}` needs W"))),
    };
    oracle::check_membership(&mat(a)?, &w, &mat(x)?, k, s, &self::tol(tol))
        .map(PyReport)
        .map_err(to_py)
}

/// Seeded pair `(A, W)` with `r(A) = r(WAW) = r` and weighted index `k`.
#[pyfunction]
#[pyo3(signature = (m, n, r, k, seed=0))]
fn cn_construct(m: usize, n: usize, r: usize, k: usize, seed: u64) -> PyResult<(Rows, Rows)> {
    let (a, w) = gen::cn_construct(&gen::InstanceSpec::new(m, n, r, k, seed)).map_err(to_py)?;
    Ok((rows(&a), rows(&w)))
}

#[pymodule]
fn winv(py: Python<'_>, m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTolerance>()?;
    m.add_class::<PyReport>()?;
    m.add_class::<PyFamily>()?;
    m.add("WinvError", py.get_type::<WinvException>())?;
    m.add("ExistenceFailure", py.get_type::<ExistenceFailure>())?;
    m.add("IndexOutOfRange", py.get_type::<IndexOutOfRange>())?;
    m.add("NotAMember", py.get_type::<NotAMember>())?;
    m.add("ShapeMismatch", py.get_type::<ShapeMismatch>())?;
    m.add_function(wrap_pyfunction!(pinv, m)?)?;
    m.add_function(wrap_pyfunction!(drazin, m)?)?;
    m.add_function(wrap_pyfunction!(w_drazin, m)?)?;
    m.add_function(wrap_pyfunction!(weighted_core, m)?)?;
    m.add_function(wrap_pyfunction!(weighted_index, m)?)?;
    m.add_function(wrap_pyfunction!(existence, m)?)?;
    m.add_function(wrap_pyfunction!(w1231k_particular, m)?)?;
    m.add_function(wrap_pyfunction!(w1241k_particular, m)?)?;
    m.add_function(wrap_pyfunction!(family, m)?)?;
    m.add_function(wrap_pyfunction!(check_membership, m)?)?;
    m.add_function(wrap_pyfunction!(cn_construct, m)?)?;
    Ok(())
}

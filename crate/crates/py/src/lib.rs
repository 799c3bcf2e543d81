//! Python bindings. Matrices cross the boundary as nested lists, row-major;
//! structured results come back as plain dicts.

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;

use hankelid_core as core;
use hankelid_core::numerics::{mat_from_rows, mat_to_rows};
use hankelid_core::{Mat, PriorBounds, SizeCaps, Tolerance, Vector};

type Rows = Vec<Vec<f64>>;

fn to_py_err(e: core::Error) -> PyErr {
    match e {
        core::Error::Io(e) => PyOSError::new_err(e.to_string()),
        e => PyValueError::new_err(e.to_string()),
    }
}

fn tolerance(rank_tol: Option<f64>) -> PyResult<Tolerance> {
    match rank_tol {
        None => Ok(Tolerance::default()),
        Some(r) => Tolerance::default().with_rank_rel(r).map_err(to_py_err),
    }
}

/// `cols` is needed for matrices with no rows.
fn matrix(rows: &Rows, cols: usize) -> PyResult<Mat> {
    mat_from_rows(rows, cols).map_err(to_py_err)
}

fn width(rows: &Rows, fallback: usize) -> usize {
    rows.first().map_or(fallback, Vec::len)
}

fn to_dict<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

#[pyclass(name = "Trajectory", frozen)]
struct PyTrajectory {
    inner: core::IOTrajectory,
}

#[pymethods]
impl PyTrajectory {
    /// `u` is m x T and `y` is p x T.
    #[new]
    fn new(u: Rows, y: Rows) -> PyResult<Self> {
        let t = width(&u, 0);
        let inner = core::IOTrajectory::new(matrix(&u, t)?, matrix(&y, t)?).map_err(to_py_err)?;
        Ok(PyTrajectory { inner })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let path = std::path::Path::new(path);
        let inner = core::io::load_trajectory(path, core::io::DataFormat::from_path(path))
            .map_err(to_py_err)?;
        Ok(PyTrajectory { inner })
    }

    #[staticmethod]
    fn running_example() -> Self {
        PyTrajectory { inner: core::fixtures::running_example() }
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    #[getter]
    fn p(&self) -> usize {
        self.inner.p()
    }

    #[getter(T)]
    fn t(&self) -> usize {
        self.inner.len()
    }

    #[getter]
    fn u(&self) -> Rows {
        mat_to_rows(self.inner.u())
    }

    #[getter]
    fn y(&self) -> Rows {
        mat_to_rows(self.inner.y())
    }

    fn prefix(&self, t: usize) -> PyResult<Self> {
        Ok(PyTrajectory { inner: self.inner.prefix(t).map_err(to_py_err)? })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Trajectory(m={}, p={}, T={})", self.inner.m(), self.inner.p(), self.inner.len())
    }
}

#[pyclass(name = "System", frozen)]
struct PySystem {
    inner: core::IsoSystem,
}

#[pymethods]
impl PySystem {
    /// `n` is only needed when `A` is empty; empty `B` or `C` take their
    /// shape from `n` and `D`.
    #[new]
    #[pyo3(signature = (a, b, c, d, n = None))]
    fn new(a: Rows, b: Rows, c: Rows, d: Rows, n: Option<usize>) -> PyResult<Self> {
        let n = n.unwrap_or(a.len());
        let m = width(&d, width(&b, 0));
        let p = d.len().max(c.len());
        let b = if b.is_empty() { Mat::zeros(n, m) } else { matrix(&b, m)? };
        let c = if c.is_empty() { Mat::zeros(p, n) } else { matrix(&c, n)? };
        let inner = core::IsoSystem::new(matrix(&a, n)?, b, c, matrix(&d, m)?)
        .map_err(to_py_err)?;
        Ok(PySystem { inner })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let inner = core::io::load_system(std::path::Path::new(path)).map_err(to_py_err)?;
        Ok(PySystem { inner })
    }

    #[staticmethod]
    fn true_system() -> Self {
        PySystem { inner: core::fixtures::true_system() }
    }

    fn save(&self, path: &str) -> PyResult<()> {
        core::io::save_system(&self.inner, std::path::Path::new(path)).map_err(to_py_err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    #[getter]
    fn p(&self) -> usize {
        self.inner.p()
    }

    #[getter(A)]
    fn a(&self) -> Rows {
        mat_to_rows(self.inner.a())
    }

    #[getter(B)]
    fn b(&self) -> Rows {
        mat_to_rows(self.inner.b())
    }

    #[getter(C)]
    fn c(&self) -> Rows {
        mat_to_rows(self.inner.c())
    }

    #[getter(D)]
    fn d(&self) -> Rows {
        mat_to_rows(self.inner.d())
    }

    #[pyo3(signature = (rank_tol = None))]
    fn lag(&self, rank_tol: Option<f64>) -> PyResult<usize> {
        Ok(self.inner.lag(&tolerance(rank_tol)?))
    }

    #[pyo3(signature = (rank_tol = None))]
    fn is_minimal(&self, rank_tol: Option<f64>) -> PyResult<bool> {
        Ok(self.inner.is_minimal(&tolerance(rank_tol)?))
    }

    /// Returns `(y, x)` with `y` p x T and `x` n x (T + 1).
    fn simulate(&self, x0: Vec<f64>, u: Rows) -> PyResult<(Rows, Rows)> {
        let u = matrix(&u, width(&u, 0))?;
        let (y, x) = self.inner.simulate(&Vector::from_vec(x0), &u).map_err(to_py_err)?;
        Ok((mat_to_rows(&y), mat_to_rows(&x)))
    }

    #[pyo3(signature = (traj, rank_tol = None))]
    fn explains(&self, traj: &PyTrajectory, rank_tol: Option<f64>) -> PyResult<bool> {
        let e = self.inner.explains(&traj.inner, &tolerance(rank_tol)?).map_err(to_py_err)?;
        Ok(e.explains)
    }

    /// Returns `(isomorphic, S, residual)`; `S` maps `other`'s state
    /// coordinates to this system's.
    #[pyo3(signature = (other, rank_tol = None))]
    fn is_isomorphic(
        &self,
        other: &PySystem,
        rank_tol: Option<f64>,
    ) -> PyResult<(bool, Option<Rows>, f64)> {
        let iso = self
            .inner
            .is_isomorphic(&other.inner, &tolerance(rank_tol)?)
            .map_err(to_py_err)?;
        Ok((iso.isomorphic, iso.transform.as_ref().map(mat_to_rows), iso.residual))
    }

    fn __repr__(&self) -> String {
        format!("System(n={}, m={}, p={})", self.inner.n(), self.inner.m(), self.inner.p())
    }
}

#[pyfunction]
#[pyo3(signature = (traj, rank_tol = None))]
fn invariants<'py>(
    py: Python<'py>,
    traj: &PyTrajectory,
    rank_tol: Option<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    to_dict(py, &core::invariants(&traj.inner, &tolerance(rank_tol)?))
}

/// Minimal explaining system; returns `(system, residual)`.
#[pyfunction]
#[pyo3(signature = (traj, rank_tol = None))]
fn identify(traj: &PyTrajectory, rank_tol: Option<f64>) -> PyResult<(PySystem, f64)> {
    let res = core::identify_minimal(&traj.inner, &tolerance(rank_tol)?).map_err(to_py_err)?;
    Ok((PySystem { inner: res.system }, res.residual))
}

#[pyfunction]
#[pyo3(signature = (traj, l_plus, n_plus, l_minus = 0, n_minus = 0, rank_tol = None))]
fn check_main<'py>(
    py: Python<'py>,
    traj: &PyTrajectory,
    l_plus: usize,
    n_plus: usize,
    l_minus: usize,
    n_minus: usize,
    rank_tol: Option<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let bounds = PriorBounds::new(l_minus, l_plus, n_minus, n_plus).map_err(to_py_err)?;
    to_dict(py, &core::check_main(&traj.inner, &bounds, &tolerance(rank_tol)?))
}

#[pyfunction]
#[pyo3(signature = (traj, l_plus, n_plus, l_minus = 0, n_minus = 0, rank_tol = None))]
fn check_pe<'py>(
    py: Python<'py>,
    traj: &PyTrajectory,
    l_plus: usize,
    n_plus: usize,
    l_minus: usize,
    n_minus: usize,
    rank_tol: Option<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let bounds = PriorBounds::new(l_minus, l_plus, n_minus, n_plus).map_err(to_py_err)?;
    to_dict(py, &core::check_fundamental_lemma(&traj.inner, &bounds, &tolerance(rank_tol)?))
}

#[pyfunction]
#[pyo3(signature = (traj, lag, n, rank_tol = None))]
fn check_fixed_order(traj: &PyTrajectory, lag: usize, n: usize, rank_tol: Option<f64>) -> PyResult<bool> {
    Ok(core::check_fixed_order(&traj.inner, lag, n, &tolerance(rank_tol)?))
}

#[pyfunction]
#[pyo3(signature = (trials = 200, seed = 0, max_n = 5, max_m = 3, max_p = 3, max_t = 40, rank_tol = None))]
#[allow(clippy::too_many_arguments)]
fn harness<'py>(
    py: Python<'py>,
    trials: usize,
    seed: u64,
    max_n: usize,
    max_m: usize,
    max_p: usize,
    max_t: usize,
    rank_tol: Option<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let tol = tolerance(rank_tol)?;
    let caps = SizeCaps { max_n, max_m, max_p, max_t };
    let report = py.detach(|| core::harness(trials, caps, seed, &tol));
    to_dict(py, &report)
}

#[pymodule]
#[pyo3(name = "hankelid")]
fn hankelid_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTrajectory>()?;
    m.add_class::<PySystem>()?;
    m.add_function(wrap_pyfunction!(invariants, m)?)?;
    m.add_function(wrap_pyfunction!(identify, m)?)?;
    m.add_function(wrap_pyfunction!(check_main, m)?)?;
    m.add_function(wrap_pyfunction!(check_pe, m)?)?;
    m.add_function(wrap_pyfunction!(check_fixed_order, m)?)?;
    m.add_function(wrap_pyfunction!(harness, m)?)?;
    Ok(())
}

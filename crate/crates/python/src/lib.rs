//! Python module `equiquot`.
//!
//! Graphs are held exactly (rational weights); matrices cross the boundary
//! as lists of lists of floats, exact quotients as `fractions.Fraction`.

use equiquot::numeric::rational_from_f64;
use equiquot::{balance, fraciso, pseudo, quotient, qwalk, refine, symquot};
use equiquot::{Error, Matrix, Partition as CorePartition, Rational, DEFAULT_TOL};
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(equiquot, NumericalError, PyRuntimeError, "Iteration failed to converge.");

fn to_py(e: Error) -> PyErr {
    if e.is_numerical() {
        NumericalError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

type Rows = Vec<Vec<f64>>;

fn rows(m: &Matrix<f64>) -> Rows {
    m.to_rows()
}

fn matrix(rows: Rows) -> PyResult<Matrix<f64>> {
    Matrix::from_rows(rows).map_err(to_py)
}

fn fractions<'py>(py: Python<'py>, m: &Matrix<Rational>) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
    let fraction = py.import("fractions")?.getattr("Fraction")?;
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|x| fraction.call1((format!("{}/{}", x.numer(), x.denom()),)))
                .collect()
        })
        .collect()
}

fn cells(p: &CorePartition) -> Vec<Vec<usize>> {
    p.cells().to_vec()
}

/// Undirected weighted graph with exact weights.
#[pyclass(name = "Graph", module = "equiquot", frozen, skip_from_py_object)]
pub struct Graph {
    inner: equiquot::Graph<Rational>,
}

#[pymethods]
impl Graph {
    /// Edges as `(u, v)` or `(u, v, weight)`; a loop `(u, u, w)` puts `w`
    /// on the diagonal.
    #[new]
    #[pyo3(signature = (n, edges))]
    fn new(n: usize, edges: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        let mut list = Vec::with_capacity(edges.len());
        for e in edges {
            let (u, v, w) = match e.extract::<(usize, usize, f64)>() {
                Ok((u, v, w)) => (u, v, Some(rational_from_f64(w).map_err(to_py)?)),
                Err(_) => {
                    let (u, v) = e.extract::<(usize, usize)>()?;
                    (u, v, None)
                }
            };
            list.push((u, v, w));
        }
        let inner = equiquot::Graph::from_edges(n, list).map_err(to_py)?;
        Ok(Self { inner })
    }

    /// From a symmetric adjacency matrix.
    #[staticmethod]
    fn from_adjacency(adjacency: Rows) -> PyResult<Self> {
        let exact = adjacency
            .into_iter()
            .map(|row| row.into_iter().map(rational_from_f64).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(to_py)?;
        let adj = Matrix::from_rows(exact).map_err(to_py)?;
        Ok(Self {
            inner: equiquot::Graph::new(adj).map_err(to_py)?,
        })
    }

    /// Parses the `n m [weighted]` edge-list text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: equiquot::Graph::parse_text(text).map_err(to_py)?,
        })
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn adjacency(&self) -> Rows {
        rows(&self.inner.adj().to_f64())
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, edges={})", self.inner.n(), self.inner.edges().len())
    }
}

impl Graph {
    fn partition(&self, cells: Vec<Vec<usize>>) -> PyResult<CorePartition> {
        CorePartition::from_cells(self.inner.n(), cells).map_err(to_py)
    }
}

/// Coarsest equitable partition refining `partition` (default: one cell).
/// Returns `(cells, rounds)`.
#[pyfunction]
#[pyo3(signature = (g, partition=None))]
fn coarsest_equitable(g: &Graph, partition: Option<Vec<Vec<usize>>>) -> PyResult<(Vec<Vec<usize>>, usize)> {
    let init = partition.map(|c| g.partition(c)).transpose()?;
    let r = refine::coarsest_equitable(g.inner.adj(), init.as_ref(), 0.0).map_err(to_py)?;
    Ok((cells(&r.partition), r.trace.rounds.len()))
}

#[pyfunction]
fn is_equitable(g: &Graph, partition: Vec<Vec<usize>>) -> PyResult<bool> {
    Ok(refine::is_equitable(g.inner.adj(), &g.partition(partition)?, 0.0))
}

/// Every equitable partition, fewest cells first.
#[pyfunction]
#[pyo3(signature = (g, max_n=refine::DEFAULT_ENUMERATION_CAP))]
fn enumerate_equitable(g: &Graph, max_n: usize) -> PyResult<Vec<Vec<Vec<usize>>>> {
    let all = refine::enumerate_equitable(g.inner.adj(), max_n, 0.0).map_err(to_py)?;
    Ok(all.iter().map(cells).collect())
}

/// Exact combinatorial quotient as a matrix of `Fraction`.
#[pyfunction]
fn combinatorial_quotient<'py>(
    py: Python<'py>,
    g: &Graph,
    partition: Vec<Vec<usize>>,
) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
    let b = quotient::quotient(g.inner.adj(), &g.partition(partition)?, 0.0).map_err(to_py)?;
    fractions(py, &b.mat)
}

#[pyfunction]
#[pyo3(signature = (g, partition, tol=DEFAULT_TOL))]
fn symmetrized_quotient(g: &Graph, partition: Vec<Vec<usize>>, tol: f64) -> PyResult<Rows> {
    let s = quotient::symmetrized_quotient(g.inner.adj(), &g.partition(partition)?, tol).map_err(to_py)?;
    Ok(rows(&s.mat))
}

/// `{"isomorphic", "witness"}`; the witness is doubly stochastic or `None`.
#[pyfunction]
fn fractionally_isomorphic<'py>(py: Python<'py>, g: &Graph, h: &Graph) -> PyResult<Bound<'py, PyDict>> {
    let iso = fraciso::fractionally_isomorphic(g.inner.adj(), h.inner.adj(), 0.0).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("isomorphic", iso.isomorphic)?;
    d.set_item("g_partition", cells(&iso.g_partition))?;
    d.set_item("h_partition", cells(&iso.h_partition))?;
    let witness = iso.matching.as_ref().map(|m| {
        let w: Matrix<f64> = fraciso::witness_from_matching(&iso.g_partition, &iso.h_partition, m);
        rows(&w)
    });
    d.set_item("witness", witness)?;
    Ok(d)
}

/// First common symmetrized quotient found by exhaustive search, or `None`.
#[pyfunction]
#[pyo3(signature = (g, h, max_n=refine::DEFAULT_ENUMERATION_CAP, tol=DEFAULT_TOL))]
fn common_symmetrized_quotient<'py>(
    py: Python<'py>,
    g: &Graph,
    h: &Graph,
    max_n: usize,
    tol: f64,
) -> PyResult<Option<Bound<'py, PyDict>>> {
    let Some(c) = symquot::common_symmetrized_quotient(g.inner.adj(), h.inner.adj(), max_n, tol).map_err(to_py)? else {
        return Ok(None);
    };
    let d = PyDict::new(py);
    d.set_item("pi", cells(&c.pi))?;
    d.set_item("sigma", cells(&c.sigma))?;
    d.set_item("matching", c.matching)?;
    d.set_item("quotient", rows(&c.quotient))?;
    d.set_item("witness", rows(&c.witness.m))?;
    Ok(Some(d))
}

#[pyfunction]
#[pyo3(signature = (g, h, m, tol=symquot::WITNESS_TOL))]
fn verify_witness(g: &Graph, h: &Graph, m: Rows, tol: f64) -> PyResult<bool> {
    symquot::verify_witness(g.inner.adj(), h.inner.adj(), &matrix(m)?, tol).map_err(to_py)
}

#[pyfunction]
fn same_combinatorial_quotient<'py>(py: Python<'py>, g: &Graph, h: &Graph) -> PyResult<Bound<'py, PyDict>> {
    let s = symquot::same_combinatorial_quotient(g.inner.adj(), h.inner.adj(), 0.0).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("decision", s.decision)?;
    d.set_item("pi", cells(&s.pi))?;
    d.set_item("sigma", cells(&s.sigma))?;
    d.set_item("witness", s.witness.as_ref().map(rows))?;
    d.set_item("row_sum", s.row_sum)?;
    d.set_item("col_sum", s.col_sum)?;
    Ok(d)
}

/// `(d, e)` with `diag(d) M diag(e)` doubly stochastic.
#[pyfunction]
#[pyo3(signature = (m, tol=balance::DEFAULT_BALANCE_TOL, max_iter=balance::DEFAULT_MAX_ITER))]
fn sinkhorn(m: Rows, tol: f64, max_iter: usize) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let p = balance::sinkhorn(&matrix(m)?, tol, max_iter).map_err(to_py)?;
    Ok((p.d, p.e))
}

#[pyfunction]
#[pyo3(signature = (m, tol=balance::DEFAULT_BALANCE_TOL, max_iter=balance::DEFAULT_MAX_ITER))]
fn symmetric_sinkhorn(m: Rows, tol: f64, max_iter: usize) -> PyResult<Vec<f64>> {
    Ok(balance::symmetric_sinkhorn(&matrix(m)?, tol, max_iter).map_err(to_py)?.d)
}

/// `(d, e)` with both Gram products of `diag(d) M diag(e)` doubly stochastic.
#[pyfunction]
#[pyo3(signature = (m, tol=balance::DEFAULT_BALANCE_TOL, max_iter=balance::DEFAULT_MAX_ITER))]
fn alternating_balance(m: Rows, tol: f64, max_iter: usize) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let p = balance::alternating_balance(&matrix(m)?, tol, max_iter).map_err(to_py)?;
    Ok((p.d, p.e))
}

/// Quotient `B` with `A D_w P = D_w P B`, or `None` if not pseudo-equitable.
#[pyfunction]
#[pyo3(signature = (g, weights, partition, tol=DEFAULT_TOL))]
fn is_pseudo_equitable(g: &Graph, weights: Vec<f64>, partition: Vec<Vec<usize>>, tol: f64) -> PyResult<Option<Rows>> {
    let b = pseudo::is_pseudo_equitable(g.inner.adj(), &weights, &g.partition(partition)?, tol).map_err(to_py)?;
    Ok(b.map(|b| rows(&b.mat)))
}

#[pyfunction]
#[pyo3(signature = (g, weights, partition, tol=DEFAULT_TOL))]
fn pseudo_symmetrized_quotient(g: &Graph, weights: Vec<f64>, partition: Vec<Vec<usize>>, tol: f64) -> PyResult<Rows> {
    let q = pseudo::pseudo_symmetrized_quotient(g.inner.adj(), &weights, &g.partition(partition)?, tol).map_err(to_py)?;
    Ok(rows(&q.mat))
}

/// `(vector, eigenvalue)` of a connected graph.
#[pyfunction]
fn perron_vector(g: &Graph) -> PyResult<(Vec<f64>, f64)> {
    pseudo::perron_vector(g.inner.adj()).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (weights, partition, tol=DEFAULT_TOL))]
fn projector_from_partition(weights: Vec<f64>, partition: Vec<Vec<usize>>, tol: f64) -> PyResult<Rows> {
    let pi = CorePartition::from_cells(weights.len(), partition).map_err(to_py)?;
    Ok(rows(&pseudo::projector_from_partition(&weights, &pi, tol).map_err(to_py)?.s))
}

/// `(weights, cells)` recovered from a nonnegative projector.
#[pyfunction]
#[pyo3(signature = (s, tol=DEFAULT_TOL))]
fn partition_from_projector(s: Rows, tol: f64) -> PyResult<(Vec<f64>, Vec<Vec<usize>>)> {
    let (w, pi) = pseudo::partition_from_projector(&matrix(s)?, tol).map_err(to_py)?;
    Ok((w, cells(&pi)))
}

/// `|exp(itA)[u][v]|^2`.
#[pyfunction]
fn fidelity(g: &Graph, u: usize, v: usize, t: f64) -> PyResult<f64> {
    Ok(qwalk::pst_check(g.inner.adj(), u, v, t, qwalk::DEFAULT_PST_TOL).map_err(to_py)?.fidelity)
}

/// `(t, fidelity)` pairs with fidelity at least `1 - tol` on `[0, t_max]`.
#[pyfunction]
#[pyo3(signature = (g, u, v, t_max, steps=1000, tol=qwalk::DEFAULT_PST_TOL))]
fn pst_scan(g: &Graph, u: usize, v: usize, t_max: f64, steps: usize, tol: f64) -> PyResult<Vec<(f64, f64)>> {
    qwalk::pst_scan(g.inner.adj(), u, v, t_max, steps, tol).map_err(to_py)
}

/// The 13-vertex graph whose weighted level quotient equals that of the
/// 4-cube.
#[pyfunction]
fn collapsed_cube() -> Graph {
    Graph {
        inner: equiquot::collapsed_cube(),
    }
}

#[pymodule(name = "equiquot")]
fn equiquot_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Graph>()?;
    m.add("NumericalError", m.py().get_type::<NumericalError>())?;
    m.add_function(wrap_pyfunction!(coarsest_equitable, m)?)?;
    m.add_function(wrap_pyfunction!(is_equitable, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_equitable, m)?)?;
    m.add_function(wrap_pyfunction!(combinatorial_quotient, m)?)?;
    m.add_function(wrap_pyfunction!(symmetrized_quotient, m)?)?;
    m.add_function(wrap_pyfunction!(fractionally_isomorphic, m)?)?;
    m.add_function(wrap_pyfunction!(common_symmetrized_quotient, m)?)?;
    m.add_function(wrap_pyfunction!(verify_witness, m)?)?;
    m.add_function(wrap_pyfunction!(same_combinatorial_quotient, m)?)?;
    m.add_function(wrap_pyfunction!(sinkhorn, m)?)?;
    m.add_function(wrap_pyfunction!(symmetric_sinkhorn, m)?)?;
    m.add_function(wrap_pyfunction!(alternating_balance, m)?)?;
    m.add_function(wrap_pyfunction!(is_pseudo_equitable, m)?)?;
    m.add_function(wrap_pyfunction!(pseudo_symmetrized_quotient, m)?)?;
    m.add_function(wrap_pyfunction!(perron_vector, m)?)?;
    m.add_function(wrap_pyfunction!(projector_from_partition, m)?)?;
    m.add_function(wrap_pyfunction!(partition_from_projector, m)?)?;
    m.add_function(wrap_pyfunction!(fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(pst_scan, m)?)?;
    m.add_function(wrap_pyfunction!(collapsed_cube, m)?)?;
    Ok(())
}

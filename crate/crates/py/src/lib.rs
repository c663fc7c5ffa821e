//! Python bindings for the `degroot` crate.
//!
//! Matrices cross the boundary as lists of rows, vectors as lists of floats
//! and digraphs as `(n, [(tail, head, weight), ...])`. Indices are
//! zero-based. Library errors surface as `ValueError`.

use degroot::matrix::{DEFAULT_MAX_DOUBLINGS, DEFAULT_PIVOT_TOL, DEFAULT_ROW_TOL, DEFAULT_TOL};
use degroot::{Arc, Matrix, ProbabilityVector, StochasticMatrix, Verdict, WeightedDigraph};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

type Rows = Vec<Vec<f64>>;
type ArcList = Vec<(usize, usize, f64)>;

fn value_error(e: degroot::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn matrix(rows: &Rows) -> PyResult<Matrix> {
    Matrix::from_rows(rows).map_err(value_error)
}

fn stochastic(rows: &Rows, row_tol: f64) -> PyResult<StochasticMatrix> {
    degroot::validate_stochastic(&matrix(rows)?, row_tol).map_err(value_error)
}

fn digraph(n: usize, arcs: ArcList) -> PyResult<WeightedDigraph> {
    WeightedDigraph::new(n, arcs.into_iter().map(|(t, h, w)| Arc::new(t, h, w)))
        .map_err(value_error)
}

fn probability(pi: Vec<f64>) -> PyResult<ProbabilityVector> {
    ProbabilityVector::new(pi).map_err(value_error)
}

/// Power limit diagnostics.
#[pyclass(module = "degroot_py", frozen, skip_from_py_object, get_all)]
#[derive(Clone)]
pub struct LimitResult {
    pub converged: bool,
    pub limit: Rows,
    pub residual: f64,
    pub doublings_used: usize,
}

#[pymethods]
impl LimitResult {
    fn __repr__(&self) -> String {
        format!(
            "LimitResult(converged={}, residual={:e}, doublings_used={})",
            self.converged, self.residual, self.doublings_used
        )
    }
}

/// Structure of a communication digraph.
#[pyclass(module = "degroot_py", frozen, skip_from_py_object, get_all)]
#[derive(Clone)]
pub struct AnalysisReport {
    pub components: Vec<Vec<usize>>,
    pub basic: Vec<bool>,
    pub periods: Vec<Option<u64>>,
    pub nu: usize,
    pub b: usize,
    pub has_spanning_out_tree: bool,
    pub regular: bool,
    pub limit_exists: bool,
}

#[pymethods]
impl AnalysisReport {
    fn __repr__(&self) -> String {
        format!(
            "AnalysisReport(nu={}, b={}, regular={}, limit_exists={})",
            self.nu, self.b, self.regular, self.limit_exists
        )
    }
}

impl From<degroot::AnalysisReport> for AnalysisReport {
    fn from(r: degroot::AnalysisReport) -> Self {
        Self {
            components: r.components,
            basic: r.basic,
            periods: r.periods,
            nu: r.nu,
            b: r.b,
            has_spanning_out_tree: r.has_spanning_out_tree,
            regular: r.regular,
            limit_exists: r.limit_exists,
        }
    }
}

/// A Hamiltonian cycle with loops.
#[pyclass(module = "degroot_py", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct CycleSpec(degroot::CycleSpec);

#[pymethods]
impl CycleSpec {
    #[getter]
    fn order(&self) -> Vec<usize> {
        self.0.order().to_vec()
    }

    #[getter]
    fn entering_weight(&self) -> Vec<f64> {
        self.0.entering_weight().to_vec()
    }

    #[getter]
    fn loop_weight(&self) -> Vec<f64> {
        self.0.loop_weight().to_vec()
    }

    #[getter]
    fn beta(&self) -> Option<f64> {
        self.0.beta()
    }

    fn predecessor(&self, v: usize) -> PyResult<usize> {
        if v >= self.0.n() {
            return Err(PyValueError::new_err(format!("vertex {v} out of range")));
        }
        Ok(self.0.predecessor(v))
    }

    /// Arcs of the cycle as `(tail, head, weight)`, loops included.
    fn arcs(&self) -> ArcList {
        self.0
            .to_digraph()
            .arcs()
            .iter()
            .map(|a| (a.tail, a.head, a.weight))
            .collect()
    }

    /// The stochastic matrix of the cycle with loops.
    fn to_matrix(&self) -> PyResult<Rows> {
        Ok(degroot::cycle_to_matrix(&self.0)
            .map_err(value_error)?
            .as_matrix()
            .to_rows())
    }

    fn __len__(&self) -> usize {
        self.0.n()
    }

    fn __repr__(&self) -> String {
        format!(
            "CycleSpec(order={:?}, beta={:?})",
            self.0.order(),
            self.0.beta()
        )
    }
}

/// Result of an equivalence check between two procedures.
#[pyclass(module = "degroot_py", frozen, skip_from_py_object, get_all)]
#[derive(Clone)]
pub struct EquivalenceReport {
    pub verdict: String,
    pub limits_exist: (bool, bool),
    pub rank_one: (bool, bool),
    pub stationary_rows: (Option<Vec<f64>>, Option<Vec<f64>>),
    pub rows_match: Option<bool>,
    pub max_row_difference: Option<f64>,
}

#[pymethods]
impl EquivalenceReport {
    fn __repr__(&self) -> String {
        format!("EquivalenceReport(verdict={:?})", self.verdict)
    }
}

#[pyfunction]
#[pyo3(signature = (rows, row_tol = DEFAULT_ROW_TOL))]
fn validate_stochastic(rows: Rows, row_tol: f64) -> PyResult<Rows> {
    Ok(stochastic(&rows, row_tol)?.as_matrix().to_rows())
}

#[pyfunction]
fn iterate_opinions(p: Rows, s0: Vec<f64>, steps: usize) -> PyResult<Rows> {
    degroot::iterate_opinions(&stochastic(&p, DEFAULT_ROW_TOL)?, &s0, steps).map_err(value_error)
}

#[pyfunction]
#[pyo3(signature = (p, tol = DEFAULT_TOL, max_doublings = DEFAULT_MAX_DOUBLINGS))]
fn limit_powers(p: Rows, tol: f64, max_doublings: usize) -> PyResult<LimitResult> {
    let lim = degroot::limit_powers(&stochastic(&p, DEFAULT_ROW_TOL)?, tol, max_doublings);
    Ok(LimitResult {
        converged: lim.converged(),
        limit: lim.limit_candidate.to_rows(),
        residual: lim.residual,
        doublings_used: lim.doublings_used,
    })
}

#[pyfunction]
fn stationary_vector(p: Rows) -> PyResult<Vec<f64>> {
    let pi = degroot::stationary_vector(&stochastic(&p, DEFAULT_ROW_TOL)?).map_err(value_error)?;
    Ok(pi.into_vec())
}

#[pyfunction]
fn consensus_value(pi: Vec<f64>, s0: Vec<f64>) -> PyResult<f64> {
    degroot::consensus_value(&probability(pi)?, &s0).map_err(value_error)
}

#[pyfunction]
#[pyo3(signature = (m, pivot_tol = DEFAULT_PIVOT_TOL))]
fn matrix_rank(m: Rows, pivot_tol: f64) -> PyResult<usize> {
    Ok(degroot::matrix_rank(&matrix(&m)?, pivot_tol))
}

/// Arcs `j -> i` of weight `p_ij` for every entry above `zero_tol`.
#[pyfunction]
#[pyo3(signature = (p, zero_tol = 0.0))]
fn communication_digraph(p: Rows, zero_tol: f64) -> PyResult<ArcList> {
    let g = degroot::digraph_from_matrix(&stochastic(&p, DEFAULT_ROW_TOL)?, zero_tol);
    Ok(g.arcs()
        .iter()
        .map(|a| (a.tail, a.head, a.weight))
        .collect())
}

#[pyfunction]
fn matrix_from_digraph(n: usize, arcs: ArcList) -> PyResult<Rows> {
    let p = degroot::matrix_from_digraph(&digraph(n, arcs)?).map_err(value_error)?;
    Ok(p.as_matrix().to_rows())
}

#[pyfunction]
fn kirchhoff(n: usize, arcs: ArcList) -> PyResult<Rows> {
    Ok(degroot::kirchhoff(&digraph(n, arcs)?).to_rows())
}

#[pyfunction]
fn analyze(n: usize, arcs: ArcList) -> PyResult<AnalysisReport> {
    Ok(degroot::analyze(&digraph(n, arcs)?).into())
}

/// Structure of the communication digraph of `p`.
#[pyfunction]
#[pyo3(signature = (p, zero_tol = 0.0))]
fn analyze_matrix(p: Rows, zero_tol: f64) -> PyResult<AnalysisReport> {
    let g = degroot::digraph_from_matrix(&stochastic(&p, DEFAULT_ROW_TOL)?, zero_tol);
    Ok(degroot::analyze(&g).into())
}

/// Per-root spanning out-tree weights by enumeration.
#[pyfunction]
fn tree_weights(n: usize, arcs: ArcList) -> PyResult<Vec<f64>> {
    Ok(degroot::tree_weight_vector(&digraph(n, arcs)?)
        .map_err(value_error)?
        .per_root)
}

/// Per-root spanning out-tree weights from principal minors of the
/// Kirchhoff matrix.
#[pyfunction]
fn tree_weights_via_minors(n: usize, arcs: ArcList) -> PyResult<Vec<f64>> {
    Ok(degroot::tree_weights_via_minors(&digraph(n, arcs)?).per_root)
}

#[pyfunction]
fn max_out_forest_matrix(n: usize, arcs: ArcList) -> PyResult<Rows> {
    let f = degroot::max_out_forest_matrix(&digraph(n, arcs)?).map_err(value_error)?;
    Ok(f.entries.to_rows())
}

#[pyfunction]
#[pyo3(signature = (q, order = None))]
fn cycle_from_tree_weights(q: Vec<f64>, order: Option<Vec<usize>>) -> PyResult<CycleSpec> {
    let spec = degroot::cycle_from_tree_weights(&q, order.as_deref()).map_err(value_error)?;
    Ok(CycleSpec(spec))
}

#[pyfunction]
#[pyo3(signature = (pi, beta = None, order = None))]
fn cycle_from_pi(
    pi: Vec<f64>,
    beta: Option<f64>,
    order: Option<Vec<usize>>,
) -> PyResult<CycleSpec> {
    let spec =
        degroot::cycle_from_pi(&probability(pi)?, beta, order.as_deref()).map_err(value_error)?;
    Ok(CycleSpec(spec))
}

#[pyfunction]
fn cycle_to_matrix(spec: &CycleSpec) -> PyResult<Rows> {
    spec.to_matrix()
}

#[pyfunction]
#[pyo3(signature = (a, b, tol = 1e-9))]
fn verify_equivalence(a: Rows, b: Rows, tol: f64) -> PyResult<EquivalenceReport> {
    let (pa, pb) = (
        stochastic(&a, DEFAULT_ROW_TOL)?,
        stochastic(&b, DEFAULT_ROW_TOL)?,
    );
    let r = degroot::verify_equivalence(&pa, &pb, tol).map_err(value_error)?;
    let verdict = match r.verdict {
        Verdict::Equivalent => "equivalent",
        Verdict::NotEquivalent => "not-equivalent",
        Verdict::Indeterminate => "indeterminate",
    };
    Ok(EquivalenceReport {
        verdict: verdict.to_string(),
        limits_exist: (r.a.limit_exists, r.b.limit_exists),
        rank_one: (r.a.rank_one, r.b.rank_one),
        stationary_rows: (r.a.stationary_row, r.b.stationary_row),
        rows_match: r.rows_match,
        max_row_difference: r.max_row_difference,
    })
}

#[pymodule]
fn degroot_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<LimitResult>()?;
    m.add_class::<AnalysisReport>()?;
    m.add_class::<CycleSpec>()?;
    m.add_class::<EquivalenceReport>()?;
    m.add_function(wrap_pyfunction!(validate_stochastic, m)?)?;
    m.add_function(wrap_pyfunction!(iterate_opinions, m)?)?;
    m.add_function(wrap_pyfunction!(limit_powers, m)?)?;
    m.add_function(wrap_pyfunction!(stationary_vector, m)?)?;
    m.add_function(wrap_pyfunction!(consensus_value, m)?)?;
    m.add_function(wrap_pyfunction!(matrix_rank, m)?)?;
    m.add_function(wrap_pyfunction!(communication_digraph, m)?)?;
    m.add_function(wrap_pyfunction!(matrix_from_digraph, m)?)?;
    m.add_function(wrap_pyfunction!(kirchhoff, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(analyze_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(tree_weights, m)?)?;
    m.add_function(wrap_pyfunction!(tree_weights_via_minors, m)?)?;
    m.add_function(wrap_pyfunction!(max_out_forest_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(cycle_from_tree_weights, m)?)?;
    m.add_function(wrap_pyfunction!(cycle_from_pi, m)?)?;
    m.add_function(wrap_pyfunction!(cycle_to_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(verify_equivalence, m)?)?;
    Ok(())
}

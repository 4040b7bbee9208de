//! Python bindings: `PureState`, `Gate`, `GlueOutcome`, the three gluing
//! operations, chains and the uniformity/purity analysis.

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use qglue::analysis::{self, Checks};
use qglue::builders::{self, StateSpec};
use qglue::json;
use qglue::recursion::{chain_direct, chain_via_recursion, OutcomePolicy};
use qglue::{Operator, QGlueError};

create_exception!(pyqglue, ZeroProbabilityError, PyValueError);

fn to_py(e: QGlueError) -> PyErr {
    match e {
        QGlueError::ZeroProbabilityBranch { .. } => ZeroProbabilityError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for qglue::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

fn operator(rows: Vec<Vec<Complex64>>) -> PyResult<Operator> {
    Operator::from_rows(rows).py()
}

#[pyclass(name = "PureState", module = "pyqglue", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyPureState(qglue::PureState);

#[pymethods]
impl PyPureState {
    /// Normalizes `amps`, which must have `d**n` entries.
    #[new]
    fn new(d: usize, n: usize, amps: Vec<Complex64>) -> PyResult<Self> {
        Ok(Self(qglue::PureState::from_amplitudes(d, n, amps).py()?))
    }

    #[staticmethod]
    fn basis(d: usize, digits: Vec<usize>) -> PyResult<Self> {
        Ok(Self(qglue::PureState::basis(d, &digits).py()?))
    }

    /// Builder spec such as `ghz:4`, `w:3`, `bell:phi+`, `ring:5`, `m4`.
    #[staticmethod]
    fn build(spec: &str) -> PyResult<Self> {
        let spec: StateSpec = spec.parse().py()?;
        Ok(Self(spec.build().py()?))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self(json::state_from_json(text).py()?))
    }

    fn to_json(&self) -> String {
        json::state_to_json(&self.0)
    }

    #[getter]
    fn d(&self) -> usize {
        self.0.local_dim()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.num_parties()
    }

    fn amplitudes(&self) -> Vec<Complex64> {
        self.0.amplitudes().to_vec()
    }

    fn norm(&self) -> f64 {
        self.0.norm()
    }

    fn inner_product(&self, other: &PyPureState) -> PyResult<Complex64> {
        self.0.inner_product(&other.0).py()
    }

    fn tensor(&self, other: &PyPureState) -> PyResult<Self> {
        Ok(Self(self.0.tensor(&other.0).py()?))
    }

    fn permute_parties(&self, order: Vec<usize>) -> PyResult<Self> {
        Ok(Self(self.0.permute_parties(&order).py()?))
    }

    /// Applies a unitary (rows of complex numbers) to the listed parties.
    fn apply_local(&self, matrix: Vec<Vec<Complex64>>, sites: Vec<usize>) -> PyResult<Self> {
        Ok(Self(self.0.apply_local(&operator(matrix)?, &sites).py()?))
    }

    fn outcome_probabilities(&self, site: usize) -> PyResult<Vec<f64>> {
        self.0.outcome_probabilities(site).py()
    }

    /// Returns `(outcome, probability, post_state)`.
    #[pyo3(signature = (site, outcome=None, seed=0))]
    fn measure(&self, site: usize, outcome: Option<usize>, seed: u64) -> PyResult<(usize, f64, Self)> {
        let m = self.0.measure_computational(site, outcome, seed).py()?;
        Ok((m.outcome, m.probability, Self(m.state)))
    }

    fn __repr__(&self) -> String {
        format!("PureState(d={}, n={})", self.0.local_dim(), self.0.num_parties())
    }
}

#[pyclass(name = "Gate", module = "pyqglue", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyGate(qglue::TwoQuditGate);

#[pymethods]
impl PyGate {
    /// `V1`..`V4` (qubits) or `bell` for the generalized Bell gate.
    #[new]
    #[pyo3(signature = (name, d=2))]
    fn new(name: &str, d: usize) -> PyResult<Self> {
        Ok(Self(qglue::TwoQuditGate::by_name(name, d).py()?))
    }

    #[staticmethod]
    fn generalized_bell(d: usize) -> PyResult<Self> {
        Ok(Self(qglue::TwoQuditGate::generalized_bell(d).py()?))
    }

    #[staticmethod]
    fn from_matrix(d: usize, matrix: Vec<Vec<Complex64>>) -> PyResult<Self> {
        Ok(Self(qglue::TwoQuditGate::from_matrix(d, operator(matrix)?).py()?))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self(json::gate_from_json(text).py()?))
    }

    fn to_json(&self) -> String {
        json::gate_to_json(&self.0)
    }

    #[getter]
    fn d(&self) -> usize {
        self.0.local_dim()
    }

    fn matrix(&self) -> Vec<Vec<Complex64>> {
        self.0.matrix().rows().map(<[Complex64]>::to_vec).collect()
    }

    fn is_entangling_basis(&self) -> bool {
        self.0.is_entangling_basis()
    }

    fn __repr__(&self) -> String {
        format!("Gate(d={})", self.0.local_dim())
    }
}

#[pyclass(name = "GlueOutcome", module = "pyqglue", frozen)]
pub struct PyGlueOutcome(qglue::GlueOutcome);

#[pymethods]
impl PyGlueOutcome {
    #[getter]
    fn state(&self) -> PyPureState {
        PyPureState(self.0.state.clone())
    }

    /// `[(label, digit), ...]` with labels `"x"` and `"y"`.
    #[getter]
    fn measured(&self) -> Vec<(String, usize)> {
        self.0.measured.iter().map(|(p, o)| (p.to_string(), *o)).collect()
    }

    #[getter]
    fn probability(&self) -> f64 {
        self.0.probability
    }

    fn to_json(&self) -> String {
        json::outcome_to_json(&self.0)
    }

    fn __repr__(&self) -> String {
        format!("GlueOutcome(n={}, measured={:?}, probability={})", self.0.state.num_parties(), self.measured(), self.0.probability)
    }
}

#[pyfunction]
fn glue(phi: &PyPureState, x: usize, psi: &PyPureState, y: usize, gate: &PyGate) -> PyResult<PyPureState> {
    Ok(PyPureState(qglue::glue(&phi.0, x, &psi.0, y, &gate.0).py()?))
}

#[pyfunction]
#[pyo3(signature = (phi, x, psi, y, gate, outcome=None, seed=0))]
fn glue_star(
    phi: &PyPureState,
    x: usize,
    psi: &PyPureState,
    y: usize,
    gate: &PyGate,
    outcome: Option<usize>,
    seed: u64,
) -> PyResult<PyGlueOutcome> {
    Ok(PyGlueOutcome(qglue::glue_star(&phi.0, x, &psi.0, y, &gate.0, outcome, seed).py()?))
}

#[pyfunction]
#[pyo3(signature = (phi, x, psi, y, gate, outcomes=None, seed=0))]
fn glue_star_star(
    phi: &PyPureState,
    x: usize,
    psi: &PyPureState,
    y: usize,
    gate: &PyGate,
    outcomes: Option<(usize, usize)>,
    seed: u64,
) -> PyResult<PyGlueOutcome> {
    Ok(PyGlueOutcome(qglue::glue_star_star(&phi.0, x, &psi.0, y, &gate.0, outcomes, seed).py()?))
}

/// Glues `steps` fresh pairs onto the maximally entangled pair.
/// `outcomes` forces the measured digits; otherwise they are sampled from `seed`.
/// Returns `(state, outcomes, probability)`.
#[pyfunction]
#[pyo3(signature = (gate, steps, outcomes=None, seed=0))]
fn chain(gate: &PyGate, steps: usize, outcomes: Option<Vec<usize>>, seed: u64) -> PyResult<(PyPureState, Vec<usize>, f64)> {
    let policy = match outcomes {
        Some(o) => OutcomePolicy::Forced(o),
        None => OutcomePolicy::Sample { seed },
    };
    let r = chain_direct(&gate.0, steps, &policy).py()?;
    Ok((PyPureState(r.state), r.outcomes, r.probability))
}

/// Same chain computed with recursion-matrix products.
#[pyfunction]
fn chain_recursive(gate: &PyGate, outcomes: Vec<usize>) -> PyResult<(PyPureState, f64)> {
    let r = chain_via_recursion(&gate.0, &outcomes).py()?;
    Ok((PyPureState(r.state), r.probability))
}

#[pyfunction]
fn reduced_density(state: &PyPureState, subset: Vec<usize>) -> PyResult<Vec<Vec<Complex64>>> {
    let rho = qglue::reduced_density(&state.0, &subset).py()?;
    let dim = rho.dim();
    Ok((0..dim).map(|i| (0..dim).map(|j| rho.get(i, j)).collect()).collect())
}

#[pyfunction]
#[pyo3(signature = (state, k, tol=analysis::DEFAULT_TOL))]
fn is_k_uniform(state: &PyPureState, k: usize, tol: f64) -> PyResult<bool> {
    analysis::is_k_uniform(&state.0, k, tol).py()
}

#[pyfunction]
#[pyo3(signature = (state, tol=analysis::DEFAULT_TOL))]
fn max_uniformity(state: &PyPureState, tol: f64) -> usize {
    analysis::max_uniformity(&state.0, tol)
}

#[pyfunction]
fn average_purity(state: &PyPureState) -> PyResult<f64> {
    analysis::average_purity(&state.0).py()
}

#[pyfunction]
fn fidelity(a: &PyPureState, b: &PyPureState) -> PyResult<f64> {
    analysis::fidelity(&a.0, &b.0).py()
}

/// JSON report `{"k_max", "pi_me", "failures"}`.
#[pyfunction]
#[pyo3(signature = (state, checks="all", tol=analysis::DEFAULT_TOL))]
fn analyze(state: &PyPureState, checks: &str, tol: f64) -> PyResult<String> {
    let checks: Checks = checks.parse().py()?;
    Ok(json::report_to_json(&analysis::analyze(&state.0, checks, tol).py()?))
}

#[pyfunction]
fn ghz(n: usize) -> PyResult<PyPureState> {
    Ok(PyPureState(builders::ghz(n).py()?))
}

#[pyfunction]
fn w(n: usize) -> PyResult<PyPureState> {
    Ok(PyPureState(builders::w(n).py()?))
}

#[pyfunction]
fn max_entangled_pair(d: usize) -> PyResult<PyPureState> {
    Ok(PyPureState(builders::max_entangled_pair(d).py()?))
}

#[pymodule]
fn pyqglue(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPureState>()?;
    m.add_class::<PyGate>()?;
    m.add_class::<PyGlueOutcome>()?;
    m.add("ZeroProbabilityError", m.py().get_type::<ZeroProbabilityError>())?;
    m.add_function(wrap_pyfunction!(glue, m)?)?;
    m.add_function(wrap_pyfunction!(glue_star, m)?)?;
    m.add_function(wrap_pyfunction!(glue_star_star, m)?)?;
    m.add_function(wrap_pyfunction!(chain, m)?)?;
    m.add_function(wrap_pyfunction!(chain_recursive, m)?)?;
    m.add_function(wrap_pyfunction!(reduced_density, m)?)?;
    m.add_function(wrap_pyfunction!(is_k_uniform, m)?)?;
    m.add_function(wrap_pyfunction!(max_uniformity, m)?)?;
    m.add_function(wrap_pyfunction!(average_purity, m)?)?;
    m.add_function(wrap_pyfunction!(fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(ghz, m)?)?;
    m.add_function(wrap_pyfunction!(w, m)?)?;
    m.add_function(wrap_pyfunction!(max_entangled_pair, m)?)?;
    Ok(())
}

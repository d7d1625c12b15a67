//! Python bindings: formulas, the prover, type spaces and uniform
//! interpolation.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use heyting_core::interp::{self, InterpOptions, InterpolantResult, Session};
use heyting_core::prover::Refutation;
use heyting_core::typespace::{TypeSpace, TypeStore};
use heyting_core::{Error, Formula as CoreFormula, Signature};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Resource(_) | Error::Inconsistent(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

#[pyclass(name = "Formula", frozen, from_py_object)]
#[derive(Clone)]
struct Formula(CoreFormula);

#[pymethods]
impl Formula {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        CoreFormula::parse(text).map(Formula).map_err(py_err)
    }

    fn degree(&self) -> u32 {
        self.0.impl_degree()
    }

    fn size(&self) -> usize {
        self.0.size()
    }

    fn variables(&self) -> Vec<String> {
        self.0.vars().iter().map(|v| v.to_string()).collect()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Formula({:?})", self.0.to_string())
    }

    fn __eq__(&self, other: &Formula) -> bool {
        self.0 == other.0
    }
}

fn formula(obj: &Bound<'_, PyAny>) -> PyResult<CoreFormula> {
    if let Ok(f) = obj.extract::<Formula>() {
        return Ok(f.0);
    }
    let text: String = obj.extract()?;
    CoreFormula::parse(&text).map_err(py_err)
}

/// Result of eliminating a variable.
#[pyclass(name = "Interpolant", frozen)]
struct Interpolant {
    #[pyo3(get)]
    formula: String,
    #[pyo3(get)]
    level_used: u32,
    #[pyo3(get)]
    r_bound: usize,
    #[pyo3(get)]
    theory_certified: bool,
    certificate: String,
}

#[pymethods]
impl Interpolant {
    /// Certificate as a JSON string.
    fn certificate(&self) -> String {
        self.certificate.clone()
    }

    fn __str__(&self) -> String {
        self.formula.clone()
    }
}

fn interpolant(session: &Session, r: InterpolantResult) -> Interpolant {
    Interpolant {
        formula: r.formula.to_string(),
        level_used: r.level_used,
        r_bound: r.r_bound,
        theory_certified: r.theory_certified,
        certificate: r.to_certificate(&session.store).to_string(),
    }
}

/// Whether `antecedent` entails `consequent` intuitionistically.
#[pyfunction]
fn prove(antecedent: &Bound<'_, PyAny>, consequent: &Bound<'_, PyAny>) -> PyResult<bool> {
    let (a, c) = (formula(antecedent)?, formula(consequent)?);
    Ok(heyting_core::prover::Prover::new().proves(&a, &c))
}

/// A refuting model as JSON plus the refuting node, or None.
#[pyfunction]
#[pyo3(signature = (antecedent, consequent, max_nodes=4))]
fn countermodel(
    antecedent: &Bound<'_, PyAny>,
    consequent: &Bound<'_, PyAny>,
    max_nodes: usize,
) -> PyResult<Option<(String, String)>> {
    let (a, c) = (formula(antecedent)?, formula(consequent)?);
    Ok(
        match heyting_core::prover::Prover::new().countermodel(&a, &c, max_nodes) {
            Refutation::Found(m, w) => Some((m.to_json(), m.name(w).to_string())),
            _ => None,
        },
    )
}

/// Size and level bound `2 * size - 1` of the type space over `vars`.
#[pyfunction]
fn space_size(vars: Vec<String>, level: u32) -> PyResult<(usize, usize)> {
    let sig = Signature::new(vars.iter().map(String::as_str)).map_err(py_err)?;
    let space = TypeSpace::build(&TypeStore::new(), &sig, level).map_err(py_err)?;
    Ok((space.len(), space.r_bound()))
}

/// The type space over `vars` as JSON.
#[pyfunction]
fn space_json(vars: Vec<String>, level: u32) -> PyResult<String> {
    let sig = Signature::new(vars.iter().map(String::as_str)).map_err(py_err)?;
    let store = TypeStore::new();
    let space = TypeSpace::build(&store, &sig, level).map_err(py_err)?;
    Ok(space.to_json(&store).to_string())
}

#[pyfunction]
fn uniform_exists(phi: &Bound<'_, PyAny>, var: &str) -> PyResult<Interpolant> {
    let phi = formula(phi)?;
    let session = Session::new();
    let r = session
        .uniform_exists(&phi, var, &InterpOptions::default())
        .map_err(py_err)?;
    Ok(interpolant(&session, r))
}

#[pyfunction]
fn uniform_forall(phi: &Bound<'_, PyAny>, var: &str) -> PyResult<Interpolant> {
    let phi = formula(phi)?;
    let session = Session::new();
    let r = session
        .uniform_forall(&phi, var, &InterpOptions::default())
        .map_err(py_err)?;
    Ok(interpolant(&session, r))
}

/// An interpolant over the shared variables of a valid entailment.
#[pyfunction]
fn craig(antecedent: &Bound<'_, PyAny>, consequent: &Bound<'_, PyAny>) -> PyResult<String> {
    let (a, c) = (formula(antecedent)?, formula(consequent)?);
    interp::craig(&a, &c, &InterpOptions::default())
        .map(|f| f.to_string())
        .map_err(py_err)
}

/// Number of certificate classes whose witnesses check out.
#[pyfunction]
fn check_certificate(certificate: &str) -> PyResult<usize> {
    let value: serde_json::Value =
        serde_json::from_str(certificate).map_err(|e| PyValueError::new_err(e.to_string()))?;
    interp::check_certificate(&value).map_err(py_err)
}

#[pymodule]
fn heyting(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Formula>()?;
    m.add_class::<Interpolant>()?;
    m.add_function(wrap_pyfunction!(prove, m)?)?;
    m.add_function(wrap_pyfunction!(countermodel, m)?)?;
    m.add_function(wrap_pyfunction!(space_size, m)?)?;
    m.add_function(wrap_pyfunction!(space_json, m)?)?;
    m.add_function(wrap_pyfunction!(uniform_exists, m)?)?;
    m.add_function(wrap_pyfunction!(uniform_forall, m)?)?;
    m.add_function(wrap_pyfunction!(craig, m)?)?;
    m.add_function(wrap_pyfunction!(check_certificate, m)?)?;
    Ok(())
}

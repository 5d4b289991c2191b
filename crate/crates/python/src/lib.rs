//! Python module `pyreltab`: terms, the prover and its front ends.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use reltab::engine::export::tree_to_json;
use reltab::engine::{run_procedure, EngineError, Limits, SearchReport, Verdict};
use reltab::formulas::{parse_formula, ObjVar, RelFormula};
use reltab::frontends::{encode_entailment, parse_modal, translate_modal, EntailmentProblem};
use reltab::relterm::{fragment_check, nf_cmpl, parse_term, simplify_ones, FragmentVerdict, RelTerm};
use reltab::semantics::{satisfies, ModelFile};

create_exception!(pyreltab, ReltabError, PyException);
create_exception!(pyreltab, FragmentError, ReltabError);
create_exception!(pyreltab, ResourceError, ReltabError);

fn value_error(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn engine_error(e: EngineError) -> PyErr {
    match e {
        EngineError::Fragment(_) => FragmentError::new_err(e.to_string()),
        EngineError::ResourceExhausted { .. } => ResourceError::new_err(e.to_string()),
    }
}

/// An immutable relational term.
#[pyclass(frozen, eq, hash, skip_from_py_object, module = "pyreltab")]
#[derive(Clone, PartialEq, Eq, Hash)]
struct Term {
    inner: RelTerm,
}

#[pymethods]
impl Term {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        parse_term(text).map(|inner| Term { inner }).map_err(value_error)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Term({:?})", self.inner.to_string())
    }

    #[getter]
    fn size(&self) -> usize {
        self.inner.size()
    }

    #[getter]
    fn depth(&self) -> usize {
        self.inner.depth()
    }

    fn variables(&self) -> Vec<String> {
        self.inner.variables().iter().map(|v| v.to_string()).collect()
    }

    fn is_boolean(&self) -> bool {
        self.inner.is_boolean()
    }

    fn simplify(&self) -> Term {
        Term {
            inner: simplify_ones(&self.inner),
        }
    }

    /// Complement normal form; Boolean terms only.
    fn normal_form(&self) -> PyResult<Term> {
        nf_cmpl(&self.inner).map(|inner| Term { inner }).map_err(value_error)
    }

    /// `None` when the simplified term is in the fragment, else the reason.
    fn fragment_violation(&self) -> Option<String> {
        match fragment_check(&simplify_ones(&self.inner)) {
            FragmentVerdict::Accept => None,
            FragmentVerdict::Reject(r) => Some(r.to_string()),
        }
    }
}

/// Outcome of one search.
#[pyclass(frozen, module = "pyreltab")]
struct Result {
    report: SearchReport,
}

#[pymethods]
impl Result {
    #[getter]
    fn valid(&self) -> bool {
        self.report.verdict.is_proof()
    }

    /// The searched term, after simplification.
    #[getter]
    fn term(&self) -> Term {
        Term {
            inner: self.report.term.clone(),
        }
    }

    #[getter]
    fn steps(&self) -> usize {
        self.report.stats.steps
    }

    #[getter]
    fn branches(&self) -> usize {
        self.report.stats.branches
    }

    /// The countermodel as exchange JSON, or `None` for a proof.
    fn countermodel_json(&self) -> Option<String> {
        match &self.report.verdict {
            Verdict::Proof => None,
            Verdict::Countermodel(cm) => Some(ModelFile::from_model(&cm.model, &cm.valuation).to_json()),
        }
    }

    fn tree_json(&self) -> String {
        tree_to_json(&self.report.tree).to_string()
    }

    fn __repr__(&self) -> String {
        let what = if self.valid() { "proof" } else { "countermodel" };
        format!("Result({what}, steps={})", self.steps())
    }
}

fn as_term(obj: &Bound<'_, PyAny>) -> PyResult<RelTerm> {
    if let Ok(t) = obj.cast::<Term>() {
        return Ok(t.get().inner.clone());
    }
    let text: String = obj.extract()?;
    parse_term(&text).map_err(value_error)
}

fn search(py: Python<'_>, t: &RelTerm, max_steps: Option<usize>) -> PyResult<Result> {
    let mut limits = Limits::default();
    if let Some(n) = max_steps {
        limits.max_steps = n;
    }
    py.detach(|| run_procedure(t, &limits))
        .map(|report| Result { report })
        .map_err(engine_error)
}

/// Decide whether `x term y` holds in every model.
#[pyfunction]
#[pyo3(signature = (term, max_steps=None))]
fn prove(py: Python<'_>, term: &Bound<'_, PyAny>, max_steps: Option<usize>) -> PyResult<Result> {
    search(py, &as_term(term)?, max_steps)
}

/// Decide whether the premise inclusions entail the conclusion inclusion.
#[pyfunction]
#[pyo3(signature = (premises, conclusion, max_steps=None))]
fn entail(py: Python<'_>, premises: Vec<Bound<'_, PyAny>>, conclusion: &Bound<'_, PyAny>, max_steps: Option<usize>) -> PyResult<Result> {
    let problem = EntailmentProblem {
        premises: premises.iter().map(as_term).collect::<PyResult<_>>()?,
        conclusion: as_term(conclusion)?,
    };
    let t = encode_entailment(&problem).map_err(|e| FragmentError::new_err(e.to_string()))?;
    search(py, &t, max_steps)
}

/// Decide validity of a multimodal formula via its relational translation.
#[pyfunction]
#[pyo3(signature = (formula, max_steps=None))]
fn modal(py: Python<'_>, formula: &str, max_steps: Option<usize>) -> PyResult<Result> {
    let f = parse_modal(formula).map_err(value_error)?;
    search(py, &translate_modal(&f), max_steps)
}

/// Evaluate a formula `a T b`, or a bare term read as `x T y`, in a model
/// given as exchange JSON.
#[pyfunction]
fn check_model(formula: &str, model_json: &str) -> PyResult<bool> {
    let f = match parse_formula(formula) {
        Ok(f) => f,
        Err(_) => RelFormula::new(ObjVar::x(), parse_term(formula).map_err(value_error)?, ObjVar::y()),
    };
    let (m, v) = ModelFile::from_json(model_json)
        .and_then(|file| file.to_model())
        .map_err(value_error)?;
    satisfies(&m, &v, &f).map_err(value_error)
}

#[pymodule]
fn pyreltab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Term>()?;
    m.add_class::<Result>()?;
    m.add_function(wrap_pyfunction!(prove, m)?)?;
    m.add_function(wrap_pyfunction!(entail, m)?)?;
    m.add_function(wrap_pyfunction!(modal, m)?)?;
    m.add_function(wrap_pyfunction!(check_model, m)?)?;
    m.add("ReltabError", m.py().get_type::<ReltabError>())?;
    m.add("FragmentError", m.py().get_type::<FragmentError>())?;
    m.add("ResourceError", m.py().get_type::<ResourceError>())?;
    Ok(())
}

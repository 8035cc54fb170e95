use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value;

use formalgram::verify;

create_exception!(pyformalgram, FormalgramError, PyValueError);

fn err(e: formalgram::Error) -> PyErr {
    FormalgramError::new_err(e.to_string())
}

/// An exact Laurent polynomial with rational coefficients.
#[pyclass(name = "Polynomial", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyPolynomial(formalgram::Polynomial);

#[pymethods]
impl PyPolynomial {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        formalgram::parse_expr(text).map(PyPolynomial).map_err(err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Polynomial({:?})", self.0.to_string())
    }

    fn __add__(&self, other: &Self) -> Self {
        PyPolynomial(self.0.add(&other.0))
    }

    fn __sub__(&self, other: &Self) -> Self {
        PyPolynomial(self.0.sub(&other.0))
    }

    fn __neg__(&self) -> Self {
        PyPolynomial(self.0.neg())
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        self.0.mul(&other.0).map(PyPolynomial).map_err(err)
    }

    fn __pow__(&self, k: i64, _modulo: Option<Py<PyAny>>) -> PyResult<Self> {
        self.0.pow(k).map(PyPolynomial).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    /// Coefficient of the monomial written as text (e.g. `"a b^2"`), as `"p/q"`.
    fn coeff(&self, monomial: &str) -> PyResult<String> {
        let m = formalgram::parse_expr(monomial).map_err(err)?;
        match m.single_term() {
            Some((mono, c)) if c.is_one() => Ok(self.0.coeff(mono).to_string()),
            _ => Err(FormalgramError::new_err(format!("{monomial:?} is not a monomial"))),
        }
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("serializable")
    }
}

/// A matrix grammar; a plain grammar is the one-element case.
#[pyclass(name = "Grammar", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGrammar(formalgram::MatrixGrammar);

#[pymethods]
impl PyGrammar {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        formalgram::parse_grammar(text).map(PyGrammar).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Grammar({:?})", self.0.to_string())
    }

    /// `D^n(u)`, or `D_w^n(u)` when an operator word such as `"12"` is given.
    #[pyo3(signature = (u, n=1, word=None))]
    fn derive(&self, u: &PyPolynomial, n: usize, word: Option<&str>) -> PyResult<PyPolynomial> {
        let out = match word {
            Some(w) => {
                let w: formalgram::OperatorWord = w.parse().map_err(err)?;
                formalgram::derive_word_pow(&self.0, &w, n, &u.0)
            }
            None => match self.0.as_single() {
                Some(g) => formalgram::derive_n(g, &u.0, n),
                None => {
                    return Err(FormalgramError::new_err(
                        "a matrix grammar needs an operator word",
                    ))
                }
            },
        };
        out.map(PyPolynomial).map_err(err)
    }
}

#[pyfunction]
fn multifactorial(n: i64, r: i64) -> PyResult<String> {
    formalgram::multifactorial(n, r).map(|v| v.to_string()).map_err(err)
}

#[pyfunction]
fn binomial(n: u64, k: i64) -> String {
    formalgram::binomial(n, k).to_string()
}

#[pyfunction]
fn rising_product(m: i64, n: u64, r: i64) -> PyResult<String> {
    formalgram::rising_product(m, n, r).map(|v| v.to_string()).map_err(err)
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any(),
            None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

/// Runs a verification suite and returns its report as a dict.
#[pyfunction]
#[pyo3(signature = (suite, trials=None, seed=0, m_max=None, n_max=None, r_max=None, grammar=None, u=None, v=None))]
#[allow(clippy::too_many_arguments)]
fn run_suite<'py>(
    py: Python<'py>,
    suite: &str,
    trials: Option<usize>,
    seed: u64,
    m_max: Option<i64>,
    n_max: Option<usize>,
    r_max: Option<i64>,
    grammar: Option<&PyGrammar>,
    u: Option<&PyPolynomial>,
    v: Option<&PyPolynomial>,
) -> PyResult<Bound<'py, PyAny>> {
    let m = m_max.unwrap_or(verify::DEFAULT_M_MAX);
    let n = n_max.unwrap_or(verify::DEFAULT_N_MAX);
    let r = r_max.unwrap_or(verify::DEFAULT_R_MAX);
    let a = formalgram::Polynomial::var(formalgram::Variable::new('a').expect("letter"));
    let identity = formalgram::parse_grammar("a -> a").expect("valid grammar");
    let mg = grammar.map(|g| &g.0).unwrap_or(&identity);
    let report = py.detach(|| match suite {
        "leibniz" => {
            let g = mg.as_single().ok_or("leibniz needs a single grammar".to_owned())?;
            let u = u.map(|p| &p.0).unwrap_or(&a);
            let v = v.map(|p| &p.0).unwrap_or(&a);
            verify::verify_leibniz(g, u, v, n_max.unwrap_or(6)).map_err(|e| e.to_string())
        }
        "binomial-sums" => Ok(verify::verify_binomial_sums(n_max.unwrap_or(40))),
        "multifactorial-identity" => Ok(verify::verify_multifactorial_identity(m, n, r)),
        "closed-forms" => Ok(verify::verify_closed_forms(m, n, r)),
        "matrix-closed-forms" => Ok(verify::verify_matrix_closed_forms(n, r)),
        "nonexistence" => Ok(verify::verify_nonexistence(trials.unwrap_or(500), seed)),
        "calculus-rules" => Ok(verify::verify_calculus_rules(trials.unwrap_or(200), seed)),
        other => Err(format!("unknown suite {other:?}")),
    });
    let report = report.map_err(FormalgramError::new_err)?;
    to_py(py, &report.to_json())
}

#[pymodule]
fn pyformalgram(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("FormalgramError", m.py().get_type::<FormalgramError>())?;
    m.add_class::<PyPolynomial>()?;
    m.add_class::<PyGrammar>()?;
    m.add_function(wrap_pyfunction!(multifactorial, m)?)?;
    m.add_function(wrap_pyfunction!(binomial, m)?)?;
    m.add_function(wrap_pyfunction!(rising_product, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}

//! Python bindings. Every function returns a list of row dicts; interval
//! cells come back as `{"lo": str, "hi": str}` decimal pairs.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value;

use anergodic::commands::{self, CommandError, CompareArgs, CompareTarget, Method, Output};
use anergodic::numerics::{Alpha, Policy};
use anergodic::observables::{Beta, Observable};
use anergodic::report::DEFAULT_DIGITS;
use anergodic::sweep::{parse_rational, run_sweep, SweepConfig};

fn err(e: CommandError) -> PyErr {
    match e.exit_code() {
        3 => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn value(msg: impl ToString) -> PyErr {
    PyValueError::new_err(msg.to_string())
}

fn to_py(py: Python<'_>, v: &Value) -> PyResult<Py<PyAny>> {
    Ok(match v {
        Value::Null => py.None(),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any().unbind(),
        Value::Number(n) => match n.as_u64() {
            Some(u) => u.into_pyobject(py)?.into_any().unbind(),
            None => n.as_i64().unwrap_or_default().into_pyobject(py)?.into_any().unbind(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any().unbind(),
        Value::Array(a) => {
            let l = PyList::empty(py);
            for x in a {
                l.append(to_py(py, x)?)?;
            }
            l.into_any().unbind()
        }
        Value::Object(m) => {
            let d = PyDict::new(py);
            for (k, x) in m {
                d.set_item(k, to_py(py, x)?)?;
            }
            d.into_any().unbind()
        }
    })
}

fn rows(py: Python<'_>, out: Output) -> PyResult<Py<PyAny>> {
    let v = Value::Array(out.table.json_rows(DEFAULT_DIGITS).into_iter().map(Value::Object).collect());
    to_py(py, &v)
}

fn alpha(spec: &str) -> PyResult<Alpha> {
    Alpha::parse(spec).map_err(value)
}

fn policy(bits: u32) -> PyResult<Policy> {
    let d = Policy::default();
    Policy::new(bits, d.max_bits.max(bits), d.target_width().clone()).map_err(value)
}

fn observable(name: &str) -> PyResult<Observable> {
    name.parse().map_err(value)
}

/// Continued-fraction rows `r, a_r, p_r, q_r, q_slash_r`.
#[pyfunction]
#[pyo3(signature = (alpha_spec, depth=10, bits=128))]
fn cf(py: Python<'_>, alpha_spec: &str, depth: usize, bits: u32) -> PyResult<Py<PyAny>> {
    rows(py, commands::cf_table(&alpha(alpha_spec)?, depth, bits).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (alpha_spec, n, bits=128))]
fn ostrowski(py: Python<'_>, alpha_spec: &str, n: u64, bits: u32) -> PyResult<Py<PyAny>> {
    rows(py, commands::ostrowski_table(&alpha(alpha_spec)?, n, bits).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (alpha_spec, n, bits=128))]
fn orbit(py: Python<'_>, alpha_spec: &str, n: u64, bits: u32) -> PyResult<Py<PyAny>> {
    rows(py, commands::orbit_table(&alpha(alpha_spec)?, n, bits).map_err(err)?)
}

/// Certified enclosure of `sum_{r<=n} phi({r alpha})`.
#[pyfunction]
#[pyo3(signature = (alpha_spec, phi, n, bits=128))]
fn birkhoff_sum(py: Python<'_>, alpha_spec: &str, phi: &str, n: u64, bits: u32) -> PyResult<Py<PyAny>> {
    rows(py, commands::sum_table(&alpha(alpha_spec)?, &observable(phi)?, n, &policy(bits)?).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (alpha_spec, phi, n, bits=128))]
fn bounds(py: Python<'_>, alpha_spec: &str, phi: &str, n: u64, bits: u32) -> PyResult<Py<PyAny>> {
    rows(py, commands::bounds_table(&alpha(alpha_spec)?, &observable(phi)?, n, &policy(bits)?).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (alpha_spec, n, beta="1", method="all", dual=false, bits=128))]
fn estimate(py: Python<'_>, alpha_spec: &str, n: u64, beta: &str, method: &str, dual: bool, bits: u32) -> PyResult<Py<PyAny>> {
    let beta: Beta = beta.parse().map_err(value)?;
    let method: Method = method.parse().map_err(value)?;
    rows(py, commands::estimate_table(&alpha(alpha_spec)?, beta, n, method, dual, &policy(bits)?).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (target, alpha_spec, n=None, n_max=None, gamma=None, phi=None, bits=128))]
#[allow(clippy::too_many_arguments)]
fn compare(
    py: Python<'_>,
    target: &str,
    alpha_spec: &str,
    n: Option<u64>,
    n_max: Option<u64>,
    gamma: Option<&str>,
    phi: Option<&str>,
    bits: u32,
) -> PyResult<Py<PyAny>> {
    let target: CompareTarget = target.parse().map_err(value)?;
    let args = CompareArgs {
        n,
        n_max,
        gamma: gamma.map(parse_rational).transpose().map_err(err)?,
        phi: phi.map(observable).transpose()?,
    };
    rows(py, commands::compare_table(target, &alpha(alpha_spec)?, &args, &policy(bits)?).map_err(err)?)
}

/// Runs a sweep from config text; returns the rows.
#[pyfunction]
#[pyo3(signature = (config, bits=128))]
fn sweep(py: Python<'_>, config: &str, bits: u32) -> PyResult<Py<PyAny>> {
    let cfg = SweepConfig::parse(config).map_err(err)?;
    let table = run_sweep(&cfg, &policy(bits)?).map_err(err)?;
    rows(py, Output { table, notes: vec![] })
}

#[pymodule]
#[pyo3(name = "anergodic")]
fn anergodic_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", anergodic::report::VERSION)?;
    m.add_function(wrap_pyfunction!(cf, m)?)?;
    m.add_function(wrap_pyfunction!(ostrowski, m)?)?;
    m.add_function(wrap_pyfunction!(orbit, m)?)?;
    m.add_function(wrap_pyfunction!(birkhoff_sum, m)?)?;
    m.add_function(wrap_pyfunction!(bounds, m)?)?;
    m.add_function(wrap_pyfunction!(estimate, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    Ok(())
}

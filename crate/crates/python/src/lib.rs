//! Python bindings. Reports come back as JSON strings, identical to the
//! CLI output.

use clap::Parser;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use multisecant::census::line_profile;
use multisecant::cli::{execute, render, Cli};
use multisecant::gallery::{self, parametric_line_profile, ReducedVariety};

fn run_args(args: Vec<String>) -> PyResult<(String, bool)> {
    let argv = std::iter::once("multisecant".to_string()).chain(args);
    let cli = Cli::try_parse_from(argv).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let (o, _) = execute(cli).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok((render(&o.report), o.ok))
}

/// Run a CLI command, e.g. `run(["census", "--builtin", "twisted-cubic"])`.
/// Returns `(report_json, ok)`; `--out` is ignored.
#[pyfunction]
fn run(args: Vec<String>) -> PyResult<(String, bool)> {
    run_args(args)
}

/// Equations of the ordered Hilbert scheme for a builtin, in canonical form.
#[pyfunction]
#[pyo3(signature = (builtin, profile, star=None))]
fn oh_equations(builtin: &str, profile: &str, star: Option<&str>) -> PyResult<Vec<String>> {
    let mut args = vec!["oh-eqs".into(), "--builtin".into(), builtin.into(), "--profile".into(), profile.into()];
    if let Some(b) = star {
        args.extend(["--star".into(), b.into()]);
    }
    let (text, _) = run_args(args)?;
    let v: serde_json::Value = serde_json::from_str(&text).expect("report is json");
    Ok(v["equations"].as_array().into_iter().flatten().filter_map(|e| e.as_str().map(String::from)).collect())
}

/// Profile key like `{2,1}` of the line through `beta` and `dir` over F_p,
/// or `None` if the line lies on the variety.
#[pyfunction]
fn line_section(builtin: &str, p: u64, beta: Vec<u64>, dir: Vec<u64>) -> PyResult<Option<String>> {
    let entry = gallery::builtin(builtin).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let x = entry.variety.reduce(p).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let n = x.classifier().ambient_dim();
    if beta.len() != n + 1 || dir.len() != n + 1 {
        return Err(PyValueError::new_err(format!("points need {} coordinates", n + 1)));
    }
    let beta: Vec<u64> = beta.iter().map(|c| c % p).collect();
    let dir: Vec<u64> = dir.iter().map(|c| c % p).collect();
    let sec = match &x {
        ReducedVariety::Implicit(x) => line_profile(x, &beta, &dir),
        ReducedVariety::Parametric(x) => parametric_line_profile(x, &beta, &dir, 0),
    }
    .map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(sec.key())
}

#[pyfunction]
fn builtin_names() -> Vec<&'static str> {
    gallery::BUILTIN_NAMES.to_vec()
}

#[pymodule]
fn multisecant_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(oh_equations, m)?)?;
    m.add_function(wrap_pyfunction!(line_section, m)?)?;
    m.add_function(wrap_pyfunction!(builtin_names, m)?)?;
    Ok(())
}

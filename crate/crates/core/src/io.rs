//! Family definition files.
//!
//! ```json
//! {"labels": ["a", "b", "c"],
//!  "C": ["0", "ln(2)", "1/7"],
//!  "F": [["0"], ["1"], ["2"]],
//!  "backend": "rational"}
//! ```
//!
//! Entries may be strings (`"p/q"`, decimals, and in `C` also sums of
//! `q*ln(k)` terms) or JSON numbers. `labels` defaults to `x1..xm` and
//! `backend` to `"rational"`.

use std::path::Path;
use std::str::FromStr;

use num_rational::BigRational;
use serde::Deserialize;
use serde_json::{json, Number, Value};

use crate::error::{Error, Result};
use crate::expfam::{Backend, FiniteExpFam};
use crate::scalar::{format_rational, parse_rational, LogWeight};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyFile {
    labels: Option<Vec<String>>,
    #[serde(rename = "C")]
    c: Vec<Entry>,
    #[serde(rename = "F")]
    f: Vec<Vec<Entry>>,
    backend: Option<String>,
    tol: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Entry {
    Text(String),
    Number(Number),
}

impl Entry {
    /// Numbers go through their decimal text so `0.1` stays `1/10`.
    fn text(&self) -> String {
        match self {
            Entry::Text(s) => s.clone(),
            Entry::Number(n) => n.to_string(),
        }
    }
}

pub fn parse_backend(text: &str) -> Result<Backend> {
    match text {
        "rational" | "exact" => Ok(Backend::Rational),
        "float" => Ok(Backend::float()),
        other => Err(Error::Parse(format!(
            "unknown backend `{other}` (expected \"rational\" or \"float\")"
        ))),
    }
}

/// Parses a family definition. `backend` overrides the file's choice.
pub fn family_from_json(text: &str, backend: Option<Backend>) -> Result<FiniteExpFam> {
    let file: FamilyFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("family file: {e}")))?;
    let backend = match (backend, &file.backend) {
        (Some(b), _) => b,
        (None, Some(name)) => parse_backend(name)?,
        (None, None) => Backend::Rational,
    };
    let backend = match (backend, file.tol) {
        (Backend::Float { .. }, Some(tol)) => Backend::Float { tol },
        (b, _) => b,
    };
    let c = file
        .c
        .iter()
        .enumerate()
        .map(|(i, e)| {
            LogWeight::from_str(&e.text()).map_err(|err| context(&format!("C[{i}]"), err))
        })
        .collect::<Result<Vec<_>>>()?;
    let f = file
        .f
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, e)| {
                    parse_rational(&e.text()).map_err(|err| context(&format!("F[{i}][{j}]"), err))
                })
                .collect::<Result<Vec<BigRational>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let labels = file
        .labels
        .unwrap_or_else(|| (1..=c.len()).map(|i| format!("x{i}")).collect());
    FiniteExpFam::new(labels, c, f, backend)
}

fn context(field: &str, err: Error) -> Error {
    match err {
        Error::Parse(msg) => Error::Parse(format!("{field}: {msg}")),
        other => Error::Parse(format!("{field}: {other}")),
    }
}

pub fn read_family(path: &Path, backend: Option<Backend>) -> Result<FiniteExpFam> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    family_from_json(&text, backend).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// `"categorical:k"` or `"binomial:k"`.
pub fn builtin_family(tag: &str) -> Option<Result<FiniteExpFam>> {
    let (kind, arg) = tag.split_once(':')?;
    let build: fn(usize) -> Result<FiniteExpFam> = match kind {
        "categorical" => FiniteExpFam::categorical,
        "binomial" => FiniteExpFam::binomial,
        _ => return None,
    };
    Some(
        arg.trim()
            .parse::<usize>()
            .map_err(|_| Error::Parse(format!("invalid size in builtin family `{tag}`")))
            .and_then(build),
    )
}

/// A builtin tag or a path to a family file.
pub fn load_family(source: &str, backend: Option<Backend>) -> Result<FiniteExpFam> {
    match builtin_family(source) {
        Some(fam) => {
            let fam = fam?;
            match backend {
                Some(Backend::Float { tol }) => rebuild_float(&fam, tol),
                _ => Ok(fam),
            }
        }
        None => read_family(Path::new(source), backend),
    }
}

fn rebuild_float(fam: &FiniteExpFam, tol: f64) -> Result<FiniteExpFam> {
    match fam.exact() {
        Some(exact) => FiniteExpFam::new(
            fam.labels().to_vec(),
            exact.c.clone(),
            exact
                .f
                .row_iter()
                .map(|r| r.iter().cloned().collect())
                .collect(),
            Backend::Float { tol },
        ),
        None => Ok(fam.clone()),
    }
}

/// The family in file form; exact families serialize losslessly.
pub fn family_to_json(fam: &FiniteExpFam) -> Value {
    match fam.exact() {
        Some(exact) => json!({
            "labels": fam.labels(),
            "C": exact.c.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "F": exact.f.row_iter().map(|r| r.iter().map(format_rational).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "backend": "rational",
        }),
        None => json!({
            "labels": fam.labels(),
            "C": fam.c().iter().copied().collect::<Vec<_>>(),
            "F": fam.f().row_iter().map(|r| r.iter().copied().collect::<Vec<_>>()).collect::<Vec<_>>(),
            "backend": "float",
            "tol": fam.backend().tol(),
        }),
    }
}

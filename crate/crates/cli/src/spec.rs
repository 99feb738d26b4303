//! Channel spec files.
//!
//! ```json
//! { "cqspec": 1, "alphabet": ["0", "1"], "dim": 2,
//!   "outputs": [ [[[1,0],[0,0]], [[0,0],[0,0]]], [[[0.5,0],[0.5,0]], [[0.5,0],[0.5,0]]] ] }
//! ```
//!
//! Matrix entries are `[re, im]` pairs. Classical channels may instead give
//! `"stochastic_matrix": [[...], ...]` with one probability row per letter.

use std::fmt;
use std::path::Path;

use cqexp_core::{CQChannel, DensityMatrix, HermitianMatrix};
use num_complex::Complex64;
use serde::Deserialize;

/// Load-time tolerance for Hermiticity, positivity and trace.
pub const LOAD_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    cqspec: u32,
    #[serde(default)]
    alphabet: Option<Vec<String>>,
    #[serde(default)]
    dim: Option<usize>,
    #[serde(default)]
    outputs: Option<Vec<Vec<Vec<[f64; 2]>>>>,
    #[serde(default)]
    stochastic_matrix: Option<Vec<Vec<f64>>>,
}

#[derive(Debug)]
pub struct SpecError(pub String);

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for SpecError {}

fn fail<T>(msg: impl Into<String>) -> Result<T, SpecError> {
    Err(SpecError(msg.into()))
}

pub fn load_channel(path: &Path) -> Result<CQChannel, SpecError> {
    let text = std::fs::read_to_string(path).map_err(|e| SpecError(format!("{}: {e}", path.display())))?;
    parse_channel(&text)
}

pub fn parse_channel(text: &str) -> Result<CQChannel, SpecError> {
    let spec: SpecFile = serde_json::from_str(text).map_err(|e| SpecError(format!("invalid channel spec: {e}")))?;
    if spec.cqspec != 1 {
        return fail(format!("unsupported cqspec version {}", spec.cqspec));
    }
    let matrices = match (spec.outputs, spec.stochastic_matrix) {
        (Some(_), Some(_)) => return fail("give either \"outputs\" or \"stochastic_matrix\", not both"),
        (None, None) => return fail("missing \"outputs\" or \"stochastic_matrix\""),
        (Some(outputs), None) => outputs
            .into_iter()
            .map(|m| {
                m.into_iter().map(|row| row.into_iter().map(|[re, im]| Complex64::new(re, im)).collect()).collect()
            })
            .collect::<Vec<Vec<Vec<Complex64>>>>(),
        (None, Some(rows)) => rows
            .into_iter()
            .map(|probs| {
                let d = probs.len();
                (0..d)
                    .map(|i| (0..d).map(|j| Complex64::new(if i == j { probs[i] } else { 0.0 }, 0.0)).collect())
                    .collect()
            })
            .collect(),
    };
    if matrices.is_empty() {
        return fail("channel needs at least one letter");
    }
    let dim = spec.dim.unwrap_or(matrices[0].len());
    if dim == 0 {
        return fail("output dimension must be positive");
    }
    let alphabet = spec.alphabet.unwrap_or_else(|| (0..matrices.len()).map(|x| x.to_string()).collect());
    if alphabet.len() != matrices.len() {
        return fail(format!("alphabet has {} labels but {} outputs are given", alphabet.len(), matrices.len()));
    }
    let outputs = matrices
        .iter()
        .zip(&alphabet)
        .map(|(m, label)| density(m, dim).map_err(|e| SpecError(format!("output for letter {label:?}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    CQChannel::new(alphabet, outputs).map_err(|e| SpecError(e.to_string()))
}

/// Validates one output to [`LOAD_TOLERANCE`], then hermitizes, clips tiny negative
/// eigenvalues and renormalizes.
fn density(rows: &[Vec<Complex64>], dim: usize) -> Result<DensityMatrix, String> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(format!("expected a {dim}×{dim} matrix"));
    }
    if rows.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err("non-finite entry".into());
    }
    let refs: Vec<&[Complex64]> = rows.iter().map(Vec::as_slice).collect();
    let h = HermitianMatrix::from_rows_with_tolerance(&refs, LOAD_TOLERANCE).map_err(|e| e.to_string())?;
    let trace = h.trace();
    if (trace - 1.0).abs() > LOAD_TOLERANCE {
        return Err(format!("trace {trace} is not 1"));
    }
    let mut eig = h.eig();
    let min = eig.values.iter().copied().fold(f64::INFINITY, f64::min);
    if min < -LOAD_TOLERANCE {
        return Err(format!("not positive semidefinite (eigenvalue {min})"));
    }
    let cleaned = if h.is_diagonal() {
        HermitianMatrix::from_diagonal(&h.diagonal().iter().map(|v| v.max(0.0)).collect::<Vec<_>>())
    } else if min < 0.0 {
        eig.values.iter_mut().for_each(|v| *v = v.max(0.0));
        eig.reconstruct()
    } else {
        h
    };
    DensityMatrix::normalized(cleaned).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stochastic_shorthand() {
        let ch = parse_channel(r#"{"cqspec":1,"stochastic_matrix":[[0.9,0.1],[0.1,0.9]]}"#).unwrap();
        assert_eq!(ch.alphabet(), &["0".to_string(), "1".to_string()]);
        assert!(ch.is_diagonal());
        assert_eq!(ch.output(1).as_hermitian().diagonal(), vec![0.1, 0.9]);
    }

    #[test]
    fn complex_outputs() {
        let text = r#"{"cqspec":1,"alphabet":["a","b"],"dim":2,"outputs":[
            [[[1,0],[0,0]],[[0,0],[0,0]]],
            [[[0.5,0],[0,-0.5]],[[0,0.5],[0.5,0]]]]}"#;
        let ch = parse_channel(text).unwrap();
        assert_eq!(ch.alphabet_size(), 2);
        assert_eq!(ch.output(1).as_hermitian().get(0, 1), Complex64::new(0.0, -0.5));
    }

    #[test]
    fn rejects_bad_specs() {
        let cases = [
            r#"{"cqspec":2,"stochastic_matrix":[[1.0]]}"#,
            r#"{"cqspec":1}"#,
            r#"{"cqspec":1,"stochastic_matrix":[[0.5,0.6]]}"#,
            r#"{"cqspec":1,"stochastic_matrix":[[1.2,-0.2]]}"#,
            r#"{"cqspec":1,"alphabet":["a"],"stochastic_matrix":[[1,0],[0,1]]}"#,
            r#"{"cqspec":1,"dim":2,"outputs":[[[[0.5,0],[0.5,0]],[[0,0],[0.5,0]]]]}"#,
            r#"{"cqspec":1,"dim":2,"outputs":[[[[1,0]]]]}"#,
            r#"{"cqspec":1,"stochastic_matrix":[[1.0]],"extra":3}"#,
            r#"not json"#,
        ];
        for case in cases {
            assert!(parse_channel(case).is_err(), "{case}");
        }
    }

    #[test]
    fn tolerates_tiny_violations() {
        let text = r#"{"cqspec":1,"dim":2,"outputs":[[[[1.000000001,0],[0,1e-9]],[[0,-1e-9],[-5e-9,0]]]]}"#;
        let ch = parse_channel(text).unwrap();
        assert!((ch.output(0).as_hermitian().trace() - 1.0).abs() < 1e-15);
    }
}

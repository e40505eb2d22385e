use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{MultiIndex, Theta, TorusElement};
use crate::error::{NctError, Result};
use crate::io::read_json;
use crate::pdo::{adjoint_expansion, adjoint_oracle, apply, compose_expansion, compose_oracle};
use crate::sobolev::{rellich_extract, sobolev_norm, RellichOutcome};
use crate::symbols::{SharedSymbol, SymbolSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExpandKind {
    Adjoint,
    Compose,
}

/// Output of `expand`: per-level terms, their sum and optionally the oracle residual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpandOutput {
    pub kind: ExpandKind,
    pub order: usize,
    pub at: Vec<f64>,
    pub terms: Vec<TorusElement>,
    pub value: TorusElement,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<TorusElement>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormOutput {
    pub s: f64,
    pub norm: f64,
}

fn load_symbol(path: &Path, context: Option<&Arc<Theta>>) -> Result<SharedSymbol> {
    let spec: SymbolSpec = read_json(path)?;
    spec.to_symbol(context)
}

/// `P_rho(a)` for a symbol file and an element file.
pub fn apply_files(symbol: &Path, element: &Path) -> Result<TorusElement> {
    let a: TorusElement = read_json(element)?;
    let sym = load_symbol(symbol, Some(a.theta()))?;
    apply(sym.as_ref(), &a)
}

pub fn norm_file(element: &Path, s: f64) -> Result<NormOutput> {
    let a: TorusElement = read_json(element)?;
    Ok(NormOutput {
        s,
        norm: sobolev_norm(&a, s),
    })
}

/// Integer point for compose oracles.
fn integer_point(at: &[f64]) -> Result<MultiIndex> {
    if at.iter().any(|x| x.fract() != 0.0) {
        return Err(NctError::Usage("the compose oracle needs an integer point".into()));
    }
    Ok(at.iter().map(|&x| x as i64).collect())
}

pub fn expand_files(
    kind: ExpandKind,
    symbol: &Path,
    symbol2: Option<&Path>,
    order: usize,
    at: &[f64],
    oracle: bool,
) -> Result<ExpandOutput> {
    let first = load_symbol(symbol, None)?;
    let theta = Arc::clone(first.theta());
    if at.len() != theta.dim() {
        return Err(NctError::DimensionMismatch {
            expected: theta.dim(),
            found: at.len(),
        });
    }
    let (result, exact) = match kind {
        ExpandKind::Adjoint => {
            if symbol2.is_some() {
                return Err(NctError::Usage("adjoint takes a single symbol".into()));
            }
            let r = adjoint_expansion(first.as_ref(), at, order)?;
            let o = oracle.then(|| adjoint_oracle(first.as_ref(), at)).transpose()?;
            (r, o)
        }
        ExpandKind::Compose => {
            let path = symbol2.ok_or_else(|| NctError::Usage("compose needs --symbol2".into()))?;
            let second = load_symbol(path, Some(&theta))?;
            let r = compose_expansion(first.as_ref(), second.as_ref(), at, order)?;
            let o = if oracle {
                Some(compose_oracle(first.as_ref(), second.as_ref(), &integer_point(at)?)?)
            } else {
                None
            };
            (r, o)
        }
    };
    let residual = exact.as_ref().map(|o| result.value.distance0(o));
    Ok(ExpandOutput {
        kind,
        order,
        at: at.to_vec(),
        terms: result.terms,
        value: result.value,
        oracle: exact,
        residual,
    })
}

/// Sequence file: a JSON array of elements sharing one theta. Without a
/// bound the largest `H^s` norm of the sequence is used.
pub fn rellich_file(sequence: &Path, s: f64, t: f64, bound: Option<f64>, eps: f64) -> Result<RellichOutcome> {
    let seq: Vec<TorusElement> = read_json(sequence)?;
    if let Some(first) = seq.first() {
        if seq.iter().any(|a| **a.theta() != **first.theta()) {
            return Err(NctError::Validation(format!(
                "{}: elements have different theta",
                sequence.display()
            )));
        }
    }
    let bound = bound.unwrap_or_else(|| seq.iter().map(|a| sobolev_norm(a, s)).fold(0.0, f64::max));
    rellich_extract(&seq, s, t, bound, eps)
}

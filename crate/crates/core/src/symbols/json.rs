use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{LambdaSymbol, PolynomialSymbol, SharedSymbol, Symbol};
use crate::algebra::{MultiIndex, Theta, TorusElement};
use crate::error::{NctError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermSpec {
    pub exp: Vec<i64>,
    pub coeff: TorusElement,
}

/// Serializable symbol description. Callback symbols have no file form.
///
/// ```json
/// {"kind": "polynomial", "order": 1, "terms": [{"exp": [1], "coeff": {...}}]}
/// {"kind": "lambda", "s": 2.0, "n": 2}
/// ```
///
/// A lambda symbol without `theta` adopts the deformation of whatever it is
/// combined with; `coeff` defaults to the unit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SymbolSpec {
    Polynomial {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        order: Option<f64>,
        terms: Vec<TermSpec>,
    },
    Lambda {
        s: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        theta: Option<Theta>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        coeff: Option<TorusElement>,
    },
}

fn rehome(e: &TorusElement, theta: &Arc<Theta>) -> Result<TorusElement> {
    if **e.theta() != **theta {
        return Err(NctError::Validation(
            "coefficient theta differs from the symbol theta".into(),
        ));
    }
    TorusElement::from_pairs(theta, e.iter().map(|(m, c)| (m.clone(), *c)))
}

fn agree(found: &Theta, context: Option<&Arc<Theta>>) -> Result<()> {
    match context {
        Some(t) if **t != *found => Err(NctError::Validation(
            "theta of the symbol differs from theta of the other inputs".into(),
        )),
        _ => Ok(()),
    }
}

impl SymbolSpec {
    pub fn from_polynomial(p: &PolynomialSymbol) -> Self {
        SymbolSpec::Polynomial {
            order: Some(p.order()),
            terms: p
                .terms()
                .map(|(e, c)| TermSpec {
                    exp: e.to_vec(),
                    coeff: c.clone(),
                })
                .collect(),
        }
    }

    pub fn from_lambda(l: &LambdaSymbol) -> Self {
        SymbolSpec::Lambda {
            s: l.s(),
            n: Some(l.dim()),
            theta: Some((**l.theta()).clone()),
            coeff: Some(l.coeff().clone()),
        }
    }

    /// Dimension and theta carried by the file itself, if any.
    pub fn theta(&self) -> Option<Theta> {
        match self {
            SymbolSpec::Polynomial { terms, .. } => terms.first().map(|t| (**t.coeff.theta()).clone()),
            SymbolSpec::Lambda { theta, coeff, n, .. } => theta
                .clone()
                .or_else(|| coeff.as_ref().map(|c| (**c.theta()).clone()))
                .or_else(|| n.map(Theta::zero)),
        }
    }

    /// Builds the symbol; `context` is the theta of the operands it will act
    /// on and must agree with any theta stated in the file.
    pub fn to_symbol(&self, context: Option<&Arc<Theta>>) -> Result<SharedSymbol> {
        match self {
            SymbolSpec::Polynomial { order, terms } => {
                // an empty term list is the zero symbol of the context
                let theta = match (terms.first(), context) {
                    (Some(first), _) => {
                        agree(first.coeff.theta(), context)?;
                        context.cloned().unwrap_or_else(|| Arc::clone(first.coeff.theta()))
                    }
                    (None, Some(t)) => Arc::clone(t),
                    (None, None) => {
                        return Err(NctError::Validation(
                            "polynomial symbol without terms has no theta".into(),
                        ))
                    }
                };
                let mut collected = Vec::with_capacity(terms.len());
                for t in terms {
                    collected.push((MultiIndex::from(t.exp.clone()), rehome(&t.coeff, &theta)?));
                }
                let mut p = PolynomialSymbol::new(&theta, collected)?;
                if let Some(d) = order {
                    if *d < p.degree() as f64 {
                        return Err(NctError::Validation(format!(
                            "declared order {d} is below the polynomial degree {}",
                            p.degree()
                        )));
                    }
                    p = p.with_order(*d);
                }
                Ok(Arc::new(p))
            }
            SymbolSpec::Lambda { s, n, theta, coeff } => {
                let stated = theta
                    .clone()
                    .or_else(|| coeff.as_ref().map(|c| (**c.theta()).clone()));
                if let Some(t) = &stated {
                    agree(t, context)?;
                    if let Some(c) = coeff {
                        if **c.theta() != *t {
                            return Err(NctError::Validation(
                                "lambda coefficient theta differs from the stated theta".into(),
                            ));
                        }
                    }
                }
                let theta = match (context, stated) {
                    (Some(t), _) => Arc::clone(t),
                    (None, Some(t)) => Arc::new(t),
                    (None, None) => Arc::new(Theta::zero(n.ok_or_else(|| {
                        NctError::Validation("lambda symbol needs n, theta or an operand".into())
                    })?)),
                };
                if let Some(n) = n {
                    if *n != theta.dim() {
                        return Err(NctError::DimensionMismatch {
                            expected: theta.dim(),
                            found: *n,
                        });
                    }
                }
                let c = match coeff {
                    Some(c) => rehome(c, &theta)?,
                    None => TorusElement::one(&theta),
                };
                Ok(Arc::new(LambdaSymbol::with_coeff(*s, c)))
            }
        }
    }
}

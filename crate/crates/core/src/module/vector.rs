use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::matrix::MatrixElement;
use crate::algebra::{Theta, TorusElement};
use crate::error::{NctError, Result};
use crate::sobolev::{sobolev_inner, sobolev_norm};

/// Column vector `(a_1, ..., a_r)` over the algebra. Matrices act on the left.
#[derive(Clone, PartialEq, Debug)]
pub struct ModuleVector {
    entries: Vec<TorusElement>,
}

impl ModuleVector {
    pub fn new(entries: Vec<TorusElement>) -> Result<Self> {
        let first = entries.first().ok_or_else(|| NctError::ShapeMismatch("empty module vector".into()))?;
        if entries.iter().any(|e| !e.same_theta(first)) {
            return Err(NctError::ThetaMismatch);
        }
        Ok(Self { entries })
    }

    pub fn zero(theta: &Arc<Theta>, r: usize) -> Self {
        Self {
            entries: vec![TorusElement::zero(theta); r],
        }
    }

    /// `f_j = a` in slot `j`, zero elsewhere.
    pub fn unit(a: TorusElement, j: usize, r: usize) -> Self {
        let mut v = Self::zero(a.theta(), r);
        v.entries[j] = a;
        v
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn theta(&self) -> &Arc<Theta> {
        self.entries[0].theta()
    }

    pub fn entries(&self) -> &[TorusElement] {
        &self.entries
    }

    pub fn get(&self, j: usize) -> &TorusElement {
        &self.entries[j]
    }

    fn check_rank(&self, r: usize) -> Result<()> {
        if self.rank() != r {
            return Err(NctError::ShapeMismatch(format!("rank {} vs {r}", self.rank())));
        }
        Ok(())
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_rank(other.rank())?;
        Ok(Self {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.try_sub(b))
                .collect::<Result<_>>()?,
        })
    }

    pub fn max_distance0(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.distance0(b))
            .fold(0.0, f64::max)
    }
}

/// `A v` with `(A v)_j = sum_k A_{jk} v_k`.
pub fn matrix_times_vector(a: &MatrixElement, v: &ModuleVector) -> Result<ModuleVector> {
    v.check_rank(a.rank())?;
    let r = a.rank();
    let mut out = Vec::with_capacity(r);
    for j in 0..r {
        let mut acc = TorusElement::zero(a.theta());
        for k in 0..r {
            let x = a.get(j, k);
            if !x.is_zero() && !v.get(k).is_zero() {
                acc.add_scaled(&x.try_mul(v.get(k))?, Complex64::ONE);
            }
        }
        out.push(acc);
    }
    ModuleVector::new(out)
}

/// `e v`, the component of `v` in `E = e A^r`.
pub fn project(v: &ModuleVector, e: &MatrixElement) -> Result<ModuleVector> {
    matrix_times_vector(e, v)
}

/// `sum_j tau(b_j^* a_j)`.
pub fn module_inner(a: &ModuleVector, b: &ModuleVector) -> Result<Complex64> {
    module_inner_s(a, b, 0.0)
}

/// `sum_{j,m} (1 + |m|^2)^s conj(b_{j,m}) a_{j,m}`.
pub fn module_inner_s(a: &ModuleVector, b: &ModuleVector, s: f64) -> Result<Complex64> {
    a.check_rank(b.rank())?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, y) in a.entries.iter().zip(&b.entries) {
        acc += sobolev_inner(x, y, s)?;
    }
    Ok(acc)
}

pub fn module_norm_s(v: &ModuleVector, s: f64) -> f64 {
    v.entries.iter().map(|e| sobolev_norm(e, s).powi(2)).sum::<f64>().sqrt()
}

impl Serialize for ModuleVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.entries.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ModuleVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let entries = Vec::<TorusElement>::deserialize(deserializer)?;
        let v = ModuleVector::new(entries).map_err(D::Error::custom)?;
        let theta = Arc::clone(v.theta());
        let entries = v
            .entries
            .iter()
            .map(|e| TorusElement::from_pairs(&theta, e.iter().map(|(k, c)| (k.clone(), *c))))
            .collect::<Result<_>>()
            .map_err(D::Error::custom)?;
        Ok(ModuleVector { entries })
    }
}

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use super::MultiIndex;
use crate::error::{NctError, Result};

const SKEW_TOL: f64 = 1e-12;

/// Real skew-symmetric deformation matrix of the noncommutative torus.
///
/// Any real skew-symmetric matrix is accepted, including rational entries and
/// the zero matrix (the commutative torus). Irrationality of the entries only
/// matters for the analytic theory and is never enforced here.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct Theta {
    n: usize,
    entries: Vec<f64>,
}

impl Theta {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(NctError::InvalidTheta("dimension must be positive".into()));
        }
        let mut entries = Vec::with_capacity(n * n);
        for row in &rows {
            if row.len() != n {
                return Err(NctError::InvalidTheta(format!(
                    "expected a square {n}x{n} matrix"
                )));
            }
            entries.extend_from_slice(row);
        }
        for j in 0..n {
            for k in 0..n {
                let (a, b) = (entries[j * n + k], entries[k * n + j]);
                if !a.is_finite() || (a + b).abs() > SKEW_TOL {
                    return Err(NctError::InvalidTheta(format!(
                        "entries ({j},{k}) and ({k},{j}) are not skew-symmetric"
                    )));
                }
            }
        }
        Ok(Self { n, entries })
    }

    /// The undeformed (commutative) torus.
    pub fn zero(n: usize) -> Self {
        assert!(n > 0, "theta dimension must be positive");
        Self {
            n,
            entries: vec![0.0; n * n],
        }
    }

    /// Builds theta from its strictly upper triangular entries in row order
    /// `(0,1), (0,2), ..., (n-2,n-1)`.
    pub fn from_upper(n: usize, upper: &[f64]) -> Result<Self> {
        if n == 0 || upper.len() != n * (n - 1) / 2 {
            return Err(NctError::InvalidTheta(format!(
                "expected {} upper entries for n = {n}",
                n * n.saturating_sub(1) / 2
            )));
        }
        let mut entries = vec![0.0; n * n];
        let mut it = upper.iter();
        for j in 0..n {
            for k in j + 1..n {
                let v = *it.next().unwrap();
                entries[j * n + k] = v;
                entries[k * n + j] = -v;
            }
        }
        Ok(Self { n, entries })
    }

    /// Two-dimensional torus with `theta_{1,2} = theta`.
    pub fn two(theta: f64) -> Self {
        Self::from_upper(2, &[theta]).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.entries[j * self.n + k]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    /// Exponent `sum_{j<l} theta_{j,l} m_l k_j` of the normal-ordering cocycle.
    pub fn cocycle_exponent(&self, m: &[i64], k: &[i64]) -> f64 {
        let n = self.n;
        let mut acc = 0.0;
        for j in 0..n {
            if k[j] == 0 {
                continue;
            }
            let row = &self.entries[j * n..(j + 1) * n];
            let mut inner = 0.0;
            for l in j + 1..n {
                inner += row[l] * m[l] as f64;
            }
            acc += inner * k[j] as f64;
        }
        acc
    }

    /// Normal-ordering phase `w(m, k)` defined by `U^m U^k = w(m, k) U^{m+k}`.
    pub fn phase(&self, m: &[i64], k: &[i64]) -> Complex64 {
        Complex64::from_polar(1.0, TAU * self.cocycle_exponent(m, k))
    }
}

impl TryFrom<Vec<Vec<f64>>> for Theta {
    type Error = NctError;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(rows)
    }
}

impl From<Theta> for Vec<Vec<f64>> {
    fn from(t: Theta) -> Self {
        t.rows()
    }
}

/// Unit-modulus scalar produced by reordering words in the generators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Phase(Complex64);

impl Phase {
    pub fn value(self) -> Complex64 {
        self.0
    }
}

/// Checked form of [`Theta::phase`].
pub fn normal_phase(m: &MultiIndex, k: &MultiIndex, theta: &Theta) -> Result<Phase> {
    for idx in [m, k] {
        if idx.len() != theta.dim() {
            return Err(NctError::DimensionMismatch {
                expected: theta.dim(),
                found: idx.len(),
            });
        }
    }
    Ok(Phase(theta.phase(m, k)))
}

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{MultiIndex, Theta, TorusElement};
use crate::error::{NctError, Result};

/// `r x r` matrix over the algebra, row-major.
#[derive(Clone, PartialEq)]
pub struct MatrixElement {
    r: usize,
    entries: Vec<TorusElement>,
}

impl MatrixElement {
    pub fn zero(theta: &Arc<Theta>, r: usize) -> Self {
        Self {
            r,
            entries: vec![TorusElement::zero(theta); r * r],
        }
    }

    pub fn identity(theta: &Arc<Theta>, r: usize) -> Self {
        let mut out = Self::zero(theta, r);
        for j in 0..r {
            out.entries[j * r + j] = TorusElement::one(theta);
        }
        out
    }

    pub fn diag(diagonal: Vec<TorusElement>) -> Result<Self> {
        let r = diagonal.len();
        let theta = Arc::clone(diagonal.first().ok_or_else(|| NctError::ShapeMismatch("empty diagonal".into()))?.theta());
        let mut out = Self::zero(&theta, r);
        for (j, d) in diagonal.into_iter().enumerate() {
            out.entries[j * r + j] = d;
        }
        out.check_uniform()?;
        Ok(out)
    }

    pub fn from_rows(rows: Vec<Vec<TorusElement>>) -> Result<Self> {
        let r = rows.len();
        if r == 0 || rows.iter().any(|row| row.len() != r) {
            return Err(NctError::ShapeMismatch("matrix must be square and nonempty".into()));
        }
        let out = Self {
            r,
            entries: rows.into_iter().flatten().collect(),
        };
        out.check_uniform()?;
        Ok(out)
    }

    /// Matrix with scalar entries `c_{jk} 1`.
    pub fn from_scalars(theta: &Arc<Theta>, m: &DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(NctError::ShapeMismatch("scalar matrix must be square".into()));
        }
        let r = m.nrows();
        let mut out = Self::zero(theta, r);
        for j in 0..r {
            for k in 0..r {
                out.entries[j * r + k] = TorusElement::scalar(theta, m[(j, k)]);
            }
        }
        Ok(out)
    }

    fn check_uniform(&self) -> Result<()> {
        let first = &self.entries[0];
        if self.entries.iter().any(|e| !e.same_theta(first)) {
            return Err(NctError::ThetaMismatch);
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn theta(&self) -> &Arc<Theta> {
        self.entries[0].theta()
    }

    pub fn get(&self, j: usize, k: usize) -> &TorusElement {
        &self.entries[j * self.r + k]
    }

    pub fn set(&mut self, j: usize, k: usize, v: TorusElement) {
        self.entries[j * self.r + k] = v;
    }

    pub fn entries(&self) -> &[TorusElement] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<TorusElement>> {
        self.entries.chunks(self.r).map(|c| c.to_vec()).collect()
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.r != other.r {
            return Err(NctError::ShapeMismatch(format!("{}x{} vs {}x{}", self.r, self.r, other.r, other.r)));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.try_add(b))
            .collect::<Result<_>>()?;
        Ok(Self { r: self.r, entries })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            r: self.r,
            entries: self.entries.iter().map(|e| e.scale(c)).collect(),
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let r = self.r;
        let mut out = Self::zero(self.theta(), r);
        for j in 0..r {
            for k in 0..r {
                let mut acc = TorusElement::zero(self.theta());
                for l in 0..r {
                    let a = self.get(j, l);
                    let b = other.get(l, k);
                    if !a.is_zero() && !b.is_zero() {
                        acc.add_scaled(&a.try_mul(b)?, Complex64::ONE);
                    }
                }
                out.entries[j * r + k] = acc;
            }
        }
        Ok(out)
    }

    /// Entrywise star of the transpose.
    pub fn star(&self) -> Self {
        let r = self.r;
        let mut out = Self::zero(self.theta(), r);
        for j in 0..r {
            for k in 0..r {
                out.entries[k * r + j] = self.get(j, k).star();
            }
        }
        out
    }

    pub fn map(&self, f: impl Fn(&TorusElement) -> Result<TorusElement>) -> Result<Self> {
        Ok(Self {
            r: self.r,
            entries: self.entries.iter().map(f).collect::<Result<_>>()?,
        })
    }

    pub fn delta(&self, l: &MultiIndex) -> Result<Self> {
        self.map(|e| e.delta(l))
    }

    /// `max_{j,k} ||A_{jk} - B_{jk}||_0`.
    pub fn max_distance0(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.distance0(b))
            .fold(0.0, f64::max)
    }

    pub fn max_norm0(&self) -> f64 {
        self.entries.iter().map(TorusElement::norm0).fold(0.0, f64::max)
    }

    /// Complex matrix of mode-zero coefficients, when every entry is scalar.
    pub fn scalar_part(&self) -> Option<DMatrix<Complex64>> {
        let zero = MultiIndex::zero(self.theta().dim());
        if self.entries.iter().any(|e| e.support().any(|m| *m != zero)) {
            return None;
        }
        Some(DMatrix::from_fn(self.r, self.r, |j, k| self.get(j, k).coeff(&zero)))
    }
}

impl std::fmt::Debug for MatrixElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

/// True iff `||e e - e|| <= tol` and `||e^* - e|| <= tol`, entrywise `||.||_0`.
pub fn idempotent_check(e: &MatrixElement, tol: f64) -> bool {
    let Ok(sq) = e.try_mul(e) else { return false };
    sq.max_distance0(e) <= tol && e.star().max_distance0(e) <= tol
}

impl Serialize for MatrixElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MatrixElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let rows = Vec::<Vec<TorusElement>>::deserialize(deserializer)?;
        let m = MatrixElement::from_rows(rows).map_err(D::Error::custom)?;
        let theta = Arc::clone(m.theta());
        m.map(|e| TorusElement::from_pairs(&theta, e.iter().map(|(k, c)| (k.clone(), *c))))
            .map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_element, seeded};

    fn t2() -> Arc<Theta> {
        Arc::new(Theta::two(0.377))
    }

    #[test]
    fn projection_examples() {
        let t = t2();
        let p = MatrixElement::diag(vec![TorusElement::one(&t), TorusElement::zero(&t)]).unwrap();
        assert!(idempotent_check(&p, 1e-12));
        let u = MatrixElement::diag(vec![TorusElement::generator(&t, 0), TorusElement::generator(&t, 1)]).unwrap();
        let conj = u.try_mul(&p).unwrap().try_mul(&u.star()).unwrap();
        assert!(idempotent_check(&conj, 1e-12));
        let bad = MatrixElement::diag(vec![TorusElement::generator(&t, 0), TorusElement::zero(&t)]).unwrap();
        assert!(!idempotent_check(&bad, 1e-12));
    }

    #[test]
    fn star_reverses_products() {
        let t = t2();
        let mut rng = seeded(3);
        let mk = |rng: &mut _| {
            MatrixElement::from_rows(
                (0..2).map(|_| (0..2).map(|_| random_element(&t, 2, 0.6, rng)).collect()).collect(),
            )
            .unwrap()
        };
        let a = mk(&mut rng);
        let b = mk(&mut rng);
        let lhs = a.try_mul(&b).unwrap().star();
        let rhs = b.star().try_mul(&a.star()).unwrap();
        assert!(lhs.max_distance0(&rhs) < 1e-10 * (1.0 + lhs.max_norm0()));
        assert!(a.star().star().max_distance0(&a) < 1e-15);
    }

    #[test]
    fn json_round_trip_shares_theta() {
        let t = t2();
        let a = MatrixElement::identity(&t, 2);
        let text = serde_json::to_string(&a).unwrap();
        let back: MatrixElement = serde_json::from_str(&text).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<MatrixElement>("[[]]").is_err());
    }
}

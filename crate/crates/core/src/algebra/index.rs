use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use std::fmt;
use std::ops::{Add, Deref, Neg, Sub};

/// A point of `Z^n`: a Fourier mode, or a derivative order when all
/// components are nonnegative.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(SmallVec<[i64; 4]>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        Self(SmallVec::from_elem(0, n))
    }

    /// The `j`-th unit vector of `Z^n`.
    pub fn unit(n: usize, j: usize) -> Self {
        let mut m = Self::zero(n);
        m.0[j] = 1;
        m
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    /// `|l| = sum_j l_j`.
    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    /// `l! = prod_j l_j!` for a nonnegative index.
    pub fn factorial(&self) -> f64 {
        self.0
            .iter()
            .map(|&c| (1..=c).map(|v| v as f64).product::<f64>())
            .product()
    }

    /// `m^l = prod_j m_j^{l_j}` (with `0^0 = 1`).
    pub fn pow(&self, l: &MultiIndex) -> f64 {
        self.0
            .iter()
            .zip(l.iter())
            .map(|(&m, &e)| (m as f64).powi(e as i32))
            .product()
    }

    /// Largest absolute component.
    pub fn sup_norm(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    /// Squared Euclidean length.
    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|&c| (c * c) as f64).sum()
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.0.iter().map(|&c| c as f64).collect()
    }

    pub fn with(&self, j: usize, value: i64) -> Self {
        let mut m = self.clone();
        m.0[j] = value;
        m
    }
}

impl Deref for MultiIndex {
    type Target = [i64];

    fn deref(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for MultiIndex {
    fn from(v: Vec<i64>) -> Self {
        Self(SmallVec::from_vec(v))
    }
}

impl From<&[i64]> for MultiIndex {
    fn from(v: &[i64]) -> Self {
        Self(SmallVec::from_slice(v))
    }
}

impl<const N: usize> From<[i64; N]> for MultiIndex {
    fn from(v: [i64; N]) -> Self {
        Self(SmallVec::from_slice(&v))
    }
}

impl FromIterator<i64> for MultiIndex {
    fn from_iter<I: IntoIterator<Item = i64>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl Add for &MultiIndex {
    type Output = MultiIndex;

    fn add(self, rhs: &MultiIndex) -> MultiIndex {
        self.iter().zip(rhs.iter()).map(|(a, b)| a + b).collect()
    }
}

impl Sub for &MultiIndex {
    type Output = MultiIndex;

    fn sub(self, rhs: &MultiIndex) -> MultiIndex {
        self.iter().zip(rhs.iter()).map(|(a, b)| a - b).collect()
    }
}

impl Neg for &MultiIndex {
    type Output = MultiIndex;

    fn neg(self) -> MultiIndex {
        self.iter().map(|a| -a).collect()
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// All points of the cube `|m_j| <= radius` in lexicographic order.
pub fn box_modes(n: usize, radius: i64) -> Vec<MultiIndex> {
    let side = (2 * radius + 1) as usize;
    let count = side.pow(n as u32);
    let mut out = Vec::with_capacity(count);
    for mut code in 0..count {
        let mut m = MultiIndex::zero(n);
        for j in (0..n).rev() {
            m.0[j] = (code % side) as i64 - radius;
            code /= side;
        }
        out.push(m);
    }
    out
}

/// All nonnegative indices `l` with `|l| = total`, lexicographic.
pub fn indices_of_total(n: usize, total: usize) -> Vec<MultiIndex> {
    fn rec(n: usize, left: usize, cur: &mut Vec<i64>, out: &mut Vec<MultiIndex>) {
        if cur.len() == n - 1 {
            cur.push(left as i64);
            out.push(MultiIndex::from(cur.as_slice()));
            cur.pop();
            return;
        }
        for c in (0..=left).rev() {
            cur.push(c as i64);
            rec(n, left - c, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, total, &mut Vec::with_capacity(n), &mut out);
    out
}

/// All nonnegative indices with `|l| <= max_total`, grouped by level.
pub fn indices_up_to(n: usize, max_total: usize) -> Vec<MultiIndex> {
    (0..=max_total)
        .flat_map(|t| indices_of_total(n, t))
        .collect()
}

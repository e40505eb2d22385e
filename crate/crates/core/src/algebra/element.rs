use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::{BTreeMap, HashMap};
use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::{MultiIndex, Theta};
use crate::error::{NctError, Result};

/// Coefficients with modulus at or below this are dropped after arithmetic.
pub const PRUNE_TOL: f64 = 1e-15;

/// Largest dense accumulator used by multiplication regardless of the term count.
const DENSE_LIMIT: usize = 1 << 16;

fn axis_range(coeffs: &BTreeMap<MultiIndex, Complex64>, j: usize) -> (i64, i64) {
    coeffs
        .keys()
        .fold((i64::MAX, i64::MIN), |(lo, hi), m| (lo.min(m[j]), hi.max(m[j])))
}

/// A finitely supported element `sum_m a_m U^m` of the smooth algebra,
/// with `U^m = U_1^{m_1} ... U_n^{m_n}` in normal order.
///
/// Zero coefficients are never stored, and iteration is in lexicographic
/// mode order.
#[derive(Clone)]
pub struct TorusElement {
    theta: Arc<Theta>,
    coeffs: BTreeMap<MultiIndex, Complex64>,
}

impl TorusElement {
    pub fn zero(theta: &Arc<Theta>) -> Self {
        Self {
            theta: Arc::clone(theta),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(theta: &Arc<Theta>) -> Self {
        Self::monomial(theta, MultiIndex::zero(theta.dim()), Complex64::new(1.0, 0.0))
    }

    /// `c * 1`.
    pub fn scalar(theta: &Arc<Theta>, c: Complex64) -> Self {
        Self::monomial(theta, MultiIndex::zero(theta.dim()), c)
    }

    /// `c U^m`.
    pub fn monomial(theta: &Arc<Theta>, m: MultiIndex, c: Complex64) -> Self {
        assert_eq!(m.len(), theta.dim(), "mode length must match theta");
        let mut out = Self::zero(theta);
        out.insert(m, c);
        out
    }

    /// The unitary word `U^m` with coefficient one.
    pub fn word(theta: &Arc<Theta>, m: MultiIndex) -> Self {
        Self::monomial(theta, m, Complex64::new(1.0, 0.0))
    }

    /// The generator `U_j` (zero-based `j`).
    pub fn generator(theta: &Arc<Theta>, j: usize) -> Self {
        Self::word(theta, MultiIndex::unit(theta.dim(), j))
    }

    /// Builds an element from `(mode, coefficient)` pairs, summing repeats.
    pub fn from_pairs<I>(theta: &Arc<Theta>, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Complex64)>,
    {
        let mut out = Self::zero(theta);
        for (m, c) in pairs {
            if m.len() != theta.dim() {
                return Err(NctError::DimensionMismatch {
                    expected: theta.dim(),
                    found: m.len(),
                });
            }
            *out.coeffs.entry(m).or_default() += c;
        }
        out.prune();
        Ok(out)
    }

    fn insert(&mut self, m: MultiIndex, c: Complex64) {
        if c.norm() > PRUNE_TOL {
            self.coeffs.insert(m, c);
        } else {
            self.coeffs.remove(&m);
        }
    }

    fn prune(&mut self) {
        self.coeffs.retain(|_, c| c.norm() > PRUNE_TOL);
    }

    pub fn theta(&self) -> &Arc<Theta> {
        &self.theta
    }

    pub fn dim(&self) -> usize {
        self.theta.dim()
    }

    pub fn coeff(&self, m: &MultiIndex) -> Complex64 {
        self.coeffs.get(m).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.coeffs.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &MultiIndex> {
        self.coeffs.keys()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest `|m_j|` over the support.
    pub fn support_radius(&self) -> i64 {
        self.coeffs.keys().map(MultiIndex::sup_norm).max().unwrap_or(0)
    }

    pub fn same_theta(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.theta, &other.theta) || *self.theta == *other.theta
    }

    fn check_theta(&self, other: &Self) -> Result<()> {
        if self.same_theta(other) {
            Ok(())
        } else {
            Err(NctError::ThetaMismatch)
        }
    }

    /// Coefficientwise map; results below the pruning threshold are dropped.
    pub fn map_coeffs(&self, mut f: impl FnMut(&MultiIndex, Complex64) -> Complex64) -> Self {
        let mut out = Self::zero(&self.theta);
        for (m, &c) in &self.coeffs {
            out.insert(m.clone(), f(m, c));
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map_coeffs(|_, a| a * c)
    }

    pub fn scale_re(&self, c: f64) -> Self {
        self.map_coeffs(|_, a| a * c)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_theta(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.coeffs {
            let v = out.coeff(m) + c;
            out.insert(m.clone(), v);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_theta(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.coeffs {
            let v = out.coeff(m) - c;
            out.insert(m.clone(), v);
        }
        Ok(out)
    }

    /// Adds `c * other` in place.
    pub fn add_scaled(&mut self, other: &Self, c: Complex64) {
        assert!(self.same_theta(other), "theta mismatch");
        for (m, &v) in &other.coeffs {
            *self.coeffs.entry(m.clone()).or_default() += v * c;
        }
        self.prune();
    }

    /// Twisted convolution `(ab)_p = sum_{m+k=p} a_m b_k w(m,k)`.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_theta(other)?;
        let n = self.dim();
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Ok(Self::zero(&self.theta));
        }
        // dense accumulator over the bounding box of the product support
        let mut lo = vec![0i64; n];
        let mut hi = vec![0i64; n];
        for j in 0..n {
            let (a_lo, a_hi) = axis_range(&self.coeffs, j);
            let (b_lo, b_hi) = axis_range(&other.coeffs, j);
            lo[j] = a_lo + b_lo;
            hi[j] = a_hi + b_hi;
        }
        let mut strides = vec![1usize; n];
        let mut size = 1usize;
        for j in (0..n).rev() {
            strides[j] = size;
            size = size.saturating_mul((hi[j] - lo[j] + 1) as usize);
        }
        let pairs = self.coeffs.len() * other.coeffs.len();
        let use_dense = size <= DENSE_LIMIT.max(4 * pairs);
        let mut dense = if use_dense { vec![Complex64::ZERO; size] } else { Vec::new() };
        let mut sparse: HashMap<MultiIndex, Complex64> = HashMap::new();
        let mut row = vec![0.0; n];
        for (m, &a) in &self.coeffs {
            // w(m, k) = exp(2 pi i row . k), row_j = sum_{l > j} theta_{jl} m_l
            for (j, r) in row.iter_mut().enumerate() {
                *r = (j + 1..n).map(|l| self.theta.get(j, l) * m[l] as f64).sum();
            }
            for (k, &b) in &other.coeffs {
                let e: f64 = row.iter().zip(k.iter()).map(|(r, &kj)| r * kj as f64).sum();
                let term = a * b * Complex64::from_polar(1.0, TAU * e);
                if use_dense {
                    let idx: usize = (0..n).map(|j| (m[j] + k[j] - lo[j]) as usize * strides[j]).sum();
                    dense[idx] += term;
                } else {
                    *sparse.entry(m + k).or_default() += term;
                }
            }
        }
        let coeffs: BTreeMap<MultiIndex, Complex64> = if use_dense {
            dense
                .into_iter()
                .enumerate()
                .filter(|(_, c)| c.norm() > PRUNE_TOL)
                .map(|(idx, c)| {
                    let mode: MultiIndex = (0..n).map(|j| lo[j] + ((idx / strides[j]) % (hi[j] - lo[j] + 1) as usize) as i64).collect();
                    (mode, c)
                })
                .collect()
        } else {
            sparse.into_iter().collect()
        };
        let mut out = Self {
            theta: Arc::clone(&self.theta),
            coeffs,
        };
        out.prune();
        Ok(out)
    }

    /// Adjoint: `(a^*)_{-m} = conj(a_m) conj(w(m,-m))`.
    pub fn star(&self) -> Self {
        let mut out = Self::zero(&self.theta);
        for (m, &c) in &self.coeffs {
            let neg = -m;
            let w = self.theta.phase(m, &neg);
            out.coeffs.insert(neg, (c * w).conj());
        }
        out
    }

    /// `delta^l a`, i.e. `(delta^l a)_m = m^l a_m`.
    pub fn delta(&self, l: &MultiIndex) -> Result<Self> {
        if !l.is_nonnegative() {
            return Err(NctError::NegativeDerivativeOrder(l.to_vec()));
        }
        if l.len() != self.dim() {
            return Err(NctError::DimensionMismatch {
                expected: self.dim(),
                found: l.len(),
            });
        }
        Ok(self.map_coeffs(|m, c| c * m.pow(l)))
    }

    /// The single derivation `delta_j` (zero-based).
    pub fn delta_j(&self, j: usize) -> Self {
        self.map_coeffs(|m, c| c * m[j] as f64)
    }

    /// The torus action `alpha_s(U^m) = e^{i s.m} U^m`.
    pub fn alpha(&self, s: &[f64]) -> Result<Self> {
        if s.len() != self.dim() {
            return Err(NctError::DimensionMismatch {
                expected: self.dim(),
                found: s.len(),
            });
        }
        Ok(self.map_coeffs(|m, c| {
            let phase: f64 = m.iter().zip(s).map(|(&mj, &sj)| mj as f64 * sj).sum();
            c * Complex64::from_polar(1.0, phase)
        }))
    }

    /// Canonical trace, the coefficient of `U^0`.
    pub fn trace(&self) -> Complex64 {
        self.coeff(&MultiIndex::zero(self.dim()))
    }

    /// `<a, b> = tau(b^* a) = sum_m conj(b_m) a_m`.
    pub fn try_inner(&self, other: &Self) -> Result<Complex64> {
        self.check_theta(other)?;
        let (small, large, flip) = if self.len() <= other.len() {
            (self, other, false)
        } else {
            (other, self, true)
        };
        let mut acc = Complex64::default();
        for (m, &c) in &small.coeffs {
            if let Some(&d) = large.coeffs.get(m) {
                acc += if flip { c.conj() * d } else { c * d.conj() };
            }
        }
        Ok(acc)
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        self.try_inner(other).expect("theta mismatch")
    }

    /// Hilbert norm `||a||_0`.
    pub fn norm0(&self) -> f64 {
        self.coeffs.values().map(Complex64::norm_sqr).fold(0.0, |a, b| a + b).sqrt()
    }

    /// `sum_m |a_m|`, an upper bound for the C* norm.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, |a, b| a + b)
    }

    /// `||a - b||_0`.
    pub fn distance0(&self, other: &Self) -> f64 {
        (self - other).norm0()
    }

    /// Keeps only modes satisfying `keep`.
    pub fn restrict(&self, mut keep: impl FnMut(&MultiIndex) -> bool) -> Self {
        let mut out = self.clone();
        out.coeffs.retain(|m, _| keep(m));
        out
    }
}

impl PartialEq for TorusElement {
    fn eq(&self, other: &Self) -> bool {
        self.same_theta(other) && self.coeffs == other.coeffs
    }
}

impl fmt::Debug for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:.6}{:+.6}i)U^{}", c.re, c.im, m)?;
        }
        Ok(())
    }
}

impl Add for &TorusElement {
    type Output = TorusElement;

    fn add(self, rhs: &TorusElement) -> TorusElement {
        self.try_add(rhs).expect("theta mismatch")
    }
}

impl Sub for &TorusElement {
    type Output = TorusElement;

    fn sub(self, rhs: &TorusElement) -> TorusElement {
        self.try_sub(rhs).expect("theta mismatch")
    }
}

impl Mul for &TorusElement {
    type Output = TorusElement;

    fn mul(self, rhs: &TorusElement) -> TorusElement {
        self.try_mul(rhs).expect("theta mismatch")
    }
}

impl Neg for &TorusElement {
    type Output = TorusElement;

    fn neg(self) -> TorusElement {
        self.scale_re(-1.0)
    }
}

#[derive(Serialize, Deserialize)]
struct CoeffJson {
    m: Vec<i64>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct ElementJson {
    n: usize,
    theta: Theta,
    coeffs: Vec<CoeffJson>,
}

impl Serialize for TorusElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ElementJson {
            n: self.dim(),
            theta: (*self.theta).clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|(m, c)| CoeffJson {
                    m: m.to_vec(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TorusElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let raw = ElementJson::deserialize(deserializer)?;
        if raw.theta.dim() != raw.n {
            return Err(D::Error::custom(format!(
                "theta is {}x{} but n = {}",
                raw.theta.dim(),
                raw.theta.dim(),
                raw.n
            )));
        }
        let theta = Arc::new(raw.theta);
        TorusElement::from_pairs(
            &theta,
            raw.coeffs
                .into_iter()
                .map(|c| (MultiIndex::from(c.m), Complex64::new(c.re, c.im))),
        )
        .map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Product by the defining formula, term by term.
    fn naive_mul(a: &TorusElement, b: &TorusElement) -> TorusElement {
        let mut out = TorusElement::zero(a.theta());
        for (m, &x) in a.iter() {
            for (k, &y) in b.iter() {
                let t = TorusElement::monomial(a.theta(), m + k, x * y * a.theta().phase(m, k));
                out = out.try_add(&t).unwrap();
            }
        }
        out
    }

    #[test]
    fn dense_and_sparse_products_agree_with_definition() {
        let t = Arc::new(Theta::from_upper(3, &[0.31, -0.17, 0.58]).unwrap());
        let near = TorusElement::from_pairs(
            &t,
            [([0, 1, -2], Complex64::new(1.0, 0.5)), ([2, -1, 0], Complex64::new(-0.3, 2.0))]
                .map(|(m, c)| (MultiIndex::from(m), c)),
        )
        .unwrap();
        // spread support forces the hashed accumulator
        let far = TorusElement::from_pairs(
            &t,
            [([0, 0, 0], Complex64::new(0.7, 0.0)), ([400, -350, 90], Complex64::new(0.0, -1.1))]
                .map(|(m, c)| (MultiIndex::from(m), c)),
        )
        .unwrap();
        for (a, b) in [(&near, &near), (&near, &far), (&far, &far)] {
            assert!(a.try_mul(b).unwrap().distance0(&naive_mul(a, b)) < 1e-13);
        }
    }

    fn theta2() -> Arc<Theta> {
        Arc::new(Theta::two(0.618_033_988_749_894_9))
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn unit_is_identity() {
        let t = theta2();
        let a = TorusElement::from_pairs(
            &t,
            [(MultiIndex::from([1, -2]), c(0.3, 1.0)), (MultiIndex::from([0, 0]), c(2.0, 0.0))],
        )
        .unwrap();
        let one = TorusElement::one(&t);
        assert_eq!(&a * &one, a);
        assert_eq!(&one * &a, a);
    }

    #[test]
    fn generator_relation() {
        let t = theta2();
        let u1 = TorusElement::generator(&t, 0);
        let u2 = TorusElement::generator(&t, 1);
        let lhs = &u2 * &u1;
        let rhs = (&u1 * &u2).scale(Complex64::from_polar(1.0, TAU * t.get(0, 1)));
        assert!(lhs.distance0(&rhs) < 1e-14);
        // U_1 U_2 is the normal-ordered word itself
        assert!((&u1 * &u2).coeff(&MultiIndex::from([1, 1])).re - 1.0 < 1e-15);
    }

    #[test]
    fn star_of_generator_is_inverse() {
        let t = theta2();
        let u1 = TorusElement::generator(&t, 0);
        let s = u1.star();
        assert_eq!(s.len(), 1);
        assert!((s.coeff(&MultiIndex::from([-1, 0])) - c(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(TorusElement::one(&t).star(), TorusElement::one(&t));
        let w = TorusElement::word(&t, MultiIndex::from([2, -3]));
        assert!((&w * &w.star()).distance0(&TorusElement::one(&t)) < 1e-14);
    }

    #[test]
    fn derivations_on_generators() {
        let t = theta2();
        let u1 = TorusElement::generator(&t, 0);
        let u2 = TorusElement::generator(&t, 1);
        let d1 = MultiIndex::from([1, 0]);
        assert_eq!(u1.delta(&d1).unwrap(), u1);
        assert!(u2.delta(&d1).unwrap().is_zero());
        assert!(matches!(
            u1.delta(&MultiIndex::from([-1, 0])),
            Err(NctError::NegativeDerivativeOrder(_))
        ));
    }

    #[test]
    fn alpha_scales_modes() {
        let t = theta2();
        let u1 = TorusElement::generator(&t, 0);
        let s = [0.7, -1.1];
        let got = u1.alpha(&s).unwrap();
        assert!((got.coeff(&MultiIndex::from([1, 0])) - Complex64::from_polar(1.0, 0.7)).norm() < 1e-15);
        assert_eq!(u1.alpha(&[0.0, 0.0]).unwrap(), u1);
        assert!(u1.alpha(&[0.0]).is_err());
    }

    #[test]
    fn trace_and_inner() {
        let t = theta2();
        let one = TorusElement::one(&t);
        assert_eq!(one.trace(), c(1.0, 0.0));
        let u1 = TorusElement::generator(&t, 0);
        let u2 = TorusElement::generator(&t, 1);
        assert_eq!(u1.inner(&u2), c(0.0, 0.0));
        assert_eq!(u1.inner(&u1), c(1.0, 0.0));
    }

    #[test]
    fn theta_mismatch_is_reported() {
        let a = TorusElement::one(&theta2());
        let b = TorusElement::one(&Arc::new(Theta::two(0.1)));
        assert!(matches!(a.try_mul(&b), Err(NctError::ThetaMismatch)));
        assert!(matches!(a.try_inner(&b), Err(NctError::ThetaMismatch)));
    }

    #[test]
    fn pruning_removes_cancellation() {
        let t = theta2();
        let u1 = TorusElement::generator(&t, 0);
        assert!((&u1 - &u1).is_zero());
    }

    #[test]
    fn json_is_canonically_ordered() {
        let t = theta2();
        let a = TorusElement::from_pairs(
            &t,
            [
                (MultiIndex::from([1, 0]), c(1.0, 0.0)),
                (MultiIndex::from([-1, 2]), c(0.5, -0.5)),
                (MultiIndex::from([0, 0]), c(0.0, 1.0)),
            ],
        )
        .unwrap();
        let s = serde_json::to_string(&a).unwrap();
        let first = s.find("[-1,2]").unwrap();
        let second = s.find("[0,0]").unwrap();
        let third = s.find("[1,0]").unwrap();
        assert!(first < second && second < third);
        let back: TorusElement = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }

    #[test]
    fn json_rejects_inconsistent_dimension() {
        let bad = r#"{"n":3,"theta":[[0,0.1],[-0.1,0]],"coeffs":[]}"#;
        assert!(serde_json::from_str::<TorusElement>(bad).is_err());
    }
}

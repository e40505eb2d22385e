use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cutoff::CutoffFamily;
use crate::error::{NctError, Result};
use crate::quadrature::{composite, gauss_legendre};
use crate::stats::{least_squares_slope, ComplexSum};

pub type Amplitude = Arc<dyn Fn(&[f64]) -> Complex64 + Send + Sync>;

/// Corrections below this multiple of `1 + |value|` count as converged.
const CORRECTION_FLOOR: f64 = 1e-11;

/// Half-width of the rescaled frequency domain for the bilinear phase.
const BILINEAR_HALF_WIDTH: f64 = 14.0;

/// Real quadratic phase `q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Phase {
    /// `q(x) = x^T Q x` with symmetric `Q`.
    Quadratic { matrix: Vec<Vec<f64>> },
    /// `q(y, eta) = -y . eta` on `R^n x R^n`.
    Bilinear { n: usize },
}

impl Phase {
    pub fn dim(&self) -> usize {
        match self {
            Phase::Quadratic { matrix } => matrix.len(),
            Phase::Bilinear { n } => 2 * n,
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Phase::Quadratic { matrix } => matrix
                .iter()
                .zip(x)
                .map(|(row, xi)| xi * row.iter().zip(x).map(|(q, xj)| q * xj).sum::<f64>())
                .sum(),
            Phase::Bilinear { n } => -x[..*n].iter().zip(&x[*n..]).map(|(y, e)| y * e).sum::<f64>(),
        }
    }

    /// Symmetric matrix `S` with `q(x) = x^T S x`.
    pub fn matrix(&self) -> DMatrix<f64> {
        match self {
            Phase::Quadratic { matrix } => {
                let d = matrix.len();
                DMatrix::from_fn(d, d, |j, k| 0.5 * (matrix[j][k] + matrix[k][j]))
            }
            Phase::Bilinear { n } => {
                DMatrix::from_fn(2 * n, 2 * n, |j, k| if j.abs_diff(k) == *n { -0.5 } else { 0.0 })
            }
        }
    }
}

/// `x -> e^{i q(x)} a(x)` with `|a(x)| <~ (1+|x|^2)^{m/2}`.
///
/// For the bilinear phase the amplitude depends on `y` alone and is called
/// with the `n` coordinates of `y`.
#[derive(Clone)]
pub struct OscIntegrand {
    pub phase: Phase,
    pub amplitude: Amplitude,
    pub growth_order: f64,
}

impl fmt::Debug for OscIntegrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OscIntegrand")
            .field("phase", &self.phase)
            .field("growth_order", &self.growth_order)
            .finish_non_exhaustive()
    }
}

impl OscIntegrand {
    /// Checks the phase is nondegenerate and of a supported shape.
    pub fn new(
        phase: Phase,
        growth_order: f64,
        amplitude: impl Fn(&[f64]) -> Complex64 + Send + Sync + 'static,
    ) -> Result<Self> {
        match &phase {
            Phase::Quadratic { matrix } => {
                if matrix.len() != 1 || matrix[0].len() != 1 {
                    return Err(NctError::Precondition(
                        "general quadratic phases are supported in dimension 1 only".into(),
                    ));
                }
            }
            Phase::Bilinear { n } => {
                if !(1..=2).contains(n) {
                    return Err(NctError::Precondition(format!("bilinear phase needs n in 1..=2, got {n}")));
                }
            }
        }
        if phase.matrix().determinant().abs() < 1e-12 {
            return Err(NctError::Validation("phase is degenerate".into()));
        }
        Ok(Self {
            phase,
            amplitude: Arc::new(amplitude),
            growth_order,
        })
    }

    pub fn dim(&self) -> usize {
        self.phase.dim()
    }

    /// Number of arguments the amplitude takes.
    pub fn amplitude_dim(&self) -> usize {
        match &self.phase {
            Phase::Quadratic { .. } => self.dim(),
            Phase::Bilinear { n } => *n,
        }
    }

    /// Samples `(1+|x|^2)^{-m/2} |d^alpha a|` for `|alpha| <= 2` on rays and
    /// rejects amplitudes whose weighted size keeps growing.
    pub fn check_growth(&self) -> Result<()> {
        let n = self.amplitude_dim();
        let mut dirs: Vec<Vec<f64>> = Vec::new();
        for j in 0..n {
            for s in [1.0, -1.0] {
                let mut d = vec![0.0; n];
                d[j] = s;
                dirs.push(d);
            }
        }
        if n > 1 {
            dirs.push(vec![1.0 / (n as f64).sqrt(); n]);
        }
        let h = 1e-3;
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        for r in [4.0_f64, 8.0, 16.0, 32.0, 64.0] {
            let mut worst = 0.0_f64;
            for d in &dirs {
                let x: Vec<f64> = d.iter().map(|v| v * r).collect();
                let a0 = (self.amplitude)(&x);
                worst = worst.max(a0.norm());
                for j in 0..n {
                    let mut xp = x.clone();
                    let mut xm = x.clone();
                    xp[j] += h;
                    xm[j] -= h;
                    let (ap, am) = ((self.amplitude)(&xp), (self.amplitude)(&xm));
                    worst = worst.max(((ap - am) / (2.0 * h)).norm());
                    worst = worst.max(((ap - 2.0 * a0 + am) / (h * h)).norm());
                }
            }
            let weighted = worst * (1.0 + r * r).powf(-0.5 * self.growth_order);
            if !weighted.is_finite() {
                return Err(NctError::Validation(format!("amplitude is not finite near radius {r}")));
            }
            xs.push((1.0 + r).ln());
            ys.push(weighted.max(1e-300).ln());
        }
        let slope = least_squares_slope(&xs, &ys);
        if slope > 0.5 {
            return Err(NctError::Validation(format!(
                "amplitude grows faster than order {}: weighted slope {slope:.2}",
                self.growth_order
            )));
        }
        Ok(())
    }
}

/// Nodes per panel, panels for the rescaled bilinear integral, and the
/// largest phase increment per panel for direct quadratic quadrature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadSpec {
    pub order: usize,
    pub panels: usize,
    pub phase_step: f64,
    pub max_nodes: usize,
}

impl Default for QuadSpec {
    fn default() -> Self {
        Self {
            order: 20,
            panels: 28,
            phase_step: 4.0,
            max_nodes: 8_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscConfig {
    pub eps_schedule: Vec<f64>,
    pub quad: QuadSpec,
}

impl Default for OscConfig {
    fn default() -> Self {
        Self {
            eps_schedule: vec![0.2, 0.1, 0.05, 0.025],
            quad: QuadSpec::default(),
        }
    }
}

impl OscConfig {
    fn validate(&self) -> Result<()> {
        let e = &self.eps_schedule;
        if e.len() < 3 {
            return Err(NctError::Precondition("eps schedule needs at least 3 values".into()));
        }
        if e.iter().any(|v| !(v.is_finite() && *v > 0.0)) || e.windows(2).any(|w| w[1] >= w[0]) {
            return Err(NctError::Precondition("eps schedule must be positive and strictly decreasing".into()));
        }
        if self.quad.order == 0 || self.quad.panels == 0 || self.quad.phase_step <= 0.0 {
            return Err(NctError::Precondition("quadrature spec must be positive".into()));
        }
        Ok(())
    }

    pub fn eps_min(&self) -> f64 {
        *self.eps_schedule.last().expect("validated schedule")
    }
}

/// Extrapolated limit of the regularized integrals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscResult {
    pub value: Complex64,
    /// Magnitude of the last extrapolation correction.
    pub error_estimate: f64,
    /// `I(eps)` for each scheduled `eps`.
    pub regularized: Vec<Complex64>,
    /// Diagonal corrections `|T_kk - T_k,k-1|`, `k = 1..`.
    pub corrections: Vec<f64>,
    pub diagnostics: Vec<String>,
}

impl OscResult {
    pub fn converged(&self) -> bool {
        self.diagnostics.is_empty()
    }
}

/// Neville extrapolation to `eps = 0` in the variable `eps^2`.
pub fn richardson(eps: &[f64], values: &[Complex64]) -> OscResult {
    let k = values.len();
    let h: Vec<f64> = eps.iter().map(|e| e * e).collect();
    let mut table: Vec<Vec<Complex64>> = vec![vec![values[0]]];
    for i in 1..k {
        let mut row = vec![values[i]];
        for j in 1..=i {
            let ratio = h[i - j] / h[i];
            let next = row[j - 1] + (row[j - 1] - table[i - 1][j - 1]) / (ratio - 1.0);
            row.push(next);
        }
        table.push(row);
    }
    let corrections: Vec<f64> = (1..k).map(|i| (table[i][i] - table[i][i - 1]).norm()).collect();
    let value = table[k - 1][k - 1];
    let error_estimate = *corrections.last().unwrap_or(&f64::INFINITY);
    let floor = CORRECTION_FLOOR * (1.0 + value.norm());
    let mut diagnostics = Vec::new();
    for w in corrections.windows(2) {
        if w[1] > w[0] && w[1] > floor {
            diagnostics.push(format!(
                "extrapolation corrections not decreasing: {:.3e} after {:.3e}",
                w[1], w[0]
            ));
            break;
        }
    }
    if !value.re.is_finite() || !value.im.is_finite() {
        diagnostics.push("extrapolated value is not finite".into());
    }
    OscResult {
        value,
        error_estimate,
        regularized: values.to_vec(),
        corrections,
        diagnostics,
    }
}

/// `lim_{eps -> 0} int e^{iq(x)} a(x) phi(eps x) dx`, Richardson-extrapolated
/// over `cfg.eps_schedule`.
pub fn osc_integral(f: &OscIntegrand, cutoff: CutoffFamily, cfg: &OscConfig) -> Result<OscResult> {
    cfg.validate()?;
    f.check_growth()?;
    let values: Vec<Complex64> = match &f.phase {
        Phase::Quadratic { matrix } => quadratic_values(matrix[0][0], &*f.amplitude, cutoff, cfg)?,
        Phase::Bilinear { n } => {
            let amp = |y: &[f64], out: &mut [Complex64]| out[0] = (f.amplitude)(y);
            bilinear_values(*n, 1, &amp, cutoff, cfg)?
                .into_iter()
                .map(|v| v[0])
                .collect()
        }
    };
    Ok(richardson(&cfg.eps_schedule, &values))
}

/// `int_{-R}^{R} e^{i c x^2} a(x) dx` without a cutoff, for absolutely integrable `a`.
pub fn direct_integral(f: &OscIntegrand, radius: f64, quad: &QuadSpec) -> Result<Complex64> {
    let Phase::Quadratic { matrix } = &f.phase else {
        return Err(NctError::Precondition("direct quadrature needs a one-dimensional quadratic phase".into()));
    };
    let c = matrix[0][0];
    let mut acc = ComplexSum::default();
    for_each_panel_node(c, radius, quad, |x, w| {
        acc.add(w * Complex64::from_polar(1.0, c * x * x) * (f.amplitude)(&[x]));
    })?;
    Ok(acc.value())
}

fn for_each_panel_node(c: f64, radius: f64, quad: &QuadSpec, mut visit: impl FnMut(f64, f64)) -> Result<()> {
    let width = quad.phase_step / (2.0 * c.abs() * radius + 1.0);
    let panels = (2.0 * radius / width).ceil() as usize;
    if panels.saturating_mul(quad.order) > quad.max_nodes {
        return Err(NctError::Precondition(format!(
            "{panels} panels of {} nodes exceed the node budget {}",
            quad.order, quad.max_nodes
        )));
    }
    let base = gauss_legendre(quad.order, -1.0, 1.0);
    let width = 2.0 * radius / panels as f64;
    for p in 0..panels {
        let mid = -radius + width * (p as f64 + 0.5);
        for &(t, w) in &base {
            visit(mid + 0.5 * width * t, 0.5 * width * w);
        }
    }
    Ok(())
}

fn quadratic_values(c: f64, a: &(dyn Fn(&[f64]) -> Complex64 + Send + Sync), cutoff: CutoffFamily, cfg: &OscConfig) -> Result<Vec<Complex64>> {
    let radius = cutoff.support_radius().max(5.0) / cfg.eps_min();
    let mut sums = vec![ComplexSum::default(); cfg.eps_schedule.len()];
    for_each_panel_node(c, radius, &cfg.quad, |x, w| {
        let base = w * Complex64::from_polar(1.0, c * x * x) * a(&[x]);
        for (acc, eps) in sums.iter_mut().zip(&cfg.eps_schedule) {
            acc.add(base * cutoff.profile(eps * x));
        }
    })?;
    Ok(sums.iter().map(ComplexSum::value).collect())
}

/// `I(eps) = int int e^{-i y.eta} a(y) phi(eps y) phi(eps eta) dy deta` for
/// `k` amplitude components at once.
///
/// The `eta` integral is `prod_k g^(y_k/eps)/eps`; with `y = eps u` this is
/// `int a(eps u) prod_k g(eps^2 u_k) g^(u_k) du` over a fixed box.
pub(crate) fn bilinear_values(
    n: usize,
    k: usize,
    amp: &dyn Fn(&[f64], &mut [Complex64]),
    cutoff: CutoffFamily,
    cfg: &OscConfig,
) -> Result<Vec<Vec<Complex64>>> {
    cfg.validate()?;
    let nodes = composite(cfg.quad.order, cfg.quad.panels, -BILINEAR_HALF_WIDTH, BILINEAR_HALF_WIDTH);
    let fhat: Vec<f64> = nodes.iter().map(|&(u, w)| w * cutoff.fourier(u)).collect();
    let total = nodes.len().pow(n as u32);
    if total > cfg.quad.max_nodes {
        return Err(NctError::Precondition(format!(
            "{total} tensor nodes exceed the node budget {}",
            cfg.quad.max_nodes
        )));
    }
    let mut out = Vec::with_capacity(cfg.eps_schedule.len());
    let mut idx = vec![0usize; n];
    let mut y = vec![0.0; n];
    let mut vals = vec![Complex64::ZERO; k];
    for &eps in &cfg.eps_schedule {
        let mut sums = vec![ComplexSum::default(); k];
        idx.iter_mut().for_each(|i| *i = 0);
        for _ in 0..total {
            let mut weight = 1.0;
            for (j, &i) in idx.iter().enumerate() {
                let u = nodes[i].0;
                weight *= fhat[i] * cutoff.profile(eps * eps * u);
                y[j] = eps * u;
            }
            if weight != 0.0 {
                amp(&y, &mut vals);
                for (acc, v) in sums.iter_mut().zip(&vals) {
                    acc.add(v * weight);
                }
            }
            for i in idx.iter_mut() {
                *i += 1;
                if *i < nodes.len() {
                    break;
                }
                *i = 0;
            }
        }
        out.push(sums.iter().map(ComplexSum::value).collect());
    }
    Ok(out)
}

/// `(2 pi)^n`, the value of the bilinear integral with `a = 1`.
pub fn bilinear_normalization(n: usize) -> f64 {
    (2.0 * PI).powi(n as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad1(c: f64, a: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> OscIntegrand {
        OscIntegrand::new(Phase::Quadratic { matrix: vec![vec![c]] }, 0.0, move |x| a(x[0])).unwrap()
    }

    #[test]
    fn integrable_amplitude_matches_closed_form_and_direct() {
        for c in [0.5, -1.3] {
            let f = quad1(c, |x| Complex64::new((-x * x).exp(), 0.0));
            // int e^{icx^2 - x^2} dx = sqrt(pi / (1 - ic))
            let exact = (Complex64::new(PI, 0.0) / Complex64::new(1.0, -c)).sqrt();
            let direct = direct_integral(&f, 12.0, &QuadSpec::default()).unwrap();
            assert!((direct - exact).norm() < 1e-12);
            for cut in CutoffFamily::ALL {
                let r = osc_integral(&f, cut, &OscConfig::default()).unwrap();
                assert!(r.converged(), "{:?}", r.diagnostics);
                assert!((r.value - direct).norm() < 1e-6, "{cut}: {}", (r.value - direct).norm());
            }
        }
    }

    #[test]
    fn fresnel_limit() {
        // int e^{ix^2} dx = sqrt(pi) e^{i pi / 4}
        let f = quad1(1.0, |_| Complex64::ONE);
        let exact = Complex64::from_polar(PI.sqrt(), PI / 4.0);
        let mut est = 0.0;
        let mut vals = Vec::new();
        for cut in CutoffFamily::ALL {
            let r = osc_integral(&f, cut, &OscConfig::default()).unwrap();
            assert!((r.value - exact).norm() < 1e-6, "{cut}: {}", r.value);
            est += r.error_estimate;
            vals.push(r.value);
        }
        assert!((vals[0] - vals[1]).norm() <= 2.0 * est + 1e-12);
    }

    #[test]
    fn bilinear_constant_gives_two_pi() {
        // gaussian: I(eps) = 2 pi (1 + 4 eps^4)^{-1/2}; the cubic extrapolant in
        // eps^2 misses by about 12 pi prod eps_k^2 = 2.4e-8
        let f = OscIntegrand::new(Phase::Bilinear { n: 1 }, 0.0, |_| Complex64::ONE).unwrap();
        for cut in CutoffFamily::ALL {
            let r = osc_integral(&f, cut, &OscConfig::default()).unwrap();
            assert!((r.value - 2.0 * PI).norm() < 1e-7, "{cut}: {}", r.value);
        }
    }

    #[test]
    fn regularized_gaussian_values_closed_form() {
        // gaussian cutoff, a = e^{-y^2}: I(eps) = 2 pi / (1 + 2 eps^2)
        let f = OscIntegrand::new(Phase::Bilinear { n: 1 }, 0.0, |y| Complex64::new((-y[0] * y[0]).exp(), 0.0)).unwrap();
        let cfg = OscConfig::default();
        let r = osc_integral(&f, CutoffFamily::Gaussian, &cfg).unwrap();
        for (v, e) in r.regularized.iter().zip(&cfg.eps_schedule) {
            assert!((v - 2.0 * PI / (1.0 + 2.0 * e * e)).norm() < 1e-12);
        }
    }

    #[test]
    fn richardson_exact_on_polynomials_in_eps_squared() {
        let eps = [0.3, 0.17, 0.1, 0.04];
        let vals: Vec<Complex64> = eps
            .iter()
            .map(|e: &f64| Complex64::new(2.0 - 3.0 * e * e + 0.5 * e.powi(4), e.powi(6)))
            .collect();
        let r = richardson(&eps, &vals);
        assert!((r.value - Complex64::new(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn growing_corrections_flagged() {
        let eps = [0.2, 0.1, 0.05, 0.025];
        let vals: Vec<Complex64> = [1.0, 1.0, 1.0, 2.0].iter().map(|&v| Complex64::new(v, 0.0)).collect();
        assert!(!richardson(&eps, &vals).converged());
    }

    #[test]
    fn preconditions() {
        assert!(matches!(
            OscIntegrand::new(Phase::Quadratic { matrix: vec![vec![0.0]] }, 0.0, |_| Complex64::ONE),
            Err(NctError::Validation(_))
        ));
        assert!(OscIntegrand::new(Phase::Bilinear { n: 3 }, 0.0, |_| Complex64::ONE).is_err());
        let f = quad1(1.0, |_| Complex64::ONE);
        let short = OscConfig {
            eps_schedule: vec![0.2, 0.1],
            ..Default::default()
        };
        assert!(osc_integral(&f, CutoffFamily::Gaussian, &short).is_err());
        let grows = quad1(1.0, |x| Complex64::new(x * x, 0.0));
        assert!(matches!(
            osc_integral(&grows, CutoffFamily::Gaussian, &OscConfig::default()),
            Err(NctError::Validation(_))
        ));
    }

    #[test]
    fn bilinear_phase_matrix_nondegenerate() {
        let p = Phase::Bilinear { n: 2 };
        assert!(p.matrix().determinant().abs() > 1e-3);
        assert_eq!(p.eval(&[1.0, 2.0, 3.0, 4.0]), -11.0);
    }
}

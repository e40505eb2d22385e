use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cutoff::CutoffFamily;
use super::integral::{bilinear_normalization, bilinear_values, osc_integral, richardson, Amplitude, OscConfig, OscIntegrand, Phase};
use crate::algebra::{MultiIndex, TorusElement};
use crate::error::{NctError, Result};
use crate::harness::{Check, VerificationReport};
use crate::symbols::{CallbackSymbol, Symbol};

const PROP_TOL: f64 = 1e-5;
const LEMMA_TOL: f64 = 1e-4;
/// Roundoff allowance added to the combined error estimates.
const AGREEMENT_FLOOR: f64 = 1e-12;

/// Amplitudes `a: R^n -> C` used by the shipped checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AmplitudeFamily {
    /// `a = 1`
    Constant,
    /// `a(y) = e^{-|y|^2}`
    Gaussian,
    /// `a(y) = (1 + |y|^2) e^{-|y|^2/4}`
    PolyGauss,
}

impl AmplitudeFamily {
    pub const ALL: [AmplitudeFamily; 3] = [
        AmplitudeFamily::Constant,
        AmplitudeFamily::Gaussian,
        AmplitudeFamily::PolyGauss,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AmplitudeFamily::Constant => "constant",
            AmplitudeFamily::Gaussian => "gaussian",
            AmplitudeFamily::PolyGauss => "poly-gauss",
        }
    }

    pub fn amplitude(self) -> Amplitude {
        match self {
            AmplitudeFamily::Constant => Arc::new(|_| Complex64::ONE),
            AmplitudeFamily::Gaussian => Arc::new(|y| Complex64::new((-norm_sq(y)).exp(), 0.0)),
            AmplitudeFamily::PolyGauss => {
                Arc::new(|y| Complex64::new((1.0 + norm_sq(y)) * (-0.25 * norm_sq(y)).exp(), 0.0))
            }
        }
    }
}

fn norm_sq(y: &[f64]) -> f64 {
    y.iter().map(|v| v * v).sum()
}

impl fmt::Display for AmplitudeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AmplitudeFamily {
    type Err = NctError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constant" | "one" => Ok(AmplitudeFamily::Constant),
            "gaussian" => Ok(AmplitudeFamily::Gaussian),
            "poly-gauss" => Ok(AmplitudeFamily::PolyGauss),
            other => Err(NctError::Usage(format!(
                "unknown amplitude `{other}` (constant|gaussian|poly-gauss)"
            ))),
        }
    }
}

/// `(2 pi)^{-n} int int e^{-i y.eta} a(y) dy deta` against `a(0)` with both
/// cutoff families.
pub fn verify_prop_osc(a: Amplitude, n: usize, cfg: &OscConfig) -> Result<VerificationReport> {
    verify_prop_osc_with(a, n, &CutoffFamily::ALL, cfg)
}

/// As [`verify_prop_osc`] for the listed cutoffs; the agreement check needs two.
pub fn verify_prop_osc_with(
    a: Amplitude,
    n: usize,
    cutoffs: &[CutoffFamily],
    cfg: &OscConfig,
) -> Result<VerificationReport> {
    if cutoffs.is_empty() {
        return Err(NctError::Usage("no cutoff family selected".into()));
    }
    let a0 = a(&vec![0.0; n]);
    let amp = Arc::clone(&a);
    let f = OscIntegrand::new(Phase::Bilinear { n }, 0.0, move |y| amp(y))?;
    let norm = bilinear_normalization(n);
    let tol = PROP_TOL * (1.0 + a0.norm());
    let mut report = VerificationReport::new("osc-prop", 0);
    report.set_param("n", n);
    report.set_param("eps_schedule", &cfg.eps_schedule);
    report.set_param("a0", [a0.re, a0.im]);
    let mut values = Vec::new();
    for &cut in cutoffs {
        let r = osc_integral(&f, cut, cfg)?;
        let v = r.value / norm;
        let e = r.error_estimate / norm;
        report.set_param(&format!("value/{cut}"), [v.re, v.im]);
        report.set_param(&format!("error_estimate/{cut}"), e);
        report.push(
            Check::at_most(format!("{cut}_matches_a0"), (v - a0).norm(), tol)
                .with_detail(format!("value {:.12e}{:+.12e}i, error estimate {e:.3e}", v.re, v.im)),
        );
        report.push(Check::flag(format!("{cut}_corrections_decrease"), r.converged(), r.diagnostics.join("; ")));
        values.push((v, e));
    }
    for pair in values.windows(2) {
        let (g, c) = (pair[0], pair[1]);
        report.push(Check::at_most(
            "cutoff_agreement",
            (g.0 - c.0).norm(),
            2.0 * (g.1 + c.1) + AGREEMENT_FLOOR * (1.0 + a0.norm()),
        ));
    }
    Ok(report)
}

/// `rho(xi) = e^{-|xi|^2} c`, of every order.
pub fn gaussian_damped_symbol(coeff: TorusElement) -> CallbackSymbol {
    let theta = Arc::clone(coeff.theta());
    let modes: Vec<MultiIndex> = coeff.support().cloned().collect();
    CallbackSymbol::new(&theta, 0.0, modes, move |xi| coeff.scale_re((-norm_sq(xi)).exp()))
}

/// `(2 pi)^{-1} int int e^{-i s xi} rho(xi) e^{i s m} ds dxi` coefficientwise
/// against `rho(m)`, for `n = 1`.
pub fn verify_lemma_opn_integral(sym: &dyn Symbol, m: &MultiIndex, cfg: &OscConfig) -> Result<VerificationReport> {
    if sym.dim() != 1 || m.len() != 1 {
        return Err(NctError::Precondition("the integral cross-check is one-dimensional".into()));
    }
    let modes = sym.modes();
    let shift = m.as_f64()[0];
    let target = sym.eval(&[shift]);
    let mut report = VerificationReport::new("osc-lemma", 0);
    report.set_param("m", &m[..]);
    report.set_param("modes", modes.len());
    let mut worst = 0.0_f64;
    let mut diagnostics = Vec::new();
    let mut estimate = 0.0_f64;
    // substituting eta = xi - m leaves the phase -s.eta and amplitude rho(eta + m)
    let amp = |y: &[f64], out: &mut [Complex64]| {
        let v = sym.eval(&[y[0] + shift]);
        for (o, k) in out.iter_mut().zip(&modes) {
            *o = v.coeff(k);
        }
    };
    for cut in CutoffFamily::ALL {
        if modes.is_empty() {
            break;
        }
        let values = bilinear_values(1, modes.len(), &amp, cut, cfg)?;
        for (j, k) in modes.iter().enumerate() {
            let series: Vec<Complex64> = values.iter().map(|v| v[j]).collect();
            let r = richardson(&cfg.eps_schedule, &series);
            let v = r.value / bilinear_normalization(1);
            worst = worst.max((v - target.coeff(k)).norm());
            estimate = estimate.max(r.error_estimate / bilinear_normalization(1));
            diagnostics.extend(r.diagnostics.into_iter().map(|d| format!("{cut} mode {k:?}: {d}")));
        }
    }
    report.push(Check::at_most("integral_matches_eval", worst, LEMMA_TOL).with_detail(format!("error estimate {estimate:.3e}")));
    report.push(Check::flag("corrections_decrease", diagnostics.is_empty(), diagnostics.join("; ")));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Theta;

    #[test]
    fn shipped_amplitudes_reproduce_value_at_origin() {
        for fam in AmplitudeFamily::ALL {
            let r = verify_prop_osc(fam.amplitude(), 1, &OscConfig::default()).unwrap();
            assert!(r.passed(), "{fam}: {}", r.to_markdown());
        }
        let r = verify_prop_osc(AmplitudeFamily::Gaussian.amplitude(), 2, &OscConfig::default()).unwrap();
        assert!(r.passed(), "{}", r.to_markdown());
    }

    #[test]
    fn off_center_amplitude() {
        let a: Amplitude = Arc::new(|y| Complex64::new(0.0, (-(y[0] - 0.7).powi(2)).exp()));
        let r = verify_prop_osc(a, 1, &OscConfig::default()).unwrap();
        assert!(r.passed(), "{}", r.to_markdown());
    }

    #[test]
    fn lemma_examples() {
        let t = Arc::new(Theta::zero(1));
        let one = gaussian_damped_symbol(TorusElement::one(&t));
        let r = verify_lemma_opn_integral(&one, &MultiIndex::from([0]), &OscConfig::default()).unwrap();
        assert!(r.passed(), "{}", r.to_markdown());
        let u = gaussian_damped_symbol(TorusElement::generator(&t, 0));
        let r = verify_lemma_opn_integral(&u, &MultiIndex::from([2]), &OscConfig::default()).unwrap();
        assert!(r.passed(), "{}", r.to_markdown());
        let zero = gaussian_damped_symbol(TorusElement::zero(&t));
        let r = verify_lemma_opn_integral(&zero, &MultiIndex::from([1]), &OscConfig::default()).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn rejects_higher_dimension() {
        let t = Arc::new(Theta::two(0.1));
        let s = gaussian_damped_symbol(TorusElement::one(&t));
        assert!(verify_lemma_opn_integral(&s, &MultiIndex::from([0, 0]), &OscConfig::default()).is_err());
    }
}

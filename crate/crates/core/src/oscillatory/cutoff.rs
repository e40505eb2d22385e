use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{NctError, Result};
use crate::quadrature::composite;

/// Product cutoffs `phi(x) = prod_k g(x_k)` with `g(0) = 1`.
///
/// * `gaussian`: `g(t) = e^{-t^2}`
/// * `raised-cosine`: `g(t) = (1 + cos t)/2 * e^{-t^2/4}`
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CutoffFamily {
    Gaussian,
    RaisedCosine,
}

impl CutoffFamily {
    pub const ALL: [CutoffFamily; 2] = [CutoffFamily::Gaussian, CutoffFamily::RaisedCosine];

    pub fn name(self) -> &'static str {
        match self {
            CutoffFamily::Gaussian => "gaussian",
            CutoffFamily::RaisedCosine => "raised-cosine",
        }
    }

    /// One-dimensional profile `g`.
    pub fn profile(self, t: f64) -> f64 {
        match self {
            CutoffFamily::Gaussian => (-t * t).exp(),
            CutoffFamily::RaisedCosine => 0.5 * (1.0 + t.cos()) * (-0.25 * t * t).exp(),
        }
    }

    pub fn eval(self, x: &[f64]) -> f64 {
        x.iter().map(|&t| self.profile(t)).product()
    }

    /// Radius beyond which the profile is below `1e-15`.
    pub fn support_radius(self) -> f64 {
        match self {
            CutoffFamily::Gaussian => 6.0,
            CutoffFamily::RaisedCosine => 12.0,
        }
    }

    /// `g^(w) = int e^{-iwt} g(t) dt`, real and even, by composite Gauss-Legendre.
    pub fn fourier(self, w: f64) -> f64 {
        let t_max = self.support_radius();
        let panels = (t_max * (w.abs() + 1.0) / 2.0).ceil() as usize + 8;
        2.0 * composite(16, panels, 0.0, t_max)
            .iter()
            .map(|&(t, wt)| wt * (w * t).cos() * self.profile(t))
            .sum::<f64>()
    }
}

impl fmt::Display for CutoffFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CutoffFamily {
    type Err = NctError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(CutoffFamily::Gaussian),
            "cos" | "raised-cosine" => Ok(CutoffFamily::RaisedCosine),
            other => Err(NctError::Usage(format!("unknown cutoff `{other}` (gaussian|cos)"))),
        }
    }
}

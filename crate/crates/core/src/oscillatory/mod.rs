//! Regularized oscillatory integrals `lim int e^{iq(x)} a(x) phi(eps x) dx`.
//!
//! Two phase shapes are supported: `q(x) = c x^2` on the line, handled by
//! direct composite quadrature, and `q(y, eta) = -y.eta` on `R^n x R^n`
//! (`n <= 2`), where the `eta` integral is done in closed form against the
//! cutoff and the rest is rescaled to a fixed box.

mod cutoff;
mod integral;
mod verify;

pub use cutoff::CutoffFamily;
pub use integral::{
    bilinear_normalization, direct_integral, osc_integral, richardson, Amplitude, OscConfig, OscIntegrand, OscResult,
    Phase, QuadSpec,
};
pub use verify::{gaussian_damped_symbol, verify_lemma_opn_integral, verify_prop_osc, verify_prop_osc_with, AmplitudeFamily};

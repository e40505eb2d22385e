//! Regularized oscillatory integrals with both cutoff families.

use std::f64::consts::PI;

use num_complex::Complex64;

use nctorus::oscillatory::{
    bilinear_normalization, direct_integral, osc_integral, AmplitudeFamily, CutoffFamily, OscConfig, OscIntegrand,
    Phase, QuadSpec,
};

fn main() -> nctorus::Result<()> {
    let cfg = OscConfig::default();

    // Fresnel: int e^{i x^2} dx = sqrt(pi) e^{i pi/4}
    let fresnel = OscIntegrand::new(Phase::Quadratic { matrix: vec![vec![1.0]] }, 0.0, |_| Complex64::ONE)?;
    let exact = Complex64::from_polar(PI.sqrt(), PI / 4.0);
    for cut in CutoffFamily::ALL {
        let r = osc_integral(&fresnel, cut, &cfg)?;
        println!("fresnel, {cut}: {:.10} (error {:.1e}, estimate {:.1e})", r.value, (r.value - exact).norm(), r.error_estimate);
    }

    // absolutely integrable amplitude: regularized and direct agree
    let damped = OscIntegrand::new(Phase::Quadratic { matrix: vec![vec![0.7]] }, 0.0, |x| {
        Complex64::new((-x[0] * x[0]).exp(), 0.0)
    })?;
    let direct = direct_integral(&damped, 12.0, &QuadSpec::default())?;
    let reg = osc_integral(&damped, CutoffFamily::Gaussian, &cfg)?;
    println!("damped: regularized {:.12}, direct {:.12}", reg.value, direct);

    // (2 pi)^{-n} int int e^{-i y.eta} a(y) dy deta = a(0)
    for n in [1, 2] {
        for fam in AmplitudeFamily::ALL {
            let f = OscIntegrand::new(Phase::Bilinear { n }, 0.0, {
                let a = fam.amplitude();
                move |y| a(y)
            })?;
            let r = osc_integral(&f, CutoffFamily::Gaussian, &cfg)?;
            println!("n = {n}, {fam}: {:.10}", r.value / bilinear_normalization(n));
        }
    }
    Ok(())
}

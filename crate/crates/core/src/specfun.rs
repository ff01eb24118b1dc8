//! Real-argument special functions: Gamma, log-Gamma, Beta, digamma and the
//! order-two polygamma function.
//!
//! All functions are restricted to strictly positive arguments.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Tolerances for the series-based functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_terms: 1_000_000,
        }
    }
}

impl ToleranceConfig {
    pub fn new(abs_tol: f64, rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(abs_tol > 0.0) || !(rel_tol > 0.0) || max_terms == 0 {
            return Err(Error::domain(
                "tolerance config requires abs_tol > 0, rel_tol > 0, max_terms >= 1",
            ));
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_terms,
        })
    }
}

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} requires a finite positive argument, got {x}")))
    }
}

/// Lanczos series sum and shifted base for argument `x >= 0.5`.
fn lanczos_parts(x: f64) -> (f64, f64) {
    let x = x - 1.0;
    let mut a = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (a, t)
}

fn ln_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        (PI / (PI * x).sin()).ln() - ln_gamma_unchecked(1.0 - x)
    } else {
        let (a, t) = lanczos_parts(x);
        LN_SQRT_2PI + (x - 0.5) * t.ln() - t + a.ln()
    }
}

fn gamma_unchecked(x: f64) -> f64 {
    if x == x.floor() && x <= 171.0 {
        let mut acc = 1.0;
        let mut k = 2.0;
        while k < x {
            acc *= k;
            k += 1.0;
        }
        return acc;
    }
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma_unchecked(1.0 - x));
    }
    let (a, t) = lanczos_parts(x);
    // split the power so t^(x-1/2) does not overflow before exp(-t) scales it
    let half = t.powf(0.5 * (x - 0.5));
    (2.0 * PI).sqrt() * half * (half * (-t).exp()) * a
}

/// Γ(x) for x > 0. Exact at positive integers up to 171.
pub fn gamma(x: f64) -> Result<f64> {
    check_positive("gamma", x)?;
    Ok(gamma_unchecked(x))
}

/// log Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    check_positive("ln_gamma", x)?;
    Ok(ln_gamma_unchecked(x))
}

/// log B(s, t), summed in sorted argument order so that the result is
/// symmetric in its arguments bit for bit.
pub fn ln_beta(s: f64, t: f64) -> Result<f64> {
    check_positive("beta", s)?;
    check_positive("beta", t)?;
    let (lo, hi) = if s <= t { (s, t) } else { (t, s) };
    Ok(ln_gamma_unchecked(lo) + ln_gamma_unchecked(hi) - ln_gamma_unchecked(lo + hi))
}

/// B(s, t) = Γ(s)Γ(t)/Γ(s+t), evaluated through log-Gamma.
pub fn beta(s: f64, t: f64) -> Result<f64> {
    ln_beta(s, t).map(f64::exp)
}

/// Digamma ψ(x) = Γ'(x)/Γ(x) for x > 0.
pub fn digamma(x: f64) -> Result<f64> {
    check_positive("digamma", x)?;
    let mut x = x;
    let mut shift = 0.0;
    while x < 10.0 {
        shift -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    // asymptotic series in 1/x^2 with Bernoulli coefficients B_2k/(2k)
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * 691.0 / 32760.0)))));
    Ok(shift + x.ln() - 0.5 / x - series)
}

/// ψ''(x) = -Σ_{k≥0} 2/(x+k)^3 with the default tolerances.
pub fn polygamma2(x: f64) -> Result<f64> {
    polygamma2_with(x, &ToleranceConfig::default())
}

/// ψ''(x) by direct summation of the defining series.
///
/// Terms are added until they drop below the tolerance; the remainder
/// Σ_{k≥K} 2/(x+k)^3 is then replaced by its Euler-Maclaurin estimate
/// 1/(x+K)^2 + 1/(x+K)^3 + 1/(2(x+K)^4).
pub fn polygamma2_with(x: f64, cfg: &ToleranceConfig) -> Result<f64> {
    check_positive("polygamma2", x)?;
    let mut sum = 0.0;
    let mut k = 0usize;
    loop {
        let u = x + k as f64;
        let term = 2.0 / (u * u * u);
        if term <= cfg.abs_tol || term <= cfg.rel_tol * sum {
            let u2 = u * u;
            let tail = 1.0 / u2 + 1.0 / (u2 * u) + 0.5 / (u2 * u2);
            return Ok(-(sum + tail));
        }
        sum += term;
        k += 1;
        if k >= cfg.max_terms {
            return Err(Error::Accuracy {
                message: format!("polygamma2({x}) did not converge within {} terms", cfg.max_terms),
                best_estimate: -sum,
            });
        }
    }
}

//! The Hilbert matrix operator in coefficient form and as an average of
//! weighted composition operators, and the multiplier `ψ_α`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::function_space::{AnalyticFn, TaylorFunction};
use crate::quadrature::{integrate, integrate_gaps, Abscissa, IntegralResult, QuadratureConfig};

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

fn check_open_disk(z: Complex64) -> Result<()> {
    let r = z.norm();
    if r < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("point must lie in the open unit disk, got |z| = {r}")))
    }
}

/// Parameter `t ∈ (0, 1)` of the weighted composition operator
/// `T_t f = ω_t · (f ∘ φ_t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WcoParams {
    t: f64,
}

impl WcoParams {
    pub fn new(t: f64) -> Result<Self> {
        if t > 0.0 && t < 1.0 {
            Ok(Self { t })
        } else {
            Err(Error::domain(format!("t must lie in (0, 1), got {t}")))
        }
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// `ω_t(z) = 1 / ((t - 1) z + 1)`.
    pub fn omega(&self, z: Complex64) -> Complex64 {
        ONE / (ONE - z * (1.0 - self.t))
    }

    /// `φ_t(z) = t / ((t - 1) z + 1)`, a self-map of the disk.
    pub fn phi(&self, z: Complex64) -> Complex64 {
        self.omega(z) * self.t
    }
}

/// `T_t(f)(z) = ω_t(z) f(φ_t(z))`.
pub fn wco_apply<F: AnalyticFn + ?Sized>(params: WcoParams, f: &F, z: Complex64) -> Result<Complex64> {
    check_open_disk(z)?;
    let w = params.omega(z);
    Ok(w * f.eval_near_one(w * params.t, one_minus_phi(1.0 - params.t, z, w)))
}

/// `1 - φ_t(z) = (1 - t)(1 - z) ω_t(z)`, free of cancellation as `t → 1`.
fn one_minus_phi(one_minus_t: f64, z: Complex64, omega: Complex64) -> Complex64 {
    (ONE - z) * omega * one_minus_t
}

/// Entry `(n, k)` of the Hilbert matrix.
pub fn hilbert_matrix_entry(n: usize, k: usize) -> f64 {
    1.0 / (n + k + 1) as f64
}

/// Coefficients `b_n = Σ_{k<N} a_k / (n + k + 1)` for `n < m`.
pub fn hilbert_coeffs(f: &TaylorFunction, m: usize) -> TaylorFunction {
    let a = f.coeffs();
    let b: Vec<Complex64> = (0..m.max(1))
        .map(|n| {
            a.iter()
                .enumerate()
                .rev()
                .fold(Complex64::new(0.0, 0.0), |acc, (k, &ak)| acc + ak * hilbert_matrix_entry(n, k))
        })
        .collect();
    TaylorFunction::new(b).expect("finite input coefficients give finite output")
}

/// `H(f)(z) = ∫₀¹ T_t(f)(z) dt` by quadrature in `t`.
pub fn hilbert_integral<F: AnalyticFn + ?Sized>(
    f: &F,
    z: Complex64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult<Complex64>> {
    check_open_disk(z)?;
    integrate_gaps(
        |n: Abscissa| {
            // 1 - (1 - t) z with 1 - t taken from the node gap
            let w = ONE / (ONE - z * n.from_b);
            w * f.eval_near_one(w * n.x, one_minus_phi(n.from_b, z, w))
        },
        0.0,
        1.0,
        cfg,
    )
}

/// `ψ_α(z) = ∫₀¹ (1 - s z)^(α-1) s^(-α) ds` on the closed disk.
///
/// `1 - s z` is formed as `(1 - s) + s (1 - z)`, which keeps the base
/// accurate at `z = 1` where it vanishes at the upper endpoint. Its real part
/// is positive for `s < 1`, so the principal branch is never crossed.
pub fn psi_alpha(alpha: f64, z: Complex64, cfg: &QuadratureConfig) -> Result<IntegralResult<Complex64>> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if z.norm() > 1.0 {
        return Err(Error::domain(format!("ψ_α is defined on the closed disk, got |z| = {}", z.norm())));
    }
    let one_minus_z = ONE - z;
    integrate_gaps(
        |n: Abscissa| {
            let base = one_minus_z * n.x + n.from_b;
            base.powf(alpha - 1.0) * n.from_a.powf(-alpha)
        },
        0.0,
        1.0,
        cfg,
    )
}

/// `π / sin(απ)`, the value of `ψ_α(1)` and the bound for `|ψ_α|` on the disk.
pub fn psi_alpha_peak(alpha: f64) -> f64 {
    PI / (alpha * PI).sin()
}

/// `∫₀¹ f(t) dt` along the real segment; `H(f)(0)` for comparison.
pub fn segment_mean<F: AnalyticFn + ?Sized>(f: &F, cfg: &QuadratureConfig) -> Result<IntegralResult<Complex64>> {
    integrate(|t: f64| f.eval(Complex64::new(t, 0.0)), 0.0, 1.0, cfg)
}

//! Norms of the weighted composition operators `T_t` on `H^∞_α` and the
//! resulting lower and upper bounds for the Hilbert matrix operator.
//!
//! For `2/3 < α < 1` and `t` below the threshold `t* = (3α-2)/(4α-2)` the
//! norm of `T_t` is attained at an interior point `x₀` of the segment
//! `[t-1, 1-t]`; everywhere else it is the boundary value
//! `t^(α-1) (1-t)^(-α)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function_space::{AnalyticFn, FAlpha};
use crate::hilbert_op::psi_alpha;
use crate::quadrature::{integrate_gaps, integrate_right_power, Abscissa, IntegralResult, QuadratureConfig};

/// `α` at which the interior maximum first appears.
pub const ALPHA_EXACT_LIMIT: f64 = 2.0 / 3.0;

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("alpha must lie in (0, 1), got {alpha}")))
    }
}

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("t must lie in (0, 1), got {t}")))
    }
}

fn check_alpha_above_half(alpha: f64) -> Result<()> {
    if alpha > 0.5 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("alpha must lie in (1/2, 1), got {alpha}")))
    }
}

/// `t* = (3α - 2) / (4α - 2)`.
pub fn threshold_tstar(alpha: f64) -> Result<f64> {
    check_alpha_above_half(alpha)?;
    Ok((3.0 * alpha - 2.0) / (4.0 * alpha - 2.0))
}

/// The quadratic `p(x) = (1-2α)x² + (4αt-2t+2α)x + (1-2α)t² - 1` whose
/// root locates the critical point of `G`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalQuadratic {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl CriticalQuadratic {
    pub fn new(alpha: f64, t: f64) -> Self {
        let k = 1.0 - 2.0 * alpha;
        Self {
            a: k,
            b: 4.0 * alpha * t - 2.0 * t + 2.0 * alpha,
            c: k * t * t - 1.0,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.a * x + self.b) * x + self.c
    }

    /// Magnitude scale `|a|x² + |b||x| + |c|` for residual checks.
    pub fn scale(&self, x: f64) -> f64 {
        self.a.abs() * x * x + self.b.abs() * x.abs() + self.c.abs()
    }
}

/// The root `x₀` and its complement `1 - x₀`, both free of cancellation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub x0: f64,
    pub one_minus_x0: f64,
}

/// Discriminant `4α²t - 2αt + α² - 2α + 1 = 2αt(2α-1) + (1-α)²`.
fn discriminant(alpha: f64, t: f64) -> f64 {
    2.0 * alpha * t * (2.0 * alpha - 1.0) + (1.0 - alpha) * (1.0 - alpha)
}

/// Root of the critical quadratic in rationalized form.
///
/// With `β = α + (2α-1)t > 0` the textbook expression `(β - √D)/(2α-1)`
/// subtracts nearly equal numbers when `α` is close to 1/2 or `t` is small;
/// multiplying through by the conjugate gives `x₀ = (1 + (2α-1)t²)/(β + √D)`.
pub fn critical_point(alpha: f64, t: f64) -> Result<CriticalPoint> {
    check_alpha_above_half(alpha)?;
    check_t(t)?;
    let d = discriminant(alpha, t);
    if !(d >= 0.0) {
        return Err(Error::Internal(format!("negative discriminant {d} at alpha = {alpha}, t = {t}")));
    }
    let sd = d.sqrt();
    let k = 2.0 * alpha - 1.0;
    let den = alpha + k * t + sd;
    let x0 = (1.0 + k * t * t) / den;
    // 1 - x₀ = (√D - (1-α) + k t (1-t)) / den with √D - (1-α) rationalized
    let lift = 2.0 * alpha * t * k / (sd + 1.0 - alpha);
    let one_minus_x0 = (lift + k * t * (1.0 - t)) / den;
    Ok(CriticalPoint { x0, one_minus_x0 })
}

/// `x₀`, the interior critical point of `G`.
pub fn quadratic_x0(alpha: f64, t: f64) -> Result<f64> {
    critical_point(alpha, t).map(|c| c.x0)
}

/// `G` in continuous-extension form, from `1 - t` and `1 - x`.
fn g_from_complements(alpha: f64, t: f64, one_minus_t: f64, one_minus_x: f64) -> f64 {
    let x = 1.0 - one_minus_x;
    let num = one_minus_t + x;
    if num <= 0.0 {
        return 0.0;
    }
    let ratio = num / (one_minus_t * one_minus_t * (t + one_minus_x));
    one_minus_x.powf(2.0 * alpha - 1.0) * ratio.powf(alpha)
}

/// `G(x) = (1-x)^(2α-1) ((1-t+x) / ((1-t)²(1+t-x)))^α` on `[t-1, 1-t]`.
pub fn g_eval(alpha: f64, t: f64, x: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_t(t)?;
    if !(x >= t - 1.0 && x <= 1.0 - t) {
        return Err(Error::domain(format!("G is defined on [t-1, 1-t] = [{}, {}], got x = {x}", t - 1.0, 1.0 - t)));
    }
    Ok(g_from_complements(alpha, t, 1.0 - t, 1.0 - x))
}

/// `F(z) = |1-(1-t)z|^(2α-1) ((1-|z|²) / (|1-(1-t)z|² - t²))^α`, the
/// quantity whose supremum over the disk is `‖T_t‖`.
pub fn f_eval(alpha: f64, t: f64, z: Complex64) -> Result<f64> {
    check_alpha(alpha)?;
    check_t(t)?;
    let r = z.norm();
    if !(r < 1.0) {
        return Err(Error::domain(format!("F requires |z| < 1, got |z| = {r}")));
    }
    let w = (Complex64::new(1.0, 0.0) - z * (1.0 - t)).norm();
    // |w| ≥ 1 - (1-t)|z| > t, so the denominator is positive
    let den = (w - t) * (w + t);
    Ok(w.powf(2.0 * alpha - 1.0) * ((1.0 - r) * (1.0 + r) / den).powf(alpha))
}

/// `R(z) = 1 - |z - 1|`: rotation about 1 onto the real axis.
pub fn r_project(z: Complex64) -> f64 {
    1.0 - (z - 1.0).norm()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    BoundaryFormula,
    InteriorMax,
}

/// `‖T_t‖` on `H^∞_α`, with the branch that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TtNormBreakdown {
    pub alpha: f64,
    pub t: f64,
    pub regime: Regime,
    pub x0: Option<f64>,
    pub value: f64,
}

/// `t^(α-1) (1-t)^(-α)`, written as `((1-t)/t)^(1-α) / (1-t)` so that a
/// single power is rounded (exact at `t = 1/2`).
fn boundary_value(alpha: f64, t: f64, one_minus_t: f64) -> f64 {
    (one_minus_t / t).powf(1.0 - alpha) / one_minus_t
}

fn in_interior_regime(alpha: f64, t: f64) -> bool {
    alpha > ALPHA_EXACT_LIMIT && t < (3.0 * alpha - 2.0) / (4.0 * alpha - 2.0)
}

/// `‖T_t‖` from `t` and `1 - t`; used by the t-integrals.
fn tt_norm_value(alpha: f64, t: f64, one_minus_t: f64) -> f64 {
    if in_interior_regime(alpha, t) {
        match critical_point(alpha, t) {
            Ok(cp) => g_from_complements(alpha, t, one_minus_t, cp.one_minus_x0),
            Err(_) => f64::NAN,
        }
    } else {
        boundary_value(alpha, t, one_minus_t)
    }
}

/// Norm of `T_t` on `H^∞_α`.
///
/// At `t = t*` both branches agree; the point is assigned to the boundary
/// formula.
pub fn tt_norm(alpha: f64, t: f64) -> Result<TtNormBreakdown> {
    check_alpha(alpha)?;
    check_t(t)?;
    if in_interior_regime(alpha, t) {
        let cp = critical_point(alpha, t)?;
        Ok(TtNormBreakdown {
            alpha,
            t,
            regime: Regime::InteriorMax,
            x0: Some(cp.x0),
            value: g_from_complements(alpha, t, 1.0 - t, cp.one_minus_x0),
        })
    } else {
        Ok(TtNormBreakdown {
            alpha,
            t,
            regime: Regime::BoundaryFormula,
            x0: None,
            value: boundary_value(alpha, t, 1.0 - t),
        })
    }
}

/// `‖H‖ ≥ π / sin(απ)`.
pub fn hinf_lower_bound(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(PI / (alpha * PI).sin())
}

/// `∫₀¹ ‖T_t‖ dt` by quadrature, split at `t*` when the interior branch is
/// active.
///
/// Past `t*` the integrand is `t^(α-1) (1-t)^(-α)`, whose exponent at 1
/// approaches -1 as `α → 1`; that piece goes through
/// [`integrate_right_power`] so no mass is lost below the node cutoff.
pub fn tt_norm_integral(alpha: f64, cfg: &QuadratureConfig) -> Result<IntegralResult<f64>> {
    check_alpha(alpha)?;
    if alpha <= ALPHA_EXACT_LIMIT {
        return integrate_gaps(|n: Abscissa| tt_norm_value(alpha, n.from_a, n.from_b), 0.0, 1.0, cfg);
    }
    let tstar = threshold_tstar(alpha)?;
    let one_minus_tstar = 1.0 - tstar;
    let left = integrate_gaps(
        |n: Abscissa| tt_norm_value(alpha, n.from_a, one_minus_tstar + n.from_b),
        0.0,
        tstar,
        cfg,
    )?;
    let right = integrate_right_power(|n: Abscissa| (tstar + n.from_a).powf(alpha - 1.0), tstar, 1.0, 0.0, alpha, cfg)?;
    Ok(IntegralResult {
        value: left.value + right.value,
        err_estimate: left.err_estimate + right.err_estimate,
        evals: left.evals + right.evals,
    })
}

/// Upper bound for `‖H‖` on `H^∞_α`.
///
/// For `α ≤ 2/3` this is the exact norm `π/sin(απ)` (no quadrature, zero
/// error). Above, it is `∫₀^{t*} G(x₀) dt + ∫_{t*}^1 t^(α-1)(1-t)^(-α) dt`.
pub fn hinf_upper_bound(alpha: f64, cfg: &QuadratureConfig) -> Result<IntegralResult<f64>> {
    check_alpha(alpha)?;
    if alpha <= ALPHA_EXACT_LIMIT {
        Ok(IntegralResult {
            value: PI / (alpha * PI).sin(),
            err_estimate: 0.0,
            evals: 0,
        })
    } else {
        tt_norm_integral(alpha, cfg)
    }
}

/// Lower and upper bound for `‖H‖` on `H^∞_α` at one `α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub alpha: f64,
    pub lower: f64,
    pub upper: f64,
    pub gap: f64,
    /// `t*` when the upper-bound integral is split there.
    pub regime_split_t: Option<f64>,
    pub quadrature_err: f64,
    /// `true` when the bounds coincide, i.e. `α ≤ 2/3`.
    pub exact: bool,
    /// Set at `α = 2/3` exactly, where the two regimes meet.
    pub at_regime_boundary: bool,
}

pub fn bound_report(alpha: f64, cfg: &QuadratureConfig) -> Result<BoundReport> {
    let lower = hinf_lower_bound(alpha)?;
    let upper = hinf_upper_bound(alpha, cfg)?;
    let split = if alpha > ALPHA_EXACT_LIMIT {
        Some(threshold_tstar(alpha)?)
    } else {
        None
    };
    Ok(BoundReport {
        alpha,
        lower,
        upper: upper.value,
        gap: upper.value - lower,
        regime_split_t: split,
        quadrature_err: upper.err_estimate,
        exact: alpha <= ALPHA_EXACT_LIMIT,
        at_regime_boundary: alpha == ALPHA_EXACT_LIMIT,
    })
}

/// Result of the radial sweep behind the lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialSweep {
    pub alpha: f64,
    pub sup: f64,
    pub argmax_r: f64,
    pub r_max: f64,
    pub samples: usize,
}

/// `sup_{0 ≤ r ≤ r_max} |ψ_α(r)| (1 - r²)^α |g_α(r)|` with `g_α = f_α / 2^α`.
///
/// The radii are `r = 1 - (1 - r_max)^s` for `s` on a uniform grid, so the
/// samples crowd toward `r_max`.
pub fn hinf_radial_sweep(alpha: f64, r_max: f64, samples: usize, cfg: &QuadratureConfig) -> Result<RadialSweep> {
    check_alpha(alpha)?;
    if !(r_max > 0.0 && r_max <= 1.0) || samples < 2 {
        return Err(Error::domain("radial sweep needs 0 < r_max <= 1 and at least 2 samples"));
    }
    let f = FAlpha::new(alpha)?;
    let norm = f.korenblum_norm();
    let floor = 1.0 - r_max;
    let mut best = RadialSweep {
        alpha,
        sup: f64::NEG_INFINITY,
        argmax_r: 0.0,
        r_max,
        samples,
    };
    for i in 0..samples {
        let s = i as f64 / (samples - 1) as f64;
        let gap = if floor == 0.0 && i == samples - 1 { 0.0 } else { floor.powf(s) };
        let r = 1.0 - gap;
        let psi = psi_alpha(alpha, Complex64::new(r, 0.0), cfg)?.value.norm();
        // (1 - r²)^α |f_α(r)| = (1 + r)^α, and equals 2^α in the limit r = 1
        let weighted_g = if gap == 0.0 {
            1.0
        } else {
            (gap * (1.0 + r)).powf(alpha) * f.eval_near_one(Complex64::new(r, 0.0), Complex64::new(gap, 0.0)).norm() / norm
        };
        let v = psi * weighted_g;
        if v > best.sup {
            best.sup = v;
            best.argmax_r = r;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_values() {
        assert!(threshold_tstar(2.0 / 3.0).unwrap().abs() < 1e-15);
        assert!((threshold_tstar(0.75).unwrap() - 0.25).abs() < 1e-15);
        assert!((threshold_tstar(1.0 - 1e-9).unwrap() - 0.5).abs() < 1e-8);
        assert!(threshold_tstar(0.6).unwrap() < 0.0);
        assert!(threshold_tstar(0.5).is_err());
    }

    #[test]
    fn x0_matches_textbook_root_where_stable() {
        let (alpha, t): (f64, f64) = (0.8, 0.1);
        let d = 4.0 * alpha * alpha * t - 2.0 * alpha * t + alpha * alpha - 2.0 * alpha + 1.0;
        let textbook = (alpha + 2.0 * alpha * t - t - d.sqrt()) / (2.0 * alpha - 1.0);
        let cp = critical_point(alpha, t).unwrap();
        assert!((cp.x0 - textbook).abs() < 1e-14);
        assert!((cp.one_minus_x0 - (1.0 - textbook)).abs() < 1e-14);
        let q = CriticalQuadratic::new(alpha, t);
        assert!(q.eval(cp.x0).abs() < 1e-10 * q.scale(cp.x0));
        assert!(cp.x0 > 0.0);
    }

    #[test]
    fn x0_hits_one_minus_t_at_threshold() {
        for &alpha in &[0.7, 0.8, 0.9, 0.99] {
            let t = threshold_tstar(alpha).unwrap();
            let x0 = quadratic_x0(alpha, t).unwrap();
            assert!((x0 - (1.0 - t)).abs() < 1e-9, "{alpha}: {x0} vs {}", 1.0 - t);
        }
    }

    #[test]
    fn x0_is_small_t_safe() {
        // 1 - x₀ ≈ (2α-1) t (α/(1-α) + 1) as t → 0
        let alpha = 0.8;
        let t = 1e-12;
        let cp = critical_point(alpha, t).unwrap();
        let leading = (2.0 * alpha - 1.0) * t * (alpha / (1.0 - alpha) + 1.0);
        assert!((cp.one_minus_x0 / leading - 1.0).abs() < 1e-9);
    }

    #[test]
    fn g_examples() {
        let (alpha, t) = (0.8, 0.3);
        let at_end = g_eval(alpha, t, 1.0 - t).unwrap();
        assert!((at_end - t.powf(alpha - 1.0) / (1.0 - t).powf(alpha)).abs() < 1e-13);
        assert_eq!(g_eval(alpha, t, t - 1.0).unwrap(), 0.0);
        let at0 = g_eval(alpha, t, 0.0).unwrap();
        assert!((at0 - (1.0 - t * t).powf(-alpha)).abs() < 1e-13);
        assert!(g_eval(alpha, t, 0.8).is_err());
    }

    #[test]
    fn f_examples() {
        let (alpha, t) = (0.7, 0.2);
        let at0 = f_eval(alpha, t, Complex64::new(0.0, 0.0)).unwrap();
        assert!((at0 - (1.0 - t * t).powf(-alpha)).abs() < 1e-14);
        let near_minus_one = f_eval(alpha, t, Complex64::new(-1.0 + 1e-12, 0.0)).unwrap();
        assert!(near_minus_one < 1e-6);
        // on the real axis F(x/(1-t)) = G(x)
        for &x in &[-0.5, 0.1, 0.6, 0.79] {
            let f = f_eval(alpha, t, Complex64::new(x / (1.0 - t), 0.0)).unwrap();
            assert!((f - g_eval(alpha, t, x).unwrap()).abs() < 1e-12);
        }
        assert!(f_eval(alpha, t, Complex64::new(0.0, 1.0)).is_err());
    }

    #[test]
    fn r_projection_examples() {
        assert_eq!(r_project(Complex64::new(1.0, 0.0)), 1.0);
        assert_eq!(r_project(Complex64::new(0.0, 0.0)), 0.0);
        assert!((r_project(Complex64::new(0.0, 1.0)) - (1.0 - 2f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn tt_norm_examples() {
        let b = tt_norm(0.5, 0.5).unwrap();
        assert_eq!(b.regime, Regime::BoundaryFormula);
        assert!((b.value - 2.0).abs() < 1e-14);
        let b = tt_norm(0.8, 0.5).unwrap();
        assert_eq!(b.regime, Regime::BoundaryFormula);
        assert!((b.value - 2.0).abs() < 1e-14);
        let b = tt_norm(0.8, 0.1).unwrap();
        assert_eq!(b.regime, Regime::InteriorMax);
        let x0 = b.x0.unwrap();
        assert!(x0 > 0.0 && x0 <= 0.9);
        assert!(b.value > boundary_value(0.8, 0.1, 0.9));
    }

    #[test]
    fn tt_norm_at_threshold_uses_boundary_formula() {
        let alpha = 0.75;
        let b = tt_norm(alpha, 0.25).unwrap();
        assert_eq!(b.regime, Regime::BoundaryFormula);
        let below = tt_norm(alpha, 0.25 - 1e-12).unwrap();
        assert_eq!(below.regime, Regime::InteriorMax);
        assert!((below.value - b.value).abs() < 1e-8);
    }

    #[test]
    fn lower_bound_values() {
        assert!((hinf_lower_bound(0.5).unwrap() - PI).abs() < 1e-15);
        assert!((hinf_lower_bound(2.0 / 3.0).unwrap() - 2.0 * PI / 3f64.sqrt()).abs() < 1e-14);
        assert!(hinf_lower_bound(1.0).is_err());
    }

    #[test]
    fn upper_bound_exact_range() {
        let cfg = QuadratureConfig::default();
        for &alpha in &[0.2, 0.5, 2.0 / 3.0] {
            let up = hinf_upper_bound(alpha, &cfg).unwrap().value;
            let integral = tt_norm_integral(alpha, &cfg).unwrap().value;
            assert!((up - PI / (alpha * PI).sin()).abs() < 1e-14);
            assert!((integral - up).abs() < 1e-9, "{alpha}: {integral} vs {up}");
        }
    }

    #[test]
    fn upper_bound_above_two_thirds_exceeds_lower() {
        let cfg = QuadratureConfig::default();
        let rep = bound_report(0.8, &cfg).unwrap();
        assert!(rep.upper > rep.lower && rep.upper.is_finite());
        assert!((rep.regime_split_t.unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(!rep.exact);
        assert!(bound_report(2.0 / 3.0, &cfg).unwrap().at_regime_boundary);
    }

    #[test]
    fn radial_sweep_including_the_boundary_reaches_the_peak() {
        let cfg = QuadratureConfig::default();
        for &alpha in &[0.3, 0.5, 0.7] {
            let sweep = hinf_radial_sweep(alpha, 1.0, 200, &cfg).unwrap();
            assert!((sweep.sup - PI / (alpha * PI).sin()).abs() < 1e-8);
        }
    }
}

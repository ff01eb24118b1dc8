//! Numerical checks of the Beta-function inequalities and of the `F_p`
//! functional behind the Bergman-space norm.
//!
//! Every check returns a margin that is nonnegative when the inequality
//! holds; [`run_verification`] sweeps a grid and reports the worst one.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::quadrature::{integrate_gaps, integrate_right_power, Abscissa, IntegralResult, QuadratureConfig};
use crate::specfun::{beta, digamma, ln_gamma};

fn check_p_open(p: f64) -> Result<()> {
    if p > 2.0 && p < 4.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("p must lie in (2, 4), got {p}")))
    }
}

/// `g_x(y) = ψ(1+x) - ψ(x+y) - (1-y)/(x+y-xy)` for `x > 1`, `y ∈ [0, 1]`.
pub fn g_x_eval(x: f64, y: f64) -> Result<f64> {
    if !(x > 1.0) || !(0.0..=1.0).contains(&y) {
        return Err(Error::domain(format!("g_x needs x > 1 and 0 <= y <= 1, got ({x}, {y})")));
    }
    let den = x + y - x * y;
    if !(den > 0.0) {
        return Err(Error::domain(format!("x + y - xy must be positive, got {den}")));
    }
    Ok(digamma(1.0 + x)? - digamma(x + y)? - (1.0 - y) / den)
}

/// `h_y(x) = log Γ(1+x) + log Γ(1+y) - log Γ(x+y) - log(x+y-xy)`.
///
/// `h_y(x) < 0` is equivalent to the Beta bound `B(x, y) < (x+y-xy)/(xy)`.
pub fn h_y_eval(x: f64, y: f64) -> Result<f64> {
    if !(x >= 1.0) || !(y > 0.0 && y < 1.0) {
        return Err(Error::domain(format!("h_y needs x >= 1 and 0 < y < 1, got ({x}, {y})")));
    }
    let den = x + y - x * y;
    if !(den > 0.0) {
        return Err(Error::domain(format!("x + y - xy must be positive, got {den}")));
    }
    Ok(ln_gamma(1.0 + x)? + ln_gamma(1.0 + y)? - ln_gamma(x + y)? - den.ln())
}

/// Margin `(x+y-xy)/(xy) - B(x, y)` of the Beta bound, `x > 1`, `0 < y < 1`.
pub fn check_beta_bound(x: f64, y: f64) -> Result<f64> {
    if !(x > 1.0) || !(y > 0.0 && y < 1.0) {
        return Err(Error::domain(format!("beta bound needs x > 1 and 0 < y < 1, got ({x}, {y})")));
    }
    Ok((x + y - x * y) / (x * y) - beta(x, y)?)
}

/// Margin `1/((p-2)(4-p)) - B(2/p, 2(p-2))`.
pub fn check_lemma32(p: f64) -> Result<f64> {
    check_p_open(p)?;
    Ok(1.0 / ((p - 2.0) * (4.0 - p)) - beta(2.0 / p, 2.0 * (p - 2.0))?)
}

/// `ψ_p(t) = t^(2/p - 1) (1-t)^(-2/p)`.
pub fn psi_p_eval(p: f64, t: f64) -> Result<f64> {
    if !(p > 2.0 && p <= 4.0) {
        return Err(Error::domain(format!("p must lie in (2, 4], got {p}")));
    }
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::domain(format!("ψ_p is singular at the endpoints; t must lie in (0, 1), got {t}")));
    }
    Ok(psi_p_gaps(p, t, 1.0 - t))
}

fn psi_p_gaps(p: f64, t: f64, one_minus_t: f64) -> f64 {
    let e = 2.0 / p;
    t.powf(e - 1.0) * one_minus_t.powf(-e)
}

/// `B(2/p, 1 - 2/p) = π / sin(2π/p)`.
pub fn bergman_norm_value(p: f64) -> Result<f64> {
    check_p_open(p)?;
    Ok(PI / (2.0 * PI / p).sin())
}

fn check_s(s: f64) -> Result<()> {
    if (0.0..=1.0).contains(&s) {
        Ok(())
    } else {
        Err(Error::domain(format!("s must lie in [0, 1], got {s}")))
    }
}

/// `F_p(s) = ((4-p)/2 + (p-2)/2 s⁴) B(2/p, 1-2/p) - ∫₀¹ ψ_p(t) max{s², t²}^(p-2) dt`.
///
/// The integral is split at the kink `t = s`. On both pieces the weight
/// `(1-t)^(-2/p)` is removed by substitution (see [`integrate_right_power`]),
/// which keeps `p` close to 2 accurate. The error estimate is that of the
/// integral.
pub fn fp_eval(p: f64, s: f64, cfg: &QuadratureConfig) -> Result<IntegralResult<f64>> {
    check_p_open(p)?;
    check_s(s)?;
    let e = 2.0 / p;
    let b = beta(e, 1.0 - e)?;
    let lead = ((4.0 - p) / 2.0 + (p - 2.0) / 2.0 * s.powi(4)) * b;
    let exponent = 2.0 * (p - 2.0);

    let mut integral = IntegralResult {
        value: 0.0,
        err_estimate: 0.0,
        evals: 0,
    };
    if s > 0.0 {
        let one_minus_s = 1.0 - s;
        let scale = s.powf(exponent);
        // ψ_p(t) s^(2(p-2)) without the (1-t)^(-2/p) factor
        let r = integrate_right_power(
            |n: Abscissa| n.from_a.powf(e - 1.0) * scale,
            0.0,
            s,
            one_minus_s,
            e,
            cfg,
        )?;
        integral.value += r.value;
        integral.err_estimate += r.err_estimate;
        integral.evals += r.evals;
    }
    if s < 1.0 {
        // ψ_p(t) t^(2(p-2)) without the (1-t)^(-2/p) factor
        let r = integrate_right_power(
            |n: Abscissa| {
                let t = s + n.from_a;
                t.powf(e - 1.0 + exponent)
            },
            s,
            1.0,
            0.0,
            e,
            cfg,
        )?;
        integral.value += r.value;
        integral.err_estimate += r.err_estimate;
        integral.evals += r.evals;
    }
    Ok(IntegralResult {
        value: lead - integral.value,
        err_estimate: integral.err_estimate,
        evals: integral.evals,
    })
}

/// `∫₀^s ψ_p(t) dt`.
pub fn psi_p_partial_integral(p: f64, s: f64, cfg: &QuadratureConfig) -> Result<IntegralResult<f64>> {
    check_p_open(p)?;
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::domain(format!("s must lie in (0, 1], got {s}")));
    }
    let one_minus_s = 1.0 - s;
    integrate_gaps(|n: Abscissa| psi_p_gaps(p, n.from_a, one_minus_s + n.from_b), 0.0, s, cfg)
}

/// `F_p'(s) = 2(p-2) s^(2p-5) (B(2/p, 1-2/p) s^(8-2p) - ∫₀^s ψ_p(t) dt)`.
pub fn fp_prime(p: f64, s: f64, cfg: &QuadratureConfig) -> Result<IntegralResult<f64>> {
    check_p_open(p)?;
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::domain(format!("s must lie in (0, 1], got {s}")));
    }
    let b = beta(2.0 / p, 1.0 - 2.0 / p)?;
    let partial = psi_p_partial_integral(p, s, cfg)?;
    let scale = 2.0 * (p - 2.0) * s.powf(2.0 * p - 5.0);
    Ok(IntegralResult {
        value: scale * (b * s.powf(8.0 - 2.0 * p) - partial.value),
        err_estimate: scale.abs() * partial.err_estimate,
        evals: partial.evals,
    })
}

/// Root `t₀ = (s^x - s)/(s^x - 1)`, `x = (4-p)p`, of `H_{p,s}(t) = 0` when it
/// lies in `[0, s)`.
///
/// A root exists iff `x ≥ 1`, i.e. `2 - √3 ≤ p ≤ 2 + √3`. At `p = 2 + √3`
/// rounding can push `t₀` a few ulps below zero; such values are reported
/// as `t₀ = 0`.
pub fn t0_root(p: f64, s: f64) -> Option<f64> {
    if !(s > 0.0 && s < 1.0) {
        return None;
    }
    let x = (4.0 - p) * p;
    let sx = s.powf(x);
    let t0 = (sx - s) / (sx - 1.0);
    if (0.0..s).contains(&t0) {
        Some(t0)
    } else if t0 < 0.0 && t0 > -8.0 * f64::EPSILON * s {
        Some(0.0)
    } else {
        None
    }
}

/// `H_{p,s}(t) = s^(8-2p) (s-t)^(-2/p) - (1-t)^(-2/p)` for `0 ≤ t < s < 1`.
pub fn h_ps_eval(p: f64, s: f64, t: f64) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) || !(t >= 0.0 && t < s) {
        return Err(Error::domain(format!("H_(p,s) needs 0 <= t < s < 1, got s = {s}, t = {t}")));
    }
    let e = -2.0 / p;
    Ok(s.powf(8.0 - 2.0 * p) * (s - t).powf(e) - (1.0 - t).powf(e))
}

// ---------------------------------------------------------------------------
// sweeps

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LemmaId {
    /// `B(x, y) < (x+y-xy)/(xy)` for `x > 1`, `0 < y < 1`.
    #[serde(rename = "beta_bound")]
    BetaBound,
    /// `B(2/p, 2(p-2)) ≤ 1/((p-2)(4-p))` for `2 < p < 4`.
    #[serde(rename = "beta_2p")]
    Beta2p,
    /// `F_p(s) ≤ 0` for `2 < p < 4`, `s ∈ [0, 1]`.
    #[serde(rename = "Fp_nonpositive")]
    FpNonpositive,
}

impl LemmaId {
    pub const ALL: [LemmaId; 3] = [LemmaId::BetaBound, LemmaId::Beta2p, LemmaId::FpNonpositive];

    pub fn name(self) -> &'static str {
        match self {
            LemmaId::BetaBound => "beta_bound",
            LemmaId::Beta2p => "beta_2p",
            LemmaId::FpNonpositive => "Fp_nonpositive",
        }
    }

    /// Margin below zero tolerated before a point counts as a violation.
    pub fn tolerance(self) -> f64 {
        match self {
            LemmaId::BetaBound => 0.0,
            LemmaId::Beta2p => 1e-12,
            LemmaId::FpNonpositive => 1e-8,
        }
    }

    pub fn parameter_names(self) -> &'static [&'static str] {
        match self {
            LemmaId::BetaBound => &["x", "y"],
            LemmaId::Beta2p => &["p"],
            LemmaId::FpNonpositive => &["p", "s"],
        }
    }

    pub fn default_grid(self) -> VerificationGrid {
        match self {
            LemmaId::BetaBound => VerificationGrid::BetaBound {
                x_min: 1.01,
                x_max: 50.0,
                n_x: 200,
                y_min: 0.01,
                y_max: 0.99,
                n_y: 99,
            },
            LemmaId::Beta2p => VerificationGrid::Beta2p {
                p_min: 2.01,
                p_max: 3.99,
                n_p: 199,
            },
            LemmaId::FpNonpositive => VerificationGrid::FpNonpositive {
                p_values: (0..37).map(|i| 2.1 + 0.05 * i as f64).collect(),
                s_values: (0..21).map(|i| 0.05 * i as f64).collect(),
            },
        }
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for LemmaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LemmaId::ALL
            .into_iter()
            .find(|l| l.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::domain(format!("unknown lemma '{s}'; expected beta_bound, beta_2p or Fp_nonpositive")))
    }
}

/// Parameter grid of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VerificationGrid {
    /// `x` log-spaced, `y` uniform, both including their end values.
    BetaBound {
        x_min: f64,
        x_max: f64,
        n_x: usize,
        y_min: f64,
        y_max: f64,
        n_y: usize,
    },
    /// `p` uniform including end values.
    Beta2p { p_min: f64, p_max: f64, n_p: usize },
    FpNonpositive { p_values: Vec<f64>, s_values: Vec<f64> },
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    linspace(a, b, n).into_iter().map(f64::exp).collect()
}

impl VerificationGrid {
    pub fn lemma(&self) -> LemmaId {
        match self {
            VerificationGrid::BetaBound { .. } => LemmaId::BetaBound,
            VerificationGrid::Beta2p { .. } => LemmaId::Beta2p,
            VerificationGrid::FpNonpositive { .. } => LemmaId::FpNonpositive,
        }
    }

    /// Grid points in deterministic row-major order.
    pub fn points(&self) -> Vec<Vec<f64>> {
        match self {
            VerificationGrid::BetaBound {
                x_min,
                x_max,
                n_x,
                y_min,
                y_max,
                n_y,
            } => {
                let ys = linspace(*y_min, *y_max, *n_y);
                logspace(*x_min, *x_max, *n_x)
                    .into_iter()
                    .flat_map(|x| ys.iter().map(move |&y| vec![x, y]))
                    .collect()
            }
            VerificationGrid::Beta2p { p_min, p_max, n_p } => {
                linspace(*p_min, *p_max, *n_p).into_iter().map(|p| vec![p]).collect()
            }
            VerificationGrid::FpNonpositive { p_values, s_values } => p_values
                .iter()
                .flat_map(|&p| s_values.iter().map(move |&s| vec![p, s]))
                .collect(),
        }
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginSample {
    pub point: Vec<f64>,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub lemma_id: LemmaId,
    pub parameters: Vec<String>,
    pub grid: VerificationGrid,
    pub points: usize,
    pub tolerance: f64,
    pub worst_margin: f64,
    pub worst_point: Vec<f64>,
    pub passed: bool,
    /// First evaluation failure, if any; the report is then failed and
    /// `worst_point` names the offending point.
    pub error: Option<String>,
    #[serde(skip)]
    pub samples: Vec<MarginSample>,
}

fn margin_at(lemma: LemmaId, point: &[f64], cfg: &QuadratureConfig) -> Result<f64> {
    match lemma {
        LemmaId::BetaBound => check_beta_bound(point[0], point[1]),
        LemmaId::Beta2p => check_lemma32(point[0]),
        LemmaId::FpNonpositive => fp_eval(point[0], point[1], cfg).map(|r| -r.value),
    }
}

/// Sweeps `grid` and reports the worst margin.
pub fn run_verification(grid: &VerificationGrid, cfg: &QuadratureConfig, exec: Exec) -> VerificationReport {
    let lemma = grid.lemma();
    let points = grid.points();
    let margins = exec.map_slice(&points, |pt| margin_at(lemma, pt, cfg));

    let mut report = VerificationReport {
        lemma_id: lemma,
        parameters: lemma.parameter_names().iter().map(|s| s.to_string()).collect(),
        grid: grid.clone(),
        points: points.len(),
        tolerance: lemma.tolerance(),
        worst_margin: f64::INFINITY,
        worst_point: Vec::new(),
        passed: false,
        error: None,
        samples: Vec::with_capacity(points.len()),
    };
    for (pt, m) in points.into_iter().zip(margins) {
        match m {
            Ok(margin) => {
                if margin < report.worst_margin || report.worst_point.is_empty() {
                    report.worst_margin = margin;
                    report.worst_point = pt.clone();
                }
                report.samples.push(MarginSample { point: pt, margin });
            }
            Err(e) => {
                if report.error.is_none() {
                    report.error = Some(e.to_string());
                    report.worst_point = pt.clone();
                }
                report.samples.push(MarginSample {
                    point: pt,
                    margin: f64::NAN,
                });
            }
        }
    }
    report.passed = report.error.is_none() && !report.samples.is_empty() && report.worst_margin >= -report.tolerance;
    if report.error.is_some() {
        report.worst_margin = f64::NAN;
    }
    report
}

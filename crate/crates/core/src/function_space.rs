//! Analytic functions on the unit disk and their `A^p` / `H^∞_α` norms.

use std::cell::OnceCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::quadrature::{integrate, integrate_gaps, integrate_split, Abscissa, QuadratureConfig};

/// Default truncation order for coefficient sequences.
pub const DEFAULT_ORDER: usize = 256;

/// Something that can be evaluated on the open unit disk.
pub trait AnalyticFn: Sync {
    fn eval(&self, z: Complex64) -> Complex64;

    /// Evaluation with `1 - z` supplied by the caller, for points close to
    /// the boundary point 1 where forming `1 - z` by subtraction would lose
    /// digits. Functions singular at 1 should override this.
    fn eval_near_one(&self, z: Complex64, one_minus_z: Complex64) -> Complex64 {
        let _ = one_minus_z;
        self.eval(z)
    }
}

impl<F> AnalyticFn for F
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    fn eval(&self, z: Complex64) -> Complex64 {
        self(z)
    }
}

/// A truncated Taylor series `Σ_{k<N} a_k z^k`.
///
/// Serialized as a JSON array of `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct TaylorFunction {
    coeffs: Vec<Complex64>,
}

impl TryFrom<Vec<[f64; 2]>> for TaylorFunction {
    type Error = Error;

    fn try_from(pairs: Vec<[f64; 2]>) -> Result<Self> {
        Self::new(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}

impl From<TaylorFunction> for Vec<[f64; 2]> {
    fn from(f: TaylorFunction) -> Self {
        f.coeffs.iter().map(|c| [c.re, c.im]).collect()
    }
}

/// Value of a truncated series together with a bound on the neglected tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    pub tail_bound: f64,
}

impl TaylorFunction {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::domain("a Taylor function needs at least one coefficient"));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::domain("Taylor coefficients must be finite"));
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// The monomial `z^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = Complex64::new(1.0, 0.0);
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Horner evaluation with tail bound `max|a_k| |z|^N / (1 - |z|)`.
    pub fn evaluate(&self, z: Complex64) -> Result<Evaluation> {
        let r = z.norm();
        if !(r < 1.0) {
            return Err(Error::domain(format!("evaluation requires |z| < 1, got |z| = {r}")));
        }
        let max_abs = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let tail_bound = max_abs * r.powi(self.order() as i32) / (1.0 - r);
        Ok(Evaluation {
            value: self.horner(z),
            tail_bound,
        })
    }

    fn horner(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
    }

    /// Upper bound for `|f|` on the closed disk.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }
}

impl AnalyticFn for TaylorFunction {
    fn eval(&self, z: Complex64) -> Complex64 {
        self.horner(z)
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("alpha must lie in (0, 1), got {alpha}")))
    }
}

/// Closed-form `f_α(z) = (1 - z)^(-α)` on the principal branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FAlpha {
    alpha: f64,
}

impl FAlpha {
    pub fn new(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `‖f_α‖_{H^∞_α} = 2^α`.
    pub fn korenblum_norm(&self) -> f64 {
        2f64.powf(self.alpha)
    }
}

impl AnalyticFn for FAlpha {
    fn eval(&self, z: Complex64) -> Complex64 {
        (Complex64::new(1.0, 0.0) - z).powf(-self.alpha)
    }

    fn eval_near_one(&self, _z: Complex64, one_minus_z: Complex64) -> Complex64 {
        one_minus_z.powf(-self.alpha)
    }
}

/// Taylor coefficients of `(1 - z)^(-α)`: `a_k = a_{k-1} (k - 1 + α) / k`.
pub fn falpha_coeffs(alpha: f64, n: usize) -> Result<TaylorFunction> {
    check_alpha(alpha)?;
    falpha_coeffs_unchecked(alpha, n)
}

/// Binomial coefficients of `(1 - z)^(-γ)` for any real `γ`; used for the
/// probe functions, which need not be in the Korenblum range.
pub fn binomial_series(gamma: f64, n: usize) -> Result<TaylorFunction> {
    falpha_coeffs_unchecked(gamma, n)
}

fn falpha_coeffs_unchecked(alpha: f64, n: usize) -> Result<TaylorFunction> {
    if n == 0 {
        return Err(Error::domain("truncation order must be at least 1"));
    }
    let mut coeffs = Vec::with_capacity(n);
    let mut a = 1.0;
    coeffs.push(Complex64::new(a, 0.0));
    for k in 1..n {
        a *= (k as f64 - 1.0 + alpha) / k as f64;
        coeffs.push(Complex64::new(a, 0.0));
    }
    Ok(TaylorFunction { coeffs })
}

/// Which norm is in force.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceSpec {
    Bergman { p: f64 },
    Korenblum { alpha: f64 },
}

impl SpaceSpec {
    /// Bergman space in the range covered by the norm theorem, `2 < p < 4`.
    pub fn bergman(p: f64) -> Result<Self> {
        if p > 2.0 && p < 4.0 {
            Ok(SpaceSpec::Bergman { p })
        } else {
            Err(Error::domain(format!("Bergman exponent must lie in (2, 4), got {p}")))
        }
    }

    pub fn korenblum(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(SpaceSpec::Korenblum { alpha })
    }
}

/// How a norm value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GridDescriptor {
    /// Angular trapezoid (FFT) nested in a radial quadrature.
    RadialQuadrature {
        n_theta: usize,
        r_max: f64,
        quadrature: QuadratureConfig,
        err_estimate: f64,
        evals: usize,
    },
    /// Nested angular and radial quadrature for closed-form evaluators.
    PolarQuadrature {
        r_max: f64,
        quadrature: QuadratureConfig,
        err_estimate: f64,
    },
    /// Polar sample grid with optional local refinement.
    Polar {
        n_r: usize,
        n_theta: usize,
        r_max: f64,
        refined: bool,
        argmax_r: f64,
        argmax_theta: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub space: SpaceSpec,
    pub value: f64,
    pub grid: GridDescriptor,
    pub tail_bound: f64,
}

fn check_bergman_exponent(p: f64) -> Result<()> {
    // the norm is defined for any p >= 1; the operator theory needs 2 < p < 4
    if p >= 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("Bergman exponent must be a finite p >= 1, got {p}")))
    }
}

/// Number of angular samples used for a series of order `n` in `A^p`.
fn angular_samples(n: usize, p: f64) -> usize {
    (4 * n * p.ceil() as usize).max(256).next_power_of_two()
}

/// `‖f‖_{A^p}` for a truncated series.
///
/// The angular mean of `|f(re^{iθ})|^p` is a trapezoid sum over an FFT of
/// the scaled coefficients; the radial integral `2∫₀¹ r M_p(r)^p dr` uses the
/// configured quadrature. A polynomial is bounded on the closed disk, so the
/// radial integral runs all the way to 1 and there is no tail.
pub fn bergman_norm(f: &TaylorFunction, p: f64, cfg: &QuadratureConfig) -> Result<NormEstimate> {
    check_bergman_exponent(p)?;
    let n = f.order();
    let n_theta = angular_samples(n, p);
    let fft = FftPlanner::<f64>::new().plan_fft_inverse(n_theta);
    let coeffs = f.coeffs();

    let radial = |r: f64| -> f64 {
        let mut buf = vec![Complex64::new(0.0, 0.0); n_theta];
        let mut rk = 1.0;
        for (k, &a) in coeffs.iter().enumerate() {
            buf[k % n_theta] += a * rk;
            rk *= r;
        }
        fft.process(&mut buf);
        let mean = buf.iter().map(|v| v.norm().powf(p)).sum::<f64>() / n_theta as f64;
        2.0 * r * mean
    };
    let res = integrate(radial, 0.0, 1.0, cfg)?;
    Ok(NormEstimate {
        space: SpaceSpec::Bergman { p },
        value: res.value.max(0.0).powf(1.0 / p),
        grid: GridDescriptor::RadialQuadrature {
            n_theta,
            r_max: 1.0,
            quadrature: *cfg,
            err_estimate: res.err_estimate,
            evals: res.evals,
        },
        tail_bound: 0.0,
    })
}

/// Growth bound `|f(z)| ≤ c (1 - |z|)^(-γ)` for a closed-form evaluator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerGrowth {
    pub c: f64,
    pub gamma: f64,
}

/// Radius at which the closed-form Bergman quadrature stops.
pub const BERGMAN_R_MAX: f64 = 1.0 - 1e-8;

/// `‖f‖_{A^p}` for a closed-form evaluator with a known boundary growth.
///
/// Integrates over `|z| ≤ r_max`; the annulus beyond is bounded by
/// `2 c^p (1 - r_max)^(1 - γp) / (1 - γp)` and reported as `tail_bound` (on
/// the p-th power of the norm). The angular integral is split at θ = 0
/// where binomial-type functions peak.
pub fn bergman_norm_closed<F: AnalyticFn>(
    f: &F,
    p: f64,
    growth: PowerGrowth,
    cfg: &QuadratureConfig,
) -> Result<NormEstimate> {
    check_bergman_exponent(p)?;
    let gp = growth.gamma * p;
    if gp >= 1.0 {
        return Err(Error::domain(format!(
            "growth exponent γp = {gp} is not integrable; the function is not in A^p"
        )));
    }
    let delta = 1.0 - BERGMAN_R_MAX;
    let inner_cfg = cfg.with_tol(cfg.target_abs_tol * 0.1);
    let angular = |r: f64| -> Result<f64> {
        let res = integrate_split(
            |theta: f64| f.eval(Complex64::from_polar(r, theta)).norm().powf(p),
            -PI,
            PI,
            &[0.0],
            &inner_cfg,
        )?;
        Ok(res.value / (2.0 * PI))
    };
    let failure = OnceCell::new();
    let res = integrate_gaps(
        |n: Abscissa| match angular(n.x) {
            Ok(m) => 2.0 * n.x * m,
            Err(e) => {
                let _ = failure.set(e);
                0.0
            }
        },
        0.0,
        BERGMAN_R_MAX,
        cfg,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let res = res?;
    let tail_bound = 2.0 * growth.c.powf(p) * delta.powf(1.0 - gp) / (1.0 - gp);
    Ok(NormEstimate {
        space: SpaceSpec::Bergman { p },
        value: res.value.max(0.0).powf(1.0 / p),
        grid: GridDescriptor::PolarQuadrature {
            r_max: BERGMAN_R_MAX,
            quadrature: *cfg,
            err_estimate: res.err_estimate,
        },
        tail_bound,
    })
}

/// Sampling grid for the Korenblum supremum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KorenblumGrid {
    pub n_r: usize,
    pub n_theta: usize,
    pub r_max: f64,
    pub refine: bool,
}

impl Default for KorenblumGrid {
    fn default() -> Self {
        Self {
            n_r: 401,
            n_theta: 512,
            r_max: 1.0 - 1e-6,
            refine: true,
        }
    }
}

impl KorenblumGrid {
    /// Same grid with both resolutions doubled; the new nodes contain the old.
    pub fn refined(&self) -> Self {
        Self {
            n_r: 2 * self.n_r - 1,
            n_theta: 2 * self.n_theta,
            ..*self
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_r < 3 || self.n_theta < 1 || !(self.r_max > 0.0 && self.r_max < 1.0) {
            return Err(Error::domain("Korenblum grid needs n_r >= 3, n_theta >= 1, 0 < r_max < 1"));
        }
        Ok(())
    }

    /// `1 - r` at radial position `s ∈ [0, 1]`: log-spaced from 1 down to
    /// `1 - r_max`, so the grid is dense toward the boundary.
    fn gap_at(&self, s: f64) -> f64 {
        (1.0 - self.r_max).powf(s)
    }

    fn s_at(&self, i: usize) -> f64 {
        i as f64 / (self.n_r - 1) as f64
    }
}

/// `(1 - |z|^2)^α |f(z)|` with `1 - |z|` supplied directly.
fn weighted<F: AnalyticFn + ?Sized>(f: &F, alpha: f64, gap: f64, theta: f64) -> f64 {
    let r = 1.0 - gap;
    let w = (gap * (1.0 + r)).powf(alpha);
    let z = Complex64::from_polar(r, theta);
    // 1 - r e^{iθ} = (1 - r) + 2 r sin²(θ/2) - i r sin θ
    let half = (0.5 * theta).sin();
    let one_minus_z = Complex64::new(gap + 2.0 * r * half * half, -r * theta.sin());
    w * f.eval_near_one(z, one_minus_z).norm()
}

fn golden_max<G: Fn(f64) -> f64>(g: G, mut lo: f64, mut hi: f64, iters: usize) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = g(x1);
    let mut f2 = g(x2);
    for _ in 0..iters {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = g(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = g(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// `sup_z (1 - |z|^2)^α |f(z)|` over a polar grid reaching `r_max`.
///
/// The best grid cell is polished by golden-section search, first along the
/// radius of its angular slice and then in angle. The result is a lower
/// bound on the true supremum.
pub fn korenblum_norm<F: AnalyticFn + ?Sized>(
    f: &F,
    alpha: f64,
    grid: &KorenblumGrid,
    exec: Exec,
) -> Result<NormEstimate> {
    check_alpha(alpha)?;
    grid.validate()?;
    let dtheta = 2.0 * PI / grid.n_theta as f64;
    let rows = exec.map_indexed(grid.n_r, |i| {
        let gap = grid.gap_at(grid.s_at(i));
        let mut best = (f64::NEG_INFINITY, 0usize);
        for j in 0..grid.n_theta {
            let v = weighted(f, alpha, gap, j as f64 * dtheta);
            if v > best.0 {
                best = (v, j);
            }
        }
        best
    });
    let (mut best_i, mut best_j, mut best_v) = (0, 0, f64::NEG_INFINITY);
    for (i, &(v, j)) in rows.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::Evaluation { abscissa: 1.0 - grid.gap_at(grid.s_at(i)) });
        }
        if v > best_v {
            best_v = v;
            best_i = i;
            best_j = j;
        }
    }
    let mut best_gap = grid.gap_at(grid.s_at(best_i));
    let mut best_theta = best_j as f64 * dtheta;

    if grid.refine {
        let s_lo = grid.s_at(best_i.saturating_sub(1));
        let s_hi = grid.s_at((best_i + 1).min(grid.n_r - 1));
        let (s, v) = golden_max(|s| weighted(f, alpha, grid.gap_at(s), best_theta), s_lo, s_hi, 60);
        if v > best_v {
            best_v = v;
            best_gap = grid.gap_at(s);
        }
        let (th, v) = golden_max(
            |th| weighted(f, alpha, best_gap, th),
            best_theta - dtheta,
            best_theta + dtheta,
            60,
        );
        if v > best_v {
            best_v = v;
            best_theta = th;
        }
    }
    Ok(NormEstimate {
        space: SpaceSpec::Korenblum { alpha },
        value: best_v,
        grid: GridDescriptor::Polar {
            n_r: grid.n_r,
            n_theta: grid.n_theta,
            r_max: grid.r_max,
            refined: grid.refine,
            argmax_r: 1.0 - best_gap,
            argmax_theta: best_theta.rem_euclid(2.0 * PI),
        },
        tail_bound: 0.0,
    })
}

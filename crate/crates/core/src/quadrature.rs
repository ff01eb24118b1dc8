//! One-dimensional quadrature for integrands with integrable algebraic
//! endpoint singularities.
//!
//! The default rule is tanh-sinh. Its abscissae cluster double-exponentially
//! at the endpoints, so each node is stored as a distance from the nearest
//! endpoint and handed to the integrand that way ([`Abscissa`]). Integrands
//! such as `t^(a-1) (1-t)^(b-1)` should compute `1 - t` from
//! [`Abscissa::from_b`] rather than by subtraction.

use std::f64::consts::FRAC_PI_2;
use std::ops::{Add, Mul, Sub};
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureMethod {
    #[default]
    TanhSinh,
    AdaptiveGk,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub method: QuadratureMethod,
    pub target_abs_tol: f64,
    pub max_levels: usize,
    pub max_evals: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            method: QuadratureMethod::TanhSinh,
            target_abs_tol: 1e-10,
            max_levels: 12,
            max_evals: 1_000_000,
        }
    }
}

impl QuadratureConfig {
    pub const MIN_LEVELS: usize = 3;
    pub const MAX_LEVELS: usize = 20;

    pub fn new(method: QuadratureMethod, target_abs_tol: f64, max_levels: usize, max_evals: usize) -> Result<Self> {
        let cfg = Self {
            method,
            target_abs_tol,
            max_levels,
            max_evals,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_tol(self, target_abs_tol: f64) -> Self {
        Self { target_abs_tol, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.target_abs_tol > 0.0) {
            return Err(Error::domain("target_abs_tol must be positive"));
        }
        if !(Self::MIN_LEVELS..=Self::MAX_LEVELS).contains(&self.max_levels) {
            return Err(Error::domain(format!(
                "max_levels must lie in [{}, {}], got {}",
                Self::MIN_LEVELS,
                Self::MAX_LEVELS,
                self.max_levels
            )));
        }
        if self.max_evals == 0 {
            return Err(Error::domain("max_evals must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralResult<T> {
    pub value: T,
    pub err_estimate: f64,
    pub evals: usize,
}

/// Values that can be integrated: real and complex scalars.
pub trait QuadValue:
    Copy + Send + Sync + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
    fn is_finite_value(&self) -> bool;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn is_finite_value(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// A quadrature node together with its distances to the interval ends.
///
/// `from_a` and `from_b` are accurate even when `x` itself rounds to an
/// endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Abscissa {
    pub x: f64,
    pub from_a: f64,
    pub from_b: f64,
}

/// Integrates `f` over `(a, b)`.
///
/// Nodes whose abscissa rounds onto an endpoint are skipped; integrands that
/// are singular at an endpoint should use [`integrate_gaps`] instead.
pub fn integrate<T, F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<IntegralResult<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    check_interval(a, b)?;
    cfg.validate()?;
    let g = |n: Abscissa| {
        if n.x <= a || n.x >= b {
            None
        } else {
            Some(f(n.x))
        }
    };
    dispatch(&g, a, b, cfg)
}

/// Integrates `f` over `(a, b)`, passing each node with its endpoint gaps.
pub fn integrate_gaps<T, F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<IntegralResult<T>>
where
    T: QuadValue,
    F: Fn(Abscissa) -> T,
{
    check_interval(a, b)?;
    cfg.validate()?;
    let g = |n: Abscissa| Some(f(n));
    dispatch(&g, a, b, cfg)
}

/// Integrates over `(a, b)` as a sum over the pieces cut at `splits`.
///
/// Split points equal to `a` or `b` are dropped. Error estimates and
/// evaluation counts add.
pub fn integrate_split<T, F>(f: F, a: f64, b: f64, splits: &[f64], cfg: &QuadratureConfig) -> Result<IntegralResult<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    let pieces = pieces(a, b, splits)?;
    cfg.validate()?;
    let mut acc = IntegralResult {
        value: T::zero(),
        err_estimate: 0.0,
        evals: 0,
    };
    for (lo, hi) in pieces {
        let r = integrate(&f, lo, hi, cfg)?;
        acc.value = acc.value + r.value;
        acc.err_estimate += r.err_estimate;
        acc.evals += r.evals;
    }
    Ok(acc)
}

/// Split integration with gaps measured to the outer endpoints `a` and `b`.
pub fn integrate_split_gaps<T, F>(
    f: F,
    a: f64,
    b: f64,
    splits: &[f64],
    cfg: &QuadratureConfig,
) -> Result<IntegralResult<T>>
where
    T: QuadValue,
    F: Fn(Abscissa) -> T,
{
    let pieces = pieces(a, b, splits)?;
    cfg.validate()?;
    let mut acc = IntegralResult {
        value: T::zero(),
        err_estimate: 0.0,
        evals: 0,
    };
    for (lo, hi) in pieces {
        let lo_off = lo - a;
        let hi_off = b - hi;
        let g = |n: Abscissa| {
            f(Abscissa {
                x: n.x,
                from_a: lo_off + n.from_a,
                from_b: hi_off + n.from_b,
            })
        };
        let r = integrate_gaps(g, lo, hi, cfg)?;
        acc.value = acc.value + r.value;
        acc.err_estimate += r.err_estimate;
        acc.evals += r.evals;
    }
    Ok(acc)
}

/// `∫_a^b g(x) (c + b - x)^(-e) dx` for a shift `c ≥ 0` and `0 ≤ e < 1`.
///
/// The substitution `u = (c + b - x)^(1-e)` turns the weight into the
/// constant `1/(1-e)`. Without it, exponents close to -1 leave a visible
/// share of the mass below the smallest representable node gap when `c` is
/// zero or tiny: `ε^(1-e)/(1-e)` for a cutoff `ε`, which is 0.16 for
/// `e = 0.99` and `ε = 1e-280`.
///
/// `g` receives the node in the original variable, with accurate gaps.
pub fn integrate_right_power<F>(
    g: F,
    a: f64,
    b: f64,
    c: f64,
    e: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult<f64>>
where
    F: Fn(Abscissa) -> f64,
{
    check_interval(a, b)?;
    if !(0.0..1.0).contains(&e) {
        return Err(Error::domain(format!("endpoint exponent must lie in [0, 1), got {e}")));
    }
    if !(c >= 0.0 && c.is_finite()) {
        return Err(Error::domain(format!("weight shift must be finite and non-negative, got {c}")));
    }
    let k = 1.0 / (1.0 - e);
    let top = c + (b - a);
    let u_min = c.powf(1.0 - e);
    let u_max = top.powf(1.0 - e);
    let r = integrate_gaps(
        |n: Abscissa| {
            // (c + b - x) - c, then (c + b - a) - (c + b - x), each without
            // cancellation near its own end
            let from_b = if u_min > 0.0 {
                c * (k * (n.from_a / u_min).ln_1p()).exp_m1()
            } else {
                n.from_a.powf(k)
            };
            let from_a = -top * (k * (-n.from_b / u_max).ln_1p()).exp_m1();
            g(Abscissa {
                x: a + from_a,
                from_a,
                from_b,
            })
        },
        u_min,
        u_max,
        cfg,
    )?;
    Ok(IntegralResult {
        value: k * r.value,
        err_estimate: k * r.err_estimate,
        evals: r.evals,
    })
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if a.is_finite() && b.is_finite() && a < b {
        Ok(())
    } else {
        Err(Error::domain(format!("integration interval requires finite a < b, got ({a}, {b})")))
    }
}

fn pieces(a: f64, b: f64, splits: &[f64]) -> Result<Vec<(f64, f64)>> {
    check_interval(a, b)?;
    let mut out = Vec::with_capacity(splits.len() + 1);
    let mut lo = a;
    for &m in splits {
        if m == a || m == b {
            continue;
        }
        if !(m > lo && m < b) {
            return Err(Error::domain(format!(
                "split points must be increasing and inside ({a}, {b}); offending point {m}"
            )));
        }
        out.push((lo, m));
        lo = m;
    }
    out.push((lo, b));
    Ok(out)
}

fn dispatch<T, G>(g: &G, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<IntegralResult<T>>
where
    T: QuadValue,
    G: Fn(Abscissa) -> Option<T>,
{
    match cfg.method {
        QuadratureMethod::TanhSinh => tanh_sinh(g, a, b, cfg),
        QuadratureMethod::AdaptiveGk => adaptive_gk(g, a, b, cfg),
    }
}

fn eval_checked<T, G>(g: &G, n: Abscissa) -> Result<Option<T>>
where
    T: QuadValue,
    G: Fn(Abscissa) -> Option<T>,
{
    match g(n) {
        Some(v) if !v.is_finite_value() => Err(Error::Evaluation { abscissa: n.x }),
        other => Ok(other),
    }
}

// ---------------------------------------------------------------------------
// tanh-sinh

/// Node on the reference interval [-1, 1]: `gap` is the distance of ±u from
/// ±1, `weight` the derivative of the transform.
#[derive(Debug, Clone, Copy)]
struct DeNode {
    gap: f64,
    weight: f64,
}

/// Smallest endpoint gap kept in the tables; beyond it the transformed
/// weights underflow for every integrand with exponent > -1.
const MIN_GAP: f64 = 1e-280;

/// Node tables per level. Level 0 holds t = 0, 1, 2, ...; level L >= 1
/// holds only the odd multiples of 2^-L.
fn de_tables() -> &'static [Vec<DeNode>] {
    static TABLES: OnceLock<Vec<Vec<DeNode>>> = OnceLock::new();
    TABLES.get_or_init(|| {
        (0..=QuadratureConfig::MAX_LEVELS)
            .map(|level| {
                let h = (0.5f64).powi(level as i32);
                let (start, stride) = if level == 0 { (0usize, 1usize) } else { (1, 2) };
                let mut nodes = Vec::new();
                let mut k = start;
                loop {
                    let t = k as f64 * h;
                    let v = FRAC_PI_2 * t.sinh();
                    let e = (-2.0 * v).exp();
                    // 1 - tanh(v) and sech^2(v) without cancellation
                    let gap = 2.0 * e / (1.0 + e);
                    let sech2 = 4.0 * e / ((1.0 + e) * (1.0 + e));
                    if gap < MIN_GAP {
                        break;
                    }
                    nodes.push(DeNode {
                        gap,
                        weight: FRAC_PI_2 * t.cosh() * sech2,
                    });
                    k += stride;
                }
                nodes
            })
            .collect()
    })
}

fn tanh_sinh<T, G>(g: &G, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<IntegralResult<T>>
where
    T: QuadValue,
    G: Fn(Abscissa) -> Option<T>,
{
    let half = 0.5 * (b - a);
    let width = b - a;
    let tables = de_tables();
    let mut sum = T::zero();
    let mut abs_sum = 0.0;
    let mut evals = 0usize;
    let mut prev: Option<T> = None;
    let mut last_err = f64::INFINITY;

    for (level, nodes) in tables.iter().enumerate().take(cfg.max_levels + 1) {
        for (i, node) in nodes.iter().enumerate() {
            if level == 0 && i == 0 {
                let n = Abscissa {
                    x: a + half,
                    from_a: half,
                    from_b: half,
                };
                if let Some(v) = eval_checked(g, n)? {
                    sum = sum + v * node.weight;
                    abs_sum += v.magnitude() * node.weight;
                }
                evals += 1;
                continue;
            }
            let near = half * node.gap;
            let far = width - near;
            let right = Abscissa {
                x: b - near,
                from_a: far,
                from_b: near,
            };
            let left = Abscissa {
                x: a + near,
                from_a: near,
                from_b: far,
            };
            for n in [right, left] {
                if let Some(v) = eval_checked(g, n)? {
                    sum = sum + v * node.weight;
                    abs_sum += v.magnitude() * node.weight;
                }
            }
            evals += 2;
        }
        let h = (0.5f64).powi(level as i32);
        let estimate = sum * (h * half);
        if let Some(p) = prev {
            last_err = (estimate - p).magnitude();
            let roundoff = 64.0 * f64::EPSILON * abs_sum * h * half;
            if level >= QuadratureConfig::MIN_LEVELS && (last_err <= cfg.target_abs_tol || last_err <= roundoff) {
                return Ok(IntegralResult {
                    value: estimate,
                    err_estimate: last_err,
                    evals,
                });
            }
        }
        prev = Some(estimate);
        if evals >= cfg.max_evals {
            break;
        }
    }
    let best = prev.unwrap_or_else(T::zero);
    Err(Error::Accuracy {
        message: format!(
            "tanh-sinh on ({a}, {b}) stopped at error estimate {last_err:e} (target {:e}, {evals} evaluations)",
            cfg.target_abs_tol
        ),
        best_estimate: best.magnitude(),
    })
}

// ---------------------------------------------------------------------------
// adaptive Gauss-Kronrod 7-15

const GK15_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK15_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for GK15_NODES[1], [3], [5], [7]
const G7_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Panel<T> {
    off_a: f64,
    off_b: f64,
    len: f64,
    value: T,
    err: f64,
}

fn gk15_panel<T, G>(g: &G, a: f64, off_a: f64, off_b: f64, len: f64) -> Result<Panel<T>>
where
    T: QuadValue,
    G: Fn(Abscissa) -> Option<T>,
{
    let half = 0.5 * len;
    let mut kronrod = T::zero();
    let mut gauss = T::zero();
    for (i, (&xi, &wk)) in GK15_NODES.iter().zip(GK15_WEIGHTS.iter()).enumerate() {
        let signs: &[f64] = if xi == 0.0 { &[1.0] } else { &[1.0, -1.0] };
        for &sg in signs {
            let from_a = off_a + half * (1.0 + sg * xi);
            let from_b = off_b + half * (1.0 - sg * xi);
            let n = Abscissa {
                x: a + from_a,
                from_a,
                from_b,
            };
            let v = eval_checked(g, n)?.unwrap_or_else(T::zero);
            kronrod = kronrod + v * wk;
            if i % 2 == 1 {
                gauss = gauss + v * G7_WEIGHTS[i / 2];
            }
        }
    }
    let value = kronrod * half;
    let err = (kronrod - gauss).magnitude() * half;
    Ok(Panel {
        off_a,
        off_b,
        len,
        value,
        err,
    })
}

fn adaptive_gk<T, G>(g: &G, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<IntegralResult<T>>
where
    T: QuadValue,
    G: Fn(Abscissa) -> Option<T>,
{
    let mut panels = vec![gk15_panel(g, a, 0.0, 0.0, b - a)?];
    let mut evals = 15usize;
    loop {
        let total_err: f64 = panels.iter().map(|p| p.err).sum();
        if total_err <= cfg.target_abs_tol {
            let value = panels.iter().fold(T::zero(), |acc, p| acc + p.value);
            return Ok(IntegralResult {
                value,
                err_estimate: total_err,
                evals,
            });
        }
        if evals + 30 > cfg.max_evals {
            let value = panels.iter().fold(T::zero(), |acc, p| acc + p.value);
            return Err(Error::Accuracy {
                message: format!(
                    "adaptive Gauss-Kronrod on ({a}, {b}) exhausted {evals} evaluations at error {total_err:e}"
                ),
                best_estimate: value.magnitude(),
            });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let p = panels.swap_remove(worst);
        let half = 0.5 * p.len;
        let left = gk15_panel(g, a, p.off_a, p.off_b + half, half)?;
        let right = gk15_panel(g, a, p.off_a + half, p.off_b, half)?;
        evals += 30;
        panels.push(left);
        panels.push(right);
    }
}

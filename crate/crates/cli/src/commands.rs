//! Command implementations. Each command validates its flags against the
//! library's preconditions before computing anything.

use std::fs;
use std::path::Path;

use clap::ValueEnum;
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Value};

use hilbertnorm::function_space::{
    bergman_norm, bergman_norm_closed, binomial_series, korenblum_norm, AnalyticFn, FAlpha, KorenblumGrid,
    PowerGrowth, SpaceSpec, TaylorFunction, DEFAULT_ORDER,
};
use hilbertnorm::hilbert_op::{hilbert_coeffs, hilbert_integral, wco_apply, WcoParams};
use hilbertnorm::lemma_verify::{bergman_norm_value, run_verification, LemmaId};
use hilbertnorm::wco_norms::{bound_report, tt_norm};
use hilbertnorm::{Error, Exec, QuadratureConfig, QuadratureMethod};

use crate::output::Document;
use crate::{Command, Method, Options, Space};

/// Result of one run, with its exit code.
#[derive(Debug)]
pub enum Outcome {
    Done(Document),
    Failed {
        code: u8,
        message: String,
        partial: Option<Document>,
    },
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        match self {
            Outcome::Done(_) => 0,
            Outcome::Failed { code, .. } => *code,
        }
    }

    pub fn document(&self) -> Option<&Document> {
        match self {
            Outcome::Done(doc) => Some(doc),
            Outcome::Failed { partial, .. } => partial.as_ref(),
        }
    }

    pub fn message(&self) -> Option<&str> {
        match self {
            Outcome::Done(_) => None,
            Outcome::Failed { message, .. } => Some(message),
        }
    }
}

/// Failure before or during a computation.
#[derive(Debug)]
enum Failure {
    /// Bad or missing flags, unreadable input.
    Usage(String),
    Library(Error),
    /// A finished computation whose result is itself a failure.
    Partial { message: String, doc: Document },
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

fn library_exit_code(e: &Error) -> u8 {
    match e {
        Error::Domain(_) | Error::Internal(_) => 1,
        Error::Accuracy { .. } | Error::Evaluation { .. } => 2,
    }
}

pub fn run(command: &Command, opts: &Options) -> Outcome {
    let result = quadrature(opts).and_then(|cfg| match command {
        Command::Apply => apply(opts, &cfg),
        Command::Norm => norm(opts, &cfg),
        Command::Tnorm => tnorm(opts),
        Command::Bound => bound(opts, &cfg),
        Command::Verify { lemma } => verify(lemma, &cfg),
        Command::Sweep {
            quantity,
            from,
            to,
            step,
        } => sweep(*quantity, *from, *to, *step, opts, &cfg),
    });
    match result {
        Ok(doc) => Outcome::Done(doc),
        Err(Failure::Usage(message)) => Outcome::Failed {
            code: 1,
            message,
            partial: None,
        },
        Err(Failure::Library(e)) => {
            let partial = match &e {
                Error::Accuracy { best_estimate, .. } => Some(Document::single(json!({
                    "error": e.to_string(),
                    "best_estimate": best_estimate,
                }))),
                _ => None,
            };
            Outcome::Failed {
                code: library_exit_code(&e),
                message: e.to_string(),
                partial,
            }
        }
        Err(Failure::Partial { message, doc }) => Outcome::Failed {
            code: 2,
            message,
            partial: Some(doc),
        },
    }
}

fn quadrature(opts: &Options) -> Result<QuadratureConfig, Failure> {
    let base = QuadratureConfig::default();
    let tol = opts.tol.unwrap_or(base.target_abs_tol);
    Ok(QuadratureConfig::new(
        QuadratureMethod::TanhSinh,
        tol,
        opts.max_levels.unwrap_or(base.max_levels),
        base.max_evals,
    )?)
}

fn exec() -> Exec {
    if Exec::parallel_available() {
        Exec::Parallel
    } else {
        Exec::Sequential
    }
}

fn require(value: Option<f64>, flag: &str, command: &str) -> Result<f64, Failure> {
    match value {
        Some(v) => Ok(v),
        None => usage(format!("`{command}` requires --{flag}")),
    }
}

fn parse_point(raw: &str) -> Result<Complex64, Failure> {
    let parts: Vec<&str> = raw.split(',').map(str::trim).collect();
    let parse = |s: &str| {
        s.parse::<f64>()
            .map_err(|_| Failure::Usage(format!("--at expects `re,im`, got '{raw}'")))
    };
    match parts.as_slice() {
        [re] => Ok(Complex64::new(parse(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(parse(re)?, parse(im)?)),
        _ => usage(format!("--at expects `re,im`, got '{raw}'")),
    }
}

/// Accepted layouts of a `--coeffs` file.
#[derive(Deserialize)]
#[serde(untagged)]
enum CoeffFile {
    Complex(Vec<[f64; 2]>),
    Real(Vec<f64>),
}

fn read_coeffs(path: &Path) -> Result<TaylorFunction, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let parsed: CoeffFile = serde_json::from_str(&text).map_err(|_| {
        Failure::Usage(format!(
            "{}: expected a JSON array of numbers or of [re, im] pairs",
            path.display()
        ))
    })?;
    Ok(match parsed {
        CoeffFile::Complex(pairs) => TaylorFunction::try_from(pairs)?,
        CoeffFile::Real(xs) => TaylorFunction::from_real(&xs)?,
    })
}

/// The function a command acts on.
enum InputFn {
    Taylor(TaylorFunction),
    Closed(FAlpha),
}

impl AnalyticFn for InputFn {
    fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            InputFn::Taylor(f) => f.eval(z),
            InputFn::Closed(f) => f.eval(z),
        }
    }

    fn eval_near_one(&self, z: Complex64, one_minus_z: Complex64) -> Complex64 {
        match self {
            InputFn::Taylor(f) => f.eval_near_one(z, one_minus_z),
            InputFn::Closed(f) => f.eval_near_one(z, one_minus_z),
        }
    }
}

impl InputFn {
    fn from_opts(opts: &Options, command: &str) -> Result<(Self, Value), Failure> {
        match (&opts.coeffs, opts.falpha) {
            (Some(_), Some(_)) => usage("pass either --coeffs or --falpha, not both"),
            (Some(path), None) => {
                let f = read_coeffs(path)?;
                let desc = json!({"kind": "taylor", "path": path.display().to_string(), "order": f.order()});
                Ok((InputFn::Taylor(f), desc))
            }
            (None, Some(gamma)) => Ok((InputFn::Closed(FAlpha::new(gamma)?), json!({"kind": "falpha", "gamma": gamma}))),
            (None, None) => usage(format!("`{command}` requires an input function: --coeffs <path> or --falpha <γ>")),
        }
    }

    /// Taylor coefficients, truncating the closed form at `order` terms.
    fn taylor(&self, order: usize) -> Result<TaylorFunction, Failure> {
        match self {
            InputFn::Taylor(f) => Ok(f.clone()),
            InputFn::Closed(f) => Ok(binomial_series(f.alpha(), order)?),
        }
    }
}

fn apply(opts: &Options, cfg: &QuadratureConfig) -> Result<Document, Failure> {
    let (f, desc) = InputFn::from_opts(opts, "apply")?;
    let Some(at) = opts.at.as_deref() else {
        return usage("`apply` requires --at re,im");
    };
    let z = parse_point(at)?;
    if let Some(t) = opts.t {
        let params = WcoParams::new(t)?;
        let w = wco_apply(params, &f, z)?;
        return Ok(Document::single(json!({
            "operator": "T_t",
            "t": t,
            "function": desc,
            "z": {"re": z.re, "im": z.im},
            "re": w.re,
            "im": w.im,
        })));
    }
    let doc = match opts.method {
        Method::Integral => {
            let r = hilbert_integral(&f, z, cfg)?;
            json!({
                "operator": "H",
                "method": "integral",
                "function": desc,
                "z": {"re": z.re, "im": z.im},
                "re": r.value.re,
                "im": r.value.im,
                "err_estimate": r.err_estimate,
                "evals": r.evals,
            })
        }
        Method::Coeffs => {
            let order = opts.order.unwrap_or(DEFAULT_ORDER);
            if order == 0 {
                return usage("--order must be at least 1");
            }
            let taylor = f.taylor(order)?;
            let hf = hilbert_coeffs(&taylor, opts.order.unwrap_or(taylor.order()));
            let e = hf.evaluate(z)?;
            json!({
                "operator": "H",
                "method": "coeffs",
                "function": desc,
                "order": hf.order(),
                "z": {"re": z.re, "im": z.im},
                "re": e.value.re,
                "im": e.value.im,
                "err_estimate": e.tail_bound,
            })
        }
    };
    Ok(Document::single(doc))
}

fn resolve_space(opts: &Options, command: &str) -> Result<Space, Failure> {
    match (opts.space, opts.alpha, opts.p) {
        (Some(s), _, _) => Ok(s),
        (None, Some(_), None) => Ok(Space::Hinf),
        (None, None, Some(_)) => Ok(Space::Ap),
        _ => usage(format!("`{command}` requires --space ap|hinf")),
    }
}

fn norm(opts: &Options, cfg: &QuadratureConfig) -> Result<Document, Failure> {
    let space = resolve_space(opts, "norm")?;
    let (f, desc) = InputFn::from_opts(opts, "norm")?;
    let estimate = match space {
        Space::Ap => {
            let p = require(opts.p, "p", "norm --space ap")?;
            SpaceSpec::bergman(p)?;
            match &f {
                InputFn::Taylor(t) => bergman_norm(t, p, cfg)?,
                InputFn::Closed(fa) => {
                    let growth = PowerGrowth {
                        c: 1.0,
                        gamma: fa.alpha(),
                    };
                    bergman_norm_closed(fa, p, growth, cfg)?
                }
            }
        }
        Space::Hinf => {
            let alpha = require(opts.alpha, "alpha", "norm --space hinf")?;
            SpaceSpec::korenblum(alpha)?;
            korenblum_norm(&f, alpha, &KorenblumGrid::default(), exec())?
        }
    };
    let mut doc = serde_json::to_value(estimate).map_err(|e| Failure::Library(Error::Internal(e.to_string())))?;
    doc["function"] = desc;
    Ok(Document::single(doc))
}

fn tnorm(opts: &Options) -> Result<Document, Failure> {
    let alpha = require(opts.alpha, "alpha", "tnorm")?;
    let t = require(opts.t, "t", "tnorm")?;
    let b = tt_norm(alpha, t)?;
    Ok(Document::single(to_json(&b)?))
}

fn bound_row(space: Space, param: f64, cfg: &QuadratureConfig) -> Result<Value, Error> {
    match space {
        Space::Hinf => {
            let r = bound_report(param, cfg)?;
            let mut v = serde_json::to_value(r).map_err(|e| Error::Internal(e.to_string()))?;
            v["space"] = json!("hinf");
            Ok(v)
        }
        Space::Ap => {
            let norm = bergman_norm_value(param)?;
            Ok(json!({
                "space": "ap",
                "p": param,
                "lower": norm,
                "upper": norm,
                "gap": 0.0,
                "exact": true,
            }))
        }
    }
}

fn bound(opts: &Options, cfg: &QuadratureConfig) -> Result<Document, Failure> {
    let space = resolve_space(opts, "bound")?;
    let param = match space {
        Space::Hinf => require(opts.alpha, "alpha", "bound --space hinf")?,
        Space::Ap => require(opts.p, "p", "bound --space ap")?,
    };
    Ok(Document::single(bound_row(space, param, cfg)?))
}

fn verify(lemma: &str, cfg: &QuadratureConfig) -> Result<Document, Failure> {
    let id: LemmaId = lemma.parse()?;
    let report = run_verification(&id.default_grid(), cfg, exec());
    let rows = report
        .samples
        .iter()
        .map(|s| {
            let mut row = serde_json::Map::new();
            for (name, x) in id.parameter_names().iter().zip(&s.point) {
                row.insert((*name).to_string(), json!(x));
            }
            row.insert("margin".into(), json!(s.margin));
            Value::Object(row)
        })
        .collect();
    let doc = Document {
        json: to_json(&report)?,
        rows,
    };
    match &report.error {
        Some(e) => Err(Failure::Partial {
            message: format!("{} sweep stopped: {e}", id.name()),
            doc,
        }),
        None => Ok(doc),
    }
}

/// Quantities tabulated by `sweep`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepQuantity {
    /// H^∞_α bounds over α.
    Bound,
    /// π / sin(2π/p) over p.
    ApNorm,
    /// ‖T_t‖ over t at fixed --alpha.
    Tnorm,
}

/// Largest number of rows a single sweep may produce.
const MAX_ROWS: usize = 1_000_000;

fn range(from: f64, to: f64, step: f64) -> Result<Vec<f64>, Failure> {
    if !(from.is_finite() && to.is_finite() && step.is_finite()) || step <= 0.0 || to < from {
        return usage(format!("sweep range needs finite --from <= --to and --step > 0, got {from}..{to} step {step}"));
    }
    // tolerate the last point landing a hair past `to` through rounding
    let n = ((to - from) / step + 1e-9).floor() as usize + 1;
    if n > MAX_ROWS {
        return usage(format!("sweep range has {n} rows, more than {MAX_ROWS}"));
    }
    // round to 12 decimals so 0.1 steps print as 0.3, not 0.30000000000000004
    Ok((0..n)
        .map(|i| ((from + step * i as f64) * 1e12).round() / 1e12)
        .collect())
}

fn sweep(
    quantity: SweepQuantity,
    from: f64,
    to: f64,
    step: f64,
    opts: &Options,
    cfg: &QuadratureConfig,
) -> Result<Document, Failure> {
    let values = range(from, to, step)?;
    let alpha = match quantity {
        SweepQuantity::Tnorm => Some(require(opts.alpha, "alpha", "sweep tnorm")?),
        _ => None,
    };
    let rows = exec().map_slice(&values, |&x| {
        let (key, result) = match quantity {
            SweepQuantity::Bound => ("alpha", bound_row(Space::Hinf, x, cfg)),
            SweepQuantity::ApNorm => (
                "p",
                bergman_norm_value(x).map(|v| json!({"p": x, "norm": v})),
            ),
            SweepQuantity::Tnorm => (
                "t",
                tt_norm(alpha.unwrap_or(f64::NAN), x)
                    .and_then(|b| serde_json::to_value(b).map_err(|e| Error::Internal(e.to_string()))),
            ),
        };
        match result {
            Ok(mut v) => {
                v["error"] = Value::Null;
                v
            }
            Err(e) => json!({ key: x, "error": e.to_string() }),
        }
    });
    let failed = rows.iter().filter(|r| !r["error"].is_null()).count();
    let name = quantity.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    Ok(Document {
        json: json!({
            "sweep": name,
            "from": from,
            "to": to,
            "step": step,
            "rows": rows.clone(),
            "failed_rows": failed,
        }),
        rows,
    })
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<Value, Failure> {
    serde_json::to_value(v).map_err(|e| Failure::Library(Error::Internal(e.to_string())))
}

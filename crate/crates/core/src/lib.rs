//! Numerics for the Hilbert matrix operator on analytic function spaces.
//!
//! The operator `H` is available in two forms: acting on Taylor coefficients
//! through the Hilbert matrix `1/(n+k+1)`, and as the average
//! `H f = ∫₀¹ T_t f dt` of the weighted composition operators
//! `T_t f(z) = ω_t(z) f(φ_t(z))`. On top of that the crate evaluates the
//! closed-form norms of `T_t` on the Korenblum space `H^∞_α`, the resulting
//! lower and upper bounds for `‖H‖`, and sweeps the Beta-function and
//! `F_p` inequalities used for the Bergman space `A^p`.
//!
//! Grid sweeps run on rayon when the `parallel` feature is enabled (the
//! default); see [`exec::Exec`].

pub mod error;
pub mod exec;
pub mod function_space;
pub mod hilbert_op;
pub mod lemma_verify;
pub mod quadrature;
pub mod specfun;
pub mod wco_norms;

pub use error::{Error, Result};
pub use exec::Exec;
pub use quadrature::{IntegralResult, QuadratureConfig, QuadratureMethod};

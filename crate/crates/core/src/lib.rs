//! Exact and approximate evaluation of `phi`, the smooth function supported
//! on `[-1, 1]` with `phi(0) = 1` and `phi'(t) = 2 (phi(2t+1) - phi(2t-1))`.
//!
//! * [`dyadic_eval`]: exact rational values of `phi`, `theta` and all derivatives at dyadic points.
//! * [`coefficients`]: the exact sequences `c_k`, `F_k`, `d_n`, `G_n`, moments and `phi(1 - 2^{-n})`.
//! * [`approximants`]: the polynomials `p_n` and the step functions converging to `phi`.
//! * [`spectral`]: floating point Fourier transform and cosine series.
//! * [`stochastic`]: the Monte Carlo oracle.
//! * [`cli`] and [`selftest`]: the command line front end and its acceptance replay.

pub mod approximants;
pub mod cli;
pub mod coefficients;
pub mod dyadic_eval;
pub mod error;
pub mod numeric;
pub mod selftest;
pub mod spectral;
pub mod stochastic;

pub use coefficients::CoefficientTable;
pub use dyadic_eval::{phi_derivative, phi_exact, taylor_at, theta_exact, DyadicEvaluator, TaylorPolynomial};
pub use error::{Error, Result};
pub use numeric::{BigRational, Dyadic};

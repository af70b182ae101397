//! Normalizing constants for the Gumbel limit of ESN sample maxima.
//!
//! # Background
//!
//! The maximum M_n of n iid ESN(α, τ) draws, rescaled as (M_n − b_n)/a_n,
//! converges in law to the standard Gumbel distribution G₀(x) = exp(−e^{−x}).
//! Two systems of constants realize the convergence:
//!
//! * **Exact** (a_n, b_n): b_n solves the defining identity
//!   n·S(b_n) = 1 — equivalently ln S(b_n) = −ln n — and a_n = f(b_n)
//!   with f the auxiliary scale of the Von Mises representation
//!   (1/x for α ≥ 0, 1/(ᾱ²x + ατ) for α < 0).
//! * **Closed-form** (α_n, β_n): explicit expressions in ln n through
//!   ℓ_{n,α} = √(2 ln n (1+α²)), asymptotically equivalent to the exact
//!   pair but with an O(ln ln n / ln n) centering bias.
//!
//! # Implementation
//!
//! n never materializes: the sample size enters only as [`LogSampleSize`]
//! (ln n), so "n = e^{10⁶}" is as computable as n = 100. The b_n solver
//! works on ln S directly — bracketed bisection seeded by the closed form,
//! then secant refinement at working precision — because S(b_n) = 1/n
//! underflows every fixed-exponent format long before ln n reaches 10³.
//!
//! # Key Assumptions and Limitations
//!
//! * ln n > 1 throughout, so ln ln n is defined and positive.
//! * α < 0 requires the tail-regime conditions (ᾱ² + ατ > 0 and
//!   α + τ < 0); outside them the maximum is not Gumbel-attracted and
//!   b_n does not exist in the intended sense.
//! * The closed-form pair is a large-n asymptote: at ln n ≲ 5 its
//!   centering error is visible (order 0.1), which is exactly why the
//!   solver only uses it as a bracket seed.

pub mod constants;
pub mod gumbel;

pub use constants::{closed_form_constants, solve_bn, LogSampleSize, NormalizingConstants};
pub use gumbel::{gumbel_cdf, gumbel_cdf_big, max_cdf, GumbelValue};

//! Convergence diagnostics for extended skew-normal maxima.
//!
//! # Background
//!
//! Normalized maxima of extended skew-normal samples converge to the Gumbel
//! law at the glacial rate `1/ln n` — among the slowest in classical extreme
//! value theory. This crate measures that approach along three complementary
//! routes:
//!
//! * [`limits`] — the elementary limit functions κ(x) and ω(x) that govern
//!   the first- and second-order behaviour of the log-scale gap;
//! * [`rates`] — extended-precision evaluation of the gap function
//!   `h = n·lnΦ(a_n·x + b_n) + e^{−x}`, its normalized forms `b²h` and
//!   `b²(b²h − κ)`, the distribution-scale gap `Φⁿ − G₀`, and the
//!   `(ln ln n)²/ln n` convergence rate of the closed-form constants;
//! * [`maxima`] — seeded Monte Carlo block-maxima experiments with exact or
//!   closed-form normalization, scored by KS distance to the Gumbel limit.
//!
//! # Implementation
//!
//! The rate computations subtract quantities agreeing to many significant
//! digits and then amplify the residue by `b_n⁴`; they run on MPFR floats
//! with quadrature targets tied to the context's digit count, and every
//! public evaluator re-runs itself with ten extra digits to verify its own
//! trustworthiness (the cancellation monitor). The Monte Carlo layer, by
//! contrast, is deliberately plain `f64` with schedule-independent seeding:
//! its resolution is statistical, not arithmetical.
//!
//! # Key Assumptions and Limitations
//!
//! * Negative-slant parameters must satisfy the tail regime `ᾱ² + ατ > 0`,
//!   `α + τ < 0`; every evaluator rejects violations up front.
//! * Rate work requires `ctx.digits ≥ 30`; the default 34-digit context
//!   covers `ln n = 10¹¹` comfortably, and the monitor refuses once the
//!   b⁴-amplified noise crosses its 10⁻⁶ line (by `ln n ~ 10¹⁵` at the
//!   latest).
//! * Experiments are capped at 10⁹ total draws per call.

pub mod limits;
pub mod maxima;
pub mod rates;

pub use limits::{kappa, omega};
pub use maxima::{run_maxima_experiment, MaximaExperiment, Normalization, DRAW_BUDGET};
pub use rates::{closed_form_rate_check, h_function, rate_profile, RateProfile, MIN_DIGITS};

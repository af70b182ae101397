//! The Gumbel limit law and the exact finite-n maximum distribution.
//!
//! # Background
//!
//! The normalized maximum (M_n − b_n)/a_n has exact distribution
//! Φ_{α,τ}ⁿ(a_n x + b_n) and limit G₀(x) = exp(−e^{−x}). The gap between
//! the two is the whole subject of convergence-rate analysis, so both
//! sides need to be computable far beyond f64: Φⁿ = exp(n·ln Φ) with
//! n = e^{ln n} up to e^{10⁶}.
//!
//! # Implementation
//!
//! ln Φ(y) is assembled as ln(1 − S(y)) = ln_1p(−e^{ln S(y)}) from the
//! log-survival kernel, never as ln(cdf): near the upper tail S is the
//! small quantity and 1 − S costs nothing, while cdf-side evaluation
//! would square the cancellation. The product n·ln Φ is formed in MPFR,
//! whose exponent range swallows e^{10⁶} without rescaling tricks.
//!
//! # Key Assumptions and Limitations
//!
//! * n·ln Φ inherits the survival quadrature's *relative* accuracy; the
//!   absolute error of Φⁿ therefore scales with e^{−x}, which is what
//!   rate studies need (they divide it back out).
//! * [`gumbel_cdf`] is plain f64 — the limit law itself never needs
//!   extended precision; [`gumbel_cdf_big`] exists for the subtractions
//!   Φⁿ − G₀ where the difference, not the values, is the signal.

use esn_core::{EsnError, EsnParams, PrecisionContext};
use rug::Float;

use crate::constants::NormalizingConstants;

/// One point of the standard Gumbel distribution function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GumbelValue {
    /// Evaluation point.
    pub x: f64,
    /// G₀(x) = exp(−e^{−x}), in (0, 1) for finite x.
    pub g0: f64,
}

/// G₀(x) = exp(−e^{−x}).
pub fn gumbel_cdf(x: f64) -> GumbelValue {
    GumbelValue { x, g0: (-(-x).exp()).exp() }
}

/// G₀(x) at `prec` bits, for difference computations against Φⁿ.
pub fn gumbel_cdf_big(x: f64, prec: u32) -> Float {
    let mut g = Float::with_val(prec, -x);
    g.exp_mut();
    g = -g;
    g.exp_mut();
    g
}

/// Exact distribution of the normalized maximum:
/// Φ_{α,τ}ⁿ(s·x + m) = exp(e^{ln n}·ln Φ(s·x + m)), with (s, m) the exact
/// pair (a_n, b_n) or, when `use_closed_form` is set, (α_n, β_n).
///
/// # Errors
///
/// Propagates survival-evaluation errors ([`EsnError::Domain`],
/// [`EsnError::Numeric`], [`EsnError::Regime`]).
pub fn max_cdf(
    params: &EsnParams,
    constants: &NormalizingConstants,
    x: f64,
    use_closed_form: bool,
    ctx: &PrecisionContext,
) -> Result<Float, EsnError> {
    ctx.validate()?;
    if !x.is_finite() {
        return Err(EsnError::domain(
            "max_cdf",
            format!("evaluation point must be finite, got {x}"),
        ));
    }
    let prec = ctx.prec_bits();
    let arg = if use_closed_form {
        let mut v = ctx.big(constants.alpha_n);
        v *= x;
        v += constants.beta_n;
        v
    } else {
        let mut v = Float::with_val(prec, &constants.a_n * x);
        v += &constants.b_n;
        v
    };
    let mut s = esn_core::log_survival_big(params, &arg, ctx)?;
    s.exp_mut();
    s = -s;
    // ln Φ = ln(1 − S); ln_1p keeps every digit while S is small and
    // degrades gracefully (with S, not with 1 − S) when it is not.
    let mut out = s.ln_1p();
    let mut n = ctx.big(constants.ln_n);
    n.exp_mut();
    out *= &n;
    out.exp_mut();
    Ok(out)
}

//! Exact distribution functions for the extended skew-normal law.
//!
//! # Background
//!
//! The extended skew-normal density with slant `α` and extension `τ` is
//!
//! ```text
//! f(x; α, τ) = φ(x) · Φ(αx + τ) / Φ(τ/ᾱ),      ᾱ = √(1 + α²),
//! ```
//!
//! and neither its CDF nor its survival function has a closed form. The
//! survival function is the quantity everything downstream leans on — the
//! exact normalizing constants solve `n·S(bₙ) = 1`, and the convergence-rate
//! diagnostics evaluate `Φⁿ = exp(n·ln(1 − S))` at astronomically large `n` —
//! so it must stay accurate in relative terms arbitrarily deep into the tail,
//! where its magnitude drops like `exp(−ᾱ²x²/2)` (for `α < 0`) or
//! `exp(−x²/2)` (otherwise).
//!
//! # Implementation
//!
//! For `x ≥ 0` the survival function is integrated directly. Substituting
//! `t = x + s` in `S(x) = ∫ₓ^∞ f(t) dt` pulls the magnitude out front:
//!
//! ```text
//! S(x) = φ(x)/Φ(τ/ᾱ) · ∫₀^∞ exp(−xs − s²/2) · Φ(x_ατ + αs) ds,
//! ```
//!
//! with `x_ατ = αx + τ`. The integrand is O(1) at the origin and decays at a
//! known rate, so panel placement and stopping rules can be chosen *a priori*:
//!
//! * When `α < 0` and `x_ατ ≤ 0`, the Φ factor itself decays like a Gaussian
//!   and would drive the integrand many orders of magnitude below the
//!   prefactor. The integrand is rescaled by `1/Φ(x_ατ)` (the factor moves
//!   into the log prefactor) so the quadrature again sees an O(1) function,
//!   now decaying at rate `m = ᾱ²x + ατ`. Without this rescaling a relative
//!   stopping rule is unreachable and an absolute one silently discards the
//!   answer's leading digits.
//! * Otherwise the integrand is used as is, decaying at rate `x` (plus the
//!   Gaussian term). A bump (`α > 0`, `x_ατ < 0`: Φ switches on near
//!   `s* = −x_ατ/α`) or a roll-off (`α < 0`, `x_ατ > 0`: Φ dies near
//!   `s₀ = x_ατ/|α|`) gets dedicated breakpoints so the adaptive pass starts
//!   from panels that already resolve the feature.
//!
//! Truncation at `S₀` is certified by `exp(−λS₀) ≤ 10^{−(digits+6)}` together
//! with a Gaussian cutoff `S₀ ≥ √(2·D + x_ατ²·[bump])`, both relative to the
//! integral's own scale. The adaptive driver ([`crate::quadrature`]) then
//! bisects worst panels under a *relative* stopping rule.
//!
//! Everything else reduces to this one kernel through the mirror identity
//! `f(−x; −α, τ) = f(x; α, τ)`, which gives `F(x; α, τ) = S(−x; −α, τ)`:
//!
//! * `cdf(x ≤ 0)` and `survival(x ≥ 0)` are direct tail integrals (small,
//!   fully accurate in relative terms);
//! * `cdf(x > 0)` and `survival(x < 0)` are `1 − (small tail)`, where the
//!   subtraction is harmless because the result is ≥ 1/2.
//!
//! The quantile function inverts the CDF with a bracketing, safeguarded
//! Newton iteration; extreme probabilities (`p < 10⁻¹⁰` or `1−p < 10⁻¹⁰`)
//! are solved in log space against `log_survival` so the solver sees a
//! well-scaled, nearly linear objective (`ln S` is asymptotically quadratic
//! in `x`, never flat).
//!
//! # Key Assumptions and Limitations
//!
//! * The law is standardized: location 0, scale 1. Affine transforms are the
//!   caller's business.
//! * All functions are defined for every finite `(α, τ)`; the `α < 0`
//!   tail-regime condition gates only the asymptotic results in the dependent
//!   crates, never exact evaluation here.
//! * `log_survival` switches to a three-term asymptotic series for `α ≥ 0`
//!   once the series' estimated relative error `3x⁻⁴` drops below the
//!   quadrature's relative tolerance (x ≈ 1316 at the default 10⁻¹²). Below
//!   that point, and for all `α < 0`, the extended-precision quadrature is
//!   used directly — its exponent range does not underflow at any `x` of
//!   practical interest, so the switch is a cost optimization, not a rescue.
//! * Working precision, tolerances, and the subdivision budget come from the
//!   [`PrecisionContext`]; results are deterministic for a fixed context.

use rug::Float;

use crate::error::EsnError;
use crate::normal;
use crate::params::EsnParams;
use crate::precision::PrecisionContext;
use crate::quadrature;

/// Reject non-finite parameters (the struct fields are public, so a caller
/// can bypass [`EsnParams::new`]).
fn ensure_params(op: &'static str, params: &EsnParams) -> Result<(), EsnError> {
    if params.alpha.is_finite() && params.tau.is_finite() {
        Ok(())
    } else {
        Err(EsnError::domain(
            op,
            format!("parameters must be finite, got alpha={}, tau={}", params.alpha, params.tau),
        ))
    }
}

/// Reject a non-finite evaluation point.
fn ensure_x(op: &'static str, x: f64) -> Result<(), EsnError> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(EsnError::domain(op, format!("evaluation point must be finite, got x={x}")))
    }
}

/// ln f(x) = ln φ(x) + ln Φ(αx + τ) − ln Φ(τ/ᾱ), at working precision.
fn ln_pdf_at(params: &EsnParams, x: &Float, ctx: &PrecisionContext) -> Float {
    let prec = ctx.prec_bits();
    let xb = Float::with_val(prec, x);
    let mut out = normal::ln_phi(&xb);
    out += normal::ln_big_phi(&params.x_at(&xb));
    out -= normal::ln_big_phi(&params.tau_over_bar(ctx));
    out
}

/// The two factors of the tail integral `S(x) = exp(ln_prefactor) · integral`
/// for `x ≥ 0`, kept separate so `log_survival` can recombine them without
/// ever forming a denormal-range product.
struct TailPieces {
    /// `ln φ(x) − ln Φ(τ/ᾱ)`, plus `ln Φ(x_ατ)` when the integrand was
    /// rescaled by that factor.
    ln_prefactor: Float,
    /// The O(1)-scaled integral `∫₀^∞ e^{−xs−s²/2} R(s) ds`.
    integral: Float,
}

/// Panel breakpoints for the scaled tail integral, chosen in plain doubles
/// (placement only needs the decade, not the digit) from the decay rate `λ`,
/// the precision target, and any interior feature of the Φ factor.
fn tail_breakpoints(params: &EsnParams, x: f64, rescaled: bool, digits: u32) -> Vec<f64> {
    let a = params.alpha;
    let xa = a * x + params.tau;
    /// Decades of certified truncation beyond the requested digits.
    const GUARD_DECADES: f64 = 6.0;
    let d_decades = (f64::from(digits) + GUARD_DECADES) * std::f64::consts::LN_10;
    let lambda = if rescaled { params.alpha_bar_sq() * x + a * params.tau } else { x };
    let w = 1.0 / lambda.max(1.0);
    // e^{−S₀²/2} must be small relative to the integral's own scale, which a
    // pre-bump Φ factor depresses by e^{−x_ατ²/2}.
    let gauss_target =
        if a >= 0.0 && xa < 0.0 { 2.0 * d_decades + xa * xa } else { 2.0 * d_decades };
    let mut s_end = (80.0 * w).max(gauss_target.sqrt()).max(d_decades / lambda.max(1.0));
    let mut pts = vec![0.0, w, 5.0 * w, 20.0 * w, 80.0 * w];
    if a > 0.0 && xa < 0.0 {
        // Φ(x_ατ + αs) switches on around s* = −x_ατ/α; resolve the bump and
        // integrate far enough past it.
        let s_star = -xa / a;
        if s_star <= 4.0 * s_end {
            pts.extend([0.5 * s_star, s_star, 2.0 * s_star]);
            s_end = s_end.max(2.0 * s_star + gauss_target.sqrt().max(d_decades / x.max(1.0)));
        }
    }
    if a < 0.0 && xa > 0.0 {
        // Φ rolls off around s₀ = x_ατ/|α|.
        let s0 = xa / (-a);
        if s0 < s_end {
            pts.extend([s0, (2.0 * s0).min(s_end)]);
        }
    }
    pts.retain(|&s| s < s_end);
    pts.push(s_end);
    pts.sort_by(|p, q| p.partial_cmp(q).unwrap());
    pts.dedup_by(|p, q| (*p - *q).abs() <= 1e-12 * s_end);
    pts
}

/// Evaluate the tail integral and its log prefactor for `x ≥ 0`.
fn upper_tail_pieces(
    params: &EsnParams,
    x: &Float,
    ctx: &PrecisionContext,
) -> Result<TailPieces, EsnError> {
    let prec = ctx.prec_bits();
    let xb = Float::with_val(prec, x);
    let xf = xb.to_f64();
    debug_assert!(xf >= 0.0);

    let a = params.alpha;
    let xa = params.x_at(&xb);
    let xa_f = xa.to_f64();
    let rescaled = a < 0.0 && xa_f <= 0.0;

    let breaks: Vec<Float> = tail_breakpoints(params, xf, rescaled, ctx.digits)
        .into_iter()
        .map(|s| ctx.big(s))
        .collect();

    /// −x·s − s²/2, the substituted Gaussian exponent.
    fn exponent(xb: &Float, s: &Float) -> Float {
        let mut e = s.clone();
        e.square_mut();
        e /= -2;
        let mut xs = s.clone();
        xs *= xb;
        e -= xs;
        e
    }

    let outcome = if rescaled {
        let ln_phi_xa = normal::ln_big_phi(&xa);
        // R(s) = Φ(x_ατ + αs)/Φ(x_ατ) assembled entirely in log space: both
        // factors shrink like exp(−(x_ατ+αs)²/2) and their ratio is O(1).
        let mut f = |s: &Float| -> Float {
            let mut az = s.clone();
            az *= a;
            az += &xa;
            let mut e = exponent(&xb, s);
            e += normal::ln_big_phi(&az);
            e -= &ln_phi_xa;
            e.exp_mut();
            e
        };
        quadrature::integrate(&mut f, &breaks, ctx)?
    } else {
        let mut f = |s: &Float| -> Float {
            let mut az = s.clone();
            az *= a;
            az += &xa;
            let mut e = exponent(&xb, s);
            e.exp_mut();
            e * normal::big_phi(&az)
        };
        quadrature::integrate(&mut f, &breaks, ctx)?
    };

    let mut ln_prefactor = normal::ln_phi(&xb);
    ln_prefactor -= normal::ln_big_phi(&params.tau_over_bar(ctx));
    if rescaled {
        ln_prefactor += normal::ln_big_phi(&xa);
    }
    Ok(TailPieces { ln_prefactor, integral: outcome.value })
}

/// Survival at a working-precision point (callers dispatch on sign here).
fn survival_at(params: &EsnParams, x: &Float, ctx: &PrecisionContext) -> Result<Float, EsnError> {
    let prec = ctx.prec_bits();
    if *x >= 0 {
        let pieces = upper_tail_pieces(params, x, ctx)?;
        if !(pieces.integral > 0) {
            return Err(EsnError::numeric(
                "survival",
                format!("tail integral collapsed to a nonpositive value at x={}", x.to_f64()),
            ));
        }
        let mut s = pieces.ln_prefactor;
        s.exp_mut();
        s *= &pieces.integral;
        Ok(s)
    } else {
        // S(x) = 1 − F(x) = 1 − S(−x; −α, τ); the subtracted tail is < 1/2,
        // so no leading digits cancel.
        let mirrored = params.mirrored();
        let mx = Float::with_val(prec, -x.clone());
        let tail = survival_at(&mirrored, &mx, ctx)?;
        let mut s = Float::with_val(prec, 1u32);
        s -= &tail;
        Ok(s)
    }
}

/// CDF at a working-precision point: `F(x; α, τ) = S(−x; −α, τ)`.
fn cdf_at(params: &EsnParams, x: &Float, ctx: &PrecisionContext) -> Result<Float, EsnError> {
    let prec = ctx.prec_bits();
    let mirrored = params.mirrored();
    let mx = Float::with_val(prec, -x.clone());
    survival_at(&mirrored, &mx, ctx)
}

/// ln S(x) for `x ≥ 0` by the asymptotic series, valid for `α ≥ 0` once
/// `3x⁻⁴` is below the quadrature's relative tolerance:
///
/// ```text
/// ln S(x) ≈ ln φ(x) + ln Φ(x_ατ) − ln x − ln Φ(τ/ᾱ) + ln(1 − x⁻² + 3x⁻⁴).
/// ```
///
/// The bracketed series is the classical Gaussian tail expansion; for α > 0
/// the Φ(x_ατ) factor, kept exact here, converges to 1 so fast that its own
/// expansion error is below any tolerance long before the switchover.
fn log_survival_series(params: &EsnParams, x: &Float, ctx: &PrecisionContext) -> Float {
    let prec = ctx.prec_bits();
    let xb = Float::with_val(prec, x);
    let mut inv2 = xb.clone();
    inv2.square_mut();
    inv2.recip_mut();
    // correction = −x⁻² + 3x⁻⁴
    let mut correction = inv2.clone();
    correction.square_mut();
    correction *= 3u32;
    correction -= &inv2;
    let mut out = normal::ln_phi(&xb);
    out += normal::ln_big_phi(&params.x_at(&xb));
    out -= normal::ln_big_phi(&params.tau_over_bar(ctx));
    out -= xb.ln();
    out += correction.ln_1p();
    out
}

/// ln S at a working-precision point.
fn log_survival_at(
    params: &EsnParams,
    x: &Float,
    ctx: &PrecisionContext,
) -> Result<Float, EsnError> {
    if *x >= 0 {
        let xf = x.to_f64();
        // Series switchover: estimated relative error of the three-term
        // expansion is its last retained term, 3x⁻⁴.
        if params.alpha >= 0.0 && xf > 2.0 && 3.0 / xf.powi(4) < ctx.quad_rel_tol {
            return Ok(log_survival_series(params, x, ctx));
        }
        let pieces = upper_tail_pieces(params, x, ctx)?;
        if !(pieces.integral > 0) {
            return Err(EsnError::numeric(
                "log_survival",
                format!("tail integral collapsed to a nonpositive value at x={}", x.to_f64()),
            ));
        }
        let mut out = pieces.ln_prefactor;
        out += pieces.integral.ln();
        Ok(out)
    } else {
        Ok(survival_at(params, x, ctx)?.ln())
    }
}

/// ESN density `f(x) = φ(x)·Φ(αx+τ)/Φ(τ/ᾱ)`.
///
/// Strictly positive for every finite `x`; assembled in log space so deep
/// arguments of the Φ factor cannot underflow prematurely.
///
/// # Errors
///
/// [`EsnError::Domain`] for non-finite `x` or parameters.
pub fn pdf(params: &EsnParams, x: f64, ctx: &PrecisionContext) -> Result<Float, EsnError> {
    ensure_params("pdf", params)?;
    ensure_x("pdf", x)?;
    ctx.validate()?;
    let mut out = ln_pdf_at(params, &ctx.big(x), ctx);
    out.exp_mut();
    Ok(out)
}

/// ESN distribution function `F(x) = ∫_{−∞}^x f`.
///
/// Computed through the mirror identity `F(x; α, τ) = S(−x; −α, τ)`: for
/// `x ≤ 0` this is a direct (small) tail integral, for `x > 0` it is one
/// minus a tail smaller than 1/2, so no cancellation occurs on either side.
///
/// # Errors
///
/// [`EsnError::Domain`] for non-finite inputs; [`EsnError::Numeric`] if the
/// adaptive quadrature exhausts its subdivision budget.
pub fn cdf(params: &EsnParams, x: f64, ctx: &PrecisionContext) -> Result<Float, EsnError> {
    ensure_params("cdf", params)?;
    ensure_x("cdf", x)?;
    ctx.validate()?;
    cdf_at(params, &ctx.big(x), ctx)
}

/// ESN survival function `S(x) = 1 − F(x) = ∫_x^∞ f`.
///
/// For `x ≥ 0` — the regime where `S` is small and every leading digit
/// matters — this is a direct quadrature of the tail, never `1 − cdf`; the
/// prefactor `φ(x)/Φ(τ/ᾱ)` carries the magnitude and the quadrature only
/// resolves an O(1)-scaled shape factor, so the result stays fully accurate
/// in relative terms arbitrarily deep into the tail.
///
/// # Errors
///
/// As [`cdf`].
pub fn survival(params: &EsnParams, x: f64, ctx: &PrecisionContext) -> Result<Float, EsnError> {
    ensure_params("survival", params)?;
    ensure_x("survival", x)?;
    ctx.validate()?;
    survival_at(params, &ctx.big(x), ctx)
}

/// `ln S(x)`, exact in the sense of the survival quadrature, with an
/// asymptotic-series fast path deep in the right tail (see the module docs).
///
/// This is the function that makes `n·S(bₙ) = 1` and `Φⁿ = exp(n·ln(1−S))`
/// computable at `ln n` in the thousands, where `S` itself is far below any
/// fixed-exponent range.
///
/// # Errors
///
/// As [`cdf`].
pub fn log_survival(
    params: &EsnParams,
    x: f64,
    ctx: &PrecisionContext,
) -> Result<Float, EsnError> {
    ensure_params("log_survival", params)?;
    ensure_x("log_survival", x)?;
    ctx.validate()?;
    log_survival_at(params, &ctx.big(x), ctx)
}

/// [`log_survival`] at a working-precision evaluation point.
///
/// Root solves for the exact normalizing constant bₙ need the evaluation
/// point itself carried at working precision: near ln n = 10⁶ the
/// downstream convergence analysis multiplies residuals by bₙ⁴ ≈ 10¹³, so
/// an argument rounded through f64 (relative 10⁻¹⁶) would contaminate
/// every digit of the second-order terms.
///
/// # Errors
///
/// As [`cdf`]; additionally [`EsnError::Domain`] for a non-finite point.
pub fn log_survival_big(
    params: &EsnParams,
    x: &Float,
    ctx: &PrecisionContext,
) -> Result<Float, EsnError> {
    ensure_params("log_survival", params)?;
    ctx.validate()?;
    if !x.is_finite() {
        return Err(EsnError::domain(
            "log_survival",
            format!("evaluation point must be finite, got {x}"),
        ));
    }
    log_survival_at(params, x, ctx)
}

/// Mills ratio `S(x)/f(x)` of the ESN law, evaluated as
/// `exp(ln S − ln f)` so numerator and denominator can be astronomically
/// small without the quotient losing a digit.
///
/// # Errors
///
/// As [`cdf`].
pub fn mills_ratio(params: &EsnParams, x: f64, ctx: &PrecisionContext) -> Result<Float, EsnError> {
    ensure_params("mills_ratio", params)?;
    ensure_x("mills_ratio", x)?;
    ctx.validate()?;
    let xb = ctx.big(x);
    let mut out = log_survival_at(params, &xb, ctx)?;
    out -= ln_pdf_at(params, &xb, ctx);
    out.exp_mut();
    Ok(out)
}

/// Which objective the quantile solver inverts; extreme probabilities are
/// solved in log space where the objective is well-scaled and nearly linear.
enum QuantileMode {
    /// Solve `cdf(x) − p = 0` directly.
    Central,
    /// Solve `ln F(x) − ln p = 0` (left tail, `p < 10⁻¹⁰`).
    LowerLog,
    /// Solve `ln(1−p) − ln S(x) = 0` (right tail, `1−p < 10⁻¹⁰`).
    UpperLog,
}

/// Quantile function: the root of `cdf(x) = p`.
///
/// Bracketing (geometric expansion, then bisection to a unit-scale interval)
/// followed by a safeguarded Newton iteration whose derivative is the exact
/// density; every Newton step is forced back inside the live bracket, so the
/// iteration cannot escape. The result satisfies
/// `|cdf(result) − p| ≤ 10·quad_abs_tol`, which is verified before returning.
///
/// # Errors
///
/// [`EsnError::Domain`] unless `p ∈ (0,1)`; [`EsnError::Numeric`] if the
/// bracket search or the iteration fails to converge (not observed for
/// finite parameters; the guard exists so failure is loud, not silent).
pub fn quantile(params: &EsnParams, p: f64, ctx: &PrecisionContext) -> Result<Float, EsnError> {
    ensure_params("quantile", params)?;
    ctx.validate()?;
    if !(p.is_finite() && 0.0 < p && p < 1.0) {
        return Err(EsnError::domain(
            "quantile",
            format!("probability must lie strictly inside (0, 1), got p={p}"),
        ));
    }
    let prec = ctx.prec_bits();
    let mode = if p < 1e-10 {
        QuantileMode::LowerLog
    } else if 1.0 - p < 1e-10 {
        QuantileMode::UpperLog
    } else {
        QuantileMode::Central
    };
    // Log-space targets. f64 ln is exact enough here: the absolute error it
    // leaves in the root is ~10⁻¹⁶·|ln p| · (d ln F/dx)⁻¹, far below the
    // post-condition's tolerance in the only modes that use them.
    let ln_p = p.ln();
    let ln_q = (-p).ln_1p();
    let mirrored = params.mirrored();

    // g is strictly increasing in x in every mode; step = g/g' is the raw
    // Newton step. The density is closed-form, so each iteration costs one
    // quadrature (inside cdf or log_survival), not two.
    let eval = |x: &Float| -> Result<(Float, Float), EsnError> {
        let ln_f = ln_pdf_at(params, x, ctx);
        match mode {
            QuantileMode::Central => {
                let mut g = cdf_at(params, x, ctx)?;
                g -= p;
                let mut step = g.clone();
                let mut inv_f = ln_f;
                inv_f = -inv_f;
                inv_f.exp_mut();
                step *= inv_f;
                Ok((g, step))
            }
            QuantileMode::LowerLog => {
                let mx = Float::with_val(prec, -x.clone());
                let ln_cdf = log_survival_at(&mirrored, &mx, ctx)?;
                let mut g = ln_cdf.clone();
                g -= ln_p;
                // g' = f/F  ⇒  step = g·exp(ln F − ln f)
                let mut ratio = ln_cdf;
                ratio -= &ln_f;
                ratio.exp_mut();
                let mut step = g.clone();
                step *= ratio;
                Ok((g, step))
            }
            QuantileMode::UpperLog => {
                let ln_s = log_survival_at(params, x, ctx)?;
                let mut g = Float::with_val(prec, ln_q);
                g -= &ln_s;
                // g' = f/S  ⇒  step = g·exp(ln S − ln f)
                let mut ratio = ln_s;
                ratio -= &ln_f;
                ratio.exp_mut();
                let mut step = g.clone();
                step *= ratio;
                Ok((g, step))
            }
        }
    };

    // Rough normal-scale start, then geometric bracket expansion. The clamp
    // only affects the starting guess; the expansion recovers any offset.
    let start = crate::fast::inverse_normal_cdf(p.clamp(1e-300, 1.0 - 1e-16));
    let mut lo = ctx.big(start - 0.5);
    let mut hi = ctx.big(start + 0.5);
    let mut width = 1.0f64;
    let mut expanded = 0u32;
    while eval(&lo)?.0 >= 0 {
        lo -= width;
        width *= 2.0;
        expanded += 1;
        if expanded > 64 {
            return Err(EsnError::numeric(
                "quantile",
                format!("failed to bracket the root below: no x with cdf(x) < p={p}"),
            ));
        }
    }
    width = 1.0;
    expanded = 0;
    while eval(&hi)?.0 <= 0 {
        hi += width;
        width *= 2.0;
        expanded += 1;
        if expanded > 64 {
            return Err(EsnError::numeric(
                "quantile",
                format!("failed to bracket the root above: no x with cdf(x) > p={p}"),
            ));
        }
    }

    // Bisect to a unit-scale interval so Newton starts in its quadratic
    // basin (g is monotone and smooth; from width 1/4 it converges in a
    // handful of steps).
    while {
        let mut w = hi.clone();
        w -= &lo;
        w > 0.25
    } {
        let mut mid = lo.clone();
        mid += &hi;
        mid /= 2u32;
        if eval(&mid)?.0 < 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    // Safeguarded Newton: keep the bracket live, fall back to bisection
    // whenever the raw step leaves it, stop on an x-scale increment at
    // (almost) working precision.
    let mut x = Float::with_val(prec, &lo + &hi);
    x /= 2u32;
    let mut x_tol = Float::with_val(prec, 1u32);
    x_tol >>= prec.saturating_sub(16);
    // Newton converges in a handful of steps; the cap is sized so that even
    // a worst-case pure-bisection fallback (halving from width 1/4) crosses
    // the x-tolerance before it runs out.
    let max_iter = 48 + prec;
    for _ in 0..max_iter {
        let (g, step) = eval(&x)?;
        if g < 0 {
            lo = x.clone();
        } else {
            hi = x.clone();
        }
        let mut next = x.clone();
        next -= &step;
        if !(next > lo && next < hi) {
            next = Float::with_val(prec, &lo + &hi);
            next /= 2u32;
        }
        let mut delta = next.clone();
        delta -= &x;
        delta.abs_mut();
        x = next;
        let mut thresh = x.clone();
        thresh.abs_mut();
        thresh += 1u32;
        thresh *= &x_tol;
        if delta <= thresh {
            // Post-condition check: the root of the *computed* CDF must also
            // satisfy the advertised tolerance against p.
            let mut residual = cdf_at(params, &x, ctx)?;
            residual -= p;
            residual.abs_mut();
            if residual > 10.0 * ctx.quad_abs_tol {
                return Err(EsnError::numeric(
                    "quantile",
                    format!(
                        "converged point fails the residual check: |cdf(q) − p| = {:.3e} \
                         exceeds {:.3e}",
                        residual.to_f64(),
                        10.0 * ctx.quad_abs_tol
                    ),
                ));
            }
            return Ok(x);
        }
    }
    Err(EsnError::numeric(
        "quantile",
        format!("Newton iteration did not reach the x-tolerance within {max_iter} steps for p={p}"),
    ))
}

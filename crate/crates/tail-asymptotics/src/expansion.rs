//! High-order tail expansions of the ESN survival function.
//!
//! # Background
//!
//! Refining the Von Mises representation, the survival function admits
//! explicit expansions with algebraic correction factors. Writing
//! x_ατ = αx + τ, τ_α = τα/ᾱ², and ∫ = ∫₁ˣ g/f as in
//! [`crate::representation`]:
//!
//! For α ≥ 0:
//!
//! ```text
//! S(x) = (2πe)^{−1/2} (1 − x⁻² + 3x⁻⁴ + O(x⁻⁶)) · Φ(x_ατ)/Φ(τ/ᾱ) · exp(−∫)
//! ```
//!
//! For α < 0 (under the tail regime), S(x) equals the branch constant
//! c = −exp(−(1+(α+τ)²)/2) / (2π Φ(τ/ᾱ) (ᾱ²+ατ)(α+τ)) times exp(−∫) times
//! the bracketed series
//!
//! ```text
//! { T₁ + T₂ + T₃ + O(x⁻⁶) },
//!
//! T₁ =  (1 − 1/x² + 3/x⁴)(1 − α²τ_α/x − αττ_α/x²)
//! T₂ = −(1 − 1/x² − 3/x_ατ²)(ᾱ²/x_ατ² + ατ/(x·x_ατ²))
//! T₃ =  (αx_ατ/ᾱ²)·[ (ατx+2)/x³ − (ατx+4)/x⁵
//!        − (ατx+2)/(x³(x+τ_α)²ᾱ²) − (2ατx+6)/(x⁴(x+τ_α)ᾱ²) + 3ατ/x⁶
//!        − τ_α²(α²−1)/(x⁴(x+τ_α)²·τα) + 4τ_α/(x⁵(x+τ_α))
//!        + 11τ_α²/(x³(x+τ_α)³·ατ) + 6τ_α²/(x²(x+τ_α)⁴·ατ) ]
//! ```
//!
//! # Implementation
//!
//! - Assembly is in log space: ln S ≈ ln c − ∫ + ln(series), with the
//!   series factor the only sign-carrying piece; a non-positive series is
//!   refused rather than silently absolute-valued.
//! - The three τ_α²/(ατ)-scaled sub-terms of T₃ are evaluated through the
//!   identity τ_α²/(ατ) = τα/ᾱ⁴, which removes the spurious 0/0 at τ = 0
//!   (the printed quotient form is undefined there although its value
//!   extends continuously).
//! - The truncation estimate est_rel_error is |last retained correction| /
//!   |partial sum| — 3x⁻⁴ against the α ≥ 0 series, |T₃| against the
//!   α < 0 bracket — and evaluation is refused when it reaches 1.
//!
//! # Key Assumptions and Limitations
//!
//! - x ≥ 1 (the integral anchor), and practically x ≳ 8 for the stated
//!   accuracies; the guard only rejects outright nonsense (est ≥ 1).
//! - est_rel_error is a truncation *heuristic*: measured against exact
//!   values it overestimates the true relative error by orders of
//!   magnitude (the dropped O(x⁻⁶) has a small constant), so it is safe
//!   but very conservative as an accuracy certificate.

use esn_core::normal::{ln_big_phi, ln_sqrt_two_pi};
use esn_core::{EsnError, EsnParams, PrecisionContext};
use rug::ops::Pow;
use rug::Float;

use crate::representation::{von_mises_parts, TailBranch};

/// One evaluation of a truncated tail expansion.
#[derive(Debug, Clone)]
pub struct TailExpansionResult {
    /// Evaluation point.
    pub x: f64,
    /// ln S(x) per the truncated expansion, at working precision.
    pub log_survival_approx: Float,
    /// The successive correction factors whose sum forms the series
    /// factor: [1, −x⁻², 3x⁻⁴] for α ≥ 0, [T₁, T₂, T₃] for α < 0.
    pub order_terms: Vec<f64>,
    /// |last retained correction| / |partial sum|.
    pub est_rel_error: f64,
}

/// Evaluate the branch expansion of ln S(x).
///
/// # Errors
///
/// - [`EsnError::Regime`] for α < 0 outside the tail regime.
/// - [`EsnError::Domain`] for x < 1 or non-finite x.
/// - [`EsnError::Numeric`] when the truncated series is meaningless at
///   this x: est_rel_error ≥ 1, or a non-positive series factor.
pub fn tail_expansion(
    params: &EsnParams,
    x: f64,
    ctx: &PrecisionContext,
) -> Result<TailExpansionResult, EsnError> {
    ctx.validate()?;
    let rep = von_mises_parts(params)?;
    if !x.is_finite() || x < 1.0 {
        return Err(EsnError::domain(
            "tail_expansion",
            format!("the expansion is anchored at 1, got x={x}"),
        ));
    }
    let prec = ctx.prec_bits();
    let xb = ctx.big(x);
    let integral = rep.int_g_over_f(x, ctx)?;

    // Series factor per branch, with its correction breakdown.
    let (order_terms, series) = match rep.branch {
        TailBranch::NonNegAlpha => {
            // 1 − x⁻² + 3x⁻⁴.
            let mut inv_sq = xb.clone();
            inv_sq.square_mut();
            inv_sq.recip_mut();
            let mut t1 = inv_sq.clone();
            t1 = -t1;
            let mut t2 = inv_sq.clone();
            t2.square_mut();
            t2 *= 3u32;
            let mut series = Float::with_val(prec, &t1 + &t2);
            series += 1u32;
            (vec![1.0, t1.to_f64(), t2.to_f64()], series)
        }
        TailBranch::NegAlpha => {
            let a = params.alpha;
            let t = params.tau;
            let mut abar_sq = ctx.big(a);
            abar_sq.square_mut();
            abar_sq += 1u32;
            let xa = params.x_at(&xb);
            // τ_α = τα/ᾱ² and the regularized τα/ᾱ⁴ (= τ_α²/(ατ)).
            let mut tau_a = Float::with_val(prec, a * t);
            tau_a /= &abar_sq;
            let mut tau_a4 = tau_a.clone();
            tau_a4 /= &abar_sq;
            let xpta = Float::with_val(prec, &xb + &tau_a); // x + τ_α
            let at_x = Float::with_val(prec, (a * t) * x); // ατx

            let inv_x = Float::with_val(prec, xb.recip_ref());
            let inv_x2 = Float::with_val(prec, inv_x.square_ref());
            let inv_xa2 = {
                let mut v = xa.clone();
                v.square_mut();
                v.recip_mut();
                v
            };

            // T₁ = (1 − 1/x² + 3/x⁴)(1 − α²τ_α/x − αττ_α/x²).
            let t1 = {
                let mut even = Float::with_val(prec, inv_x2.square_ref());
                even *= 3u32;
                even -= &inv_x2;
                even += 1u32;
                let mut lin = Float::with_val(prec, &tau_a * &inv_x);
                lin *= a * a;
                let mut quad = Float::with_val(prec, &tau_a * &inv_x2);
                quad *= a * t;
                let mut slant = Float::with_val(prec, 1.0 - &lin);
                slant -= &quad;
                even * slant
            };

            // T₂ = −(1 − 1/x² − 3/x_ατ²)(ᾱ²/x_ατ² + ατ/(x·x_ατ²)).
            let t2 = {
                let mut first = Float::with_val(prec, 1.0 - &inv_x2);
                first -= Float::with_val(prec, &inv_xa2 * 3u32);
                let mut second = Float::with_val(prec, &abar_sq * &inv_xa2);
                let mut cross = Float::with_val(prec, &inv_x * &inv_xa2);
                cross *= a * t;
                second += &cross;
                let mut v = first * second;
                v = -v;
                v
            };

            // T₃ = (αx_ατ/ᾱ²)·[ nine sub-terms ].
            let t3 = {
                let x3 = Float::with_val(prec, (&xb).pow(3u32));
                let x4 = Float::with_val(prec, (&xb).pow(4u32));
                let x5 = Float::with_val(prec, (&xb).pow(5u32));
                let x6 = Float::with_val(prec, (&xb).pow(6u32));
                let xpta2 = Float::with_val(prec, xpta.square_ref());
                let xpta3 = Float::with_val(prec, (&xpta).pow(3u32));
                let xpta4 = Float::with_val(prec, (&xpta).pow(4u32));

                // (ατx+2)/x³
                let mut sum = Float::with_val(prec, &at_x + 2u32);
                sum /= &x3;
                // − (ατx+4)/x⁵
                let mut s = Float::with_val(prec, &at_x + 4u32);
                s /= &x5;
                sum -= &s;
                // − (ατx+2)/(x³(x+τ_α)²ᾱ²)
                let mut s = Float::with_val(prec, &at_x + 2u32);
                s /= Float::with_val(prec, &x3 * &xpta2);
                s /= &abar_sq;
                sum -= &s;
                // − (2ατx+6)/(x⁴(x+τ_α)ᾱ²)
                let mut s = Float::with_val(prec, &at_x * 2u32);
                s += 6u32;
                s /= Float::with_val(prec, &x4 * &xpta);
                s /= &abar_sq;
                sum -= &s;
                // + 3ατ/x⁶
                let mut s = Float::with_val(prec, (3.0 * a * t) / &x6);
                sum += &s;
                // − τ_α²(α²−1)/(x⁴(x+τ_α)²·τα)  [= τα/ᾱ⁴ · (α²−1)/(x⁴(x+τ_α)²)]
                s = Float::with_val(prec, &tau_a4 * (a * a - 1.0));
                s /= Float::with_val(prec, &x4 * &xpta2);
                sum -= &s;
                // + 4τ_α/(x⁵(x+τ_α))
                s = Float::with_val(prec, &tau_a * 4u32);
                s /= Float::with_val(prec, &x5 * &xpta);
                sum += &s;
                // + 11τ_α²/(x³(x+τ_α)³·ατ)  [= 11·τα/ᾱ⁴ / (x³(x+τ_α)³)]
                s = Float::with_val(prec, &tau_a4 * 11u32);
                s /= Float::with_val(prec, &x3 * &xpta3);
                sum += &s;
                // + 6τ_α²/(x²(x+τ_α)⁴·ατ)  [= 6·τα/ᾱ⁴ / (x²(x+τ_α)⁴)]
                s = Float::with_val(prec, &tau_a4 * 6u32);
                s /= Float::with_val(prec, Float::with_val(prec, xb.square_ref()) * &xpta4);
                sum += &s;

                let mut lead = Float::with_val(prec, &xa * a);
                lead /= &abar_sq;
                lead * sum
            };

            let mut series = Float::with_val(prec, &t1 + &t2);
            series += &t3;
            (vec![t1.to_f64(), t2.to_f64(), t3.to_f64()], series)
        }
    };

    // Truncation guard: the last retained correction against the sum.
    let last = *order_terms.last().expect("both branches fill three terms");
    let est_rel_error = (last / series.to_f64()).abs();
    if !(est_rel_error < 1.0) || !(series > 0.0) {
        return Err(EsnError::numeric(
            "tail_expansion",
            format!(
                "truncated series unusable at x={x}: series factor {:.6e}, \
                 est_rel_error {est_rel_error:.3e} (needs < 1); increase x",
                series.to_f64()
            ),
        ));
    }

    // ln S ≈ ln(prefactor) + ln(series) − ∫.
    let mut log_survival_approx = match rep.branch {
        TailBranch::NonNegAlpha => {
            // ln[(2πe)^{−1/2} Φ(x_ατ)/Φ(τ/ᾱ)].
            let mut v = ln_sqrt_two_pi(prec);
            v += 0.5f64;
            v = -v;
            v += ln_big_phi(&params.x_at(&xb));
            v -= ln_big_phi(&params.tau_over_bar(ctx));
            v
        }
        TailBranch::NegAlpha => rep.ln_c_limit(ctx),
    };
    log_survival_approx += series.ln();
    log_survival_approx -= &integral;

    Ok(TailExpansionResult { x, log_survival_approx, order_terms, est_rel_error })
}

//! Exact and closed-form normalizing constants.
//!
//! # Background
//!
//! With ℓ_{n,α} = √(2 ln n (1+α²)), the closed-form constants are
//!
//! ```text
//! α ≥ 0:  α_n = 1/ℓ_{n,0}
//!         β_n = ℓ_{n,0} − [ln(2√π) + ½ ln ln n + ln Φ(τ/ᾱ)] / ℓ_{n,0}
//!                                                (ln Φ term only for α > 0)
//! α < 0:  α_n = 1/ℓ_{n,α}
//!         β_n = ℓ_{n,α}/ᾱ²
//!               − [ln ln n + ln(4π|α|) + ln Φ(τ/ᾱ) + τ²/(2ᾱ²)] / ℓ_{n,α}
//!               − ατ/ᾱ²
//! ```
//!
//! The exact constants instead solve ln S(b_n) = −ln n and set
//! a_n = f(b_n). Both systems normalize the sample maximum to the same
//! Gumbel limit; the exact pair converges at 1/ln n, the closed-form pair
//! only at (ln ln n)²/ln n.
//!
//! # Implementation
//!
//! At α = 0 the slant factor Φ(αx + τ) is the constant Φ(τ), which the
//! normalizer cancels exactly — the law *is* standard normal for every τ.
//! A ln Φ(τ/ᾱ) centering term would therefore be spurious at α = 0 (it
//! would leave (β_n − b_n)/a_n → −ln Φ(τ) ≠ 0); it belongs only to the
//! α > 0 branch, where the tail genuinely carries the 1/Φ(τ/ᾱ) factor.
//!
//! The b_n solver evaluates ln S at working precision and keeps b_n as a
//! [`Float`]: second-order convergence diagnostics multiply residuals by
//! b_n⁴ (≈ 10¹³ at ln n = 10⁶), so both the root and the residual have to
//! be far better than f64 could carry.
//!
//! # Key Assumptions and Limitations
//!
//! * ln n > 1 ([`LogSampleSize`] enforces it), so ln ln n > 0.
//! * The achieved log-space residual |ln S(b_n) + ln n| is bounded by the
//!   accuracy of the survival quadrature (its relative tolerance bounds
//!   the residual floor); with default tolerances that floor is ≈ 10⁻¹²,
//!   far inside the 10⁻¹⁰ contract.
//! * Closed-form constants are evaluated in f64 — every term is O(ln n)
//!   with no cancellation, so 10⁻¹⁵ relative accuracy is automatic — and
//!   they are meaningful only for tail-regime parameters, which the
//!   *solver* enforces (the closed form itself never fails).

use esn_core::{EsnError, EsnParams, PrecisionContext};
use rug::Float;
use tail_asymptotics::von_mises_parts;

/// Sample size in logarithmic form: n = e^{ln_n}.
///
/// n itself never materializes, so "n = e^{10⁶}" is a perfectly ordinary
/// value; every downstream formula consumes ln n (and ln ln n) directly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogSampleSize {
    ln_n: f64,
}

impl LogSampleSize {
    /// Wrap ln n, requiring it finite and > 1 (so ln ln n > 0).
    ///
    /// # Errors
    ///
    /// [`EsnError::Domain`] otherwise.
    pub fn new(ln_n: f64) -> Result<Self, EsnError> {
        if !(ln_n.is_finite() && ln_n > 1.0) {
            return Err(EsnError::domain(
                "LogSampleSize",
                format!("ln n must be finite and > 1, got {ln_n}"),
            ));
        }
        Ok(LogSampleSize { ln_n })
    }

    /// ln n.
    #[inline]
    pub fn ln_n(&self) -> f64 {
        self.ln_n
    }

    /// ln ln n (> 0 by construction).
    #[inline]
    pub fn ln_ln_n(&self) -> f64 {
        self.ln_n.ln()
    }
}

/// Both normalizing systems for one (α, τ, ln n) cell.
#[derive(Debug, Clone)]
pub struct NormalizingConstants {
    /// Exact scale a_n = f(b_n) (> 0), at working precision.
    pub a_n: Float,
    /// Exact location: the root of ln S(b_n) = −ln n, at working precision.
    pub b_n: Float,
    /// Closed-form scale α_n = 1/ℓ (> 0).
    pub alpha_n: f64,
    /// Closed-form location β_n.
    pub beta_n: f64,
    /// ln n the constants belong to.
    pub ln_n: f64,
    /// Achieved |ln S(b_n) + ln n| (≤ 10⁻¹⁰ by contract).
    pub residual: f64,
}

/// Closed-form (α_n, β_n) by direct evaluation of the printed formulas.
///
/// Infallible: both branches are smooth elementary expressions of
/// ln n > 1. For α < 0 the values are only *meaningful* under the tail
/// regime, which [`solve_bn`] (the consumer that pairs them with exact
/// constants) enforces.
pub fn closed_form_constants(params: &EsnParams, n: LogSampleSize) -> (f64, f64) {
    let ln_n = n.ln_n();
    let ln_ln_n = n.ln_ln_n();
    let a = params.alpha;
    let t = params.tau;
    if a >= 0.0 {
        // ℓ_{n,0} = √(2 ln n): the scale never sees the slant on this branch.
        let ell = (2.0 * ln_n).sqrt();
        let mut correction = (2.0 * std::f64::consts::PI.sqrt()).ln() + 0.5 * ln_ln_n;
        if a > 0.0 {
            correction += esn_core::fast::ln_big_phi_f64(t / params.alpha_bar());
        }
        (1.0 / ell, ell - correction / ell)
    } else {
        let bar_sq = params.alpha_bar_sq();
        let ell = (2.0 * ln_n * bar_sq).sqrt();
        let bracket = ln_ln_n
            + (4.0 * std::f64::consts::PI * a.abs()).ln()
            + esn_core::fast::ln_big_phi_f64(t / params.alpha_bar())
            + t * t / (2.0 * bar_sq);
        (1.0 / ell, ell / bar_sq - bracket / ell - a * t / bar_sq)
    }
}

/// Solve ln S(b_n) = −ln n for the exact constants, and bundle them with
/// the closed-form pair.
///
/// Bracketed bisection (initial bracket β_n ± 3α_n, widened geometrically
/// if the root escapes it) down to a 10⁻³ interval, then derivative-free
/// secant refinement at working precision. The secant runs past the
/// nominal 10⁻¹² step target all the way to the quadrature's own noise
/// floor, because downstream b⁴-scaled analyses use every digit the
/// survival evaluation can honestly provide.
///
/// # Errors
///
/// [`EsnError::Regime`] for α < 0 outside the tail regime;
/// [`EsnError::Numeric`] if no bracket is found or the achieved residual
/// exceeds 10⁻¹⁰ (both carry diagnostics); survival-evaluation errors
/// propagate.
pub fn solve_bn(
    params: &EsnParams,
    n: LogSampleSize,
    ctx: &PrecisionContext,
) -> Result<NormalizingConstants, EsnError> {
    ctx.validate()?;
    let rep = von_mises_parts(params)?;
    let ln_n = n.ln_n();
    let (alpha_n, beta_n) = closed_form_constants(params, n);
    let prec = ctx.prec_bits();

    // Residual g(b) = ln S(b) + ln n, strictly decreasing in b.
    let residual = |b: &Float| -> Result<Float, EsnError> {
        let mut g = esn_core::log_survival_big(params, b, ctx)?;
        g += ln_n;
        Ok(g)
    };

    // Bracket: g(lo) > 0 > g(hi).
    let mut lo = ctx.big(beta_n - 3.0 * alpha_n);
    let mut hi = ctx.big(beta_n + 3.0 * alpha_n);
    let mut g_lo = residual(&lo)?;
    let mut g_hi = residual(&hi)?;
    let mut width = 6.0 * alpha_n;
    let mut expansions = 0u32;
    while !(g_lo > 0.0 && g_hi < 0.0) {
        expansions += 1;
        if expansions > 64 {
            return Err(EsnError::numeric(
                "solve_bn",
                format!(
                    "no sign change after 64 bracket expansions at \
                     alpha={}, tau={}, ln_n={ln_n}: bracket [{}, {}] has \
                     residuals {:.3e} / {:.3e}",
                    params.alpha,
                    params.tau,
                    lo.to_f64(),
                    hi.to_f64(),
                    g_lo.to_f64(),
                    g_hi.to_f64()
                ),
            ));
        }
        width *= 2.0;
        if !(g_lo > 0.0) {
            lo -= width;
            g_lo = residual(&lo)?;
        }
        if !(g_hi < 0.0) {
            hi += width;
            g_hi = residual(&hi)?;
        }
    }

    // Bisection to a 10⁻³ interval.
    while Float::with_val(prec, &hi - &lo) > 1e-3 {
        let mid = Float::with_val(prec, &hi + &lo) >> 1u32;
        let g_mid = residual(&mid)?;
        if g_mid > 0.0 {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
            g_hi = g_mid;
        }
    }

    // Safeguarded secant: every iterate is forced back into the live
    // bracket, so monotonicity of g keeps the iteration contained.
    let mut b0 = lo.clone();
    let mut g0 = g_lo.clone();
    let mut b1 = hi.clone();
    let mut g1 = g_hi.clone();
    let mut best_b = if g1.clone().abs() < g0.clone().abs() { b1.clone() } else { b0.clone() };
    let mut best_abs = {
        let mut v = residual(&best_b)?;
        v.abs_mut();
        v.to_f64()
    };
    let mut stalled = 0u32;
    // Early-exit floor: the integral's relative tolerance is the
    // log-survival's absolute noise, so residuals below ~10x it are
    // unresolvable. The floor tracks the context because b⁴-scaled
    // consumers at ln n ~ 10¹¹ need residuals near 10⁻²⁹, which the
    // secant reaches in one or two steps past a fixed 10⁻¹⁷ cutoff.
    let refine_floor = 1e-17f64.min(10.0 * ctx.quad_rel_tol);
    for _ in 0..64 {
        let denom = Float::with_val(prec, &g1 - &g0);
        let mut b2 = if denom == 0.0 {
            Float::with_val(prec, &hi + &lo) >> 1u32
        } else {
            let mut step = Float::with_val(prec, &b1 - &b0);
            step *= &g1;
            step /= &denom;
            Float::with_val(prec, &b1 - &step)
        };
        if !(b2 > lo && b2 < hi) {
            b2 = Float::with_val(prec, &hi + &lo) >> 1u32;
        }
        let g2 = residual(&b2)?;
        if g2 > 0.0 {
            lo = b2.clone();
        } else {
            hi = b2.clone();
        }
        let g2_abs = g2.clone().abs().to_f64();
        if g2_abs < best_abs {
            best_abs = g2_abs;
            best_b = b2.clone();
            stalled = 0;
        } else {
            stalled += 1;
        }
        if best_abs <= refine_floor || stalled >= 3 {
            break;
        }
        b0 = b1;
        g0 = g1;
        b1 = b2;
        g1 = g2;
    }

    if !(best_abs <= 1e-10) {
        return Err(EsnError::numeric(
            "solve_bn",
            format!(
                "secant refinement stalled at residual {best_abs:.3e} \
                 (needs <= 1e-10) for alpha={}, tau={}, ln_n={ln_n}, \
                 b~{:.6}",
                params.alpha,
                params.tau,
                best_b.to_f64()
            ),
        ));
    }

    let a_n = rep.f_big(&best_b);
    Ok(NormalizingConstants {
        a_n,
        b_n: best_b,
        alpha_n,
        beta_n,
        ln_n,
        residual: best_abs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(alpha: f64, tau: f64) -> EsnParams {
        EsnParams::new(alpha, tau).unwrap()
    }

    fn ln100() -> LogSampleSize {
        LogSampleSize::new(100.0f64.ln()).unwrap()
    }

    fn assert_rel(value: f64, reference: f64, rel: f64, what: &str) {
        assert!(
            (value - reference).abs() <= rel * reference.abs(),
            "{what}: {value} vs {reference}"
        );
    }

    #[test]
    fn log_sample_size_requires_ln_n_above_one() {
        for bad in [1.0, 0.5, -3.0, f64::NAN, f64::INFINITY] {
            assert!(matches!(
                LogSampleSize::new(bad),
                Err(EsnError::Domain { .. })
            ));
        }
        let n = LogSampleSize::new(100.0).unwrap();
        assert_eq!(n.ln_n(), 100.0);
        assert!((n.ln_ln_n() - 100.0f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn closed_form_matches_references_at_large_n() {
        let n = LogSampleSize::new(1e5).unwrap();
        let cases = [
            (p(0.0, 0.0), 0.002236067977499789696409174, 447.1978938868436966044167),
            (p(1.0, 0.0), 0.002236067977499789696409174, 447.1994438110578409628709),
            (p(-1.0, 0.0), 0.001581138830084189665999447, 316.2066565445427826625155),
            (p(-2.0, 1.0), 0.001, 200.3855594487471135140209),
        ];
        for (params, alpha_ref, beta_ref) in cases {
            let (alpha_n, beta_n) = closed_form_constants(&params, n);
            assert_rel(alpha_n, alpha_ref, 1e-14, "alpha_n");
            assert_rel(beta_n, beta_ref, 1e-13, "beta_n");
        }
    }

    #[test]
    fn closed_form_trivial_skeletons() {
        // ℓ_{n,0} = √(2·8) = 4 at ln n = 8.
        let (alpha_n, _) = closed_form_constants(&p(0.0, 0.0), LogSampleSize::new(8.0).unwrap());
        assert!((alpha_n - 0.25).abs() < 1e-16);
        // Direct substitution at ln n = ln 100:
        // β = √(2 ln 100) − [ln(2√π) + ½ ln ln 100]/√(2 ln 100).
        let (_, beta_n) = closed_form_constants(&p(0.0, 0.0), ln100());
        let ell = (2.0 * 100.0f64.ln()).sqrt();
        let by_hand = ell - ((2.0 * std::f64::consts::PI.sqrt()).ln() + 0.5 * 100.0f64.ln().ln()) / ell;
        assert!((beta_n - by_hand).abs() < 1e-15);
        assert!((beta_n - 2.3662551).abs() < 1e-6);
        // α = −1, τ = 0, ln n = 8: β = √32/2 − (ln 8 + ln 4π − ln 2)/√32.
        let (alpha_n, beta_n) =
            closed_form_constants(&p(-1.0, 0.0), LogSampleSize::new(8.0).unwrap());
        let ell = 32.0f64.sqrt();
        assert!((alpha_n - 1.0 / ell).abs() < 1e-16);
        let by_hand = ell / 2.0
            - (8.0f64.ln() + (4.0 * std::f64::consts::PI).ln() + 0.5f64.ln()) / ell;
        assert!((beta_n - by_hand).abs() < 1e-14);
    }

    #[test]
    fn slant_free_law_ignores_the_extension_in_the_constants() {
        // ESN(0, τ) is standard normal for every τ: the closed form must
        // not move with τ at α = 0, while any α > 0 genuinely does.
        let n = ln100();
        let base = closed_form_constants(&p(0.0, 0.0), n);
        for tau in [-2.0, 0.5, 3.0] {
            assert_eq!(closed_form_constants(&p(0.0, tau), n), base);
        }
        let skew0 = closed_form_constants(&p(1.0, 0.0), n);
        let skew1 = closed_form_constants(&p(1.0, 1.0), n);
        assert_eq!(skew0.0, skew1.0);
        assert!(skew0.1 != skew1.1);
        // The α ≥ 0 scale is the slant-free 1/√(2 ln n) everywhere.
        assert_eq!(base.0, skew0.0);
    }

    #[test]
    fn solver_matches_frozen_references() {
        let ctx = PrecisionContext::default();
        let cases = [
            (p(0.0, 0.0), 100.0f64.ln(), 2.326347874040841100885606, 0.4298583247839932097752029),
            (p(1.0, 0.0), 1000.0, 44.63127317139578859035394, 0.02240581388211216517769246),
            (p(-1.0, 0.0), 100.0f64.ln(), 1.281551565544600466965103, 0.390152073036189533924129),
            (p(-2.0, 1.0), 50.0, 4.56133681822071025669048, 0.04806147849515226112716237),
            (p(-0.5, -1.0), 100.0, 11.91219850812040240052599, 0.06497621033906877196509983),
        ];
        for (params, ln_n, b_ref, a_ref) in cases {
            let n = LogSampleSize::new(ln_n).unwrap();
            let c = solve_bn(&params, n, &ctx).unwrap();
            assert_rel(c.b_n.to_f64(), b_ref, 1e-11, "b_n");
            assert_rel(c.a_n.to_f64(), a_ref, 1e-11, "a_n");
            assert!(c.residual <= 1e-10);
            assert!(c.a_n > 0.0);
            assert_eq!(c.ln_n, ln_n);
        }
    }

    #[test]
    fn normal_quantile_oracle_pins_the_slant_free_cell() {
        // At α = τ = 0 the law is standard normal, so b_n is the normal
        // quantile at 1 − 1/n and a_n = 1/b_n exactly.
        let ctx = PrecisionContext::default();
        let c = solve_bn(&p(0.0, 0.0), ln100(), &ctx).unwrap();
        assert!((c.b_n.to_f64() - 2.326348).abs() < 1e-5);
        let c6 = solve_bn(
            &p(0.0, 0.0),
            LogSampleSize::new(1e6f64.ln()).unwrap(),
            &ctx,
        )
        .unwrap();
        assert!((c6.b_n.to_f64() - 4.753424).abs() < 1e-5);
        for c in [&c, &c6] {
            let product = Float::with_val(c.b_n.prec(), &c.a_n * &c.b_n).to_f64();
            assert!((product - 1.0).abs() < 1e-20);
        }
    }

    #[test]
    fn residual_identity_holds_across_the_ladder() {
        let ctx = PrecisionContext::default();
        for params in [p(0.0, 0.0), p(1.0, 0.5), p(-1.0, 0.0)] {
            for ln_n in [5.0, 10.0, 50.0, 100.0, 1e3, 1e4] {
                let n = LogSampleSize::new(ln_n).unwrap();
                let c = solve_bn(&params, n, &ctx).unwrap();
                // Recompute the residual independently of the solver's
                // own bookkeeping.
                let mut g = esn_core::log_survival_big(&params, &c.b_n, &ctx).unwrap();
                g += ln_n;
                g.abs_mut();
                assert!(
                    g.to_f64() <= 1e-10,
                    "residual {} at alpha={}, ln_n={ln_n}",
                    g.to_f64(),
                    params.alpha
                );
            }
        }
    }

    #[test]
    fn constants_converge_to_each_other() {
        // a_n/α_n → 1 and (β_n − b_n)/a_n → 0 along ln n. The scale ratio
        // shrinks monotonically; the centering gap can cross zero on its
        // way down (the closed form's two correction terms trade places),
        // so later values are compared against the ln n = 10² starting
        // level rather than pairwise.
        let ctx = PrecisionContext::default();
        for params in [p(0.0, 0.0), p(1.0, 0.0), p(-1.0, 0.0)] {
            let mut scale_devs = Vec::new();
            let mut center_devs = Vec::new();
            for ln_n in [100.0, 1e3, 1e4, 1e5] {
                let n = LogSampleSize::new(ln_n).unwrap();
                let c = solve_bn(&params, n, &ctx).unwrap();
                scale_devs.push((c.a_n.to_f64() / c.alpha_n - 1.0).abs());
                center_devs.push(((c.beta_n - c.b_n.to_f64()) / c.a_n.to_f64()).abs());
            }
            for w in scale_devs.windows(2) {
                assert!(w[1] < w[0], "scale trend broken: {scale_devs:?}");
            }
            for later in &center_devs[1..] {
                assert!(*later < center_devs[0], "center trend broken: {center_devs:?}");
            }
            assert!(scale_devs[3] < 0.01);
            assert!(center_devs[3] < 0.05);
        }
    }

    #[test]
    fn regime_violations_are_rejected_before_solving() {
        let ctx = PrecisionContext::default();
        assert!(matches!(
            solve_bn(&p(-1.0, 2.0), ln100(), &ctx),
            Err(EsnError::Regime { .. })
        ));
    }
}

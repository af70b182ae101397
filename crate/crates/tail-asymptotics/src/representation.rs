//! The Von Mises triple (c, g, f) and the closed-form integral ∫₁ˣ g/f.
//!
//! # Background
//!
//! The survival function is written S(x) = c(x)·exp(−∫₁ˣ g(v)/f(v) dv)
//! with, per branch:
//!
//! ```text
//! α ≥ 0:   c(x) → 1/(Φ(τ/ᾱ)√(2πe))   (α > 0)
//!          c(x) → 1/√(2πe)           (α = 0; see below)
//!          g(x) = 1 + x⁻²,        f(x) = 1/x,      f′(x) = −x⁻²
//!
//! α < 0:   c(x) → −exp(−(1+(α+τ)²)/2)
//!                 ───────────────────────────────────────  > 0
//!                 2π Φ(τ/ᾱ) (α(α+τ)+1)(α+τ)
//!          g(x) = 1 + ᾱ²/m(x)² + α/(x_ατ·m(x)),   f(x) = 1/m(x),
//!          f′(x) = −ᾱ²/m(x)²,
//! ```
//!
//! where m(x) = ᾱ²x + ατ, x_ατ = αx + τ, and the α < 0 branch carries the
//! standing regime ᾱ² + ατ > 0, α + τ < 0 (which makes m > 0 and x_ατ < 0
//! for all x ≥ 1, and the constant positive since α(α+τ)+1 = ᾱ² + ατ).
//!
//! The α = 0 limit constant deserves a note: the α > 0 derivation sends
//! Φ(x_ατ) → 1, but at α = 0 that factor is the constant Φ(τ), which
//! instead cancels the normalizer Φ(τ/ᾱ) = Φ(τ) exactly — the law *is*
//! standard normal for every τ. The branch therefore returns the τ-free
//! classical constant 1/√(2πe), which is also the value the convergence
//! diagnostic c(x) = S(x)·exp(+∫₁ˣ g/f) is observed to approach.
//!
//! # Implementation
//!
//! The integral is evaluated from elementary antiderivatives (derivations
//! at the code), never numerically: it is needed at x in the hundreds,
//! where its value ~ ᾱ²x²/2 dwarfs double precision comfort but is exactly
//! representable at working precision. c is exposed in log form for the
//! same reason callers combine it with log-survival values.
//!
//! # Key Assumptions and Limitations
//!
//! - x ≥ 1 for the integral (anchored at the lower limit 1).
//! - α < 0 requires the tail regime at construction; the g, f, c formulas
//!   are meaningless outside it (m or the constant change sign).

use esn_core::normal::{ln_big_phi, ln_sqrt_two_pi};
use esn_core::{EsnError, EsnParams, PrecisionContext};
use rug::Float;

/// Which Von Mises branch a parameter pair selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailBranch {
    /// α ≥ 0: normal-like tail, f(x) = 1/x.
    NonNegAlpha,
    /// α < 0 under the tail regime: steepened tail, f(x) = 1/m(x).
    NegAlpha,
}

/// The Von Mises representation (c, g, f) of the ESN survival function.
#[derive(Debug, Clone, Copy)]
pub struct TailRepresentation {
    params: EsnParams,
    /// Which branch the slant sign selected.
    pub branch: TailBranch,
}

/// Build the representation, gating the α < 0 branch on the tail regime.
///
/// # Errors
///
/// [`EsnError::Regime`] when α < 0 and the standing assumption fails.
pub fn von_mises_parts(params: &EsnParams) -> Result<TailRepresentation, EsnError> {
    let branch = if params.alpha >= 0.0 {
        TailBranch::NonNegAlpha
    } else {
        params.require_tail_regime()?;
        TailBranch::NegAlpha
    };
    Ok(TailRepresentation { params: *params, branch })
}

impl TailRepresentation {
    /// The parameters the representation was built for.
    pub fn params(&self) -> &EsnParams {
        &self.params
    }

    /// The mixed decay rate m(x) = ᾱ²x + ατ (> 0 on the branch's domain).
    fn mix_f64(&self, x: f64) -> f64 {
        self.params.alpha_bar_sq() * x + self.params.alpha * self.params.tau
    }

    /// g(x): 1 + x⁻² for α ≥ 0; 1 + ᾱ²/m² + α/(x_ατ·m) for α < 0.
    pub fn g(&self, x: f64) -> f64 {
        match self.branch {
            TailBranch::NonNegAlpha => 1.0 + 1.0 / (x * x),
            TailBranch::NegAlpha => {
                let m = self.mix_f64(x);
                let xa = self.params.alpha * x + self.params.tau;
                1.0 + self.params.alpha_bar_sq() / (m * m)
                    + self.params.alpha / (xa * m)
            }
        }
    }

    /// Auxiliary function f(x): 1/x for α ≥ 0; 1/m(x) for α < 0.
    pub fn f(&self, x: f64) -> f64 {
        match self.branch {
            TailBranch::NonNegAlpha => 1.0 / x,
            TailBranch::NegAlpha => 1.0 / self.mix_f64(x),
        }
    }

    /// [`Self::f`] at a working-precision point, keeping the argument's
    /// full precision (the scale constant aₙ = f(bₙ) inherits bₙ's
    /// accuracy, which second-order convergence studies rely on).
    pub fn f_big(&self, x: &Float) -> Float {
        let prec = x.prec();
        match self.branch {
            TailBranch::NonNegAlpha => Float::with_val(prec, x.recip_ref()),
            TailBranch::NegAlpha => {
                let mut m = Float::with_val(prec, self.params.alpha_bar_sq() * x);
                m += self.params.alpha * self.params.tau;
                m.recip_mut();
                m
            }
        }
    }

    /// f′(x): −x⁻² for α ≥ 0; −ᾱ²/m(x)² for α < 0.
    pub fn f_prime(&self, x: f64) -> f64 {
        match self.branch {
            TailBranch::NonNegAlpha => -1.0 / (x * x),
            TailBranch::NegAlpha => {
                let m = self.mix_f64(x);
                -self.params.alpha_bar_sq() / (m * m)
            }
        }
    }

    /// ln of the limiting constant c = lim c(x) at working precision.
    pub fn ln_c_limit(&self, ctx: &PrecisionContext) -> Float {
        let prec = ctx.prec_bits();
        match self.branch {
            TailBranch::NonNegAlpha => {
                // ln c = −ln √(2πe) − ln Φ(τ/ᾱ), the latter dropped at
                // α = 0 (module docs: Φ(x_ατ) → Φ(τ) cancels it there).
                let mut v = ln_sqrt_two_pi(prec);
                v += 0.5f64; // ln √(2πe) = ln √(2π) + 1/2
                v = -v;
                if self.params.alpha > 0.0 {
                    v -= ln_big_phi(&self.params.tau_over_bar(ctx));
                }
                v
            }
            TailBranch::NegAlpha => {
                // ln c = −(1+(α+τ)²)/2 − ln(2π) − ln Φ(τ/ᾱ)
                //        − ln(ᾱ²+ατ) − ln(−(α+τ)),
                // using α(α+τ)+1 = ᾱ²+ατ; both log arguments are positive
                // exactly under the regime.
                let a = self.params.alpha;
                let t = self.params.tau;
                let mut v = ctx.big(a + t);
                v.square_mut();
                v += 1u32;
                v >>= 1u32;
                v = -v;
                v -= ln_sqrt_two_pi(prec) * 2u32; // ln(2π)
                v -= ln_big_phi(&self.params.tau_over_bar(ctx));
                // ᾱ² + ατ at working precision.
                let mut mix1 = ctx.big(a);
                mix1.square_mut();
                mix1 += 1u32;
                mix1 += Float::with_val(ctx.prec_bits(), a * t);
                v -= mix1.ln();
                v -= ctx.big(-(a + t)).ln();
                v
            }
        }
    }

    /// The limiting constant c > 0 at working precision.
    pub fn c_limit(&self, ctx: &PrecisionContext) -> Float {
        let mut v = self.ln_c_limit(ctx);
        v.exp_mut();
        v
    }

    /// ∫₁ˣ g(v)/f(v) dv in closed form at working precision.
    ///
    /// Antiderivatives (derivations):
    ///
    /// - α ≥ 0: g/f = v(1 + v⁻²) = v + 1/v, so the integral is
    ///   (x² − 1)/2 + ln x.
    /// - α < 0: g/f = m(v)·g(v) = m(v) + ᾱ²/m(v) + α/x_ατ(v). Term one
    ///   integrates to ᾱ²(x²−1)/2 + ατ(x−1); term two is d/dv ln m(v)
    ///   scaled by 1 (m′ = ᾱ²), giving ln(m(x)/m(1)) with m(1) = ᾱ²+ατ;
    ///   term three is d/dv ln|x_ατ(v)| (x_ατ′ = α), giving
    ///   ln(x_ατ(x)/(α+τ)) — both endpoint values are negative under the
    ///   regime for x ≥ 1, so the quotient is positive.
    ///
    /// # Errors
    ///
    /// [`EsnError::Domain`] for x < 1 or non-finite x.
    pub fn int_g_over_f(&self, x: f64, ctx: &PrecisionContext) -> Result<Float, EsnError> {
        if !x.is_finite() || x < 1.0 {
            return Err(EsnError::domain(
                "int_g_over_f",
                format!("the representation integral is anchored at 1, got x={x}"),
            ));
        }
        let prec = ctx.prec_bits();
        let xb = ctx.big(x);
        match self.branch {
            TailBranch::NonNegAlpha => {
                // (x² − 1)/2 + ln x.
                let mut v = xb.clone();
                v.square_mut();
                v -= 1u32;
                v >>= 1u32;
                v += xb.ln();
                Ok(v)
            }
            TailBranch::NegAlpha => {
                let a = self.params.alpha;
                let t = self.params.tau;
                let mut abar_sq = ctx.big(a);
                abar_sq.square_mut();
                abar_sq += 1u32;
                // ᾱ²(x² − 1)/2 + ατ(x − 1).
                let mut v = xb.clone();
                v.square_mut();
                v -= 1u32;
                v >>= 1u32;
                v *= &abar_sq;
                let mut lin = xb.clone();
                lin -= 1u32;
                lin *= Float::with_val(prec, a * t);
                v += &lin;
                // ln(m(x)/m(1)).
                let m_x = self.params.mix(&xb);
                let m_1 = self.params.mix(&ctx.big(1.0));
                v += Float::with_val(prec, &m_x / &m_1).ln();
                // ln(x_ατ(x)/x_ατ(1)).
                let xa_x = self.params.x_at(&xb);
                let xa_1 = self.params.x_at(&ctx.big(1.0));
                v += Float::with_val(prec, &xa_x / &xa_1).ln();
                Ok(v)
            }
        }
    }
}

/// The representation's survival approximation c·exp(−∫₁ˣ g/f).
///
/// Relative agreement with the exact survival improves as x grows; at
/// moderate x the neglected c(x)/c − 1 is O(x⁻²)-scale.
///
/// # Errors
///
/// [`EsnError::Regime`] (α < 0 outside the regime) and
/// [`EsnError::Domain`] for x < 1.
pub fn von_mises_survival(
    params: &EsnParams,
    x: f64,
    ctx: &PrecisionContext,
) -> Result<Float, EsnError> {
    let rep = von_mises_parts(params)?;
    let mut v = rep.ln_c_limit(ctx);
    v -= rep.int_g_over_f(x, ctx)?;
    v.exp_mut();
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Assert relative agreement with a decimal reference string, parsing
    /// the reference at the value's own precision.
    fn assert_close(value: &Float, reference: &str, rel: f64) {
        let prec = value.prec();
        let r = Float::with_val(prec, Float::parse(reference).unwrap());
        let mut diff = value.clone();
        diff -= &r;
        diff.abs_mut();
        let mut scale = r.clone();
        scale.abs_mut();
        scale *= rel;
        assert!(
            diff <= scale,
            "value {} differs from reference {} by more than rel {}",
            value.to_f64(),
            reference,
            rel
        );
    }

    fn p(alpha: f64, tau: f64) -> EsnParams {
        EsnParams::new(alpha, tau).unwrap()
    }

    #[test]
    fn branch_selection_and_regime_gate() {
        assert_eq!(
            von_mises_parts(&p(0.0, -3.0)).unwrap().branch,
            TailBranch::NonNegAlpha
        );
        assert_eq!(
            von_mises_parts(&p(-1.0, 0.0)).unwrap().branch,
            TailBranch::NegAlpha
        );
        // α + τ ≥ 0 and ᾱ² + ατ ≤ 0 violations are both rejected.
        assert!(matches!(
            von_mises_parts(&p(-1.0, 2.0)),
            Err(EsnError::Regime { .. })
        ));
        assert!(matches!(
            von_mises_parts(&p(-3.0, 3.4)),
            Err(EsnError::Regime { .. })
        ));
    }

    #[test]
    fn triple_matches_hand_values() {
        // α = 1, τ = 0 at x = 10.
        let rep = von_mises_parts(&p(1.0, 0.0)).unwrap();
        assert!((rep.f(10.0) - 0.1).abs() < 1e-16);
        assert!((rep.g(10.0) - 1.01).abs() < 1e-16);
        assert!((rep.f_prime(10.0) + 0.01).abs() < 1e-16);
        // α = −1, τ = 0: g collapses to 1 + x⁻² and g/f = 2x + 2/x.
        let rep = von_mises_parts(&p(-1.0, 0.0)).unwrap();
        for x in [2.0, 5.0, 10.0] {
            assert!((rep.g(x) - (1.0 + 1.0 / (x * x))).abs() < 1e-15);
            let gf = rep.g(x) / rep.f(x);
            assert!((gf - (2.0 * x + 2.0 / x)).abs() < 1e-12);
        }
    }

    #[test]
    fn limit_constants_match_references() {
        let ctx = PrecisionContext::default();
        let cases = [
            (p(1.0, 0.0), "0.4839414490382866995956604"),
            // α = 0 takes the τ-free classical constant for every τ.
            (p(0.0, 1.0), "0.2419707245191433497978302"),
            (p(0.0, -0.7), "0.2419707245191433497978302"),
            (p(-1.0, 0.0), "0.05854983152431916069024227"),
            (p(-2.0, 1.0), "0.02901496012979309538974669"),
            (p(-0.5, -1.0), "0.06434415350264833204007828"),
        ];
        for (params, reference) in cases {
            let rep = von_mises_parts(&params).unwrap();
            assert_close(&rep.c_limit(&ctx), reference, 1e-20);
            // ln_c_limit is the log of the same quantity.
            let mut back = rep.ln_c_limit(&ctx);
            back.exp_mut();
            assert_close(&back, reference, 1e-20);
        }
    }

    #[test]
    fn closed_form_integrals_match_references() {
        let ctx = PrecisionContext::default();
        let cases = [
            (p(1.0, 0.0), "130.2725887222397812376689"),
            (p(0.0, 1.0), "130.2725887222397812376689"), // τ-independent
            (p(-1.0, 0.0), "260.5451774444795624753379"),
            (p(-2.0, 1.0), "614.1920837425066282913999"),
            (p(-0.5, -1.0), "171.1275685674369948089911"),
        ];
        for (params, reference) in cases {
            let rep = von_mises_parts(&params).unwrap();
            let v = rep.int_g_over_f(16.0, &ctx).unwrap();
            assert_close(&v, reference, 1e-22);
        }
        // And the α ≥ 0 closed form is (x²−1)/2 + ln x on the nose.
        let rep = von_mises_parts(&p(2.0, -1.0)).unwrap();
        let v = rep.int_g_over_f(7.0, &ctx).unwrap();
        let expected = (7.0f64 * 7.0 - 1.0) / 2.0 + 7.0f64.ln();
        assert!((v.to_f64() - expected).abs() < 1e-13);
    }

    #[test]
    fn integral_requires_x_at_least_one() {
        let ctx = PrecisionContext::default();
        let rep = von_mises_parts(&p(1.0, 0.0)).unwrap();
        assert!(matches!(
            rep.int_g_over_f(0.5, &ctx),
            Err(EsnError::Domain { .. })
        ));
        assert!(matches!(
            von_mises_survival(&p(-1.0, 0.0), 0.99, &ctx),
            Err(EsnError::Domain { .. })
        ));
        // x = 1 itself is fine and the integral vanishes there.
        let v = rep.int_g_over_f(1.0, &ctx).unwrap();
        assert!(v.to_f64().abs() < 1e-60);
    }

    #[test]
    fn representation_converges_to_the_survival_function() {
        // |S(x)·exp(+∫₁ˣ g/f)/c − 1| decreases along x ∈ {6, 8, 12, 16, 24}
        // and ends small: the defining property of the representation.
        let ctx = PrecisionContext::default();
        for params in [p(0.0, 0.0), p(1.0, 0.5), p(-1.0, 0.0), p(-2.0, 1.0)] {
            let rep = von_mises_parts(&params).unwrap();
            let ln_c = rep.ln_c_limit(&ctx);
            let mut last = f64::INFINITY;
            for x in [6.0, 8.0, 12.0, 16.0, 24.0] {
                let ln_s = esn_core::log_survival(&params, x, &ctx).unwrap();
                let mut dev = ln_s;
                dev += rep.int_g_over_f(x, &ctx).unwrap();
                dev -= &ln_c;
                dev.exp_mut();
                dev -= 1u32;
                dev.abs_mut();
                let dev = dev.to_f64();
                assert!(
                    dev < last,
                    "deviation not decreasing at alpha={}, tau={}, x={x}: {dev} vs {last}",
                    params.alpha,
                    params.tau
                );
                last = dev;
            }
            assert!(last < 0.02, "final deviation {last} too large");
        }
    }

    #[test]
    fn von_mises_survival_tracks_the_exact_tail() {
        let ctx = PrecisionContext::default();
        // (α=0, τ=0, x=10): ratio to the true survival within 2%.
        let approx = von_mises_survival(&p(0.0, 0.0), 10.0, &ctx).unwrap();
        let exact = esn_core::survival(&p(0.0, 0.0), 10.0, &ctx).unwrap();
        let ratio = Float::with_val(ctx.prec_bits(), &approx / &exact).to_f64();
        assert!((ratio - 1.0).abs() < 0.02, "ratio {ratio}");
        // The agreement tightens with x on the α < 0 branch too; at
        // (−1, 0) the leading correction is −2/x², so 64 is the first
        // grid point below the 1e−3 line (2/64² ≈ 4.9e−4).
        let mut last = f64::INFINITY;
        for x in [8.0, 16.0, 32.0, 64.0] {
            let approx = von_mises_survival(&p(-1.0, 0.0), x, &ctx).unwrap();
            let exact = esn_core::survival(&p(-1.0, 0.0), x, &ctx).unwrap();
            let dev =
                (Float::with_val(ctx.prec_bits(), &approx / &exact).to_f64() - 1.0).abs();
            assert!(dev < last);
            last = dev;
        }
        assert!(last < 1e-3);
    }

    #[test]
    fn auxiliary_function_trends_hold_for_moderate_x() {
        // g → 1 and f′ → 0, monotonically for x ≥ 5, on both branches.
        for params in [p(1.5, -0.5), p(-1.5, 0.25)] {
            let rep = von_mises_parts(&params).unwrap();
            let mut last_g = f64::INFINITY;
            let mut last_fp = f64::INFINITY;
            for x in [5.0, 8.0, 13.0, 21.0, 34.0] {
                let g_dev = (rep.g(x) - 1.0).abs();
                let fp = rep.f_prime(x).abs();
                assert!(rep.f(x) > 0.0);
                assert!(g_dev < last_g && fp < last_fp);
                last_g = g_dev;
                last_fp = fp;
            }
            assert!(last_g < 1e-3 && last_fp < 1e-2);
        }
    }
}

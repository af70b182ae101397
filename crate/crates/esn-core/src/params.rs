//! ESN parameter pair (slant α, extension τ) and the α < 0 tail regime.
//!
//! # Background
//!
//! The family is parameterized by a slant α and an extension τ, both real
//! and dimensionless (location and scale are standardized away). The tail
//! results for negative slant carry a standing assumption:
//!
//! ```text
//!     ᾱ² + ατ > 0   and   α + τ < 0,          ᾱ² = 1 + α²,
//! ```
//!
//! which keeps the auxiliary quantities ᾱ²x + ατ and −(αx + τ) strictly
//! positive on the tail x ≥ 1 and guarantees, among other things, that the
//! limiting Von Mises constant is positive. The flag
//! [`EsnParams::tail_regime_ok`] reports whether a parameter pair satisfies
//! it; α ≥ 0 needs no assumption and always passes.

use rug::Float;

use crate::error::EsnError;
use crate::precision::PrecisionContext;

/// Parameters of the extended skew-normal distribution ESN(α, τ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EsnParams {
    /// Slant parameter α.
    pub alpha: f64,
    /// Extension parameter τ.
    pub tau: f64,
}

impl EsnParams {
    /// Validated constructor: both parameters must be finite.
    ///
    /// # Errors
    ///
    /// [`EsnError::Domain`] on non-finite input.
    pub fn new(alpha: f64, tau: f64) -> Result<Self, EsnError> {
        if !alpha.is_finite() || !tau.is_finite() {
            return Err(EsnError::domain(
                "EsnParams",
                format!("parameters must be finite, got alpha={alpha}, tau={tau}"),
            ));
        }
        Ok(EsnParams { alpha, tau })
    }

    /// ᾱ = √(1 + α²) ≥ 1.
    #[inline]
    pub fn alpha_bar(&self) -> f64 {
        (1.0 + self.alpha * self.alpha).sqrt()
    }

    /// ᾱ² = 1 + α².
    #[inline]
    pub fn alpha_bar_sq(&self) -> f64 {
        1.0 + self.alpha * self.alpha
    }

    /// Whether the standing assumption of the α < 0 tail results holds:
    /// true for α ≥ 0; for α < 0 true iff ᾱ² + ατ > 0 and α + τ < 0.
    #[inline]
    pub fn tail_regime_ok(&self) -> bool {
        if self.alpha >= 0.0 {
            return true;
        }
        self.alpha_bar_sq() + self.alpha * self.tau > 0.0 && self.alpha + self.tau < 0.0
    }

    /// Err with full diagnostics unless [`Self::tail_regime_ok`].
    pub fn require_tail_regime(&self) -> Result<(), EsnError> {
        if self.tail_regime_ok() {
            Ok(())
        } else {
            Err(EsnError::Regime {
                alpha: self.alpha,
                tau: self.tau,
                mix_value: self.alpha_bar_sq() + self.alpha * self.tau,
                sum_value: self.alpha + self.tau,
            })
        }
    }

    /// The slant argument x_{α,τ} = αx + τ at working precision.
    #[inline]
    pub fn x_at(&self, x: &Float) -> Float {
        let mut v = x.clone();
        v *= self.alpha;
        v += self.tau;
        v
    }

    /// The mixed term ᾱ²x + ατ = x + α·x_{α,τ} at working precision.
    #[inline]
    pub fn mix(&self, x: &Float) -> Float {
        let mut v = x.clone();
        v *= self.alpha_bar_sq();
        v += self.alpha * self.tau;
        v
    }

    /// τ/ᾱ, the argument of the normalizing factor Φ(τ/ᾱ).
    #[inline]
    pub fn tau_over_bar(&self, ctx: &PrecisionContext) -> Float {
        // Form ᾱ in extended precision: for |α| ~ 10⁸ the double-precision
        // ᾱ loses nothing we care about, but this keeps the division exact
        // at working precision for free.
        let mut ab = ctx.big(self.alpha);
        ab.square_mut();
        ab += 1.0;
        ab.sqrt_mut();
        ctx.big(self.tau) / ab
    }

    /// Parameters of the reflected variable −X ~ ESN(−α, τ).
    ///
    /// The density satisfies f(−x; −α, τ) = f(x; α, τ) because
    /// φ(−x)Φ(−α·(−x)+τ) = φ(x)Φ(αx+τ) and the normalizer Φ(τ/ᾱ) only
    /// involves α². Hence cdf(x; α, τ) = survival(−x; −α, τ) exactly — the
    /// identity the lower-tail code paths are built on.
    #[inline]
    pub fn mirrored(&self) -> EsnParams {
        EsnParams { alpha: -self.alpha, tau: self.tau }
    }
}

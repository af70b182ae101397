//! Leading-order reciprocal asymptote of the ESN Mills ratio.
//!
//! # Background
//!
//! As x → ∞ the envelope of `crate::envelope` pinches onto a single
//! reciprocal law. For α ≥ 0 both ends behave like 1/x — the slant factor
//! Φ(αx + τ) in the density saturates (α > 0) or is constant (α = 0), so
//! the normal factor φ(x) controls the decay exactly as in the classical
//! Mills ratio. For α < 0 the slant factor itself decays, the effective
//! exponential rate becomes the mixed term m = ᾱ²x + ατ, and
//!
//! ```text
//!     R(x) = S(x)/f(x)  →  1/(ᾱ²x + ατ),        x → ∞.
//! ```
//!
//! Both laws are the special cases of 1/(scale·x + shift) with
//! (scale, shift) = (1, 0) and (ᾱ², ατ) respectively, which is how
//! [`MillsRatioAsymptote`] stores them.
//!
//! # Implementation
//!
//! The asymptote is a leading-order diagnostic — the quantity it is
//! compared against carries O(x⁻²) corrections — so double precision is
//! ample and no [`PrecisionContext`](esn_core::PrecisionContext) is
//! involved.
//!
//! # Key Assumptions and Limitations
//!
//! - Evaluation requires the reciprocal's denominator to be strictly
//!   positive; for α < 0 that means x > −ατ/ᾱ², a domain error otherwise.
//! - The value is meaningful as a limit: at moderate x it differs from the
//!   true ratio by a relative O(x⁻²), and nothing here quantifies the
//!   constant (the two-sided envelope does).

use esn_core::{EsnError, EsnParams};

/// Functional form of the Mills-ratio asymptote.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlopeForm {
    /// R(x) → 1/x (α ≥ 0).
    InverseX,
    /// R(x) → 1/(ᾱ²x + ατ) (α < 0).
    InverseAffine,
}

/// The reciprocal law 1/(scale·x + shift) the Mills ratio approaches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MillsRatioAsymptote {
    /// Which branch the parameters select.
    pub slope_form: SlopeForm,
    /// Coefficient of x in the denominator: 1 for α ≥ 0, ᾱ² for α < 0.
    pub affine_scale: f64,
    /// Constant term in the denominator: 0 for α ≥ 0, ατ for α < 0.
    pub affine_shift: f64,
}

impl MillsRatioAsymptote {
    /// The asymptote selected by a parameter pair.
    pub fn for_params(params: &EsnParams) -> Self {
        if params.alpha >= 0.0 {
            MillsRatioAsymptote {
                slope_form: SlopeForm::InverseX,
                affine_scale: 1.0,
                affine_shift: 0.0,
            }
        } else {
            MillsRatioAsymptote {
                slope_form: SlopeForm::InverseAffine,
                affine_scale: params.alpha_bar_sq(),
                affine_shift: params.alpha * params.tau,
            }
        }
    }

    /// The denominator scale·x + shift (the reciprocal of the asymptote).
    #[inline]
    pub fn denominator(&self, x: f64) -> f64 {
        self.affine_scale * x + self.affine_shift
    }

    /// Evaluate 1/(scale·x + shift).
    ///
    /// # Errors
    ///
    /// [`EsnError::Domain`] unless x is finite and the denominator is
    /// strictly positive.
    pub fn eval(&self, x: f64) -> Result<f64, EsnError> {
        if !x.is_finite() {
            return Err(EsnError::domain(
                "mills_ratio_asymptote",
                format!("x must be finite, got x={x}"),
            ));
        }
        let denom = self.denominator(x);
        if !(denom > 0.0) {
            return Err(EsnError::domain(
                "mills_ratio_asymptote",
                format!(
                    "reciprocal denominator {}x + {} = {denom} is not positive at x={x}",
                    self.affine_scale, self.affine_shift
                ),
            ));
        }
        Ok(1.0 / denom)
    }
}

/// Convenience: asymptote value for the parameters' branch at x.
pub fn mills_ratio_asymptote(params: &EsnParams, x: f64) -> Result<f64, EsnError> {
    MillsRatioAsymptote::for_params(params).eval(x)
}

//! Working-precision context threaded through every tail computation.
//!
//! # Background
//!
//! Tail quantities here span scales like exp(−ᾱ²x²/2) ≈ 10⁻⁴³⁰⁰⁰⁰ at
//! x ≈ 10³, and downstream second-order convergence analysis subtracts
//! nearly equal numbers of that class. Double precision is hopeless twice
//! over (range and cancellation), so every oracle-grade routine works in
//! MPFR floats whose precision, together with the quadrature tolerances and
//! subdivision budget, is carried in a [`PrecisionContext`].
//!
//! # Implementation
//!
//! `digits` is the requested number of significant decimal digits. The MPFR
//! bit precision is `ceil(digits·log₂10)` plus a fixed 64 guard bits, which
//! absorbs rounding across the few thousand arithmetic operations of a
//! typical adaptive quadrature without any measurable cost.
//!
//! # Key Assumptions and Limitations
//!
//! * `digits ≥ 15`; the default of 34 (double-double class) is the minimum
//!   at which the convergence-rate cancellation analysis stays meaningful.
//! * Tolerances are interpreted by the adaptive quadrature as: stop when the
//!   accumulated error estimate is below `max(quad_abs_tol,
//!   quad_rel_tol·|integral|)`. Magnitude-blind absolute stopping alone is
//!   *not* used anywhere: integrands are rescaled to O(1) so the relative
//!   criterion stays honest at any tail depth.

use rug::Float;

use crate::error::EsnError;

/// log₂(10), used to convert decimal digits to bits of mantissa.
const LOG2_10: f64 = 3.321_928_094_887_362;

/// Guard bits added on top of the requested decimal precision.
const GUARD_BITS: u32 = 64;

/// Precision and tolerance bundle for all ESN computations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionContext {
    /// Significant decimal digits of working precision (≥ 15).
    pub digits: u32,
    /// Relative tolerance for adaptive quadrature (in (0, 1)).
    pub quad_rel_tol: f64,
    /// Absolute tolerance for adaptive quadrature (in (0, 1)).
    pub quad_abs_tol: f64,
    /// Maximum number of panel bisections before quadrature reports a
    /// numeric error (≥ 1).
    pub max_subdivisions: u32,
}

impl Default for PrecisionContext {
    /// 34 digits, quad_rel_tol 10⁻¹², quad_abs_tol 10⁻¹⁴, 512 subdivisions.
    fn default() -> Self {
        PrecisionContext {
            digits: 34,
            quad_rel_tol: 1e-12,
            quad_abs_tol: 1e-14,
            max_subdivisions: 512,
        }
    }
}

impl PrecisionContext {
    /// Context with `digits` significant decimal digits and default
    /// tolerances.
    ///
    /// # Errors
    ///
    /// [`EsnError::Domain`] if `digits < 15`.
    pub fn new(digits: u32) -> Result<Self, EsnError> {
        let ctx = PrecisionContext { digits, ..PrecisionContext::default() };
        ctx.validate()?;
        Ok(ctx)
    }

    /// Check all field invariants.
    ///
    /// # Errors
    ///
    /// [`EsnError::Domain`] naming the violated invariant.
    pub fn validate(&self) -> Result<(), EsnError> {
        if self.digits < 15 {
            return Err(EsnError::domain(
                "PrecisionContext",
                format!("digits must be >= 15, got {}", self.digits),
            ));
        }
        for (name, tol) in [
            ("quad_rel_tol", self.quad_rel_tol),
            ("quad_abs_tol", self.quad_abs_tol),
        ] {
            if !(tol > 0.0 && tol < 1.0) {
                return Err(EsnError::domain(
                    "PrecisionContext",
                    format!("{name} must lie in (0, 1), got {tol}"),
                ));
            }
        }
        if self.max_subdivisions < 1 {
            return Err(EsnError::domain(
                "PrecisionContext",
                "max_subdivisions must be >= 1".to_string(),
            ));
        }
        Ok(())
    }

    /// MPFR mantissa bits corresponding to `digits`, including guard bits.
    #[inline]
    pub fn prec_bits(&self) -> u32 {
        (self.digits as f64 * LOG2_10).ceil() as u32 + GUARD_BITS
    }

    /// A new [`Float`] at this context's precision holding `value`.
    #[inline]
    pub fn big(&self, value: f64) -> Float {
        Float::with_val(self.prec_bits(), value)
    }

    /// Copy of this context with a different digit count (tolerances kept).
    pub fn with_digits(&self, digits: u32) -> Result<Self, EsnError> {
        let ctx = PrecisionContext { digits, ..*self };
        ctx.validate()?;
        Ok(ctx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_context_is_valid_and_34_digits() {
        let ctx = PrecisionContext::default();
        assert!(ctx.validate().is_ok());
        assert_eq!(ctx.digits, 34);
        // 34 digits need ceil(34·3.32193) = 113 bits; plus the guard.
        assert_eq!(ctx.prec_bits(), 113 + 64);
    }

    #[test]
    fn rejects_too_few_digits() {
        assert!(matches!(
            PrecisionContext::new(14),
            Err(EsnError::Domain { .. })
        ));
        assert!(PrecisionContext::new(15).is_ok());
    }

    #[test]
    fn rejects_bad_tolerances() {
        let mut ctx = PrecisionContext::default();
        ctx.quad_rel_tol = 0.0;
        assert!(ctx.validate().is_err());
        ctx.quad_rel_tol = 1.5;
        assert!(ctx.validate().is_err());
    }

    #[test]
    fn big_produces_requested_precision() {
        let ctx = PrecisionContext::default();
        let x = ctx.big(1.5);
        assert_eq!(x.prec(), ctx.prec_bits());
        assert_eq!(x.to_f64(), 1.5);
    }
}

//! Error taxonomy shared by the whole workspace.
//!
//! Every fallible operation in the ESN stack reports one of these variants.
//! The variants are deliberately coarse — they map one-to-one onto the CLI's
//! exit-code taxonomy (usage, regime violation, numeric failure) — but each
//! carries enough context to name the failing operation and the offending
//! values.

use thiserror::Error;

/// Unified error type for ESN computations.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum EsnError {
    /// An input lies outside the mathematical domain of the operation
    /// (non-finite parameter, probability outside (0,1), x on the wrong
    /// side of a required inequality, malformed precision request, …).
    #[error("domain error in {op}: {detail}")]
    Domain {
        /// Operation that rejected its input.
        op: &'static str,
        /// Human-readable description of the violated requirement.
        detail: String,
    },

    /// The α < 0 tail-regime assumption is violated: results for negative
    /// slant require ᾱ² + ατ > 0 and α + τ < 0.
    #[error(
        "regime violation for alpha={alpha}, tau={tau}: the alpha<0 tail results \
         assume \u{3b1}<0 with \u{3b1}\u{304}\u{b2}+\u{3b1}\u{3c4}>0 and \u{3b1}+\u{3c4}<0; \
         here \u{3b1}\u{304}\u{b2}+\u{3b1}\u{3c4}={mix_value}, \u{3b1}+\u{3c4}={sum_value}"
    )]
    Regime {
        /// Slant parameter.
        alpha: f64,
        /// Extension parameter.
        tau: f64,
        /// ᾱ² + ατ, which must be strictly positive.
        mix_value: f64,
        /// α + τ, which must be strictly negative.
        sum_value: f64,
    },

    /// A numerical procedure failed to reach its target: quadrature did not
    /// converge within the subdivision budget, a root solver did not
    /// bracket, an expansion guard tripped, and so on.
    #[error("numeric error in {op}: {detail}")]
    Numeric {
        /// The failing operation, e.g. `"adaptive quadrature"`.
        op: &'static str,
        /// What went wrong, including achieved error estimates.
        detail: String,
    },

    /// The requested computation cannot be trusted at the current working
    /// precision (cancellation monitor tripped, or the context's digits are
    /// below a documented minimum).
    #[error("precision error in {op}: {detail}")]
    Precision {
        /// The failing operation, e.g. `"h_function"`.
        op: &'static str,
        /// Diagnosis and advice (e.g. minimum digits required).
        detail: String,
    },

    /// An evaluation point sits exactly on a case boundary (or violates a
    /// printed denominator's sign condition) where a closed-form bound is
    /// undefined; such points are surfaced, never silently interpolated.
    #[error("case boundary in {op}: {detail}")]
    Boundary {
        /// The classifying operation.
        op: &'static str,
        /// Which boundary was hit, with values.
        detail: String,
    },

    /// Rejection sampling was refused because the expected acceptance rate
    /// Φ(τ/ᾱ) is below the configured floor.
    #[error(
        "sampler acceptance rate {acceptance:.3e} is below the floor {floor:.1e}: \
         tau is too negative for rejection sampling at this alpha"
    )]
    Sampling {
        /// Expected acceptance probability Φ(τ/ᾱ).
        acceptance: f64,
        /// Configured minimum acceptance rate.
        floor: f64,
    },
}

impl EsnError {
    /// Shorthand constructor for [`EsnError::Domain`].
    pub fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        EsnError::Domain { op, detail: detail.into() }
    }

    /// Shorthand constructor for [`EsnError::Numeric`].
    pub fn numeric(op: &'static str, detail: impl Into<String>) -> Self {
        EsnError::Numeric { op, detail: detail.into() }
    }
}

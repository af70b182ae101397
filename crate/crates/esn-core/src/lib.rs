//! Extended skew-normal (ESN) distribution functions at configurable
//! extended precision.
//!
//! # Background
//!
//! The extended skew-normal distribution ESN(α, τ) with slant α and
//! extension τ (standardized to location 0, scale 1) has density
//!
//! ```text
//!     f(x; α, τ) = φ(x) Φ(αx + τ) / Φ(τ/ᾱ),        ᾱ = √(1 + α²),
//! ```
//!
//! where φ and Φ are the standard normal density and distribution function.
//! Setting τ = 0 recovers the skew-normal family and α = 0 recovers the
//! standard normal itself (the factor Φ(τ)/Φ(τ) cancels for any τ).
//!
//! The distribution function has no closed form, and the deep upper tail —
//! the object of interest for extreme-value analysis — decays like
//! exp(−ᾱ²x²/2) when α < 0, far below anything representable in double
//! precision once x is moderately large. Everything here is therefore
//! computed with [`rug::Float`] (MPFR) at a working precision carried in a
//! [`PrecisionContext`], and survival probabilities are always integrated
//! directly over the tail, never formed as 1 − cdf.
//!
//! # Implementation
//!
//! * [`esn`] — pdf, cdf, survival, log-survival, quantile, and the Mills
//!   ratio, built on one tail integral with a rescaled O(1) integrand.
//! * [`quadrature`] — adaptive Gauss–Legendre panel integration with
//!   runtime-computed nodes at the working precision.
//! * [`normal`] — φ, Φ, ln Φ with an asymptotic series for the deep tail.
//! * [`sample`] — reproducible rejection sampler.
//! * [`fast`] — a double-precision mirror of pdf/cdf/survival for Monte
//!   Carlo-scale work where MPFR would be needlessly slow.
//!
//! # Key Assumptions and Limitations
//!
//! * Location/scale are standardized to (0, 1); general (μ, ω) is a thin
//!   affine wrapper deliberately left out.
//! * Tail computations for α < 0 are most meaningful under the regime
//!   assumption ᾱ² + ατ > 0 and α + τ < 0 (see
//!   [`EsnParams::tail_regime_ok`]); evaluation itself does not require it.
//! * The rejection sampler refuses parameter sets whose expected acceptance
//!   rate Φ(τ/ᾱ) falls below a floor (default 10⁻⁴), which rules out
//!   pathologically negative τ.

pub mod error;
pub mod esn;
pub mod fast;
pub mod normal;
pub mod params;
pub mod precision;
pub mod quadrature;
pub mod sample;

pub use error::EsnError;
pub use esn::{cdf, log_survival, log_survival_big, mills_ratio, pdf, quantile, survival};
pub use params::EsnParams;
pub use precision::PrecisionContext;
pub use sample::{sample, EsnSample};

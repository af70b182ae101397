//! Closed-form two-sided bounds and the leading-order asymptote of the
//! extended skew-normal Mills ratio.
//!
//! # Background
//!
//! The Mills ratio of a distribution is the survival function divided by the
//! density, R(x) = S(x)/f(x). For ESN(α, τ) it admits explicit closed-form
//! lower and upper bounds for every x > 0 away from a thin set of case
//! boundaries. The bounds are built from φ and rational functions only — no
//! quadrature — so they form an independent numerical certificate: the
//! quadrature-based exact ratio must land strictly inside the envelope, and
//! a violation exposes a defect in either path immediately.
//!
//! The applicable bound pair depends on the signs of the slant α, of the
//! slant argument x_ατ = αx + τ, and (when α < 0 and x_ατ > 0) of the mixed
//! term m = ᾱ²x + ατ. Five cases arise; [`MillsCase`] names them and
//! [`classify_case`] performs the dispatch.
//!
//! As x → ∞, both envelope ends collapse onto the same reciprocal law:
//! R(x) → 1/x for α ≥ 0 and R(x) → 1/(ᾱ²x + ατ) for α < 0. The module
//! exposes that limit as [`MillsRatioAsymptote`].
//!
//! # Implementation
//!
//! Classification is pure double-precision sign logic: the signs of α, x_ατ
//! and m are exact for representable inputs, and exact zeros are reported as
//! boundary errors rather than being pushed into an adjacent case whose
//! formula divides by the vanishing quantity.
//!
//! The bound formulas themselves are evaluated in extended precision at the
//! caller's [`PrecisionContext`]. This matters most in the α < 0, m < 0
//! case, whose printed form contains the factor φ(ᾱx + ατ/ᾱ)⁻¹ = φ(m/ᾱ)⁻¹
//! alongside φ(x_ατ)⁻¹: each reciprocal alone can exceed the double-
//! precision exponent range, but inside the case region m²/ᾱ² < x_ατ²
//! always holds, so the assembled ratios are moderate. MPFR's wide exponent
//! range lets the code evaluate the printed expressions literally and
//! reassemble them without explicit log-space bookkeeping, with no risk of
//! intermediate overflow for any x of practical size.
//!
//! # Key Assumptions and Limitations
//!
//! - The bounds are stated for x > 0 only; x ≤ 0 is a domain error.
//! - Exact case boundaries (x_ατ = 0, or m = 0 when α < 0 and x_ατ > 0) are
//!   boundary errors: the printed formulas are undefined there. The one
//!   exception is α = 0, τ = 0 (where x_ατ ≡ 0): that law is exactly
//!   standard normal, so [`mills_bounds`] returns the classical envelope
//!   x/(x²+1) < R < 1/x instead of failing every x.
//! - Two lower-bound denominators, x_ατ − φ(x_ατ) and φ(x_ατ)⁻¹ − x_ατ⁻¹,
//!   are positive only for x_ατ > z* where z* ≈ 0.372239 solves φ(z) = z;
//!   points with 0 < x_ατ ≤ z* are reported as boundary errors instead of
//!   returning a bound with the wrong sign.
//! - No tail-regime gate is applied: the inequalities hold whenever the
//!   guards pass, even for α < 0 parameter pairs outside the standing tail
//!   assumption. They can however become arbitrarily loose: with m < 0 and
//!   |m| small the lower bound can go negative and the upper bound blow up
//!   — valid, but uninformative.

pub mod asymptote;
pub mod envelope;

pub use asymptote::{mills_ratio_asymptote, MillsRatioAsymptote, SlopeForm};
pub use envelope::{classify_case, mills_bounds, MillsCase, MillsEnvelope, Z_STAR};

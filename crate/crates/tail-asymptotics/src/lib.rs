//! Von Mises tail representation and high-order tail expansions for the
//! extended skew-normal law.
//!
//! # Background
//!
//! A distribution with survival function S is a Von Mises function when it
//! can be written
//!
//! ```text
//!     S(x) = c(x) · exp( − ∫₁ˣ g(v)/f(v) dv ),
//! ```
//!
//! with c(x) → c > 0, g(x) → 1, and an auxiliary function f > 0 whose
//! derivative vanishes at infinity — the classical sufficient condition for
//! membership in the Gumbel max-domain of attraction, with f doubling as
//! the scale of the normalizing constants (a_n = f(b_n)).
//!
//! For ESN(α, τ) the representation splits on the slant sign. For α ≥ 0
//! the tail is normal-like: f(x) = 1/x, g(x) = 1 + x⁻². For α < 0 — under
//! the standing regime ᾱ² + ατ > 0, α + τ < 0 — the effective decay rate
//! steepens to the mixed term m(x) = ᾱ²x + ατ: f(x) = 1/m(x) and g carries
//! two O(x⁻²) corrections. [`TailRepresentation`] packages c, g, f per
//! branch; the integral ∫₁ˣ g/f has elementary antiderivatives on both
//! branches and is evaluated in closed form.
//!
//! On top of the representation sit sharper expansions of the survival
//! function itself ([`tail_expansion`]): a three-term reciprocal-even
//! series for α ≥ 0 and, for α < 0, a bracketed polynomial in 1/x, 1/x_ατ
//! and 1/(x + τ_α) (τ_α = τα/ᾱ²) truncated at O(x⁻⁶). These serve both as
//! theory under test and as the production log-survival path at x too
//! large for quadrature to be worth running.
//!
//! # Implementation
//!
//! All survival-scale quantities are assembled in log space at the
//! caller's [`PrecisionContext`](esn_core::PrecisionContext) — the factors
//! span scales like 10⁻³⁰⁰ long before x reaches 40 on the α < 0 branch.
//! The bracketed correction factors are O(1) and are reported as plain
//! doubles alongside the extended-precision log-survival value.
//!
//! # Key Assumptions and Limitations
//!
//! - The α < 0 branch requires the standing tail regime; violations are
//!   regime errors, surfaced before any arithmetic.
//! - Integrals and expansions are anchored at 1, so evaluation requires
//!   x ≥ 1; the expansions additionally guard est_rel_error < 1 and refuse
//!   x where the truncated series is meaningless.
//! - The expansions approximate the *upper* tail only; lower-tail needs go
//!   through the esn-core mirror identity instead.

pub mod expansion;
pub mod representation;

pub use expansion::{tail_expansion, TailExpansionResult};
pub use representation::{
    von_mises_parts, von_mises_survival, TailBranch, TailRepresentation,
};

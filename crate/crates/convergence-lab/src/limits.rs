//! Limit functions κ(x) and ω(x) governing the Gumbel approach of maxima.
//!
//! # Background
//!
//! Let `b_n` solve `ln S(b_n) = −ln n` and `a_n = f(b_n)` be the exact
//! normalizing constants, and write the log-scale gap of the maximum's law to
//! its Gumbel limit `G₀(x) = exp(−e^{−x})` as
//!
//! ```text
//! h(x; b_n) = n·ln Φ_{α,τ}(a_n·x + b_n) + e^{−x},
//! Φ_{α,τ}ⁿ(a_n·x + b_n) = G₀(x)·e^{h(x; b_n)}.
//! ```
//!
//! The gap vanishes at the notoriously slow `1/ln n` pace, and its shape is
//! captured by two nested limits as `n → ∞`:
//!
//! ```text
//! b_n²·h(x; b_n)                →  κ(x)
//! b_n²·(b_n²·h(x; b_n) − κ(x)) →  ω(x)
//! ```
//!
//! with elementary branch-dependent forms (ᾱ² = 1 + α²):
//!
//! ```text
//! α ≥ 0:   κ(x) =  (x² + 2x)·e^{−x} / 2
//!          ω(x) = −(x⁴ + 4x³ + 8x² + 16x)·e^{−x} / 8
//!
//! α < 0:   κ(x) =  (x² + 4x)·e^{−x} / (2ᾱ²)
//!          ω(x) = −[(1 + 3α²)·16x + α²·(x⁴ + 8x³ + 24x²)]·e^{−x} / (8·α²·ᾱ⁴)
//! ```
//!
//! The negative-slant ω is the collection, over the common denominator
//! `8·α²·ᾱ⁴`, of three elementary pieces:
//!
//! ```text
//! ω(x) = −e^{−x}·[ x²/ᾱ⁴  +  ((x² + 4x)/(2ᾱ²))²/2  +  2x(1 + 3α²)/(α²ᾱ⁴) ]
//! ```
//!
//! (a unit test pins this identity). First consequence of the limits: since
//! `Φⁿ − G₀ = G₀·(e^h − 1)`, the distribution-scale gap opens as
//! `G₀(x)·e^{−x}·κ(x)·e^{x}/b_n² + O(b_n⁻⁴)`, which is where the first-order
//! Gumbel convergence rate of extended skew-normal maxima comes from.
//!
//! # Implementation
//!
//! Plain `f64`: both branches are products of exact small-integer polynomials
//! (evaluated in Horner form) with `e^{−x}`. There is no catastrophic
//! cancellation — the polynomials only change sign at their real roots, where
//! the functions themselves vanish smoothly.
//!
//! # Key Assumptions and Limitations
//!
//! * The two branches describe different tail universality classes and do
//!   **not** meet at α = 0: the negative-slant forms carry `1/α²` factors
//!   that blow up as α → 0⁻. That is faithful to the underlying asymptotics
//!   (an arbitrarily weak negative slant takes arbitrarily long to assert
//!   itself in the tail), not a defect of the evaluation.
//! * For α < 0 the formulas are meaningful only in the tail regime
//!   `ᾱ² + ατ > 0` and `α + τ < 0`. The rate evaluators enforce that gate;
//!   these functions are total and do not.
//! * τ never enters: both limit functions depend on the slant alone. The
//!   extension parameter only shifts the constants `a_n`, `b_n`, not the
//!   shape of the approach.

use esn_core::EsnParams;

/// First-order limit of `b_n²·h(x; b_n)`:
///
/// ```text
/// κ(x) = (x² + 2x)·e^{−x}/2           (α ≥ 0)
/// κ(x) = (x² + 4x)·e^{−x}/(2ᾱ²)       (α < 0)
/// ```
pub fn kappa(params: &EsnParams, x: f64) -> f64 {
    let weight = (-x).exp();
    if params.alpha >= 0.0 {
        0.5 * (x + 2.0) * x * weight
    } else {
        0.5 * (x + 4.0) * x * weight / params.alpha_bar_sq()
    }
}

/// Second-order limit of `b_n²·(b_n²·h(x; b_n) − κ(x))`:
///
/// ```text
/// ω(x) = −(x⁴ + 4x³ + 8x² + 16x)·e^{−x}/8                          (α ≥ 0)
/// ω(x) = −[(1+3α²)·16x + α²·(x⁴+8x³+24x²)]·e^{−x}/(8·α²·ᾱ⁴)        (α < 0)
/// ```
pub fn omega(params: &EsnParams, x: f64) -> f64 {
    let weight = (-x).exp();
    if params.alpha >= 0.0 {
        -(((x + 4.0) * x + 8.0) * x + 16.0) * x * weight / 8.0
    } else {
        let alpha_sq = params.alpha * params.alpha;
        let abar_sq = params.alpha_bar_sq();
        let bracket =
            (1.0 + 3.0 * alpha_sq) * 16.0 * x + alpha_sq * ((x + 8.0) * x + 24.0) * x * x;
        -bracket * weight / (8.0 * alpha_sq * abar_sq * abar_sq)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(alpha: f64, tau: f64) -> EsnParams {
        EsnParams::new(alpha, tau).unwrap()
    }

    fn assert_rel(value: f64, reference: f64, tol: f64, label: &str) {
        let rel = (value - reference).abs() / reference.abs();
        assert!(
            rel <= tol,
            "{label}: value {value:.16e} vs reference {reference:.16e} (rel {rel:.2e})"
        );
    }

    #[test]
    fn kappa_vanishes_exactly_at_the_polynomial_roots() {
        assert_eq!(kappa(&params(0.0, 0.3), 0.0), 0.0);
        assert_eq!(kappa(&params(1.5, -0.2), -2.0), 0.0);
        assert_eq!(kappa(&params(-1.0, 0.0), 0.0), 0.0);
        assert_eq!(kappa(&params(-1.0, 0.0), -4.0), 0.0);
        assert_eq!(omega(&params(2.0, 1.0), 0.0), 0.0);
        assert_eq!(omega(&params(-0.5, -1.0), 0.0), 0.0);
    }

    #[test]
    fn closed_forms_match_hand_substitution() {
        // (x² + 2x)e^{−x}/2 at x = 2: (4+4)/2 · e^{−2} = 4e^{−2}.
        assert_rel(kappa(&params(0.0, 0.0), 2.0), 4.0 * (-2.0f64).exp(), 1e-15, "kappa(0,·,2)");
        // α = −1: (4+8)/(2·2) · e^{−2} = 3e^{−2}.
        assert_rel(kappa(&params(-1.0, 0.0), 2.0), 3.0 * (-2.0f64).exp(), 1e-15, "kappa(-1,·,2)");
        // −(1+4+8+16)/8 · e^{−1} = −29/(8e).
        assert_rel(
            omega(&params(1.0, 0.0), 1.0),
            -29.0 / (8.0 * 1.0f64.exp()),
            1e-15,
            "omega(1,·,1)",
        );
        // α = −1: bracket = 4·16 + (1+8+24) = 97, denominator 8·1·4 = 32.
        assert_rel(
            omega(&params(-1.0, 0.0), 1.0),
            -97.0 / (32.0 * 1.0f64.exp()),
            1e-15,
            "omega(-1,·,1)",
        );
    }

    /// References computed at 50-digit precision from the printed formulas.
    #[test]
    fn frozen_reference_table_is_reproduced() {
        let x_grid = [-1.0, 0.5, 1.0, 2.0];
        let kappa_nonneg = [
            -1.359140914229522617680144,
            0.3790816623203958897523747,
            0.5518191617571634823932857,
            0.541341132946450767575998,
        ];
        let omega_nonneg = [
            3.737637514131187198620395,
            -0.8008100116518363171018916,
            -1.333562974246478415783774,
            -1.894693965312577686515993,
        ];
        let kappa_neg = [
            -2.038711371344283926520216,
            0.3411734960883563007771372,
            0.4598493014643029019944047,
            0.4060058497098380756819985,
        ];
        let omega_neg = [
            3.992476435549222689435422,
            -0.7403938717195232221726069,
            -1.115134556050934537336431,
            -1.285685190747820572992995,
        ];
        for (i, &x) in x_grid.iter().enumerate() {
            // The α ≥ 0 branch is slant-free: α = 0 and α = 1 must agree.
            for alpha in [0.0, 1.0] {
                let p = params(alpha, 0.0);
                assert_rel(kappa(&p, x), kappa_nonneg[i], 1e-15, "kappa nonneg");
                assert_rel(omega(&p, x), omega_nonneg[i], 1e-15, "omega nonneg");
            }
            let p = params(-1.0, 0.0);
            assert_rel(kappa(&p, x), kappa_neg[i], 1e-15, "kappa neg");
            assert_rel(omega(&p, x), omega_neg[i], 1e-15, "omega neg");
        }
    }

    #[test]
    fn extension_parameter_never_enters() {
        for &x in &[-1.0, 0.7, 3.0] {
            for &tau in &[-1.0, 0.0, 2.0] {
                assert_eq!(kappa(&params(1.0, tau), x), kappa(&params(1.0, 0.0), x));
                assert_eq!(omega(&params(0.5, tau), x), omega(&params(0.5, 0.0), x));
            }
            // In the regime-valid part of the α < 0 family, τ is equally inert.
            for &tau in &[0.0, 0.4] {
                assert_eq!(kappa(&params(-1.0, tau), x), kappa(&params(-1.0, 0.0), x));
                assert_eq!(omega(&params(-1.0, tau), x), omega(&params(-1.0, 0.0), x));
            }
        }
        // The slant itself does matter on the negative branch.
        assert_ne!(kappa(&params(-1.0, 0.0), 1.0), kappa(&params(-2.0, 0.0), 1.0));
        assert_ne!(omega(&params(-1.0, 0.0), 1.0), omega(&params(-2.0, 0.0), 1.0));
    }

    /// ω(x) for α < 0 equals the three-piece form
    /// −e^{−x}·[x²/ᾱ⁴ + ((x²+4x)/(2ᾱ²))²/2 + 2x(1+3α²)/(α²ᾱ⁴)]
    /// before collection over the common denominator 8α²ᾱ⁴.
    #[test]
    fn negative_branch_omega_matches_its_three_piece_form() {
        for &alpha in &[-0.5, -1.0, -2.0] {
            for &x in &[-1.0, 0.7, 2.0, 5.0] {
                let p = params(alpha, 0.0);
                let a2 = alpha * alpha;
                let ab2 = 1.0 + a2;
                let piece1 = x * x / (ab2 * ab2);
                let half_kappa_sq = 0.5 * ((x * x + 4.0 * x) / (2.0 * ab2)).powi(2);
                let piece3 = 2.0 * x * (1.0 + 3.0 * a2) / (a2 * ab2 * ab2);
                let expected = -(-x).exp() * (piece1 + half_kappa_sq + piece3);
                assert_rel(omega(&p, x), expected, 1e-13, "three-piece identity");
            }
        }
    }
}

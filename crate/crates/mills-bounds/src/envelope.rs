//! Case classification and closed-form Mills-ratio envelopes.
//!
//! # Background
//!
//! Write x_ατ = αx + τ, ᾱ² = 1 + α², m = ᾱ²x + ατ and let
//! L₀(x) = x⁻¹(1 + x⁻²)⁻¹ = x/(x² + 1) denote the classical lower bound of
//! the standard normal Mills ratio. For x > 0 the ESN Mills ratio
//! R(x) = S(x)/f(x) satisfies L < R < U with the pair (L, U) printed below
//! for each sign case:
//!
//! ```text
//! (i)(a)  α ≥ 0, x_ατ > 0:
//!     L = L₀(x)
//!     U = x⁻¹ (1 − φ(x_ατ)/x_ατ)⁻¹                   [needs x_ατ > z*]
//!
//! (i)(b)  α ≥ 0, x_ατ < 0:
//!     L = L₀(x)
//!     U = x⁻¹ · ( −(x_ατ² + 1) / (x_ατ · φ(x_ατ)) )
//!
//! (ii)(a) α < 0, x_ατ > 0, m > 0:
//!     L = L₀(x) · ( 1 + (α/m) · φ(x_ατ) x_ατ / (x_ατ − φ(x_ατ)) )
//!                                                     [needs x_ατ > z*]
//!     U = x⁻¹ · ( 1 + (α m/(m² + ᾱ²)) · φ(x_ατ) m / (x_ατ² + 1 − x_ατ φ(x_ατ)) )
//!
//! (ii)(b) α < 0, x_ατ > 0, m < 0:   (note ᾱx + ατ/ᾱ = m/ᾱ)
//!     L = L₀(x) · ( 1 + N_L / D_L )
//!         N_L = (α/ᾱ) φ(m/ᾱ)⁻¹ + α m/(m² + ᾱ²)
//!         D_L = φ(x_ατ)⁻¹ − x_ατ⁻¹                    [needs x_ατ > z*]
//!     U = x⁻¹ · ( 1 + N_U / D_U )
//!         N_U = (α/ᾱ) φ(m/ᾱ)⁻¹ + α/m
//!         D_U = φ(x_ατ)⁻¹ − x_ατ/(x_ατ² + 1)
//!
//! (ii)(c) α < 0, x_ατ < 0   (then m = x + α·x_ατ > 0 automatically):
//!     L = L₀(x) · ( 1 − (α x_ατ/m)(1 + x_ατ⁻²) )
//!     U = x⁻¹ · ( 1 − (α x_ατ/m)(1 + ᾱ²/m²)⁻¹ )
//! ```
//!
//! Here z* ≈ 0.372239 is the unique root of φ(z) = z; the two marked
//! denominators are positive exactly for x_ατ > z*. The remaining
//! denominators are positive throughout their case: x_ατ² + 1 − x_ατ φ(x_ατ)
//! because zφ(z) ≤ φ(1) < 1, and φ(x_ατ)⁻¹ − x_ατ/(x_ατ² + 1) because
//! φ(z)⁻¹ ≥ √(2π) > 1/2 ≥ z/(z² + 1).
//!
//! # Implementation
//!
//! Sign dispatch happens in double precision (exact), values in extended
//! precision. The marked denominators are computed and sign-checked at
//! working precision rather than comparing x_ατ against a decimal z*
//! constant — the guard then fails exactly when the printed expression is
//! unusable. In case (ii)(b) the region inequality m²/ᾱ² < x_ατ² (proof:
//! expand x² + 2αx·x_ατ − x_ατ² < 0 using |α|x_ατ > x) keeps the product
//! φ(m/ᾱ)⁻¹ · φ-scale terms moderate even though each factor can dwarf the
//! double-precision exponent range; MPFR absorbs the intermediate
//! magnitudes, which is why no explicit log-space reassembly is needed.
//!
//! # Key Assumptions and Limitations
//!
//! - x must be strictly positive and finite.
//! - Exact case boundaries and guard failures are [`EsnError::Boundary`],
//!   carrying the offending quantity; callers scanning a grid are expected
//!   to skip such points, not interpolate across them.
//! - Near m = 0⁻ the case (ii)(b) bounds are valid but vacuous (L < 0,
//!   U ~ 1/|m|); the envelope is informative only away from the m = 0 line.
//! - The case (ii)(a) *upper* bound is evaluated exactly as printed, and
//!   the printed form is empirically not always a bound: on a dense scan
//!   of the guard-passing region with τ ≤ 2 it undercuts the true ratio at
//!   ~2.5% of points (by up to ~4%, worse for larger τ), all at small |α|
//!   near the x_ατ → z* edge. The lower bound never failed on the same
//!   scan. Downstream consumers report the observed sandwich status rather
//!   than assuming it.

use std::fmt;

use esn_core::normal::phi;
use esn_core::{EsnError, EsnParams, PrecisionContext};
use rug::Float;

/// Root of φ(z) = z. The lower-bound denominators x_ατ − φ(x_ατ) and
/// φ(x_ατ)⁻¹ − x_ατ⁻¹ are positive exactly for x_ατ > z*.
pub const Z_STAR: f64 = 0.372_238_898_035_618_64;

/// Sign case of the printed Mills-ratio bounds at a point x > 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MillsCase {
    /// α ≥ 0 and x_ατ > 0.
    PosAlphaPosArg,
    /// α ≥ 0 and x_ατ < 0.
    PosAlphaNegArg,
    /// α < 0, x_ατ > 0 and m = ᾱ²x + ατ > 0.
    NegAlphaPosArgPosMix,
    /// α < 0, x_ατ > 0 and m < 0.
    NegAlphaPosArgNegMix,
    /// α < 0 and x_ατ < 0 (m > 0 follows automatically).
    NegAlphaNegArg,
}

impl MillsCase {
    /// Stable identifier used in tabulated output and diagnostics.
    pub fn id(&self) -> &'static str {
        match self {
            MillsCase::PosAlphaPosArg => "PosAlpha_PosArg",
            MillsCase::PosAlphaNegArg => "PosAlpha_NegArg",
            MillsCase::NegAlphaPosArgPosMix => "NegAlpha_PosArg_PosMix",
            MillsCase::NegAlphaPosArgNegMix => "NegAlpha_PosArg_NegMix",
            MillsCase::NegAlphaNegArg => "NegAlpha_NegArg",
        }
    }
}

impl fmt::Display for MillsCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Closed-form envelope L < S(x)/f(x) < U at a single point.
#[derive(Debug, Clone)]
pub struct MillsEnvelope {
    /// Evaluation point (x > 0).
    pub x: f64,
    /// Which sign case produced the bounds.
    pub case_id: MillsCase,
    /// Closed-form lower bound at working precision.
    pub lower: Float,
    /// Closed-form upper bound at working precision.
    pub upper: Float,
}

/// Decide which printed bound pair applies at x.
///
/// # Errors
///
/// - [`EsnError::Domain`] unless x is finite and strictly positive.
/// - [`EsnError::Boundary`] when x sits exactly on a case boundary:
///   x_ατ = 0, or m = 0 with α < 0 and x_ατ > 0. (For α = 0, τ = 0 every
///   x is such a boundary point; [`mills_bounds`] nevertheless serves that
///   parameter pair through the classical reduction — see there.)
pub fn classify_case(params: &EsnParams, x: f64) -> Result<MillsCase, EsnError> {
    if !x.is_finite() || x <= 0.0 {
        return Err(EsnError::domain(
            "classify_case",
            format!("Mills bounds are stated for x > 0, got x={x}"),
        ));
    }
    let xa = params.alpha * x + params.tau;
    if xa == 0.0 {
        return Err(EsnError::Boundary {
            op: "classify_case",
            detail: format!(
                "slant argument x_atau = alpha*x + tau vanishes at x={x} \
                 (alpha={}, tau={}): the printed bounds divide by x_atau",
                params.alpha, params.tau
            ),
        });
    }
    if params.alpha >= 0.0 {
        return Ok(if xa > 0.0 {
            MillsCase::PosAlphaPosArg
        } else {
            MillsCase::PosAlphaNegArg
        });
    }
    if xa < 0.0 {
        return Ok(MillsCase::NegAlphaNegArg);
    }
    let m = params.alpha_bar_sq() * x + params.alpha * params.tau;
    if m == 0.0 {
        return Err(EsnError::Boundary {
            op: "classify_case",
            detail: format!(
                "mixed term m = (1+alpha^2)x + alpha*tau vanishes at x={x} \
                 (alpha={}, tau={}): the printed bounds divide by m",
                params.alpha, params.tau
            ),
        });
    }
    Ok(if m > 0.0 {
        MillsCase::NegAlphaPosArgPosMix
    } else {
        MillsCase::NegAlphaPosArgNegMix
    })
}

/// Classical normal lower bound L₀(x) = x/(x² + 1).
fn base_lower(xb: &Float) -> Float {
    let prec = xb.prec();
    let mut den = Float::with_val(prec, xb * xb);
    den += 1u32;
    Float::with_val(prec, xb / &den)
}

/// Boundary error for a printed denominator that must be positive.
fn guard_failure(which: &str, value: &Float, xa: &Float, x: f64) -> EsnError {
    EsnError::Boundary {
        op: "mills_bounds",
        detail: format!(
            "printed denominator {which} = {:.6e} is not positive at x={x} \
             (x_atau = {:.6e}; positivity requires x_atau > z* = {Z_STAR})",
            value.to_f64(),
            xa.to_f64()
        ),
    }
}

/// Evaluate the closed-form Mills envelope at x.
///
/// Dispatches on [`classify_case`] and evaluates the printed bound pair at
/// the context's working precision. No quadrature is performed and no
/// tail-regime gate is applied.
///
/// One parameter pair is served outside the case table: at α = 0, τ = 0
/// the distribution is exactly standard normal and every x > 0 sits on the
/// x_ατ = 0 boundary, so the classical envelope x/(x²+1) < R(x) < 1/x is
/// returned instead — an exact result, not an interpolation. It is
/// reported under [`MillsCase::PosAlphaPosArg`], whose formulas it is the
/// x_ατ → ∞ saturation of.
///
/// # Errors
///
/// Everything [`classify_case`] reports, plus [`EsnError::Boundary`] when a
/// guard denominator (positive only for x_ατ > z*) fails its sign check.
pub fn mills_bounds(
    params: &EsnParams,
    x: f64,
    ctx: &PrecisionContext,
) -> Result<MillsEnvelope, EsnError> {
    ctx.validate()?;
    if params.alpha == 0.0 && params.tau == 0.0 {
        if !x.is_finite() || x <= 0.0 {
            return Err(EsnError::domain(
                "mills_bounds",
                format!("Mills bounds are stated for x > 0, got x={x}"),
            ));
        }
        let xb = ctx.big(x);
        let mut upper = xb.clone();
        upper.recip_mut();
        return Ok(MillsEnvelope {
            x,
            case_id: MillsCase::PosAlphaPosArg,
            lower: base_lower(&xb),
            upper,
        });
    }
    let case_id = classify_case(params, x)?;
    let prec = ctx.prec_bits();
    let xb = ctx.big(x);
    let xa = params.x_at(&xb);
    let l0 = base_lower(&xb);

    // ᾱ² and ᾱ at working precision (the f64 α is exact; one rounding each).
    let mut abar_sq = ctx.big(params.alpha);
    abar_sq.square_mut();
    abar_sq += 1u32;
    let abar = abar_sq.clone().sqrt();

    let (lower, upper) = match case_id {
        MillsCase::PosAlphaPosArg => {
            // U = x⁻¹ (1 − φ(x_ατ)/x_ατ)⁻¹, positive only for x_ατ > z*.
            let mut den = phi(&xa);
            den /= &xa;
            let den = Float::with_val(prec, 1.0 - &den);
            if !(den > 0.0) {
                return Err(guard_failure("1 - phi(x_atau)/x_atau", &den, &xa, x));
            }
            let mut upper = Float::with_val(prec, &xb * &den);
            upper.recip_mut();
            (l0, upper)
        }
        MillsCase::PosAlphaNegArg => {
            // U = x⁻¹ · (−(x_ατ² + 1)/(x_ατ φ(x_ατ))); x_ατ < 0 makes it positive.
            let mut num = Float::with_val(prec, &xa * &xa);
            num += 1u32;
            let mut den = phi(&xa);
            den *= &xa;
            den *= &xb;
            let mut upper = num / den;
            upper = -upper;
            (l0, upper)
        }
        MillsCase::NegAlphaPosArgPosMix => {
            let m = params.mix(&xb);
            let phi_xa = phi(&xa);
            // L = L₀ · (1 + (α/m) · φ(x_ατ) x_ατ / (x_ατ − φ(x_ατ))).
            let den_l = Float::with_val(prec, &xa - &phi_xa);
            if !(den_l > 0.0) {
                return Err(guard_failure("x_atau - phi(x_atau)", &den_l, &xa, x));
            }
            let mut corr = Float::with_val(prec, &phi_xa * &xa);
            corr /= &den_l;
            corr *= params.alpha;
            corr /= &m;
            corr += 1u32;
            let lower = Float::with_val(prec, &l0 * &corr);
            // U = x⁻¹ · (1 + (α m/(m²+ᾱ²)) · φ(x_ατ) m/(x_ατ² + 1 − x_ατ φ(x_ατ))).
            let mut den_u = Float::with_val(prec, &xa * &xa);
            den_u += 1u32;
            den_u -= Float::with_val(prec, &xa * &phi_xa);
            let mut msq = Float::with_val(prec, &m * &m);
            msq += &abar_sq;
            let mut corr = Float::with_val(prec, &phi_xa * &m);
            corr /= &den_u;
            corr *= &m;
            corr /= &msq;
            corr *= params.alpha;
            corr += 1u32;
            let upper = Float::with_val(prec, &corr / &xb);
            (lower, upper)
        }
        MillsCase::NegAlphaPosArgNegMix => {
            let m = params.mix(&xb);
            let phi_xa = phi(&xa);
            // Shared term (α/ᾱ) φ(m/ᾱ)⁻¹, using ᾱx + ατ/ᾱ = m/ᾱ. Inside the
            // case m²/ᾱ² < x_ατ², so this reciprocal never outruns the
            // φ(x_ατ)⁻¹ factors it is later combined with.
            let mbar = Float::with_val(prec, &m / &abar);
            let mut shared = phi(&mbar);
            shared.recip_mut();
            shared *= params.alpha;
            shared /= &abar;
            // N_L = shared + α m/(m² + ᾱ²).
            let mut msq = Float::with_val(prec, &m * &m);
            msq += &abar_sq;
            let mut n_l = Float::with_val(prec, &m / &msq);
            n_l *= params.alpha;
            n_l += &shared;
            // D_L = φ(x_ατ)⁻¹ − x_ατ⁻¹, positive only for x_ατ > z*.
            let mut d_l = phi_xa.clone();
            d_l.recip_mut();
            let mut inv_xa = xa.clone();
            inv_xa.recip_mut();
            d_l -= &inv_xa;
            if !(d_l > 0.0) {
                return Err(guard_failure(
                    "1/phi(x_atau) - 1/x_atau",
                    &d_l,
                    &xa,
                    x,
                ));
            }
            let mut corr = n_l / d_l;
            corr += 1u32;
            let lower = Float::with_val(prec, &l0 * &corr);
            // N_U = shared + α/m.
            let mut n_u = ctx.big(params.alpha);
            n_u /= &m;
            n_u += &shared;
            // D_U = φ(x_ατ)⁻¹ − x_ατ/(x_ατ² + 1) > 0 always.
            let mut d_u = phi_xa;
            d_u.recip_mut();
            let mut t = Float::with_val(prec, &xa * &xa);
            t += 1u32;
            d_u -= Float::with_val(prec, &xa / &t);
            let mut corr = n_u / d_u;
            corr += 1u32;
            let upper = Float::with_val(prec, &corr / &xb);
            (lower, upper)
        }
        MillsCase::NegAlphaNegArg => {
            let m = params.mix(&xb);
            // t = α x_ατ/m > 0 here (α < 0, x_ατ < 0, m > 0).
            let mut t = Float::with_val(prec, &xa / &m);
            t *= params.alpha;
            // L = L₀ · (1 − t(1 + x_ατ⁻²)).
            let mut grow = Float::with_val(prec, &xa * &xa);
            grow.recip_mut();
            grow += 1u32;
            grow *= &t;
            let factor = Float::with_val(prec, 1.0 - &grow);
            let lower = Float::with_val(prec, &l0 * &factor);
            // U = x⁻¹ · (1 − t(1 + ᾱ²/m²)⁻¹).
            let mut shrink = Float::with_val(prec, &m * &m);
            shrink.recip_mut();
            shrink *= &abar_sq;
            shrink += 1u32;
            shrink.recip_mut();
            shrink *= &t;
            let factor = Float::with_val(prec, 1.0 - &shrink);
            let upper = Float::with_val(prec, &factor / &xb);
            (lower, upper)
        }
    };

    Ok(MillsEnvelope { x, case_id, lower, upper })
}

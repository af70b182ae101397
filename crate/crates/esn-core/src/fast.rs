//! Double-precision fast path for Monte Carlo-scale work.
//!
//! # Background
//!
//! Kolmogorov–Smirnov checks on 10⁵-point samples and block-maxima
//! experiments with 10⁸ total draws need the ESN cdf at rates MPFR cannot
//! sensibly provide, while their statistical resolution (KS bands of order
//! 10⁻²···10⁻³) is a dozen orders of magnitude above double-precision
//! noise. This module mirrors the oracle-grade algorithms of [`crate::esn`]
//! in plain `f64`: same tail integral, same rescaling, same panel geometry,
//! fixed-order Gauss–Legendre panels instead of the adaptive pair.
//!
//! # Implementation
//!
//! The survival integral for x ≥ 0 is
//!
//! ```text
//!     S(x) = φ(x)/Φ(τ/ᾱ) · ∫₀^∞ e^{−xs−s²/2} Φ(α(x+s)+τ) ds,
//! ```
//!
//! integrated over panels scaled by the integrand's decay rate (x for
//! α ≥ 0, the mixed term ᾱ²x+ατ for α < 0 with αx+τ < 0, where the Φ factor
//! contributes its own exponential decay and the integrand is rescaled by
//! Φ(αx+τ) to keep it O(1)). Lower-tail values come from the exact mirror
//! identity cdf(x; α, τ) = survival(−x; −α, τ).
//!
//! # Key Assumptions and Limitations
//!
//! * Relative accuracy is ~10⁻¹²; a unit test pins the fast path to the
//!   MPFR path across parameter grids.
//! * `survival_f64`/`cdf_f64` underflow to 0/1 once the true value drops
//!   below ~10⁻³⁰⁸ (x ≈ 38 at α = 0): fine for empirical-CDF work, not for
//!   tail asymptotics — use the extended-precision path there.

use std::sync::OnceLock;

use crate::params::EsnParams;
use crate::quadrature;

/// 1/√(2π).
const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
/// ln √(2π).
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;

/// Standard normal density.
#[inline]
pub fn phi_f64(z: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * z * z).exp()
}

/// Standard normal distribution function, accurate in both tails down to
/// the underflow limit.
#[inline]
pub fn big_phi_f64(z: f64) -> f64 {
    0.5 * libm::erfc(-z * std::f64::consts::FRAC_1_SQRT_2)
}

/// ln Φ(z) without underflow for any finite z.
pub fn ln_big_phi_f64(z: f64) -> f64 {
    if z >= -36.0 {
        // erfc(36/√2) ≈ 2e−283 is still a normal double.
        big_phi_f64(z).ln()
    } else {
        // Asymptotic series: Φ(z) = φ(z)/(−z)·[1 + Σ (−1)^k (2k−1)!!/z^{2k}];
        // at |z| ≥ 36 eight terms reach below 10⁻¹⁷ relative.
        let z2 = z * z;
        let mut term = 1.0;
        let mut corr = 0.0;
        for k in 1..=8u32 {
            term *= -((2 * k - 1) as f64) / z2;
            corr += term;
        }
        -0.5 * z2 - LN_SQRT_2PI - (-z).ln() + corr.ln_1p()
    }
}

/// Inverse standard normal cdf by bisection (used only for starting
/// guesses; ~60 erfc evaluations, microseconds).
pub fn inverse_normal_cdf(p: f64) -> f64 {
    debug_assert!(p > 0.0 && p < 1.0);
    let (mut lo, mut hi) = (-40.0_f64, 40.0_f64);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if big_phi_f64(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The shared order-31 Gauss–Legendre rule on [−1, 1], materialized once
/// from the extended-precision node computation.
fn g31() -> &'static Vec<(f64, f64)> {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| quadrature::rule_f64(31))
}

/// Panel breakpoints for the scaled tail integral; mirrors the geometry in
/// `crate::esn` (documented there): decay-rate-scaled geometric panels, a
/// certified Gaussian cutoff, and extra points around any interior bump of
/// the Φ factor.
fn tail_breakpoints(params: &EsnParams, x: f64, rescaled: bool) -> Vec<f64> {
    let a = params.alpha;
    let xa = a * x + params.tau;
    // Decades of certified cutoff beyond f64: 16 digits + margin.
    let d_decades = (16.0 + 6.0) * std::f64::consts::LN_10;
    let lambda = if rescaled { params.alpha_bar_sq() * x + a * params.tau } else { x };
    let w = 1.0 / lambda.max(1.0);
    let gauss_target = if a >= 0.0 && xa < 0.0 { 2.0 * d_decades + xa * xa } else { 2.0 * d_decades };
    let mut s_end = (80.0 * w).max(gauss_target.sqrt()).max(d_decades / lambda.max(1.0));
    let mut pts = vec![0.0, w, 5.0 * w, 20.0 * w, 80.0 * w];
    if a > 0.0 && xa < 0.0 {
        // Φ(α(x+s)+τ) turns on around s* = −x_{α,τ}/α; resolve the bump.
        let s_star = -xa / a;
        if s_star <= 4.0 * s_end {
            pts.extend([0.5 * s_star, s_star, 2.0 * s_star]);
            s_end = s_end.max(2.0 * s_star + gauss_target.sqrt().max(d_decades / x.max(1.0)));
        }
    }
    if a < 0.0 && xa > 0.0 {
        // Φ rolls off around s₀ = x_{α,τ}/|α|.
        let s0 = xa / (-a);
        if s0 < s_end {
            pts.extend([s0, (2.0 * s0).min(s_end)]);
        }
    }
    pts.retain(|&s| s < s_end);
    pts.push(s_end);
    pts.sort_by(|p, q| p.partial_cmp(q).unwrap());
    pts.dedup_by(|p, q| (*p - *q).abs() <= 1e-12 * s_end);
    pts
}

/// The scaled tail integral ∫₀^∞ e^{−xs−s²/2}·R(s) ds with R(s) the
/// (possibly rescaled) Φ factor, by fixed G31 panels.
fn tail_integral_f64(params: &EsnParams, x: f64, rescaled: bool) -> f64 {
    let a = params.alpha;
    let t = params.tau;
    let xa = a * x + t;
    let ln_phi_xa = if rescaled { ln_big_phi_f64(xa) } else { 0.0 };
    let f = |s: f64| -> f64 {
        let e = -x * s - 0.5 * s * s;
        if rescaled {
            (e + ln_big_phi_f64(xa + a * s) - ln_phi_xa).exp()
        } else {
            e.exp() * big_phi_f64(xa + a * s)
        }
    };
    let pts = tail_breakpoints(params, x, rescaled);
    let rule = g31();
    let mut total = 0.0;
    for pair in pts.windows(2) {
        let mid = 0.5 * (pair[0] + pair[1]);
        let half = 0.5 * (pair[1] - pair[0]);
        let mut acc = 0.0;
        for &(node, weight) in rule {
            acc += weight * f(mid + half * node);
        }
        total += acc * half;
    }
    total
}

/// Survival function for x ≥ 0 (internal; callers dispatch on sign).
fn upper_tail_f64(params: &EsnParams, x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    let xa = params.alpha * x + params.tau;
    let rescaled = params.alpha < 0.0 && xa <= 0.0;
    let integral = tail_integral_f64(params, x, rescaled);
    let mut ln_pre = -0.5 * x * x
        - LN_SQRT_2PI
        - ln_big_phi_f64(params.tau / params.alpha_bar());
    if rescaled {
        ln_pre += ln_big_phi_f64(xa);
    }
    ln_pre.exp() * integral
}

/// ESN density.
pub fn pdf_f64(params: &EsnParams, x: f64) -> f64 {
    phi_f64(x) * big_phi_f64(params.alpha * x + params.tau)
        / big_phi_f64(params.tau / params.alpha_bar())
}

/// ESN distribution function (≈10⁻¹² relative accuracy; see module docs).
pub fn cdf_f64(params: &EsnParams, x: f64) -> f64 {
    if x <= 0.0 {
        // cdf(x; α, τ) = survival(−x; −α, τ): exact mirror identity.
        upper_tail_f64(&params.mirrored(), -x)
    } else {
        1.0 - upper_tail_f64(params, x)
    }
}

/// ESN survival function, computed by direct tail integration.
pub fn survival_f64(params: &EsnParams, x: f64) -> f64 {
    if x >= 0.0 {
        upper_tail_f64(params, x)
    } else {
        1.0 - upper_tail_f64(&params.mirrored(), -x)
    }
}

/// ln survival without forming tiny intermediates (usable to x ≈ 110 at
/// α = 0 before −x²/2 exhausts f64; extreme tails belong to the MPFR path).
pub fn log_survival_f64(params: &EsnParams, x: f64) -> f64 {
    if x < 0.0 {
        return survival_f64(params, x).ln();
    }
    let xa = params.alpha * x + params.tau;
    let rescaled = params.alpha < 0.0 && xa <= 0.0;
    let integral = tail_integral_f64(params, x, rescaled);
    let mut ln_pre = -0.5 * x * x
        - LN_SQRT_2PI
        - ln_big_phi_f64(params.tau / params.alpha_bar());
    if rescaled {
        ln_pre += ln_big_phi_f64(xa);
    }
    ln_pre + integral.ln()
}

/// Two-sided Kolmogorov–Smirnov statistic of `sorted` against the
/// distribution function `cdf`.
///
/// `sorted` must be ascending; n must be positive.
pub fn ks_statistic<F>(sorted: &[f64], mut cdf: F) -> f64
where
    F: FnMut(f64) -> f64,
{
    assert!(!sorted.is_empty(), "KS statistic of an empty sample");
    let n = sorted.len() as f64;
    let mut d = 0.0_f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    d
}

//! Standard normal density, distribution function, and log-tail at
//! working precision.
//!
//! # Background
//!
//! Φ(z) = erfc(−z/√2)/2 is exact in both tails, and MPFR's erfc is
//! correctly rounded. Two practical wrinkles remain:
//!
//! * For very negative z the correctly rounded erfc becomes *expensive*
//!   (internally it must fight the cancellation of 1 − erf), while the
//!   classical asymptotic expansion
//!
//!   ```text
//!       Φ(z) = φ(z)/(−z) · [1 + Σ_{k≥1} (−1)^k (2k−1)!!/z^{2k}],   z → −∞,
//!   ```
//!
//!   already delivers any requested precision once z² ≳ 2·ln(10)·digits:
//!   the series' smallest term is of order e^{−z²/2} relative to 1.
//! * ln Φ(z) at z ≈ −10³ is a perfectly tame number (≈ −5·10⁵) that must
//!   not be computed by first forming the subnormal-beyond-imagination
//!   Φ(z) in double precision; in MPFR it is representable but the log of
//!   the series form is cheaper and transparent.
//!
//! # Implementation
//!
//! The switch point between erfc and the asymptotic series is chosen per
//! precision as z_sw = √(2·ln10·(digits+6)); below −z_sw the series'
//! smallest term is under 10^−(digits+6), so truncating at the first
//! non-decreasing term is rigorous. Above −z_sw, erfc's argument is at most
//! ≈ z_sw/√2 ≈ 10, squarely in its fast range.
//!
//! # Key Assumptions and Limitations
//!
//! * All functions take the working precision from their argument's
//!   [`Float::prec`].
//! * `ln_big_phi` is meaningful for any finite z; `big_phi` underflows to
//!   zero only beyond MPFR's exponent range (|z| ≈ 10⁴·⁵), far outside any
//!   use here.

use rug::{float::Constant, Float};

/// √(2π) at `prec` bits.
#[inline]
pub fn sqrt_two_pi(prec: u32) -> Float {
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    two_pi.sqrt()
}

/// ln √(2π) at `prec` bits.
#[inline]
pub fn ln_sqrt_two_pi(prec: u32) -> Float {
    sqrt_two_pi(prec).ln()
}

/// Standard normal density φ(z) = e^{−z²/2}/√(2π).
pub fn phi(z: &Float) -> Float {
    let prec = z.prec();
    let mut e = z.clone();
    e.square_mut();
    e /= -2;
    e.exp_mut();
    e / sqrt_two_pi(prec)
}

/// ln φ(z) = −z²/2 − ln √(2π), formed without under/overflow.
pub fn ln_phi(z: &Float) -> Float {
    let prec = z.prec();
    let mut e = z.clone();
    e.square_mut();
    e /= -2;
    e - ln_sqrt_two_pi(prec)
}

/// Decimal digits carried by a float of `prec` bits (inverse of the
/// context's bit computation, without the guard).
#[inline]
fn digits_of(prec: u32) -> f64 {
    prec as f64 / 3.321_928_094_887_362
}

/// Tail switch point: below −z_sw(prec) the asymptotic series is both
/// faster and sufficient for the full precision.
#[inline]
fn tail_switch(prec: u32) -> f64 {
    (2.0 * std::f64::consts::LN_10 * (digits_of(prec) + 6.0)).sqrt()
}

/// The bracketed asymptotic factor B(z) = 1 + Σ (−1)^k (2k−1)!!/z^{2k},
/// valid (and called) only for z ≤ −tail_switch(prec).
///
/// Terms shrink until k ≈ z²/2; we stop as soon as a term fails to shrink
/// or drops below 2^{−prec} of the running sum, and the truncation error is
/// bounded by the first omitted term in this alternating series.
fn tail_series(z: &Float) -> Float {
    let prec = z.prec();
    let mut z2 = z.clone();
    z2.square_mut();
    let mut sum = Float::with_val(prec, 1);
    let mut term = Float::with_val(prec, 1);
    let mut prev_mag = Float::with_val(prec, f64::INFINITY);
    for k in 1..=1000u32 {
        term *= -(2 * k as i64 - 1);
        term /= &z2;
        let mag = term.clone().abs();
        if mag >= prev_mag {
            break; // divergence point reached; remainder < last added term
        }
        sum += &term;
        // 2^{−prec} relative stop.
        let mut thresh = sum.clone().abs();
        thresh >>= prec;
        if mag < thresh {
            break;
        }
        prev_mag = mag;
    }
    sum
}

/// Standard normal distribution function Φ(z), accurate in both tails.
pub fn big_phi(z: &Float) -> Float {
    let prec = z.prec();
    if *z < -tail_switch(prec) {
        return ln_big_phi(z).exp();
    }
    // Φ(z) = erfc(−z/√2)/2; the erfc argument stays ≤ z_sw/√2 ≈ 10 on this
    // branch for negative z, and erfc is cheap for any positive-tail z.
    let mut u = -z.clone();
    u /= Float::with_val(prec, 2u32).sqrt();
    u.erfc_mut();
    u / 2u32
}

/// ln Φ(z) for any finite z without intermediate underflow.
pub fn ln_big_phi(z: &Float) -> Float {
    let prec = z.prec();
    if *z < -tail_switch(prec) {
        // ln Φ(z) = ln φ(z) − ln(−z) + ln B(z).
        let b = tail_series(z).ln();
        let neg = -z.clone();
        ln_phi(z) - neg.ln() + b
    } else {
        big_phi(z).ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Float;

    const PREC: u32 = 200;

    fn big(v: f64) -> Float {
        Float::with_val(PREC, v)
    }

    /// Relative error of `val` against a decimal string reference.
    fn rel_err(val: &Float, reference: &str) -> f64 {
        let r = Float::with_val(PREC, Float::parse(reference).unwrap());
        let mut d = val.clone();
        d -= &r;
        d /= &r;
        d.to_f64().abs()
    }

    #[test]
    fn phi_at_zero_and_two() {
        // 1/√(2π) and φ(2); the 25-digit references limit the comparison.
        assert!(rel_err(&phi(&big(0.0)), "0.3989422804014326779399461") < 1e-24);
        assert!(rel_err(&phi(&big(2.0)), "0.05399096651318805195056420") < 1e-24);
    }

    #[test]
    fn big_phi_matches_classical_values() {
        assert!(rel_err(&big_phi(&big(0.0)), "0.5") < 1e-55);
        // Φ at the f64 rounding of the 0.975-quantile (the rounded argument
        // shifts the value off 0.975 by 2.1e−18; reference computed at the
        // exact double).
        assert!(rel_err(
            &big_phi(&big(1.959963984540054236)),
            "0.9750000000000000021012444105"
        ) < 1e-24);
        // Deep lower tail, still on the erfc branch at 200 bits:
        // Φ(−10) = 7.619853024160526066e−24.
        assert!(rel_err(&big_phi(&big(-10.0)), "7.619853024160526066e-24") < 1e-18);
    }

    #[test]
    fn series_branch_agrees_with_erfc_branch() {
        // Evaluate the same z on both branches by changing the precision
        // (and hence the switch point): z = −14 is series at 113 bits
        // (z_sw ≈ 13.6) and erfc at 600 bits (z_sw ≈ 29.4).
        for zf in [-14.0, -16.5, -20.0, -28.0] {
            let lo = ln_big_phi(&Float::with_val(113, zf));
            let hi = ln_big_phi(&Float::with_val(600, zf));
            let mut d = Float::with_val(113, &lo);
            d -= Float::with_val(113, &hi);
            d /= Float::with_val(113, &hi);
            assert!(
                d.to_f64().abs() < 1e-30,
                "branch mismatch at z={zf}: {}",
                d.to_f64()
            );
        }
    }

    #[test]
    fn ln_big_phi_deep_tail_reference() {
        // 20-digit references from an independent extended-precision run.
        let v = ln_big_phi(&big(-40.0));
        assert!(rel_err(&v, "-804.60844201375378817") < 1e-18);
        // ln Φ(−1000): leading behavior −z²/2 − ln(−z) − ln√(2π).
        let v = ln_big_phi(&big(-1000.0));
        assert!(rel_err(&v, "-500007.82669481218431") < 1e-18);
    }

    #[test]
    fn phi_plus_mirror_is_one() {
        for zf in [0.0, 0.3, 1.7, 5.5, 9.0] {
            let mut s = big_phi(&big(zf));
            s += big_phi(&big(-zf));
            s -= 1u32;
            assert!(s.to_f64().abs() < 1e-55, "Φ(z)+Φ(−z)−1 = {}", s.to_f64());
        }
    }
}

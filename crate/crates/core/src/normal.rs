//! Standard normal density, distribution and tail helpers.
//!
//! Everything here works in standardized units. The tails are evaluated
//! through `erfc` and the Mills ratio so that differences of tiny
//! probabilities keep their relative accuracy.

use std::f64::consts::FRAC_1_SQRT_2;

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_677_939_946_059_934_4;

/// Beyond this point the Mills ratio comes from its continued fraction.
const MILLS_CF_SWITCH: f64 = 35.0;

#[inline]
pub fn pdf(z: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * z * z).exp()
}

#[inline]
pub fn cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z * FRAC_1_SQRT_2)
}

/// Upper tail `1 - Φ(z)`, accurate in relative terms for large `z`.
#[inline]
pub fn sf(z: f64) -> f64 {
    0.5 * libm::erfc(z * FRAC_1_SQRT_2)
}

/// `Φ(hi) - Φ(lo)` without cancellation in either tail.
pub fn interval_prob(lo: f64, hi: f64) -> f64 {
    if lo >= hi {
        return 0.0;
    }
    if lo > 0.0 {
        sf(lo) - sf(hi)
    } else if hi < 0.0 {
        cdf(hi) - cdf(lo)
    } else {
        1.0 - sf(hi) - cdf(lo)
    }
}

/// Mills ratio `R(z) = (1 - Φ(z)) / φ(z)`.
pub fn mills_ratio(z: f64) -> f64 {
    if z.is_infinite() {
        return if z > 0.0 { 0.0 } else { f64::INFINITY };
    }
    if z < MILLS_CF_SWITCH {
        return sf(z) / pdf(z);
    }
    // R(z) = 1/(z + 1/(z + 2/(z + 3/(z + ...))))
    let mut tail = z;
    for k in (1..=40).rev() {
        tail = z + k as f64 / tail;
    }
    1.0 / tail
}

/// Inverse Mills ratio `φ(z) / (1 - Φ(z))`, the mean of a standard normal
/// truncated to `[z, ∞)`.
pub fn inverse_mills_ratio(z: f64) -> f64 {
    if z == f64::NEG_INFINITY {
        return 0.0;
    }
    if z < 0.0 {
        pdf(z) / sf(z)
    } else {
        1.0 / mills_ratio(z)
    }
}

/// Mean of a standard normal truncated to `[lo, hi]`.
///
/// Uses a second-order expansion around the midpoint when the interval is
/// too narrow for the ratio of differences to carry any digits.
pub fn truncated_mean(lo: f64, hi: f64) -> f64 {
    debug_assert!(lo <= hi);
    if lo == f64::NEG_INFINITY && hi == f64::INFINITY {
        return 0.0;
    }
    if hi == f64::INFINITY {
        return inverse_mills_ratio(lo);
    }
    if lo == f64::NEG_INFINITY {
        return -inverse_mills_ratio(-hi);
    }
    let width = hi - lo;
    let mid = 0.5 * (lo + hi);
    if width * (1.0 + mid.abs()) < 1e-4 {
        return mid * (1.0 - width * width / 12.0);
    }
    if lo >= 0.0 {
        upper_tail_truncated_mean(lo, hi)
    } else if hi <= 0.0 {
        -upper_tail_truncated_mean(-hi, -lo)
    } else {
        (pdf(lo) - pdf(hi)) / interval_prob(lo, hi)
    }
}

// 0 <= lo < hi: scale numerator and denominator by φ(lo).
fn upper_tail_truncated_mean(lo: f64, hi: f64) -> f64 {
    let log_ratio = -0.5 * (hi - lo) * (hi + lo);
    let decay = log_ratio.exp();
    let num = -log_ratio.exp_m1();
    let den = mills_ratio(lo) - mills_ratio(hi) * decay;
    num / den
}

/// `sqrt(2/π)`, the mean of a half-normal.
pub const HALF_NORMAL_MEAN: f64 = 0.797_884_560_802_865_4;

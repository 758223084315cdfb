//! Standard normal density and distribution function.
//!
//! `cdf` is a hybrid: inside `|x| <= 0.5` it sums Marsaglia's Taylor series
//! `1/2 + phi(x) * (x + x^3/3 + x^5/(3*5) + ...)`, outside it evaluates the
//! upper tail through the complementary error function. Both branches keep the
//! absolute error below `2e-16` on `[-40, 40]`; beyond that the result is
//! exactly 0 or 1.

#![allow(clippy::excessive_precision)]

use std::f64::consts::FRAC_1_SQRT_2;

/// `1 / sqrt(2 pi)`
pub const FRAC_1_SQRT_2PI: f64 = 0.398942280401432677940;

/// Mills' ratio at zero, `R(0) = sqrt(pi / 2)`.
pub const MILLS_RATIO_AT_ZERO: f64 = 1.25331413731550025121;

/// Switch point between the series and the tail branch of [`cdf`].
pub const SERIES_CUTOFF: f64 = 0.5;

/// Past this magnitude [`cdf`] saturates to exactly 0 or 1.
pub const SATURATION: f64 = 40.0;

/// Standard normal density.
#[inline]
pub fn density(x: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * x * x).exp()
}

/// Standard normal distribution function `Phi(x)`.
pub fn cdf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < -SATURATION {
        return 0.0;
    }
    if x > SATURATION {
        return 1.0;
    }
    if x.abs() <= SERIES_CUTOFF {
        return series(x);
    }
    let tail = upper_tail(x.abs());
    if x < 0.0 {
        tail
    } else {
        1.0 - tail
    }
}

/// `1 - Phi(z)` for `z > 0`, without cancellation.
#[inline]
fn upper_tail(z: f64) -> f64 {
    0.5 * libm::erfc(z * FRAC_1_SQRT_2)
}

fn series(x: f64) -> f64 {
    let q = x * x;
    let mut sum = x;
    let mut term = x;
    let mut prev = f64::NAN;
    let mut odd = 1.0;
    while sum != prev {
        odd += 2.0;
        term *= q / odd;
        prev = sum;
        sum += term;
    }
    0.5 + sum * density(x)
}

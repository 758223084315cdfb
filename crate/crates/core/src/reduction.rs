//! General `Phi2(x, y; rho)` by reduction to the diagonal.
//!
//! `Phi2(x,y;rho)` splits into two axis terms `Phi2(x,0;rho_x) - delta_x` and
//! `Phi2(0,y;rho_y) - delta_y`. Each axis term is one diagonal evaluation with
//! correlation `1 - 2 rho_x^2`, expressed through
//! `a_x = ((rho x - y) / (x sqrt(1 - rho^2)))^2` so that the diagonal receives
//! `1 - rho' = 2 a_x / (1 + a_x)` (or `2 / (1 + a_x)` after reflecting the sign of
//! the correlation) without double inversion.
//!
//! For `|rho| > 0.99` the slope and the transformed abscissa are built from
//! `x - y` (`rho -> 1`) or `x + y` (`rho -> -1`) to avoid cancellation.

use crate::diagonal::{phi2_diagonal, DiagonalInput};
use crate::error::{Error, Result};
use crate::univariate::cdf;

/// Above this `|rho|` the cancellation-free slope formulas are used.
pub const NEAR_UNIT_CUTOFF: f64 = 0.99;

/// Correlations within this distance outside `[-1, 1]` are treated as `+-1`.
pub const DOMAIN_SLACK: f64 = 1e-12;

/// A correlation in `[-1, 1]` with its derived quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlation {
    rho: f64,
    one_minus: f64,
    one_plus: f64,
    s: f64,
}

impl Correlation {
    /// Accepts `rho` in `[-1 - 1e-12, 1 + 1e-12]`.
    pub fn new(rho: f64) -> Result<Self> {
        if rho.is_nan() || rho.abs() > 1.0 + DOMAIN_SLACK {
            return Err(Error::Domain(rho));
        }
        let one_minus = 1.0 - rho;
        let one_plus = 1.0 + rho;
        Ok(Self {
            rho,
            one_minus,
            one_plus,
            s: (one_minus * one_plus).max(0.0).sqrt(),
        })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// `1 - rho`
    pub fn one_minus(&self) -> f64 {
        self.one_minus
    }

    /// `1 + rho`
    pub fn one_plus(&self) -> f64 {
        self.one_plus
    }

    /// `sqrt(1 - rho^2)`
    pub fn s(&self) -> f64 {
        self.s
    }

    /// `lambda(rho) = sqrt((1 - rho) / (1 + rho))`
    pub fn lambda(&self) -> f64 {
        (self.one_minus / self.one_plus).sqrt()
    }

    /// `|rho| = 1` up to rounding, detected as `(1 - rho)(1 + rho) <= 0`.
    pub fn is_degenerate(&self) -> bool {
        self.one_minus * self.one_plus <= 0.0
    }
}

/// Per-axis quantities of the reduction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReductionTerms {
    /// Squared normalized slope `a_x`.
    pub a_x: f64,
    /// `-|x|`
    pub b1: f64,
    /// `-|rho x - y| / sqrt(1 - rho^2)`
    pub b2: f64,
    /// `y / x >= rho`
    pub c1: bool,
    /// `x < 0`
    pub c2: bool,
    /// `x < 0 && y >= 0`
    pub c3: bool,
}

/// `(a_x, b2)` from `rho x - y` directly.
pub fn slope_direct(x: f64, y: f64, corr: &Correlation) -> (f64, f64) {
    let b2 = -(corr.rho * x - y).abs() / corr.s;
    let ratio = b2 / x;
    (ratio * ratio, b2)
}

/// `(a_x, b2)` from `x - y`, accurate as `rho -> 1`.
pub fn slope_near_plus_one(x: f64, y: f64, corr: &Correlation) -> (f64, f64) {
    let s = corr.s;
    let tmp = (corr.one_minus / corr.one_plus).sqrt();
    let b2 = -((x - y) / s - x * tmp).abs();
    let t = (x - y) / x / s - tmp;
    (t * t, b2)
}

/// `(a_x, b2)` from `x + y`, accurate as `rho -> -1`.
pub fn slope_near_minus_one(x: f64, y: f64, corr: &Correlation) -> (f64, f64) {
    let s = corr.s;
    let tmp = (corr.one_plus / corr.one_minus).sqrt();
    let b2 = -((x + y) / s - x * tmp).abs();
    let t = (x + y) / x / s - tmp;
    (t * t, b2)
}

impl ReductionTerms {
    /// Requires `x != 0` and `|rho| < 1`.
    pub fn new(x: f64, y: f64, corr: &Correlation) -> Self {
        let (a_x, b2) = if corr.rho > NEAR_UNIT_CUTOFF {
            slope_near_plus_one(x, y, corr)
        } else if corr.rho < -NEAR_UNIT_CUTOFF {
            slope_near_minus_one(x, y, corr)
        } else {
            slope_direct(x, y, corr)
        };
        let c2 = x < 0.0;
        Self {
            a_x,
            b1: -x.abs(),
            b2,
            c1: y / x >= corr.rho,
            c2,
            c3: c2 && y >= 0.0,
        }
    }
}

/// The axis term `Phi2(x, 0; rho_x) - delta_x`.
///
/// `corr` must not be degenerate; [`phi2`] handles `|rho| = 1` before
/// getting here.
pub fn phi2_half(x: f64, y: f64, corr: &Correlation) -> f64 {
    if x == 0.0 {
        return if y >= 0.0 { 0.0 } else { 0.5 };
    }

    let t = ReductionTerms::new(x, y, corr);
    let p1 = cdf(t.b1);
    let p2 = cdf(t.b2);

    let q = if t.a_x <= 1.0 {
        0.5 * phi2_diagonal(DiagonalInput {
            x: t.b1,
            a: 2.0 * t.a_x / (1.0 + t.a_x),
            px: p1,
            pxs: p2,
        })
    } else {
        p1 * p2
            - 0.5
                * phi2_diagonal(DiagonalInput {
                    x: t.b2,
                    a: 2.0 / (1.0 + t.a_x),
                    px: p2,
                    pxs: p1,
                })
    };

    match (t.c1, t.c2, t.c3) {
        (true, _, true) => q - 0.5,
        (true, true, false) => q,
        (true, false, _) => 0.5 - p1 + q,
        (false, _, true) => p1 - q - 0.5,
        (false, true, false) => p1 - q,
        (false, false, _) => 0.5 - q,
    }
}

/// Cumulative bivariate standard normal distribution `P(X <= x, Y <= y)` for
/// correlation `rho`.
///
/// Infinite arguments take their limits. `rho` must lie in `[-1, 1]` (a slack
/// of `1e-12` is tolerated); NaN in any argument yields NaN.
pub fn phi2(x: f64, y: f64, rho: f64) -> Result<f64> {
    if x.is_nan() || y.is_nan() || rho.is_nan() {
        return Ok(f64::NAN);
    }
    let corr = Correlation::new(rho)?;

    if x == f64::NEG_INFINITY || y == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    if x == f64::INFINITY {
        return Ok(cdf(y));
    }
    if y == f64::INFINITY {
        return Ok(cdf(x));
    }

    if corr.is_degenerate() {
        return Ok(if rho > 0.0 {
            cdf(x.min(y))
        } else {
            (cdf(x) + cdf(y) - 1.0).clamp(0.0, 1.0)
        });
    }

    if x == 0.0 && y == 0.0 {
        let at_origin = |a: f64| {
            phi2_diagonal(DiagonalInput {
                x: 0.0,
                a,
                px: 0.5,
                pxs: 0.5,
            })
        };
        return Ok(if rho > 0.0 {
            at_origin(corr.one_minus)
        } else {
            0.5 - at_origin(corr.one_plus)
        });
    }

    Ok((phi2_half(x, y, &corr) + phi2_half(y, x, &corr)).clamp(0.0, 1.0))
}

//! `Phi2(x, x; rho)` for `x <= 0`, `rho >= 0`.
//!
//! The value is written as the a-priori upper bound `(1+rho) Phi(x) Phi(lambda x)`
//! minus a deficit term. The deficit, divided by the diagonal density, is
//! expanded in a Taylor series around zero whose coefficients `d_k` follow a
//! three-term recursion driven by two auxiliary sequences `a_k`, `b_k`
//! (Mills' ratio derivatives at zero). Terms are consumed in (even, odd) pairs:
//! consecutive terms have opposite sign and similar size, so adding the pair
//! first cancels before it touches the running sum.
//!
//! Correlation enters as `a = 1 - rho`, never reconstructed from `rho`.

#![allow(clippy::excessive_precision)]

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::univariate::{cdf, MILLS_RATIO_AT_ZERO};

// Literals as printed in the reference code, kept for bit compatibility.

/// `2 / pi`
#[allow(clippy::approx_constant)]
pub const FRAC_2_PI: f64 = 6.36619772367581343e-1;
/// `pi / 2`
#[allow(clippy::approx_constant)]
pub const FRAC_PI_2: f64 = 1.57079632679489662;
/// `1 / (2 pi)`
pub const FRAC_1_2PI: f64 = 1.591549430918953358e-1;

/// Below this value of `a = 1 - rho` the arcsine goes through `acos`.
pub const ARCSIN_CUTOFF: f64 = 0.1;

/// Bound gaps smaller than this return the upper bound directly.
pub const EARLY_EXIT_GAP: f64 = 5e-17;

/// Hard limit on (even, odd) pair updates.
pub const MAX_ITERATIONS: usize = 512;

static ITERATION_CAP_HITS: AtomicU64 = AtomicU64::new(0);

/// Number of diagonal evaluations (process wide) that stopped at [`MAX_ITERATIONS`].
pub fn iteration_cap_hits() -> u64 {
    ITERATION_CAP_HITS.load(Ordering::Relaxed)
}

/// Arguments of the diagonal evaluator.
///
/// `px` and `pxs` are `Phi(x)` and `Phi(lambda(rho) x)` supplied by the caller,
/// who usually has them already. Their consistency with `x` is not checked.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagonalInput {
    pub x: f64,
    /// `1 - rho`
    pub a: f64,
    pub px: f64,
    pub pxs: f64,
}

impl DiagonalInput {
    /// Builds the input from `x <= 0` and `a = 1 - rho`, computing both
    /// distribution values.
    pub fn from_one_minus_rho(x: f64, a: f64) -> Self {
        let lambda = (a / (2.0 - a)).sqrt();
        Self {
            x,
            a,
            px: cdf(x),
            pxs: cdf(lambda * x),
        }
    }
}

/// Which exit the evaluator took.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagonalPath {
    /// `a <= 0`, i.e. `rho = 1`.
    PerfectCorrelation,
    /// `a >= 1`, i.e. `rho = 0`.
    Independent,
    /// Bounds were tighter than [`EARLY_EXIT_GAP`].
    EarlyExit,
    Series {
        iterations: usize,
        capped: bool,
    },
}

/// Full record of one diagonal evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagonalTrace {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    /// Unclamped `upper - deficit` (series path only).
    pub raw: Option<f64>,
    pub path: DiagonalPath,
}

/// `arcsin(rho)` given `a = 1 - rho` and `sqrt(1 - rho^2)`.
///
/// Uses `asin(1 - a)` while `a > 0.1` and `acos(sqrt(1 - rho^2))` closer to
/// `rho = 1`, where the arcsine is ill-conditioned.
#[inline]
pub fn arcsin_stable(a: f64, sqrt_one_minus_rho_sq: f64) -> f64 {
    if a > ARCSIN_CUTOFF {
        (1.0 - a).asin()
    } else {
        sqrt_one_minus_rho_sq.acos()
    }
}

/// A-priori bounds `(1 + (2/pi) asin rho) px pxs <= Phi2(x; rho) <= (1 + rho) px pxs`.
pub fn diagonal_bounds(rho: f64, px: f64, pxs: f64) -> (f64, f64) {
    let a = 1.0 - rho;
    let b = 1.0 + rho;
    let asr = arcsin_stable(a, (a * b).sqrt());
    let comp = px * pxs;
    ((1.0 + FRAC_2_PI * asr) * comp, b * comp)
}

/// Coefficients of the deficit series, advanced two indices at a time.
///
/// After `k` has been advanced to `2j + 2`, `d_even` holds `d_{2j}` and
/// `d_odd` holds `d_{2j+1}`; likewise for the `a` and `b` sequences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecursionState {
    pub a_even: f64,
    pub a_odd: f64,
    pub b_even: f64,
    pub b_odd: f64,
    pub d_even: f64,
    pub d_odd: f64,
    pub a_coeff: f64,
    pub b_coeff: f64,
    pub d_coeff: f64,
    pub k: u32,
}

impl RecursionState {
    /// Initial values `a_0, a_1, b_0, b_1, d_0, d_1`.
    ///
    /// `sqrt_ab = sqrt(a (2 - a))` and `asr = arcsin(1 - a)` are passed in
    /// because the caller needs them for the bounds as well.
    pub fn new(x: f64, a: f64, sqrt_ab: f64, asr: f64) -> Self {
        let b = 2.0 - a;
        let tmp = MILLS_RATIO_AT_ZERO * x;
        let a_coeff = a * x * x / b;
        let b_coeff = x * x;
        Self {
            a_even: -tmp * a,
            a_odd: -sqrt_ab * a_coeff,
            b_even: tmp * sqrt_ab,
            b_odd: sqrt_ab * b_coeff,
            d_even: (1.0 - a) * FRAC_PI_2 - asr,
            d_odd: tmp * (sqrt_ab - a),
            a_coeff,
            b_coeff,
            d_coeff: 2.0 * x * x / b,
            k: 2,
        }
    }

    /// Replaces `(d_{k-2}, d_{k-1})` with `(d_k, d_{k+1})`.
    #[inline]
    pub fn advance(&mut self) {
        let k = self.k as f64;
        self.d_even = (self.a_odd + self.b_odd + self.d_coeff * self.d_even) / k;
        self.a_even *= self.a_coeff / k;
        self.b_even *= self.b_coeff / k;
        let k = k + 1.0;
        self.a_odd *= self.a_coeff / k;
        self.b_odd *= self.b_coeff / k;
        self.d_odd = (self.a_even + self.b_even + self.d_coeff * self.d_odd) / k;
        self.k += 2;
    }

    /// The bracketed increment `d_even + d_odd`.
    #[inline]
    pub fn pair(&self) -> f64 {
        self.d_even + self.d_odd
    }
}

/// `Phi2(x, x; 1 - a)` for `x <= 0`, `0 <= a <= 1`.
#[inline]
pub fn phi2_diagonal(input: DiagonalInput) -> f64 {
    phi2_diagonal_traced(input).value
}

/// Same as [`phi2_diagonal`] but reports bounds, the unclamped value and the exit path.
pub fn phi2_diagonal_traced(input: DiagonalInput) -> DiagonalTrace {
    let DiagonalInput { x, a, px, pxs } = input;
    if x.is_nan() || a.is_nan() || px.is_nan() || pxs.is_nan() {
        return DiagonalTrace {
            value: f64::NAN,
            lower: f64::NAN,
            upper: f64::NAN,
            raw: None,
            path: DiagonalPath::Series {
                iterations: 0,
                capped: false,
            },
        };
    }
    if a <= 0.0 {
        return degenerate(px, DiagonalPath::PerfectCorrelation);
    }
    if a >= 1.0 {
        return degenerate(px * px, DiagonalPath::Independent);
    }

    let b = 2.0 - a;
    let sqrt_ab = (a * b).sqrt();
    let asr = arcsin_stable(a, sqrt_ab);
    let comp = px * pxs;
    let lower = (1.0 + FRAC_2_PI * asr) * comp;
    let upper = b * comp;
    if comp * (1.0 - a - FRAC_2_PI * asr) < EARLY_EXIT_GAP {
        return DiagonalTrace {
            value: upper,
            lower,
            upper,
            raw: None,
            path: DiagonalPath::EarlyExit,
        };
    }

    let mut state = RecursionState::new(x, a, sqrt_ab, asr);
    let mut res = 0.0;
    let mut res_new = state.pair();
    let mut iterations = 0;
    while res != res_new {
        if iterations == MAX_ITERATIONS {
            ITERATION_CAP_HITS.fetch_add(1, Ordering::Relaxed);
            break;
        }
        state.advance();
        res = res_new;
        res_new += state.pair();
        iterations += 1;
    }
    let capped = iterations == MAX_ITERATIONS && res != res_new;

    let deficit = res * (-x * x / b).exp() * FRAC_1_2PI;
    DiagonalTrace {
        value: lower.max(upper - deficit.max(0.0)),
        lower,
        upper,
        raw: Some(upper - deficit),
        path: DiagonalPath::Series { iterations, capped },
    }
}

fn degenerate(value: f64, path: DiagonalPath) -> DiagonalTrace {
    DiagonalTrace {
        value,
        lower: value,
        upper: value,
        raw: None,
        path,
    }
}

/// `Phi2(x, x; rho)` for any real `x` and `rho` in `[-1, 1]`.
///
/// Positive `x` is folded with `Phi2(x,x;rho) = 2 Phi(x) - 1 + Phi2(-x,-x;rho)`,
/// negative `rho` with `Phi2(x,x;rho) = 2 Phi(x) Phi(lx) - Phi2(lx,lx;-rho)`
/// where `l = lambda(rho)`.
pub fn phi2_on_diagonal(x: f64, rho: f64) -> Result<f64> {
    if x.is_nan() || rho.is_nan() {
        return Ok(f64::NAN);
    }
    if !(-1.0..=1.0).contains(&rho) {
        return Err(Error::Domain(rho));
    }
    if x > 0.0 {
        let px = cdf(x);
        let folded = phi2_on_diagonal(-x, rho)?;
        return Ok((2.0 * px - 1.0 + folded).clamp(0.0, 1.0));
    }
    if x == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    if rho >= 0.0 {
        return Ok(phi2_diagonal(DiagonalInput::from_one_minus_rho(
            x,
            1.0 - rho,
        )));
    }
    if rho <= -1.0 {
        return Ok((2.0 * cdf(x) - 1.0).max(0.0));
    }
    let lambda = ((1.0 - rho) / (1.0 + rho)).sqrt();
    let lx = lambda * x;
    let px = cdf(x);
    let plx = cdf(lx);
    let reflected = phi2_diagonal(DiagonalInput {
        x: lx,
        a: 1.0 + rho,
        px: plx,
        pxs: px,
    });
    Ok((2.0 * px * plx - reflected).max(0.0))
}

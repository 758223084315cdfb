//! Reference evaluator for `Phi2`, independent of the diagonal expansion.
//!
//! Two representations are implemented and cross-checked:
//!
//! * the correlation integral
//!   `Phi2 = Phi(x)Phi(y) + 1/(2 pi) int_0^{asin rho} exp(-(x^2 - 2xy sin t + y^2) / (2 cos^2 t)) dt`
//!   (the substitution `r = sin t` of the integral over the correlation
//!   parameter), and
//! * the tetrachoric series
//!   `Phi2 = Phi(x)Phi(y) + phi(x)phi(y) sum_k rho^(k+1)/(k+1)! He_k(x) He_k(y)`.
//!
//! Both accumulate in double-double. Nothing here calls into
//! [`crate::diagonal`] or [`crate::reduction`].

pub mod compensated;
pub mod quadrature;

pub use compensated::CompensatedValue;
pub use quadrature::Scheme;

use crate::error::{Error, Result};
use crate::univariate::cdf;

/// `1 / (2 pi)` as a double-double.
const FRAC_1_2PI: CompensatedValue = CompensatedValue {
    hi: 0.15915494309189535,
    lo: -9.839338337591243e-18,
};

/// `pi / 2` as a double-double.
const FRAC_PI_2: CompensatedValue = CompensatedValue {
    hi: std::f64::consts::FRAC_PI_2,
    lo: 6.123233995736766e-17,
};

/// Correlation beyond which the integral is split and the remainder is
/// integrated in a variable measuring the distance from `rho = +-1`.
pub const BULK_LIMIT: f64 = 0.95;

/// Largest `|rho|` accepted by [`phi2_tetrachoric`].
pub const TETRACHORIC_LIMIT: f64 = 0.9;

/// Required agreement of the two methods inside [`oracle`].
pub const AGREEMENT_TOLERANCE: f64 = 1e-15;

/// Relative size at which the tetrachoric series is truncated.
const SERIES_CUTOFF: f64 = 1e-20;

pub const DEFAULT_MAX_TERMS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Starting node count.
    pub node_count: usize,
    /// Node doubling stops here even if the target is not met.
    pub max_node_count: usize,
    pub scheme: Scheme,
    /// Largest accepted node-doubling difference.
    pub target_abs_error: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            node_count: 128,
            max_node_count: 4096,
            scheme: Scheme::GaussLegendre,
            target_abs_error: 1e-17,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.node_count < 16 {
            return Err(Error::InvalidArgument(format!(
                "node_count must be at least 16, got {}",
                self.node_count
            )));
        }
        if self.node_count % 2 != 0 {
            return Err(Error::InvalidArgument(format!(
                "node_count must be even, got {}",
                self.node_count
            )));
        }
        if self.max_node_count < self.node_count {
            return Err(Error::InvalidArgument(format!(
                "max_node_count {} is below node_count {}",
                self.max_node_count, self.node_count
            )));
        }
        if !(self.target_abs_error > 0.0) {
            return Err(Error::InvalidArgument(
                "target_abs_error must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Integral value together with its node-doubling error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlackettEstimate {
    /// Result with `2N` nodes.
    pub value: CompensatedValue,
    /// `|result(N) - result(2N)|`
    pub error_estimate: f64,
    /// The final `N`.
    pub node_count: usize,
}

fn check_finite(x: f64, y: f64) -> Result<()> {
    if x.is_finite() && y.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "oracle needs finite abscissas, got ({x}, {y})"
        )))
    }
}

/// `Phi(x) Phi(y)` as an exact product of the two doubles.
fn independent_part(x: f64, y: f64) -> CompensatedValue {
    CompensatedValue::product(cdf(x), cdf(y))
}

/// `(a - b)^2` and friends are formed exactly before the final rounding.
#[inline]
fn square_of_sum(a: f64, b: f64) -> CompensatedValue {
    let d = CompensatedValue::new(a, b);
    d * d
}

/// Integrand `exp(-(x^2 - 2xy s + y^2) / (2 c^2))` with `s = sin t`, `c = cos t`.
#[inline]
fn bulk_integrand(x: f64, y: f64, xy: CompensatedValue, s: f64, c: f64) -> f64 {
    // x^2 - 2xys + y^2 = (x - y)^2 + 2xy(1 - s) = (x + y)^2 - 2xy(1 + s)
    let num = if s >= 0.0 {
        square_of_sum(x, -y) + (xy * CompensatedValue::new(1.0, -s)).mul_f64(2.0)
    } else {
        square_of_sum(x, y) - (xy * CompensatedValue::new(1.0, s)).mul_f64(2.0)
    };
    let den = CompensatedValue::product(c, c).mul_f64(2.0);
    (-(num / den)).exp()
}

/// Same integrand at `t = sign * (pi/2 - phi)`, written in `phi` so that no
/// difference of nearly equal terms appears as `phi -> 0`.
#[inline]
fn edge_integrand(x: f64, y: f64, xy: CompensatedValue, sign: f64, phi: f64) -> f64 {
    let sp = phi.sin();
    let ch = (0.5 * phi).cos();
    let gap = if sign > 0.0 {
        square_of_sum(x, -y)
    } else {
        square_of_sum(x, y)
    };
    let first = gap / CompensatedValue::product(sp, sp).mul_f64(2.0);
    let second = xy / CompensatedValue::product(ch, ch).mul_f64(2.0);
    let e = if sign > 0.0 {
        -(first + second)
    } else {
        second - first
    };
    e.exp()
}

/// `(sin a, cos a)` as double-doubles by Taylor series, for `|a| <= 2`.
fn sin_cos_compensated(a: f64) -> (CompensatedValue, CompensatedValue) {
    let mut sin = CompensatedValue::ZERO;
    let mut cos = CompensatedValue::from_f64(1.0);
    let mut term = CompensatedValue::from_f64(1.0);
    for k in 1..60 {
        term = term.mul_f64(a) / CompensatedValue::from_f64(k as f64);
        let signed = if (k / 2) % 2 == 0 { term } else { -term };
        if k % 2 == 1 {
            sin += signed;
        } else {
            cos += signed;
        }
        if term.hi.abs() < 1e-36 {
            break;
        }
    }
    (sin, cos)
}

/// `asin(rho)` as a double-double: one Newton step from the double result.
pub fn asin_compensated(rho: f64) -> CompensatedValue {
    let t = rho.asin();
    if rho.abs() >= 1.0 || rho == 0.0 {
        return CompensatedValue::from_f64(t);
    }
    let (s, c) = sin_cos_compensated(t);
    CompensatedValue::from_f64(t) + (CompensatedValue::from_f64(rho) - s) / c
}

/// Correlation integral at a single resolution (no convergence check).
///
/// Integration limits are double-doubles; the quadrature runs to their
/// leading parts and the trailing parts are added as `f(end) * lo`.
pub fn plackett_integral(
    x: f64,
    y: f64,
    rho: f64,
    node_count: usize,
    scheme: Scheme,
) -> CompensatedValue {
    let base = independent_part(x, y);
    if rho == 0.0 {
        return base;
    }
    let sign = rho.signum();
    let r = rho.abs();
    let xy = CompensatedValue::product(x, y);

    let bulk = |t: f64| bulk_integrand(x, y, xy, sign * t.sin(), t.cos());
    let edge = |phi: f64| edge_integrand(x, y, xy, sign, phi);

    let mut integral;
    if r <= BULK_LIMIT {
        let end = asin_compensated(r);
        integral = quadrature::integrate(scheme, node_count, 0.0, end.hi, bulk);
        integral += CompensatedValue::product(bulk(end.hi), end.lo);
    } else {
        // phi = pi/2 - |t| runs over [acos r, acos 0.95]; phi = e^v spreads the
        // boundary layer of width ~|x -+ y| near phi = 0 evenly in v.
        let split = BULK_LIMIT.asin();
        integral = quadrature::integrate(scheme, node_count, 0.0, split, bulk);
        let lower = FRAC_PI_2 - asin_compensated(r);
        let upper = FRAC_PI_2.add_f64(-split);
        integral +=
            quadrature::tanh_sinh(node_count).integrate(lower.hi.ln(), upper.hi.ln(), |v| {
                let phi = v.exp();
                phi * edge(phi)
            });
        integral += CompensatedValue::product(edge(upper.hi), upper.lo);
        integral -= CompensatedValue::product(edge(lower.hi), lower.lo);
    }

    base + (integral * FRAC_1_2PI).mul_f64(sign)
}

/// Correlation integral at `N` and `2N` nodes, doubling `N` from
/// `spec.node_count` until the difference meets the target or `2N` would
/// exceed `spec.max_node_count`.
pub fn plackett_estimate(
    x: f64,
    y: f64,
    rho: f64,
    spec: &QuadratureSpec,
) -> Result<PlackettEstimate> {
    spec.validate()?;
    check_finite(x, y)?;
    if !(rho.abs() < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "correlation integral needs |rho| < 1, got {rho}"
        )));
    }
    let mut n = spec.node_count;
    let mut coarse = plackett_integral(x, y, rho, n, spec.scheme);
    loop {
        let fine = plackett_integral(x, y, rho, 2 * n, spec.scheme);
        let error_estimate = (fine - coarse).to_f64().abs();
        if error_estimate <= spec.target_abs_error || 4 * n > spec.max_node_count {
            return Ok(PlackettEstimate {
                value: fine,
                error_estimate,
                node_count: n,
            });
        }
        n *= 2;
        coarse = fine;
    }
}

/// `Phi2` from the correlation integral, failing when the node-doubling
/// estimate exceeds `spec.target_abs_error`.
pub fn phi2_plackett(x: f64, y: f64, rho: f64, spec: &QuadratureSpec) -> Result<CompensatedValue> {
    let est = plackett_estimate(x, y, rho, spec)?;
    if est.error_estimate > spec.target_abs_error {
        return Err(Error::Accuracy {
            method: "correlation integral",
            x,
            y,
            rho,
            estimate: est.error_estimate,
            target: spec.target_abs_error,
        });
    }
    Ok(est.value)
}

/// `Phi2` from the tetrachoric (Hermite) series, `|rho| <= 0.9`.
///
/// Hermite polynomials are carried normalized, `e_k = He_k / sqrt(k!)`, so
/// that `e_{k+1} = (x e_k - sqrt(k) e_{k-1}) / sqrt(k+1)` stays bounded.
pub fn phi2_tetrachoric(x: f64, y: f64, rho: f64, max_terms: usize) -> Result<CompensatedValue> {
    check_finite(x, y)?;
    if !(rho.abs() <= TETRACHORIC_LIMIT) {
        return Err(Error::InvalidArgument(format!(
            "tetrachoric series needs |rho| <= {TETRACHORIC_LIMIT}, got {rho}"
        )));
    }
    let base = independent_part(x, y);
    if rho == 0.0 {
        return Ok(base);
    }

    let half_sq = (CompensatedValue::product(x, x) + CompensatedValue::product(y, y)).mul_f64(-0.5);
    let prefactor = FRAC_1_2PI.mul_f64(half_sq.exp());

    let xd = CompensatedValue::from_f64(x);
    let yd = CompensatedValue::from_f64(y);
    let (mut ex_prev, mut ex) = (CompensatedValue::from_f64(1.0), xd);
    let (mut ey_prev, mut ey) = (CompensatedValue::from_f64(1.0), yd);
    let mut power = CompensatedValue::from_f64(rho);
    let mut sum = power;
    let mut small_run = 0;
    let warmup = x.mul_add(x, 2.0).max(y * y + 2.0);

    for k in 1..max_terms {
        power = power.mul_f64(rho);
        let term = (power * ex * ey) / CompensatedValue::from_f64((k + 1) as f64);
        sum += term;

        let t = term.to_f64().abs();
        let negligible = t <= SERIES_CUTOFF * sum.to_f64().abs() || t * prefactor.hi <= 1e-40;
        small_run = if negligible { small_run + 1 } else { 0 };
        if small_run >= 2 && k as f64 > warmup {
            return Ok(base + prefactor * sum);
        }

        let sk = CompensatedValue::sqrt_f64(k as f64);
        let sk1 = CompensatedValue::sqrt_f64((k + 1) as f64);
        let next_x = (xd * ex - sk * ex_prev) / sk1;
        let next_y = (yd * ey - sk * ey_prev) / sk1;
        ex_prev = ex;
        ex = next_x;
        ey_prev = ey;
        ey = next_y;
    }
    Err(Error::Accuracy {
        method: "tetrachoric series",
        x,
        y,
        rho,
        estimate: f64::INFINITY,
        target: SERIES_CUTOFF,
    })
}

/// Reference value of `Phi2(x, y; rho)` as a double-double.
///
/// `|rho| = 1` uses the closed forms; `|rho| <= 0.9` evaluates both methods
/// and requires them to agree within `1e-15`; otherwise the correlation
/// integral alone, with its node-doubling check.
pub fn oracle_value(x: f64, y: f64, rho: f64) -> Result<CompensatedValue> {
    if x.is_nan() || y.is_nan() {
        return Err(Error::InvalidArgument("NaN abscissa".into()));
    }
    if rho.is_nan() || rho.abs() > 1.0 {
        return Err(Error::Domain(rho));
    }
    if x == f64::NEG_INFINITY || y == f64::NEG_INFINITY {
        return Ok(CompensatedValue::ZERO);
    }
    if x == f64::INFINITY {
        return Ok(cdf(y).into());
    }
    if y == f64::INFINITY {
        return Ok(cdf(x).into());
    }
    if rho == 1.0 {
        return Ok(cdf(x.min(y)).into());
    }
    if rho == -1.0 {
        let v = CompensatedValue::from_f64(cdf(x))
            .add_f64(cdf(y))
            .add_f64(-1.0);
        return Ok(if v.hi > 0.0 {
            v
        } else {
            CompensatedValue::ZERO
        });
    }

    let spec = QuadratureSpec::default();
    let integral = phi2_plackett(x, y, rho, &spec)?;
    if rho.abs() <= TETRACHORIC_LIMIT {
        let series = phi2_tetrachoric(x, y, rho, DEFAULT_MAX_TERMS)?;
        let gap = (integral - series).to_f64().abs();
        if gap > AGREEMENT_TOLERANCE {
            return Err(Error::Accuracy {
                method: "integral/series agreement",
                x,
                y,
                rho,
                estimate: gap,
                target: AGREEMENT_TOLERANCE,
            });
        }
    }
    Ok(integral)
}

/// [`oracle_value`] rounded to a double.
pub fn oracle(x: f64, y: f64, rho: f64) -> Result<f64> {
    oracle_value(x, y, rho).map(CompensatedValue::to_f64)
}

/// `1/4 + asin(rho) / (2 pi)`, the value at the origin.
pub fn origin_value(rho: f64) -> f64 {
    origin_value_compensated(rho).to_f64()
}

/// [`origin_value`] before the final rounding.
pub fn origin_value_compensated(rho: f64) -> CompensatedValue {
    (FRAC_1_2PI * asin_compensated(rho)).add_f64(0.25)
}

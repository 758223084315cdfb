use crate::oracle::{
    oracle, origin_value, origin_value_compensated, phi2_tetrachoric, plackett_estimate,
    QuadratureSpec, DEFAULT_MAX_TERMS,
};
use crate::reduction::phi2;
use crate::univariate::cdf;

#[derive(Debug, Clone, PartialEq)]
pub struct SelfTestCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl SelfTestCheck {
    fn within(name: impl Into<String>, observed: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            passed: observed <= tolerance,
            detail: format!("observed {observed:.3e}, tolerance {tolerance:.0e}"),
        }
    }
}

fn worst<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    values.into_iter().fold(0.0, |m: f64, v: f64| {
        if m.is_nan() || v.is_nan() {
            f64::NAN
        } else {
            m.max(v)
        }
    })
}

const CROSS_POINTS: [(f64, f64, f64); 6] = [
    (-1.0, -1.0, 0.5),
    (-2.0, 1.0, 0.3),
    (0.5, -1.5, -0.3),
    (-7.0, -7.0, 0.8),
    (3.0, 2.5, -0.9),
    (-4.0, 4.0, -0.2),
];

const NEAR_UNIT_POINTS: [(f64, f64, f64); 4] = [
    (-1.0, -1.001, 0.9995),
    (0.3, -0.3, -0.9995),
    (2.0, 2.0, 0.999_999),
    (-3.0, 2.5, 0.95),
];

/// Closed-form anchors and oracle cross-validation.
pub fn selftest() -> Vec<SelfTestCheck> {
    let rhos = [-0.999, -0.9, -0.5, 0.0, 0.5, 0.7712, 0.9, 0.999];
    let mut checks = vec![SelfTestCheck::within(
        "phi2 at the origin vs 1/4 + asin(rho)/(2 pi)",
        worst(
            rhos.iter()
                .map(|&r| (phi2(0.0, 0.0, r).unwrap_or(f64::NAN) - origin_value(r)).abs()),
        ),
        2e-16,
    )];

    let spec = QuadratureSpec::default();
    checks.push(SelfTestCheck::within(
        "oracle at the origin vs 1/4 + asin(rho)/(2 pi)",
        worst(rhos.iter().map(|&r| {
            plackett_estimate(0.0, 0.0, r, &spec)
                .map(|e| (e.value - origin_value_compensated(r)).to_f64().abs())
                .unwrap_or(f64::NAN)
        })),
        1e-17,
    ));

    checks.push(SelfTestCheck::within(
        "correlation integral node doubling",
        worst(
            CROSS_POINTS
                .iter()
                .chain(&NEAR_UNIT_POINTS)
                .map(|&(x, y, r)| {
                    plackett_estimate(x, y, r, &spec)
                        .map(|e| e.error_estimate)
                        .unwrap_or(f64::NAN)
                }),
        ),
        1e-17,
    ));

    checks.push(SelfTestCheck::within(
        "correlation integral vs tetrachoric series",
        worst(CROSS_POINTS.iter().map(|&(x, y, r)| {
            match (
                plackett_estimate(x, y, r, &spec),
                phi2_tetrachoric(x, y, r, DEFAULT_MAX_TERMS),
            ) {
                (Ok(a), Ok(b)) => (a.value - b).to_f64().abs(),
                _ => f64::NAN,
            }
        })),
        1e-15,
    ));

    checks.push(SelfTestCheck::within(
        "phi2 vs oracle",
        worst(
            CROSS_POINTS
                .iter()
                .chain(&NEAR_UNIT_POINTS)
                .map(|&(x, y, r)| match (phi2(x, y, r), oracle(x, y, r)) {
                    (Ok(a), Ok(b)) => (a - b).abs(),
                    _ => f64::NAN,
                }),
        ),
        1e-14,
    ));

    let grid: Vec<f64> = (-8..=8).map(|i| i as f64 * 0.75).collect();
    checks.push(SelfTestCheck::within(
        "phi2 with rho = 0 vs Phi(x) Phi(y)",
        worst(grid.iter().flat_map(|&x| {
            grid.iter()
                .map(move |&y| (phi2(x, y, 0.0).unwrap_or(f64::NAN) - cdf(x) * cdf(y)).abs())
        })),
        5e-16,
    ));

    checks.push(SelfTestCheck::within(
        "phi2 with rho = +-1 vs closed forms",
        worst(grid.iter().flat_map(|&x| {
            grid.iter().map(move |&y| {
                let up = phi2(x, y, 1.0).unwrap_or(f64::NAN) - cdf(x.min(y));
                let down =
                    phi2(x, y, -1.0).unwrap_or(f64::NAN) - (cdf(x) + cdf(y) - 1.0).clamp(0.0, 1.0);
                up.abs().max(down.abs())
            })
        })),
        0.0,
    ));

    checks
}

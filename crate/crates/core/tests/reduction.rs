use proptest::prelude::*;

use bivnorm::oracle::oracle;
use bivnorm::reduction::{phi2_half, slope_direct, slope_near_minus_one, slope_near_plus_one};
use bivnorm::{cdf, phi2, Correlation, Error};

#[test]
fn every_sign_octant_matches_the_oracle() {
    let magnitudes = [0.3, 1.0, 2.5, 6.0];
    let rhos = [-0.999, -0.995, -0.7, -0.2, 0.2, 0.7, 0.995, 0.999];
    let mut worst: f64 = 0.0;
    for &mx in &magnitudes {
        for &my in &magnitudes {
            for sx in [-1.0, 1.0] {
                for sy in [-1.0, 1.0] {
                    for &rho in &rhos {
                        let (x, y) = (sx * mx, sy * my);
                        let err = (phi2(x, y, rho).unwrap() - oracle(x, y, rho).unwrap()).abs();
                        assert!(err <= 1e-14, "({x}, {y}, {rho}): {err:e}");
                        worst = worst.max(err);
                    }
                }
            }
        }
    }
    assert!(worst <= 1e-15, "{worst:e}");
}

#[test]
fn half_terms_split_the_diagonal_evenly() {
    let corr = Correlation::new(0.5).unwrap();
    let half = phi2_half(-1.0, -1.0, &corr);
    let total = oracle(-1.0, -1.0, 0.5).unwrap();
    assert!((2.0 * half - total).abs() <= 2e-16);
}

#[test]
fn mixed_sign_example_and_identity() {
    let v = phi2(-1.0, 1.0, 0.5).unwrap();
    assert!((v - oracle(-1.0, 1.0, 0.5).unwrap()).abs() <= 2e-16);
    let via_identity = cdf(-1.0) - phi2(-1.0, -1.0, -0.5).unwrap();
    assert!((v - via_identity).abs() <= 2e-16);
}

#[test]
fn branch_formulas_agree_just_around_the_cutoff() {
    for rho in [0.99 - 1e-6, 0.99 + 1e-6] {
        let corr = Correlation::new(rho).unwrap();
        let neg = Correlation::new(-rho).unwrap();
        for &(x, y) in &[(-1.0, -0.7), (-2.0, 1.5), (0.5, 3.0), (4.0, -2.0)] {
            let (a0, b0) = slope_direct(x, y, &corr);
            let (a1, b1) = slope_near_plus_one(x, y, &corr);
            assert!((a0 - a1).abs() <= 1e-12 * a0.abs().max(1e-300), "{a0} {a1}");
            assert!((b0 - b1).abs() <= 1e-12 * b0.abs().max(1e-300), "{b0} {b1}");
            let (a0, b0) = slope_direct(x, y, &neg);
            let (a1, b1) = slope_near_minus_one(x, y, &neg);
            assert!((a0 - a1).abs() <= 1e-12 * a0.abs().max(1e-300), "{a0} {a1}");
            assert!((b0 - b1).abs() <= 1e-12 * b0.abs().max(1e-300), "{b0} {b1}");
        }
    }
}

#[test]
fn domain_errors_and_nan() {
    assert!(matches!(phi2(0.0, 0.0, 1.0 + 1e-9), Err(Error::Domain(_))));
    assert!(matches!(phi2(0.0, 0.0, -1.5), Err(Error::Domain(_))));
    assert!(phi2(0.0, 0.0, 1.0 + 1e-13).is_ok());
    assert!(phi2(f64::NAN, 0.0, 0.5).unwrap().is_nan());
    assert!(phi2(0.0, 0.0, f64::NAN).unwrap().is_nan());
}

fn abscissa() -> impl Strategy<Value = f64> {
    -10.0f64..10.0
}

fn correlation() -> impl Strategy<Value = f64> {
    -1.0f64..=1.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn monotone_in_each_argument(x in abscissa(), y in abscissa(), rho in correlation(), step in 1e-6f64..0.5) {
        let v = phi2(x, y, rho).unwrap();
        prop_assert!(phi2(x + step, y, rho).unwrap() >= v - 2e-16);
        prop_assert!(phi2(x, y + step, rho).unwrap() >= v - 2e-16);
        let up = (rho + step).min(1.0);
        prop_assert!(phi2(x, y, up).unwrap() >= v - 2e-16);
    }

    #[test]
    fn frechet_bounds_and_range(x in abscissa(), y in abscissa(), rho in correlation()) {
        let v = phi2(x, y, rho).unwrap();
        prop_assert!((0.0..=1.0).contains(&v));
        prop_assert!(v >= (cdf(x) + cdf(y) - 1.0).max(0.0) - 1e-15);
        prop_assert!(v <= cdf(x).min(cdf(y)) + 1e-15);
    }

    #[test]
    fn symmetric_bit_for_bit(x in abscissa(), y in abscissa(), rho in correlation()) {
        prop_assert_eq!(phi2(x, y, rho).unwrap().to_bits(), phi2(y, x, rho).unwrap().to_bits());
    }

    #[test]
    fn correlation_invariants(rho in correlation()) {
        let c = Correlation::new(rho).unwrap();
        prop_assert!(c.s() >= 0.0);
        prop_assert!((c.s() * c.s() + rho * rho - 1.0).abs() <= 4.0 * f64::EPSILON);
        prop_assert_eq!(c.s() == 0.0, rho.abs() == 1.0);
    }
}

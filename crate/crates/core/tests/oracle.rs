#![allow(clippy::excessive_precision)]

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bivnorm::oracle::{
    oracle, oracle_value, origin_value_compensated, phi2_plackett, phi2_tetrachoric,
    plackett_estimate, plackett_integral, QuadratureSpec, Scheme, DEFAULT_MAX_TERMS,
};

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * ((rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64)
}

#[test]
fn worst_case_region_converges() {
    let est = plackett_estimate(-7.0, -7.0, 0.8, &QuadratureSpec::default()).unwrap();
    assert!(est.error_estimate <= 1e-17);
    // 40-digit reference
    assert!((est.value.to_f64() - 2.234399813160845810348e-14).abs() <= 1e-27);
}

#[test]
fn fifty_origin_anchors() {
    let spec = QuadratureSpec::default();
    for i in 0..50 {
        let rho = -0.999 + i as f64 * (1.998 / 49.0);
        let v = phi2_plackett(0.0, 0.0, rho, &spec).unwrap();
        let diff = (v - origin_value_compensated(rho)).to_f64().abs();
        assert!(diff <= 1e-17, "rho={rho}: {diff:e}");
    }
}

#[test]
fn series_and_integral_agree_inside_the_series_domain() {
    let spec = QuadratureSpec::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..500 {
        let x = uniform(&mut rng, -8.0, 8.0);
        let y = uniform(&mut rng, -8.0, 8.0);
        let rho = uniform(&mut rng, -0.9, 0.9);
        let a = phi2_plackett(x, y, rho, &spec).unwrap();
        let b = phi2_tetrachoric(x, y, rho, DEFAULT_MAX_TERMS).unwrap();
        assert!((a - b).to_f64().abs() <= 1e-16, "({x}, {y}, {rho})");
    }
}

#[test]
fn node_doubling_on_sampling_domain() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..500 {
        let x = uniform(&mut rng, -10.0, 10.0);
        let y = uniform(&mut rng, -10.0, 10.0);
        let rho = uniform(&mut rng, -0.999, 0.999);
        let coarse = plackett_integral(x, y, rho, 128, Scheme::GaussLegendre);
        let fine = plackett_integral(x, y, rho, 256, Scheme::GaussLegendre);
        assert!((fine - coarse).to_f64().abs() <= 1e-17, "({x}, {y}, {rho})");
    }
}

#[test]
fn tanh_sinh_scheme_agrees() {
    let ts = QuadratureSpec {
        scheme: Scheme::TanhSinh,
        ..QuadratureSpec::default()
    };
    for &(x, y, rho) in &[(-1.0, -1.0, 0.5), (2.0, -3.0, -0.7), (-4.0, -4.5, 0.98)] {
        let a = phi2_plackett(x, y, rho, &ts).unwrap();
        let b = oracle_value(x, y, rho).unwrap();
        assert!((a - b).to_f64().abs() <= 1e-16, "({x}, {y}, {rho})");
    }
}

#[test]
fn dispatch_and_closed_forms() {
    assert_eq!(oracle(0.0, 0.0, 1.0).unwrap(), 0.5);
    assert_eq!(oracle(0.0, 0.0, -1.0).unwrap(), 0.0);
    assert_eq!(oracle(f64::NEG_INFINITY, 1.0, 0.3).unwrap(), 0.0);
    assert!(oracle(f64::NAN, 1.0, 0.3).is_err());
    for &(x, y) in &[(-1.0, 2.0), (3.0, -0.5)] {
        let expected = bivnorm::cdf(x) * bivnorm::cdf(y);
        assert_eq!(oracle(x, y, 0.0).unwrap(), expected);
    }
}

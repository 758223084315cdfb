//! Gauss-Legendre and tanh-sinh rules with compensated accumulation.
//!
//! Rules are generated on first use for each node count and shared
//! afterwards.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::{Arc, OnceLock, RwLock};

use super::compensated::CompensatedValue;

/// Half-width of the truncated tanh-sinh parameter range.
const TANH_SINH_RANGE: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    GaussLegendre,
    TanhSinh,
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, ascending.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on `P_n` from the Tricomi initial guesses, finished
    /// with double-double steps so nodes and weights are rounded once.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-15 * x.abs().max(1e-3) {
                    break;
                }
            }
            let mut root = CompensatedValue::from_f64(x);
            let mut dp = CompensatedValue::ZERO;
            for _ in 0..2 {
                let (p, d) = legendre_with_derivative_dd(n, root);
                root -= p / d;
                dp = d;
            }
            if n % 2 == 1 && i == n / 2 {
                root = CompensatedValue::ZERO;
                dp = legendre_with_derivative_dd(n, root).1;
            }
            let one_minus_sq = CompensatedValue::from_f64(1.0) - root * root;
            let w = CompensatedValue::from_f64(2.0) / (one_minus_sq * dp * dp);
            nodes[i] = -root.hi;
            nodes[n - 1 - i] = root.hi;
            weights[i] = w.to_f64();
            weights[n - 1 - i] = w.to_f64();
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `int_a^b f`, accumulated in double-double.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> CompensatedValue {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut acc = CompensatedValue::ZERO;
        for (&t, &w) in self.nodes.iter().zip(&self.weights) {
            let fx = f(mid + half * t);
            acc += CompensatedValue::product(w, fx);
        }
        acc.mul_f64(half)
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn legendre_with_derivative_dd(
    n: usize,
    x: CompensatedValue,
) -> (CompensatedValue, CompensatedValue) {
    let one = CompensatedValue::from_f64(1.0);
    if n == 0 {
        return (one, CompensatedValue::ZERO);
    }
    let mut p0 = one;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((x * p1).mul_f64(2.0 * kf - 1.0) - p0.mul_f64(kf - 1.0))
            / CompensatedValue::from_f64(kf);
        p0 = p1;
        p1 = p2;
    }
    let d = (x * p1 - p0).mul_f64(n as f64) / (x * x - one);
    (p1, d)
}

/// Tanh-sinh abscissas stored relative to the nearer endpoint so that points
/// within `1e-30` of an endpoint keep full precision.
#[derive(Debug, Clone)]
pub struct TanhSinh {
    /// `(fraction of the interval from the nearer endpoint, from_left, weight)`.
    points: Vec<(f64, bool, f64)>,
}

impl TanhSinh {
    /// `n + 1` points with step `2 * 4.0 / n` on the parameter axis.
    pub fn new(n: usize) -> Self {
        assert!(
            n >= 2 && n % 2 == 0,
            "tanh-sinh rule needs an even node count"
        );
        let half = n / 2;
        let h = TANH_SINH_RANGE / half as f64;
        let mut points = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let t = (k as f64 - half as f64) * h;
            let u = FRAC_PI_2 * t.sinh();
            let frac = 1.0 / (1.0 + (2.0 * u.abs()).exp());
            let cu = u.cosh();
            // dx/dt on [-1, 1] is (pi/2) cosh t / cosh^2 u; the interval map adds 1/2
            let w = 0.5 * h * FRAC_PI_2 * t.cosh() / (cu * cu);
            if w == 0.0 || !w.is_finite() {
                continue;
            }
            points.push((frac, t <= 0.0, w));
        }
        Self { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `int_a^b f`, accumulated in double-double.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> CompensatedValue {
        let width = b - a;
        let mut acc = CompensatedValue::ZERO;
        for &(frac, from_left, w) in &self.points {
            let x = if from_left {
                a + width * frac
            } else {
                b - width * frac
            };
            acc += CompensatedValue::product(w, f(x));
        }
        acc.mul_f64(width)
    }
}

type Cache<T> = OnceLock<RwLock<HashMap<usize, Arc<T>>>>;

fn cached<T>(cache: &'static Cache<T>, n: usize, build: impl FnOnce() -> T) -> Arc<T> {
    let map = cache.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(rule) = map.read().unwrap_or_else(|e| e.into_inner()).get(&n) {
        return Arc::clone(rule);
    }
    let rule = Arc::new(build());
    let mut guard = map.write().unwrap_or_else(|e| e.into_inner());
    Arc::clone(guard.entry(n).or_insert(rule))
}

/// Shared Gauss-Legendre rule with `n` nodes.
pub fn gauss_legendre(n: usize) -> Arc<GaussLegendre> {
    static CACHE: Cache<GaussLegendre> = OnceLock::new();
    cached(&CACHE, n, || GaussLegendre::new(n))
}

/// Shared tanh-sinh rule with `n` intervals.
pub fn tanh_sinh(n: usize) -> Arc<TanhSinh> {
    static CACHE: Cache<TanhSinh> = OnceLock::new();
    cached(&CACHE, n, || TanhSinh::new(n))
}

/// `int_a^b f` with the given scheme and node count.
pub fn integrate<F: FnMut(f64) -> f64>(
    scheme: Scheme,
    n: usize,
    a: f64,
    b: f64,
    f: F,
) -> CompensatedValue {
    match scheme {
        Scheme::GaussLegendre => gauss_legendre(n).integrate(a, b, f),
        Scheme::TanhSinh => tanh_sinh(n).integrate(a, b, f),
    }
}

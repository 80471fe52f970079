//! Brute-force oracles shared by the integration suites. Nothing here calls
//! into the library's numerics: densities come straight from `exp`, the cdf
//! from `statrs`, and integrals from a composite Gauss–Legendre rule.

#![allow(dead_code)]

use std::f64::consts::PI;
use std::sync::OnceLock;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use disclosure::ModelParams;

pub fn phi(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

/// Standard normal cdf from statrs; accurate to roughly 1e-10.
pub fn big_phi(z: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(-z / 2f64.sqrt())
}

/// Density of `N(mean, 1/precision)`.
pub fn normal_density(t: f64, mean: f64, precision: f64) -> f64 {
    precision.sqrt() * phi((t - mean) * precision.sqrt())
}

const GL_ORDER: usize = 10;

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss–Legendre nodes and weights on [-1, 1] by Newton iteration.
fn gl_rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_ORDER;
        (0..n)
            .map(|i| {
                let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
                for _ in 0..100 {
                    let (p, dp) = legendre(n, x);
                    let dx = p / dp;
                    x -= dx;
                    if dx.abs() < 1e-16 {
                        break;
                    }
                }
                let (_, dp) = legendre(n, x);
                (x, 2.0 / ((1.0 - x * x) * dp * dp))
            })
            .collect()
    })
}

/// Composite Gauss–Legendre over `panels` equal pieces of `[a, b]`.
pub fn gl<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let rule = gl_rule();
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let mid = a + (k as f64 + 0.5) * h;
        let mut s = 0.0;
        for &(x, w) in rule {
            s += w * f(mid + 0.5 * h * x);
        }
        total += 0.5 * h * s;
    }
    total
}

/// Bisection to `tol` on a sign-changing bracket.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut flo = f(lo);
    assert!(flo * f(hi) <= 0.0, "not a bracket: [{lo}, {hi}]");
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Posterior expectation of `g(θ)` given signals, by brute-force
/// normalization of prior × likelihoods. The weight is handled in logs and
/// the integration window is centered on its peak, found by a scan.
pub fn posterior_expectation<G: Fn(f64) -> f64>(
    params: &ModelParams,
    x: Option<f64>,
    y: Option<f64>,
    g: G,
) -> f64 {
    let log_weight = |theta: f64| {
        let mut lw = -0.5 * params.gamma * (theta - params.mu).powi(2);
        if let Some(x) = x {
            lw -= 0.5 * params.beta * (x - theta).powi(2);
        }
        if let Some(y) = y {
            lw -= 0.5 * params.alpha * (y - theta).powi(2);
        }
        lw
    };
    let (mut peak, mut best) = (params.mu, f64::NEG_INFINITY);
    for i in 0..=8000 {
        let t = params.mu - 400.0 + 0.1 * i as f64;
        let lw = log_weight(t);
        if lw > best {
            best = lw;
            peak = t;
        }
    }
    let weight = |theta: f64| (log_weight(theta) - best).exp();
    let (lo, hi) = (peak - 40.0, peak + 40.0);
    let num = gl(|t| g(t) * weight(t), lo, hi, 800);
    let den = gl(weight, lo, hi, 800);
    num / den
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random admissible primitives with moderate precisions.
pub fn random_params(rng: &mut ChaCha8Rng) -> ModelParams {
    ModelParams::new(
        rng.random_range(0.5..3.0),
        rng.random_range(0.5..3.0),
        rng.random_range(0.5..3.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(-2.0..2.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(0.1..0.9),
    )
    .unwrap()
}

/// Random primitives whose conflict weight satisfies `|r + b| ∈ [0.1, 3]`.
pub fn random_conflict_params(rng: &mut ChaCha8Rng) -> ModelParams {
    let weight = rng.random_range(0.1..3.0) * if rng.random::<bool>() { 1.0 } else { -1.0 };
    let r = rng.random_range(-2.0..2.0);
    ModelParams::new(
        rng.random_range(0.5..3.0),
        rng.random_range(0.5..3.0),
        rng.random_range(0.5..3.0),
        rng.random_range(-1.0..1.0),
        r,
        weight - r,
        rng.random_range(0.2..0.9),
    )
    .unwrap()
}

pub fn helpful() -> ModelParams {
    ModelParams::new(2.0, 1.0, 1.0, 0.0, 2.0, -0.5, 0.8).unwrap()
}

pub fn harmful() -> ModelParams {
    ModelParams::new(1.0, 1.5, 1.0, 0.0, 0.5, 1.5, 0.8).unwrap()
}

/// `Π(x, y)` as `E[(r+b+θ) ∫_x^∞ f(t|θ) dt | y]`, both integrals numeric.
pub fn payoff_2d(params: &ModelParams, x: f64, y: f64) -> f64 {
    let sd_x = params.beta.recip().sqrt();
    let w = params.r + params.b;
    posterior_expectation(params, None, Some(y), |theta| {
        let bottom = x.max(theta - 15.0 * sd_x);
        let top = theta + 15.0 * sd_x;
        let acting = if top <= bottom {
            0.0
        } else {
            gl(|t| normal_density(t, theta, params.beta), bottom, top, 60)
        };
        (w + theta) * acting
    })
}

//! Bracketed scalar root finding.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub fx: f64,
    pub iterations: usize,
}

/// Brent's method: inverse quadratic / secant steps safeguarded by bisection.
///
/// `f(a)` and `f(b)` must have opposite signs (or one of them be zero).
/// Terminates once the bracket is narrower than `xtol + 4 ε |x|`.
pub fn brent<F>(mut f: F, a: f64, b: f64, xtol: f64, max_iter: usize) -> Result<Root>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(Root {
            x: a,
            fx: fa,
            iterations: 0,
        });
    }
    if fb == 0.0 {
        return Ok(Root {
            x: b,
            fx: fb,
            iterations: 0,
        });
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::BracketFailure {
            what: "brent bracket",
            lower: a.min(b),
            upper: a.max(b),
        });
    }

    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;

    for iter in 1..=max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }

        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let half = 0.5 * (c - b);
        if half.abs() <= tol || fb == 0.0 {
            return Ok(Root {
                x: b,
                fx: fb,
                iterations: iter,
            });
        }

        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * half * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * half * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            let min1 = 3.0 * half * q - (tol * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = half;
                e = d;
            }
        } else {
            d = half;
            e = d;
        }

        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(half) };
        fb = f(b);
    }

    Err(Error::RootNotConverged {
        iterations: max_iter,
        residual: fb.abs(),
    })
}

/// Walks away from `start` in direction `step.signum()` with geometrically
/// growing steps until `f` changes sign relative to `f(start)`.
///
/// Returns the last two probe points as an ordered bracket.
pub fn expand_bracket<F>(mut f: F, start: f64, step: f64, max_doublings: usize) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let f0 = f(start);
    let mut prev = start;
    let mut delta = step;
    for _ in 0..max_doublings {
        let next = start + delta;
        let fx = f(next);
        if fx == 0.0 || fx.signum() != f0.signum() {
            return Ok(if prev < next { (prev, next) } else { (next, prev) });
        }
        prev = next;
        delta *= 2.0;
    }
    let far = start + delta;
    Err(Error::BracketFailure {
        what: "bracket expansion",
        lower: start.min(far),
        upper: start.max(far),
    })
}

/// Index pairs `(j, i)`, `j < i`, of consecutive nonzero entries with
/// strictly opposite signs. Exact zeros and NaNs are skipped over.
pub fn sign_changes(values: &[f64]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut last: Option<(usize, f64)> = None;
    for (i, &v) in values.iter().enumerate() {
        if v == 0.0 || v.is_nan() {
            continue;
        }
        if let Some((j, s)) = last {
            if s != v.signum() {
                out.push((j, i));
            }
        }
        last = Some((i, v.signum()));
    }
    out
}

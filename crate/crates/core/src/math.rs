//! Small numeric helpers shared across modules.

use alloc::vec::Vec;

/// `x^e` for a non-negative integer exponent; `0^0 = 1`.
pub(crate) fn powi(x: f64, e: usize) -> f64 {
    libm::pow(x, e as f64)
}

/// Row `n` of Pascal's triangle, `C(n, 0..=n)`, built with the multiplicative
/// running product `C(n, k+1) = C(n, k) * (n - k) / (k + 1)`.
pub(crate) fn binomial_row(n: usize) -> Vec<f64> {
    let mut row = Vec::with_capacity(n + 1);
    let mut c = 1.0_f64;
    row.push(c);
    for k in 0..n {
        c = c * (n - k) as f64 / (k + 1) as f64;
        row.push(libm::round(c));
    }
    row
}

/// Binomial probability mass `P[Bin(n, p) = k]` for every `k = 0..=n`.
pub(crate) fn binomial_pmf(n: usize, p: f64) -> Vec<f64> {
    let row = binomial_row(n);
    let q = 1.0 - p;
    (0..=n).map(|k| row[k] * powi(p, k) * powi(q, n - k)).collect()
}

/// `sum_k a[k] p^k (1-p)^(d-k)` with `d = a.len() - 1`: a polynomial in
/// Bernstein form with the binomial coefficients already folded into `a`.
/// Horner's rule runs in `p / (1 - p)` or its inverse, whichever is at most one.
pub(crate) fn bernstein(a: &[f64], p: f64) -> f64 {
    let d = a.len() - 1;
    let q = 1.0 - p;
    if p <= 0.5 {
        let t = p / q;
        a.iter().rev().fold(0.0, |acc, &x| acc * t + x) * powi(q, d)
    } else {
        let s = q / p;
        a.iter().fold(0.0, |acc, &x| acc * s + x) * powi(p, d)
    }
}

/// Root of a decreasing function (`f >= 0` at `lo`, `<= 0` at `hi`) by Newton
/// steps kept inside the shrinking bracket, bisecting whenever a step would
/// leave it. `f` returns the value and the derivative.
pub(crate) fn newton_decreasing<F: Fn(f64) -> (f64, f64)>(f: F, mut lo: f64, mut hi: f64, max_iter: usize) -> f64 {
    let mut x = 0.5 * (lo + hi);
    for _ in 0..max_iter {
        let (fx, dfx) = f(x);
        if fx == 0.0 {
            return x;
        }
        if fx > 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let step = x - fx / dfx;
        let next = if dfx < 0.0 && dfx.is_finite() && step > lo && step < hi {
            step
        } else {
            0.5 * (lo + hi)
        };
        if next <= lo || next >= hi || (next - x).abs() <= 2.0 * f64::EPSILON * x.abs() {
            return next.clamp(lo, hi);
        }
        x = next;
    }
    x
}

/// Bisection on a function that is `>= 0` at `lo` and `<= 0` at `hi`.
/// Runs until the bracket stops shrinking or `max_iter` is reached.
pub(crate) fn bisect_decreasing<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, width: f64, max_iter: usize) -> f64 {
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= width {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

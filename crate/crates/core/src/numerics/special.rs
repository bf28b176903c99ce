//! Elementary and Bessel functions with the cancellation-prone cases handled.

use std::f64::consts::{FRAC_PI_4, PI};

/// `sin(x)/x`, with the removable singularity filled in.
#[inline]
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0)
    } else {
        x.sin() / x
    }
}

/// `sinc(x) - sinc(y)` without losing digits when both arguments are small.
pub fn sinc_difference(x: f64, y: f64) -> f64 {
    if x.abs().max(y.abs()) >= 0.5 {
        return sinc(x) - sinc(y);
    }
    // sum_k (-1)^k (x^2k - y^2k) / (2k+1)!
    let (x2, y2) = (x * x, y * y);
    let mut d = (x - y) * (x + y);
    let mut ypow = 1.0;
    let mut fact = 6.0;
    let mut sign = -1.0;
    let mut acc = 0.0;
    for k in 1..=12u32 {
        acc += sign * d / fact;
        ypow *= y2;
        d = x2 * d + ypow * (x2 - y2);
        let (a, b) = (f64::from(2 * k + 2), f64::from(2 * k + 3));
        fact *= a * b;
        sign = -sign;
    }
    acc
}

/// `1 - cos(x)` as `2 sin^2(x/2)`.
#[inline]
pub fn one_minus_cos(x: f64) -> f64 {
    let s = (0.5 * x).sin();
    2.0 * s * s
}

/// `sin(x) - x`.
pub fn sin_minus_x(x: f64) -> f64 {
    if x.abs() >= 0.5 {
        return x.sin() - x;
    }
    let x2 = x * x;
    let mut term = -x * x2 / 6.0;
    let mut acc = term;
    for k in 2..=10u32 {
        let (a, b) = (f64::from(2 * k), f64::from(2 * k + 1));
        term *= -x2 / (a * b);
        acc += term;
    }
    acc
}

/// `J_0(x), ..., J_{n_max}(x)` by Miller's backward recurrence, normalised with
/// `J_0 + 2 sum_k J_2k = 1`.
pub fn bessel_jn_sequence(x: f64, n_max: usize) -> Vec<f64> {
    let mut out = vec![0.0; n_max + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let ax = x.abs();
    let start = (n_max as f64).max(ax) + 40.0 + 2.0 * ax.sqrt();
    let mut m = start.ceil() as usize;
    m += m % 2;
    let two_over_x = 2.0 / ax;

    let (mut jp1, mut j) = (0.0_f64, 1e-300_f64);
    let mut norm = 0.0;
    for k in (1..=m).rev() {
        // j holds J_k, jp1 holds J_{k+1}
        let jm1 = k as f64 * two_over_x * j - jp1;
        jp1 = j;
        j = jm1;
        if k - 1 <= n_max {
            out[k - 1] = j;
        }
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            norm += 2.0 * j;
        }
        if j.abs() > 1e250 {
            j *= 1e-250;
            jp1 *= 1e-250;
            norm *= 1e-250;
            for v in out.iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    norm += j;
    for v in out.iter_mut() {
        *v /= norm;
    }
    if x < 0.0 {
        for (n, v) in out.iter_mut().enumerate() {
            if n % 2 == 1 {
                *v = -*v;
            }
        }
    }
    out
}

/// Bessel function of the first kind, order zero.
pub fn bessel_j0(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= 25.0 {
        return bessel_jn_sequence(ax, 0)[0];
    }
    // Hankel expansion, summed until the terms stop shrinking.
    let inv8x = 1.0 / (8.0 * ax);
    let (mut p, mut q) = (1.0, 0.0);
    let mut term = 1.0_f64;
    for k in 1..200u32 {
        let odd = f64::from(2 * k - 1);
        let next = term * odd * odd * inv8x / f64::from(k);
        if next.abs() >= term.abs() || next.abs() < 1e-18 {
            break;
        }
        term = next;
        let s = if (k / 2 + k % 2) % 2 == 1 { -1.0 } else { 1.0 };
        if k % 2 == 0 {
            p += s * term;
        } else {
            q += s * term;
        }
    }
    let chi = ax - FRAC_PI_4;
    (2.0 / (PI * ax)).sqrt() * (p * chi.cos() - q * chi.sin())
}

//! Clenshaw-Curtis-Filon panels for integrands of the form
//! `sum_i c_i * E_{e(i)}(w) * trig(nu_i * w)`.
//!
//! The smooth envelopes are interpolated at 25 Chebyshev points per panel and
//! the oscillatory factor is integrated exactly against each Chebyshev
//! polynomial, so the panel size is set by the envelopes alone. The 13-point
//! interpolant on the even nodes gives the error estimate.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::numerics::bessel_jn_sequence;

pub(crate) const DEGREE: usize = 24;
const COARSE: usize = DEGREE / 2;

/// Below this `|theta|` the moments come from the Jacobi-Anger expansion;
/// above it the forward recurrence is stable for all degrees used here.
const RECURRENCE_THRESHOLD: f64 = 30.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trig {
    Cos,
    Sin,
}

/// One oscillatory term `coefficient * envelope[envelope](w) * trig(frequency * w)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourierTerm {
    pub coefficient: f64,
    pub frequency: f64,
    pub trig: Trig,
    pub envelope: usize,
}

impl FourierTerm {
    pub fn new(coefficient: f64, frequency: f64, trig: Trig, envelope: usize) -> Self {
        Self { coefficient, frequency, trig, envelope }
    }
}

struct Tables {
    nodes: [f64; DEGREE + 1],
    // cos(j k pi / n) for the fine and coarse grids
    fine: Vec<f64>,
    coarse: Vec<f64>,
}

fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(|| {
        let n = DEGREE as f64;
        let mut nodes = [0.0; DEGREE + 1];
        for (j, x) in nodes.iter_mut().enumerate() {
            *x = (j as f64 * PI / n).cos();
        }
        let mut fine = vec![0.0; (DEGREE + 1) * (DEGREE + 1)];
        for k in 0..=DEGREE {
            for j in 0..=DEGREE {
                fine[k * (DEGREE + 1) + j] = ((j * k) as f64 * PI / n).cos();
            }
        }
        let m = COARSE as f64;
        let mut coarse = vec![0.0; (COARSE + 1) * (COARSE + 1)];
        for k in 0..=COARSE {
            for j in 0..=COARSE {
                coarse[k * (COARSE + 1) + j] = ((j * k) as f64 * PI / m).cos();
            }
        }
        Tables { nodes, fine, coarse }
    })
}

/// Chebyshev coefficients of the interpolant through `values` at the
/// Chebyshev-Lobatto points `cos(j pi / n)`, `n = values.len() - 1`.
fn chebyshev_coefficients(values: &[f64], cos_table: &[f64], out: &mut [f64]) {
    let n = values.len() - 1;
    for (k, c) in out.iter_mut().enumerate().take(n + 1) {
        let row = &cos_table[k * (n + 1)..(k + 1) * (n + 1)];
        let mut s = 0.5 * (values[0] * row[0] + values[n] * row[n]);
        for j in 1..n {
            s += values[j] * row[j];
        }
        *c = s * 2.0 / n as f64;
    }
    out[0] *= 0.5;
    out[n] *= 0.5;
}

/// `I_k(theta) = int_{-1}^{1} T_k(x) exp(i theta x) dx` for `k = 0..=n`.
pub fn chebyshev_fourier_moments(theta: f64, n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
    let th = theta.abs();
    if th == 0.0 {
        for (k, m) in out.iter_mut().enumerate() {
            if k % 2 == 0 {
                m.re = 2.0 / (1.0 - (k * k) as f64);
            }
        }
    } else if th <= RECURRENCE_THRESHOLD {
        jacobi_anger_moments(th, &mut out);
    } else {
        recurrence_moments(th, &mut out);
    }
    if theta < 0.0 {
        for m in out.iter_mut() {
            *m = m.conj();
        }
    }
    out
}

fn jacobi_anger_moments(theta: f64, out: &mut [Complex64]) {
    let n_terms = theta.ceil() as usize + 40;
    let j = bessel_jn_sequence(theta, n_terms);
    // i^n J_n(theta), doubled for n > 0
    let coef: Vec<Complex64> = j
        .iter()
        .enumerate()
        .map(|(n, &jn)| {
            let e = if n == 0 { 1.0 } else { 2.0 };
            match n % 4 {
                0 => Complex64::new(e * jn, 0.0),
                1 => Complex64::new(0.0, e * jn),
                2 => Complex64::new(-e * jn, 0.0),
                _ => Complex64::new(0.0, -e * jn),
            }
        })
        .collect();
    for (k, m) in out.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut n = k % 2;
        while n <= n_terms {
            let s = (k + n) as f64;
            let d = k as f64 - n as f64;
            let w = 1.0 / (1.0 - s * s) + 1.0 / (1.0 - d * d);
            acc += coef[n] * w;
            n += 2;
        }
        *m = acc;
    }
}

fn recurrence_moments(theta: f64, out: &mut [Complex64]) {
    let n = out.len() - 1;
    let (s, c) = theta.sin_cos();
    let e_plus = Complex64::new(c, s);
    let e_minus = Complex64::new(c, -s);
    // B_m = e^{i theta} - (-1)^m e^{-i theta}
    let b = |m: usize| if m % 2 == 0 { e_plus - e_minus } else { e_plus + e_minus };
    let t2 = theta * theta;
    out[0] = Complex64::new(2.0 * s / theta, 0.0);
    if n >= 1 {
        out[1] = Complex64::new(0.0, 2.0 * (s - theta * c) / t2);
    }
    if n >= 2 {
        let x2 = 2.0 * ((t2 - 2.0) * s + 2.0 * theta * c) / (t2 * theta);
        out[2] = Complex64::new(2.0 * x2, 0.0) - out[0];
    }
    let inv_i_theta = Complex64::new(0.0, -1.0 / theta);
    for k in 2..n {
        let kf = k as f64;
        let bracket = b(k + 1) / (kf + 1.0) - b(k - 1) / (kf - 1.0) - out[k] * 2.0;
        out[k + 1] = inv_i_theta * bracket * (kf + 1.0) + out[k - 1] * ((kf + 1.0) / (kf - 1.0));
    }
}

/// Integrates the Fourier-split integrand over `[a, b]`. Returns
/// `(value, error)`.
pub(crate) fn filon_panel<E>(
    eval_envelopes: &mut E,
    n_env: usize,
    terms: &[FourierTerm],
    a: f64,
    b: f64,
) -> (f64, f64, f64)
where
    E: FnMut(f64, &mut [f64]),
{
    let tab = tables();
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);

    // values[e][j]
    let mut values = vec![0.0; n_env * (DEGREE + 1)];
    let mut buf = vec![0.0; n_env];
    for (j, &x) in tab.nodes.iter().enumerate() {
        eval_envelopes(c + h * x, &mut buf);
        for e in 0..n_env {
            values[e * (DEGREE + 1) + j] = buf[e];
        }
    }
    let mut fine = vec![0.0; n_env * (DEGREE + 1)];
    let mut coarse = vec![0.0; n_env * (COARSE + 1)];
    let mut even = [0.0; COARSE + 1];
    for e in 0..n_env {
        let v = &values[e * (DEGREE + 1)..(e + 1) * (DEGREE + 1)];
        chebyshev_coefficients(v, &tab.fine, &mut fine[e * (DEGREE + 1)..(e + 1) * (DEGREE + 1)]);
        for (i, x) in even.iter_mut().enumerate() {
            *x = v[2 * i];
        }
        chebyshev_coefficients(&even, &tab.coarse, &mut coarse[e * (COARSE + 1)..(e + 1) * (COARSE + 1)]);
    }

    let mut fine_sum = 0.0;
    let mut coarse_sum = 0.0;
    let mut magnitude = 0.0;
    let mut last_freq = f64::NAN;
    let mut moments = Vec::new();
    for term in terms {
        if term.frequency != last_freq {
            moments = chebyshev_fourier_moments(term.frequency * h, DEGREE);
            last_freq = term.frequency;
        }
        let cf = &fine[term.envelope * (DEGREE + 1)..(term.envelope + 1) * (DEGREE + 1)];
        let cc = &coarse[term.envelope * (COARSE + 1)..(term.envelope + 1) * (COARSE + 1)];
        let mut zf = Complex64::new(0.0, 0.0);
        for (ck, mk) in cf.iter().zip(&moments) {
            zf += mk * *ck;
        }
        let mut zc = Complex64::new(0.0, 0.0);
        for (ck, mk) in cc.iter().zip(&moments) {
            zc += mk * *ck;
        }
        let (s, co) = (term.frequency * c).sin_cos();
        let phase = Complex64::new(co, s);
        let (pf, pc) = (phase * zf, phase * zc);
        let (vf, vc) = match term.trig {
            Trig::Cos => (pf.re, pc.re),
            Trig::Sin => (pf.im, pc.im),
        };
        let scale = term.coefficient * h;
        fine_sum += scale * vf;
        coarse_sum += scale * vc;
        let env_abs: f64 = cf.iter().map(|x| x.abs()).sum();
        magnitude += (scale * env_abs).abs();
    }
    let floor = 50.0 * f64::EPSILON * magnitude;
    (fine_sum, (fine_sum - coarse_sum).abs().max(floor), floor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_kronrod::qk21;

    /// Reference moments by brute-force panel quadrature of the real and
    /// imaginary parts.
    fn reference(theta: f64, k: usize) -> Complex64 {
        let panels = (theta.abs() as usize + 1) * 8;
        let mut re = 0.0;
        let mut im = 0.0;
        for p in 0..panels {
            let a = -1.0 + 2.0 * p as f64 / panels as f64;
            let b = -1.0 + 2.0 * (p + 1) as f64 / panels as f64;
            let tk = |x: f64| (k as f64 * x.clamp(-1.0, 1.0).acos()).cos();
            re += qk21(&mut |x| tk(x) * (theta * x).cos(), a, b).0;
            im += qk21(&mut |x| tk(x) * (theta * x).sin(), a, b).0;
        }
        Complex64::new(re, im)
    }

    #[test]
    fn moments_match_brute_force_on_both_branches() {
        for &theta in &[0.0, 0.3, 5.0, 29.9, 30.1, 77.0, 400.0, -12.0, -250.0] {
            let m = chebyshev_fourier_moments(theta, DEGREE);
            for k in [0, 1, 2, 3, 7, 16, 23, 24] {
                let r = reference(theta, k);
                assert!((m[k] - r).norm() < 1e-13, "theta={theta} k={k}: {} vs {}", m[k], r);
            }
        }
    }

    #[test]
    fn panel_rule_integrates_damped_cosine() {
        // int_1^3 e^{-w} cos(40 w) dw
        let terms = [FourierTerm::new(1.0, 40.0, Trig::Cos, 0)];
        let (v, e, _) = filon_panel(&mut |w: f64, out: &mut [f64]| out[0] = (-w).exp(), 1, &terms, 1.0, 3.0);
        // antiderivative of e^{-w} cos(40 w) is e^{-w}(40 sin 40w - cos 40w)/1601
        let g = |w: f64| (-w).exp() * (40.0 * (40.0 * w).sin() - (40.0 * w).cos()) / 1601.0;
        let want = g(3.0) - g(1.0);
        assert!((v - want).abs() < 1e-14, "{v} vs {want}");
        assert!(e < 1e-10);
    }
}

//! Reduced density-matrix elements of a static register (no tunnelling).
//!
//! Each element `<l| rho(t) |m>` evolves independently:
//!
//! ```text
//! rho_lm(t) = rho_lm(0) exp(-i phi_bias) exp(-i X^b) exp(-Lambda^b - Lambda^f)
//! Lambda^b  = 1/4 <l-m| Q^b_2(t) |l-m>
//! X^b       = 1/4 <l-m| Q^b_1(t) |l+m>
//! Lambda^f  = 2 |l-m|^2 q^f_2(t)
//! ```

use num_complex::Complex64;

use crate::decay::{e_tilde_factor, toeplitz_quadratic, DecayProfile, FermionicKernels, Kernel};
use crate::error::{domain, Error, Result};

/// A pair of register labels `(l, m)`, each in `{-1, +1}^N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisPair {
    l: Vec<i8>,
    m: Vec<i8>,
}

fn check_label(v: &[i8]) -> Result<()> {
    if v.is_empty() {
        return domain("labels need at least one qubit");
    }
    if let Some(x) = v.iter().find(|x| **x != 1 && **x != -1) {
        return domain(format!("label entries must be +1 or -1, found {x}"));
    }
    Ok(())
}

impl BasisPair {
    pub fn new(l: Vec<i8>, m: Vec<i8>) -> Result<Self> {
        check_label(&l)?;
        check_label(&m)?;
        if l.len() != m.len() {
            return Err(Error::Dimension { expected: l.len(), got: m.len() });
        }
        Ok(Self { l, m })
    }

    /// `l = -m = (1, ..., 1)`: the element that decays fastest.
    pub fn most_off_diagonal(n: usize) -> Result<Self> {
        Self::new(vec![1; n], vec![-1; n])
    }

    pub fn diagonal(l: Vec<i8>) -> Result<Self> {
        Self::new(l.clone(), l)
    }

    pub fn l(&self) -> &[i8] {
        &self.l
    }

    pub fn m(&self) -> &[i8] {
        &self.m
    }

    pub fn n_qubits(&self) -> usize {
        self.l.len()
    }

    pub fn swapped(&self) -> Self {
        Self { l: self.m.clone(), m: self.l.clone() }
    }

    pub fn is_diagonal(&self) -> bool {
        self.l == self.m
    }

    /// `l - m`.
    pub fn difference(&self) -> Vec<f64> {
        self.l.iter().zip(&self.m).map(|(a, b)| f64::from(a - b)).collect()
    }

    /// `l + m`.
    pub fn sum(&self) -> Vec<f64> {
        self.l.iter().zip(&self.m).map(|(a, b)| f64::from(a + b)).collect()
    }

    /// `xi = (l - m) / 2`.
    pub fn xi(&self) -> Vec<i8> {
        self.l.iter().zip(&self.m).map(|(a, b)| (a - b) / 2).collect()
    }

    /// `chi = (l + m) / 2`.
    pub fn chi(&self) -> Vec<i8> {
        self.l.iter().zip(&self.m).map(|(a, b)| (a + b) / 2).collect()
    }

    pub fn hamming(&self) -> usize {
        self.l.iter().zip(&self.m).filter(|(a, b)| a != b).count()
    }

    /// `|l - m|^2 = 4 * hamming`.
    pub fn difference_norm_sq(&self) -> f64 {
        4.0 * self.hamming() as f64
    }
}

/// Single-qubit biases `eps_n`, entering through `eps(s, l) = sum_n eps_n(s) l_n`.
#[derive(Clone, Debug, PartialEq, Default)]
pub enum Bias {
    #[default]
    None,
    /// Constant per-qubit biases in rad/s.
    Constant(Vec<f64>),
    /// Piecewise-constant biases: `levels[k]` applies on
    /// `[boundaries[k-1], boundaries[k])`, with `boundaries` sorted and
    /// `levels.len() == boundaries.len() + 1`.
    Piecewise { boundaries: Vec<f64>, levels: Vec<Vec<f64>> },
}

impl Bias {
    /// `int_0^t [eps(s, l) - eps(s, m)] ds`.
    pub fn phase(&self, pair: &BasisPair, t: f64) -> Result<f64> {
        let n = pair.n_qubits();
        let level = |eps: &[f64]| -> Result<f64> {
            if eps.len() != n {
                return Err(Error::Dimension { expected: n, got: eps.len() });
            }
            Ok(eps.iter().zip(pair.difference()).map(|(e, d)| e * d).sum())
        };
        match self {
            Bias::None => Ok(0.0),
            Bias::Constant(eps) => Ok(level(eps)? * t),
            Bias::Piecewise { boundaries, levels } => {
                if levels.len() != boundaries.len() + 1 {
                    return Err(Error::Dimension { expected: boundaries.len() + 1, got: levels.len() });
                }
                if boundaries.windows(2).any(|w| w[1] < w[0]) {
                    return domain("bias boundaries must be sorted");
                }
                let mut acc = 0.0;
                let mut start = 0.0;
                for (k, eps) in levels.iter().enumerate() {
                    let end = boundaries.get(k).copied().unwrap_or(f64::INFINITY).min(t);
                    if end > start {
                        acc += level(eps)? * (end - start);
                    }
                    start = start.max(end);
                }
                Ok(acc)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StaticElementResult {
    pub lambda_b: f64,
    pub lambda_f: f64,
    pub x_b: f64,
    pub bias_phase: f64,
    /// `exp(-Lambda^b - Lambda^f)`.
    pub magnitude_ratio: f64,
}

fn check_kernels(pair: &BasisPair, profile: &DecayProfile, fermionic: Option<&FermionicKernels>) -> Result<()> {
    if pair.n_qubits() != profile.n_qubits() {
        return Err(Error::Dimension { expected: profile.n_qubits(), got: pair.n_qubits() });
    }
    if let Some(f) = fermionic {
        if f.t != profile.t() {
            return Err(Error::Precondition(format!(
                "gate kernels at t = {} but profile at t = {}",
                f.t,
                profile.t()
            )));
        }
    }
    Ok(())
}

/// Decay and phase of `<l| rho(t) |m>` at the profile's time.
pub fn static_element(
    pair: &BasisPair,
    profile: &DecayProfile,
    fermionic: Option<&FermionicKernels>,
    bias: &Bias,
) -> Result<StaticElementResult> {
    check_kernels(pair, profile, fermionic)?;
    let t = profile.t();
    let bias_phase = bias.phase(pair, t)?;
    if pair.is_diagonal() {
        return Ok(StaticElementResult { lambda_b: 0.0, lambda_f: 0.0, x_b: 0.0, bias_phase, magnitude_ratio: 1.0 });
    }
    let d = pair.difference();
    let s = pair.sum();
    let lambda_b = 0.25 * toeplitz_quadratic(profile, Kernel::Decay, &d, &d)?;
    let x_b = 0.25 * toeplitz_quadratic(profile, Kernel::Phase, &d, &s)?;
    let lambda_f = fermionic.map_or(0.0, |f| 2.0 * pair.difference_norm_sq() * f.q2);
    Ok(StaticElementResult { lambda_b, lambda_f, x_b, bias_phase, magnitude_ratio: (-lambda_b - lambda_f).exp() })
}

/// `rho_lm(0) exp(-i (phi_bias + X^b)) exp(-Lambda^b - Lambda^f)`.
pub fn evolve_element(rho0: Complex64, result: &StaticElementResult) -> Complex64 {
    let phase = Complex64::from_polar(1.0, -(result.bias_phase + result.x_b));
    rho0 * phase * result.magnitude_ratio
}

/// Lower and upper bounds `(b-, b+)` on `|rho_lm(t)|`:
/// `|rho_lm(0)| exp[-Q_2^0 |l-m|^2 (1 +- e~) / 2] exp[-2 |l-m|^2 q_2^f]`.
/// They bracket the exact magnitude whenever `e~ < 1`.
pub fn bounds(
    pair: &BasisPair,
    profile: &DecayProfile,
    fermionic: Option<&FermionicKernels>,
    rho0_abs: f64,
) -> Result<(f64, f64)> {
    check_kernels(pair, profile, fermionic)?;
    let norm = pair.difference_norm_sq();
    if norm == 0.0 {
        return Ok((rho0_abs, rho0_abs));
    }
    let et = e_tilde_factor(profile)?;
    let base = 0.5 * profile.q2()[0] * norm;
    let gate = (-2.0 * norm * fermionic.map_or(0.0, |f| f.q2)).exp();
    let lower = rho0_abs * (-base * (1.0 + et)).exp() * gate;
    let upper = rho0_abs * (-base * (1.0 - et)).exp() * gate;
    Ok((lower, upper))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(q1: &[f64], q2: &[f64]) -> DecayProfile {
        DecayProfile::from_values(1e-11, q1.to_vec(), q2.to_vec()).unwrap()
    }

    #[test]
    fn pair_invariants() {
        let p = BasisPair::new(vec![1, -1, 1], vec![1, 1, -1]).unwrap();
        assert_eq!(p.xi(), vec![0, -1, 1]);
        assert_eq!(p.chi(), vec![1, 0, 0]);
        assert_eq!(p.difference_norm_sq(), 8.0);
        for (x, c) in p.xi().iter().zip(p.chi()) {
            assert_eq!(x.abs() + c.abs(), 1);
        }
        assert!(BasisPair::new(vec![1, 0], vec![1, 1]).is_err());
        assert!(BasisPair::new(vec![1], vec![1, 1]).is_err());
    }

    #[test]
    fn diagonal_elements_do_not_decay() {
        let p = profile(&[0.1, 0.2], &[0.3, 0.05]);
        let pair = BasisPair::diagonal(vec![1, -1]).unwrap();
        let r = static_element(&pair, &p, None, &Bias::None).unwrap();
        assert_eq!((r.lambda_b, r.lambda_f, r.x_b, r.magnitude_ratio), (0.0, 0.0, 0.0, 1.0));
    }

    #[test]
    fn two_qubit_hand_expansion() {
        let (q10, q11, q20, q21) = (0.013, -0.004, 0.02, 0.003);
        let p = profile(&[q10, q11], &[q20, q21]);
        let pair = BasisPair::new(vec![1, -1], vec![-1, -1]).unwrap();
        let r = static_element(&pair, &p, None, &Bias::None).unwrap();
        assert!((r.lambda_b - 2.0 * q20).abs() < 1e-17);
        assert!((r.x_b + 2.0 * q11).abs() < 1e-17);
    }

    #[test]
    fn most_off_diagonal_closed_form() {
        let q2 = [0.02, 0.004, -0.001, 0.0005];
        let p = profile(&[0.0; 4], &q2);
        let f = FermionicKernels { t: 1e-11, q1: -1e-9, q2: 3e-8 };
        let pair = BasisPair::most_off_diagonal(4).unwrap();
        let r = static_element(&pair, &p, Some(&f), &Bias::None).unwrap();
        let e = crate::decay::e_factor(&p).unwrap();
        assert!((r.lambda_b - 2.0 * 4.0 * q2[0] * (1.0 + e)).abs() < 1e-15);
        assert_eq!(r.x_b, 0.0);
        assert!((r.lambda_f - 8.0 * 4.0 * 3e-8).abs() < 1e-20);
    }

    #[test]
    fn evolve_arithmetic() {
        let zero = StaticElementResult { lambda_b: 0.0, lambda_f: 0.0, x_b: 0.0, bias_phase: 0.0, magnitude_ratio: 1.0 };
        assert_eq!(evolve_element(Complex64::new(0.5, 0.0), &zero), Complex64::new(0.5, 0.0));
        let half = StaticElementResult { magnitude_ratio: 0.5, lambda_b: 0.3, lambda_f: 2f64.ln() - 0.3, ..zero };
        assert!((evolve_element(Complex64::new(0.5, 0.0), &half) - Complex64::new(0.25, 0.0)).norm() < 1e-16);
    }

    #[test]
    fn single_qubit_superposition() {
        let (q1, q2) = (-0.07, 0.11);
        let eps = 3e10;
        let p = profile(&[q1], &[q2]);
        let pair = BasisPair::new(vec![1], vec![-1]).unwrap();
        let r = static_element(&pair, &p, None, &Bias::Constant(vec![eps])).unwrap();
        let out = evolve_element(Complex64::new(0.5, 0.0), &r);
        assert!((out.norm() - 0.5 * (-2.0 * q2).exp()).abs() < 1e-16);
        let want_phase = -2.0 * eps * p.t() - r.x_b;
        let got = out.arg();
        assert!((got - want_phase).abs() < 1e-12, "{got} vs {want_phase}");
        // a single qubit has no partner, so X^b = 1/4 (2)(2 Q_1^0)(0) = 0
        assert_eq!(r.x_b, 0.0);
    }

    #[test]
    fn piecewise_bias_integrates_levels() {
        let pair = BasisPair::new(vec![1, 1], vec![-1, 1]).unwrap();
        let b = Bias::Piecewise { boundaries: vec![1.0, 3.0], levels: vec![vec![1.0, 5.0], vec![-2.0, 5.0], vec![4.0, 5.0]] };
        // only qubit 0 differs: 2 * (1*1 - 2*2 + 4*0.5)
        assert!((b.phase(&pair, 3.5).unwrap() - 2.0 * (1.0 - 4.0 + 2.0)).abs() < 1e-15);
        assert!((b.phase(&pair, 0.5).unwrap() - 1.0).abs() < 1e-15);
        let flat = Bias::Piecewise { boundaries: vec![], levels: vec![vec![1.0, 5.0]] };
        assert_eq!(flat.phase(&pair, 2.0).unwrap(), Bias::Constant(vec![1.0, 5.0]).phase(&pair, 2.0).unwrap());
    }

    #[test]
    fn bounds_collapse_without_neighbours() {
        let p = profile(&[0.0], &[0.2]);
        let pair = BasisPair::new(vec![1], vec![-1]).unwrap();
        let (lo, hi) = bounds(&pair, &p, None, 0.5).unwrap();
        let exact = 0.5 * static_element(&pair, &p, None, &Bias::None).unwrap().magnitude_ratio;
        assert!((lo - exact).abs() < 1e-16 && (hi - exact).abs() < 1e-16);
        let diag = BasisPair::diagonal(vec![1]).unwrap();
        assert_eq!(bounds(&diag, &p, None, 0.3).unwrap(), (0.3, 0.3));
    }

    #[test]
    fn mismatched_sizes() {
        let p = profile(&[0.0; 2], &[0.1; 2]);
        let pair = BasisPair::most_off_diagonal(3).unwrap();
        assert!(matches!(static_element(&pair, &p, None, &Bias::None), Err(Error::Dimension { .. })));
        let f = FermionicKernels { t: 2.0, q1: 0.0, q2: 0.0 };
        let pair = BasisPair::most_off_diagonal(2).unwrap();
        assert!(matches!(static_element(&pair, &p, Some(&f), &Bias::None), Err(Error::Precondition(_))));
    }

    #[test]
    fn decay_monotone_in_hamming_without_neighbours() {
        let p = profile(&[0.0; 6], &[0.1, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let mut last = -1.0;
        for h in 0..=6 {
            let l = vec![1i8; 6];
            let m: Vec<i8> = (0..6).map(|i| if i < h { -1 } else { 1 }).collect();
            let pair = BasisPair::new(l, m).unwrap();
            let r = static_element(&pair, &p, None, &Bias::None).unwrap();
            assert!((r.lambda_b - 0.5 * 0.1 * pair.difference_norm_sq()).abs() < 1e-15);
            assert!(r.lambda_b >= last);
            last = r.lambda_b;
        }
    }
}

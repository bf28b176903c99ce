//! Decay and phase kernels and the Toeplitz matrices built from them.
//!
//! The phonon bath couples qubits `i` and `j` through `Q_m^{|i-j|}(t)`, so
//! the kernel matrix `Q^b_m(t)` is symmetric Toeplitz with diagonal
//! `2 Q_m^0` and off-diagonal entries `2 Q_m^r`. A [`DecayProfile`] holds the
//! first row.

mod cache;
mod kernels;

pub use cache::KernelCache;
pub use kernels::{
    phonon_kernel_direct, q1_r, q1_secular_rate, q2_r, q_fermionic, q_fermionic_bath, FermionicKernels, Kernel,
};

use crate::bath::BathModel;
use crate::error::{domain, Error, Result};
use crate::geometry::RegisterGeometry;
use crate::numerics::NeumaierSum;

/// How far in `r` a profile is evaluated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Truncation {
    /// Stop once `|Q_2^r| / Q_2^0` stays below the threshold for three
    /// consecutive `r`.
    Relative(f64),
    /// Evaluate every `r < N`.
    Full,
}

/// First row of `Q^b_1(t)` and `Q^b_2(t)` for an `N`-qubit register.
///
/// Entries past `r_max` were not computed and count as zero.
#[derive(Clone, Debug, PartialEq)]
pub struct DecayProfile {
    t: f64,
    n_qubits: usize,
    q1: Vec<f64>,
    q2: Vec<f64>,
    q1_rate: Vec<f64>,
    r_max: usize,
}

impl DecayProfile {
    /// Evaluates the profile, truncating at `rel_tol` of the cache's config.
    pub fn compute(bath: &BathModel, geom: &RegisterGeometry, t: f64, cache: &KernelCache) -> Result<Self> {
        Self::compute_with(bath, geom, t, cache, Truncation::Relative(cache.config().rel_tol))
    }

    pub fn compute_with(
        bath: &BathModel,
        geom: &RegisterGeometry,
        t: f64,
        cache: &KernelCache,
        truncation: Truncation,
    ) -> Result<Self> {
        if !(t.is_finite() && t >= 0.0) {
            return domain(format!("t must be finite and non-negative, got {t}"));
        }
        let n = geom.n_qubits();
        let mut q2 = vec![0.0; n];
        let mut q1 = vec![0.0; n];
        let mut q1_rate = vec![0.0; n];
        q2[0] = cache.kernel(bath, geom, 0, t, Kernel::Decay)?;
        let mut r_max = 0;
        let mut small = 0;
        for r in 1..n {
            if q2[0] == 0.0 {
                break;
            }
            q2[r] = cache.kernel(bath, geom, r, t, Kernel::Decay)?;
            r_max = r;
            if let Truncation::Relative(tol) = truncation {
                if q2[r].abs() < tol * q2[0] {
                    small += 1;
                    if small == 3 {
                        break;
                    }
                } else {
                    small = 0;
                }
            }
        }
        for r in 0..=r_max {
            q1[r] = cache.kernel(bath, geom, r, t, Kernel::Phase)?;
            q1_rate[r] = cache.secular_rate(bath, geom, r)?;
        }
        Ok(Self { t, n_qubits: n, q1, q2, q1_rate, r_max })
    }

    /// A profile from given kernel values, with no secular part recorded.
    pub fn from_values(t: f64, q1: Vec<f64>, q2: Vec<f64>) -> Result<Self> {
        if q1.len() != q2.len() {
            return Err(Error::Dimension { expected: q2.len(), got: q1.len() });
        }
        if q2.is_empty() {
            return domain("profile needs at least one entry");
        }
        let n = q2.len();
        Ok(Self { t, n_qubits: n, q1, q2, q1_rate: vec![0.0; n], r_max: n - 1 })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn r_max(&self) -> usize {
        self.r_max
    }

    pub fn q1(&self) -> &[f64] {
        &self.q1
    }

    pub fn q2(&self) -> &[f64] {
        &self.q2
    }

    /// `int J_r / w dw` for each `r`.
    pub fn q1_secular_rate(&self) -> &[f64] {
        &self.q1_rate
    }

    pub fn kernel(&self, kernel: Kernel) -> &[f64] {
        match kernel {
            Kernel::Phase => &self.q1,
            Kernel::Decay => &self.q2,
        }
    }

    /// `Q_1^r(t) + t * rate_r`: the phase kernel without its secular part.
    pub fn q1_oscillatory(&self) -> Vec<f64> {
        self.q1.iter().zip(&self.q1_rate).map(|(q, s)| q + self.t * s).collect()
    }

    /// The dense `N x N` matrix `Q^b_m(t)`.
    pub fn matrix(&self, kernel: Kernel) -> Vec<Vec<f64>> {
        let q = self.kernel(kernel);
        let n = self.n_qubits;
        (0..n).map(|i| (0..n).map(|j| 2.0 * q[i.abs_diff(j)]).collect()).collect()
    }
}

pub fn decay_profile(bath: &BathModel, geom: &RegisterGeometry, t: f64, cache: &KernelCache) -> Result<DecayProfile> {
    DecayProfile::compute(bath, geom, t, cache)
}

/// `<x| T |y>` for the symmetric Toeplitz matrix with first row `2 q[r]`,
/// using entries up to `r_max`. With `diagonal = false` the `r = 0` band is
/// left out.
pub(crate) fn toeplitz_bilinear(q: &[f64], r_max: usize, x: &[f64], y: &[f64], diagonal: bool) -> f64 {
    let n = x.len();
    let mut acc = NeumaierSum::new();
    if diagonal {
        let mut d = NeumaierSum::new();
        for i in 0..n {
            d.add(x[i] * y[i]);
        }
        acc.add(2.0 * q[0] * d.value());
    }
    for r in 1..=r_max.min(n.saturating_sub(1)) {
        if q[r] == 0.0 {
            continue;
        }
        let mut band = NeumaierSum::new();
        for i in 0..n - r {
            band.add(x[i] * y[i + r] + x[i + r] * y[i]);
        }
        acc.add(2.0 * q[r] * band.value());
    }
    acc.value()
}

fn check_dims(profile: &DecayProfile, x: &[f64], y: &[f64]) -> Result<()> {
    for v in [x, y] {
        if v.len() != profile.n_qubits {
            return Err(Error::Dimension { expected: profile.n_qubits, got: v.len() });
        }
    }
    Ok(())
}

/// `<x| Q^b_m(t) |y>` in `O(N r_max)`.
pub fn toeplitz_quadratic(profile: &DecayProfile, kernel: Kernel, x: &[f64], y: &[f64]) -> Result<f64> {
    check_dims(profile, x, y)?;
    Ok(toeplitz_bilinear(profile.kernel(kernel), profile.r_max, x, y, true))
}

/// `e(t, N) = 2 sum_{r>=1} (1 - r/N) Q_2^r / Q_2^0`.
pub fn e_factor(profile: &DecayProfile) -> Result<f64> {
    let q0 = positive_q20(profile)?;
    let n = profile.n_qubits as f64;
    let mut s = NeumaierSum::new();
    for r in 1..=profile.r_max {
        s.add((1.0 - r as f64 / n) * profile.q2[r]);
    }
    Ok(2.0 * s.value() / q0)
}

/// `e~(t, N) = 2 sum_{r>=1} |Q_2^r| / Q_2^0`.
pub fn e_tilde_factor(profile: &DecayProfile) -> Result<f64> {
    let q0 = positive_q20(profile)?;
    let mut s = NeumaierSum::new();
    for r in 1..=profile.r_max {
        s.add(profile.q2[r].abs());
    }
    Ok(2.0 * s.value() / q0)
}

fn positive_q20(profile: &DecayProfile) -> Result<f64> {
    let q0 = profile.q2[0];
    if q0 > 0.0 {
        Ok(q0)
    } else {
        domain(format!("e-factors need Q_2^0 > 0 (t = {})", profile.t))
    }
}

//! Influence functional of piecewise-constant double paths.
//!
//! A path is split by switch times `0 = tau_0 <= tau_1 <= ... <= tau_{p+1} = t`
//! into `p + 1` segments. On segment `s` the register sits at blip `xi_s` and
//! sojourn `chi_s`, with `|xi_n| + |chi_n| = 1` for every qubit. Writing
//! `K(j, k) = Q(tau_{j+1} - tau_k) + Q(tau_j - tau_{k+1}) - Q(tau_{j+1} - tau_{k+1}) - Q(tau_j - tau_k)`,
//!
//! ```text
//! Lambda^b = sum_s <xi_s| Q_2(tau_{s+1} - tau_s) |xi_s> + sum_{j>k} <xi_j| K_2(j, k) |xi_k>
//! X^b      = sum_s <xi_s| Q_1(tau_{s+1} - tau_s) |chi_s> + sum_{j>k} <xi_j| K_1(j, k) |chi_k>
//! ```
//!
//! The part of `Q_1` linear in time drops out of `K_1`, so the cross terms use
//! the oscillatory part only.

use std::collections::HashMap;
use std::f64::consts::PI;

use crate::bath::{BathKind, BathModel};
use crate::decay::{q_fermionic_bath, toeplitz_bilinear, DecayProfile, Kernel, KernelCache};
use crate::error::{check_finite_positive, domain, Error, Result};
use crate::geometry::RegisterGeometry;
use crate::numerics::NeumaierSum;
use crate::quadrature::QuadratureConfig;
use crate::register::BasisPair;

#[derive(Clone, Debug, PartialEq)]
pub struct PiecewisePath {
    t: f64,
    switch_times: Vec<f64>,
    xi: Vec<Vec<i8>>,
    chi: Vec<Vec<i8>>,
}

impl PiecewisePath {
    /// `switch_times` holds the `p` interior times; `xi` and `chi` hold one
    /// vector per segment.
    pub fn new(t: f64, switch_times: Vec<f64>, xi: Vec<Vec<i8>>, chi: Vec<Vec<i8>>) -> Result<Self> {
        if !(t.is_finite() && t >= 0.0) {
            return domain(format!("t must be finite and non-negative, got {t}"));
        }
        if switch_times.iter().any(|s| !(0.0..=t).contains(s)) || switch_times.windows(2).any(|w| w[1] < w[0]) {
            return domain("switch times must be sorted and lie in [0, t]");
        }
        let segments = switch_times.len() + 1;
        for v in [&xi, &chi] {
            if v.len() != segments {
                return Err(Error::Dimension { expected: segments, got: v.len() });
            }
        }
        let n = xi[0].len();
        if n == 0 {
            return domain("paths need at least one qubit");
        }
        for (x, c) in xi.iter().zip(&chi) {
            if x.len() != n || c.len() != n {
                return Err(Error::Dimension { expected: n, got: x.len().min(c.len()) });
            }
            if x.iter().zip(c).any(|(a, b)| a.abs() + b.abs() != 1) {
                return domain("each qubit needs |xi| + |chi| = 1 on every segment");
            }
        }
        Ok(Self { t, switch_times, xi, chi })
    }

    /// From forward and backward spin histories `zeta_up`, `zeta_down` in
    /// `{-1, +1}^N`, one vector per segment.
    pub fn from_spins(t: f64, switch_times: Vec<f64>, up: Vec<Vec<i8>>, down: Vec<Vec<i8>>) -> Result<Self> {
        if up.len() != down.len() {
            return Err(Error::Dimension { expected: up.len(), got: down.len() });
        }
        let mut xi = Vec::with_capacity(up.len());
        let mut chi = Vec::with_capacity(up.len());
        for (u, d) in up.iter().zip(&down) {
            if u.len() != d.len() {
                return Err(Error::Dimension { expected: u.len(), got: d.len() });
            }
            if u.iter().chain(d).any(|x| *x != 1 && *x != -1) {
                return domain("spin entries must be +1 or -1");
            }
            xi.push(u.iter().zip(d).map(|(a, b)| (a - b) / 2).collect());
            chi.push(u.iter().zip(d).map(|(a, b)| (a + b) / 2).collect());
        }
        Self::new(t, switch_times, xi, chi)
    }

    /// The constant path of a static element `<l| rho(t) |m>`.
    pub fn static_pair(pair: &BasisPair, t: f64) -> Result<Self> {
        Self::new(t, vec![], vec![pair.xi()], vec![pair.chi()])
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn n_qubits(&self) -> usize {
        self.xi[0].len()
    }

    pub fn segments(&self) -> usize {
        self.xi.len()
    }

    pub fn switch_times(&self) -> &[f64] {
        &self.switch_times
    }

    pub fn xi(&self) -> &[Vec<i8>] {
        &self.xi
    }

    pub fn chi(&self) -> &[Vec<i8>] {
        &self.chi
    }

    /// `tau_0 = 0, tau_1, ..., tau_{p+1} = t`.
    pub fn boundaries(&self) -> Vec<f64> {
        let mut b = Vec::with_capacity(self.switch_times.len() + 2);
        b.push(0.0);
        b.extend_from_slice(&self.switch_times);
        b.push(self.t);
        b
    }
}

/// `Lambda` and `X` of an influence functional `Z = exp(-i X) exp(-Lambda)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Influence {
    pub lambda: f64,
    pub x: f64,
}

/// Kernel rows indexed by time difference.
trait KernelRows {
    /// `<x| Q_m(tau) |y>`, optionally without the diagonal, and for `Q_1`
    /// optionally without the secular part.
    fn bilinear(&self, tau: f64, kernel: Kernel, oscillatory: bool, diagonal: bool, x: &[f64], y: &[f64]) -> f64;
}

struct PhononRows {
    profiles: HashMap<u64, DecayProfile>,
}

impl PhononRows {
    fn build(bath: &BathModel, geom: &RegisterGeometry, taus: &[f64], cache: &KernelCache) -> Result<Self> {
        let mut profiles = HashMap::new();
        for &tau in taus {
            let tau = tau.abs();
            if let std::collections::hash_map::Entry::Vacant(e) = profiles.entry(tau.to_bits()) {
                e.insert(DecayProfile::compute(bath, geom, tau, cache)?);
            }
        }
        Ok(Self { profiles })
    }
}

impl KernelRows for PhononRows {
    fn bilinear(&self, tau: f64, kernel: Kernel, oscillatory: bool, diagonal: bool, x: &[f64], y: &[f64]) -> f64 {
        let p = &self.profiles[&tau.abs().to_bits()];
        let sign = if tau < 0.0 && kernel == Kernel::Phase { -1.0 } else { 1.0 };
        let v = if oscillatory && kernel == Kernel::Phase {
            toeplitz_bilinear(&p.q1_oscillatory(), p.r_max(), x, y, diagonal)
        } else {
            toeplitz_bilinear(p.kernel(kernel), p.r_max(), x, y, diagonal)
        };
        sign * v
    }
}

/// The gate baths: `Q^f_m = 8 q^f_m * identity`.
struct GateRows {
    q1: HashMap<u64, f64>,
    q2: HashMap<u64, f64>,
    secular_rate: f64,
}

impl GateRows {
    fn build(bath: &BathModel, taus: &[f64], cfg: &QuadratureConfig) -> Result<Self> {
        let BathKind::OhmicFermionic { eta, omega_c_f } = bath.kind() else {
            return Err(Error::Unsupported("gate influence needs the ohmic gate bath".into()));
        };
        let mut q1 = HashMap::new();
        let mut q2 = HashMap::new();
        for &tau in taus {
            let tau = tau.abs();
            if let std::collections::hash_map::Entry::Vacant(e) = q1.entry(tau.to_bits()) {
                e.insert(q_fermionic_bath(bath, tau, Kernel::Phase, cfg)?);
                q2.insert(tau.to_bits(), q_fermionic_bath(bath, tau, Kernel::Decay, cfg)?);
            }
        }
        Ok(Self { q1, q2, secular_rate: eta * omega_c_f })
    }
}

impl KernelRows for GateRows {
    fn bilinear(&self, tau: f64, kernel: Kernel, oscillatory: bool, diagonal: bool, x: &[f64], y: &[f64]) -> f64 {
        if !diagonal {
            return 0.0;
        }
        let key = tau.abs().to_bits();
        let q = match kernel {
            Kernel::Decay => self.q2[&key],
            Kernel::Phase => {
                let v = self.q1[&key] + if oscillatory { tau.abs() * self.secular_rate } else { 0.0 };
                if tau < 0.0 {
                    -v
                } else {
                    v
                }
            }
        };
        let dot: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
        8.0 * q * dot
    }
}

fn as_f64(v: &[i8]) -> Vec<f64> {
    v.iter().map(|x| f64::from(*x)).collect()
}

/// All time differences the influence sums need.
fn needed_taus(tau: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for a in tau {
        for b in tau {
            if a >= b {
                out.push(a - b);
            }
        }
    }
    out
}

fn influence_sum(rows: &dyn KernelRows, tau: &[f64], xi: &[Vec<f64>], chi: &[Vec<f64>]) -> Influence {
    let mut lambda = NeumaierSum::new();
    let mut x = NeumaierSum::new();
    let segs = xi.len();
    for s in 0..segs {
        let d = tau[s + 1] - tau[s];
        lambda.add(rows.bilinear(d, Kernel::Decay, false, true, &xi[s], &xi[s]));
        x.add(rows.bilinear(d, Kernel::Phase, false, true, &xi[s], &chi[s]));
    }
    for j in 0..segs {
        for k in 0..j {
            let four = [
                (tau[j + 1] - tau[k], 1.0),
                (tau[j] - tau[k + 1], 1.0),
                (tau[j + 1] - tau[k + 1], -1.0),
                (tau[j] - tau[k], -1.0),
            ];
            for (d, sign) in four {
                lambda.add(sign * rows.bilinear(d, Kernel::Decay, false, true, &xi[j], &xi[k]));
                x.add(sign * rows.bilinear(d, Kernel::Phase, true, true, &xi[j], &chi[k]));
            }
        }
    }
    Influence { lambda: lambda.value(), x: x.value() }
}

fn path_vectors(path: &PiecewisePath) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    (path.xi.iter().map(|v| as_f64(v)).collect(), path.chi.iter().map(|v| as_f64(v)).collect())
}

/// `Lambda^b` and `X^b` of the shared phonon bath along `path`.
pub fn influence_functional(
    path: &PiecewisePath,
    bath: &BathModel,
    geom: &RegisterGeometry,
    cache: &KernelCache,
) -> Result<Influence> {
    if path.n_qubits() != geom.n_qubits() {
        return Err(Error::Dimension { expected: geom.n_qubits(), got: path.n_qubits() });
    }
    let tau = path.boundaries();
    let rows = PhononRows::build(bath, geom, &needed_taus(&tau), cache)?;
    let (xi, chi) = path_vectors(path);
    Ok(influence_sum(&rows, &tau, &xi, &chi))
}

/// `Lambda^f` and `X^f` of the independent gate baths along `path`.
pub fn influence_functional_gates(path: &PiecewisePath, bath: &BathModel, cfg: &QuadratureConfig) -> Result<Influence> {
    let tau = path.boundaries();
    let rows = GateRows::build(bath, &needed_taus(&tau), cfg)?;
    let (xi, chi) = path_vectors(path);
    Ok(influence_sum(&rows, &tau, &xi, &chi))
}

/// A path restricted to a subset of qubits; other components are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct PathPart {
    pub xi: Vec<Vec<i8>>,
    pub chi: Vec<Vec<i8>>,
}

/// Decomposition of a path into qubits that stay put (trivial) and the rest.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitPath {
    pub trivial: PathPart,
    pub dynamical: PathPart,
    /// `<xi_tr| Q_2(t) |xi_tr>`.
    pub lambda_tr: f64,
    /// `<xi_tr| Q_1(t) |chi_tr>`.
    pub x_tr: f64,
    /// The influence sums applied to the dynamical part alone.
    pub lambda_dy: f64,
    pub x_dy: f64,
    /// Cross terms between the two parts.
    pub x_cross: f64,
    pub lambda_cross: f64,
}

/// Splits `path` into the qubits in `trivial` (which must hold constant
/// values over the whole path) and the rest, with
/// `Lambda = lambda_tr + lambda_dy + lambda_cross` and likewise for `X`. For the gate baths the cross terms
/// vanish identically because their kernels are diagonal.
pub fn split_path(
    path: &PiecewisePath,
    trivial: &[usize],
    bath: &BathModel,
    geom: &RegisterGeometry,
    cache: &KernelCache,
) -> Result<SplitPath> {
    let n = path.n_qubits();
    if n != geom.n_qubits() {
        return Err(Error::Dimension { expected: geom.n_qubits(), got: n });
    }
    let mut in_tr = vec![false; n];
    for &q in trivial {
        if q >= n {
            return domain(format!("qubit index {q} out of range for N = {n}"));
        }
        if path.xi.iter().any(|v| v[q] != path.xi[0][q]) || path.chi.iter().any(|v| v[q] != path.chi[0][q]) {
            return Err(Error::Precondition(format!("qubit {q} changes along the path and cannot be trivial")));
        }
        in_tr[q] = true;
    }
    let mask = |v: &[i8], keep: bool| -> Vec<i8> {
        v.iter().zip(&in_tr).map(|(x, t)| if *t == keep { *x } else { 0 }).collect()
    };
    let trivial_part = PathPart {
        xi: path.xi.iter().map(|v| mask(v, true)).collect(),
        chi: path.chi.iter().map(|v| mask(v, true)).collect(),
    };
    let dynamical = PathPart {
        xi: path.xi.iter().map(|v| mask(v, false)).collect(),
        chi: path.chi.iter().map(|v| mask(v, false)).collect(),
    };

    let tau = path.boundaries();
    let t = path.t;
    let mut taus = needed_taus(&tau);
    taus.extend(tau.iter().map(|s| t - s));
    let rows = PhononRows::build(bath, geom, &taus, cache)?;

    let xi_tr = as_f64(&trivial_part.xi[0]);
    let chi_tr = as_f64(&trivial_part.chi[0]);
    let lambda_tr = rows.bilinear(t, Kernel::Decay, false, true, &xi_tr, &xi_tr);
    let x_tr = rows.bilinear(t, Kernel::Phase, false, true, &xi_tr, &chi_tr);

    let xi_dy: Vec<Vec<f64>> = dynamical.xi.iter().map(|v| as_f64(v)).collect();
    let chi_dy: Vec<Vec<f64>> = dynamical.chi.iter().map(|v| as_f64(v)).collect();
    let dy = influence_sum(&rows, &tau, &xi_dy, &chi_dy);

    let mut x_cross = NeumaierSum::new();
    let mut lambda_cross = NeumaierSum::new();
    for j in 0..path.segments() {
        let (a, b) = (tau[j], tau[j + 1]);
        for (d, sign) in [(b, 1.0), (a, -1.0)] {
            x_cross.add(sign * rows.bilinear(d, Kernel::Phase, false, false, &xi_dy[j], &chi_tr));
            lambda_cross.add(sign * rows.bilinear(d, Kernel::Decay, false, false, &xi_dy[j], &xi_tr));
        }
        for (d, sign) in [(t - a, 1.0), (t - b, -1.0)] {
            x_cross.add(sign * rows.bilinear(d, Kernel::Phase, false, false, &xi_tr, &chi_dy[j]));
            lambda_cross.add(sign * rows.bilinear(d, Kernel::Decay, false, false, &xi_tr, &xi_dy[j]));
        }
    }
    Ok(SplitPath {
        trivial: trivial_part,
        dynamical,
        lambda_tr,
        x_tr,
        lambda_dy: dy.lambda,
        x_dy: dy.x,
        x_cross: x_cross.value(),
        lambda_cross: lambda_cross.value(),
    })
}

/// Durations of the elementary gates for tunnelling `delta` and bias
/// `epsilon` (both rad/s).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GateDurations {
    /// `delta T = pi / 2`.
    pub not: f64,
    /// `epsilon T = 3 pi / 4`.
    pub phase_3pi_4: f64,
    /// `epsilon T = 7 pi / 8`.
    pub phase_7pi_8: f64,
    /// `T sqrt(delta^2 + epsilon^2) = pi / 2`; a Hadamard when `delta = epsilon`.
    pub hadamard: f64,
}

pub fn gate_durations(delta: f64, epsilon: f64) -> Result<GateDurations> {
    check_finite_positive("delta", delta)?;
    check_finite_positive("epsilon", epsilon)?;
    Ok(GateDurations {
        not: PI / (2.0 * delta),
        phase_3pi_4: 3.0 * PI / (4.0 * epsilon),
        phase_7pi_8: 7.0 * PI / (8.0 * epsilon),
        hadamard: PI / (2.0 * delta.hypot(epsilon)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decay::Truncation;
    use crate::register::{static_element, Bias};

    fn toy(n: usize) -> (BathModel, RegisterGeometry) {
        (BathModel::piezo(1.0, 1.0, 0.0).unwrap(), RegisterGeometry::new(n, 0.5, 4.0, 1.0).unwrap())
    }

    #[test]
    fn validation() {
        assert!(PiecewisePath::new(1.0, vec![0.5], vec![vec![1]], vec![vec![0]]).is_err());
        assert!(PiecewisePath::new(1.0, vec![], vec![vec![1]], vec![vec![1]]).is_err());
        assert!(PiecewisePath::new(1.0, vec![2.0], vec![vec![1], vec![1]], vec![vec![0], vec![0]]).is_err());
        assert!(PiecewisePath::new(1.0, vec![0.7, 0.2], vec![vec![1]; 3], vec![vec![0]; 3]).is_err());
        let p = PiecewisePath::from_spins(1.0, vec![0.5], vec![vec![1, 1], vec![-1, 1]], vec![vec![-1, 1], vec![-1, -1]])
            .unwrap();
        assert_eq!(p.xi(), &[vec![1, 0], vec![0, 1]]);
        assert_eq!(p.chi(), &[vec![0, 1], vec![-1, 0]]);
    }

    #[test]
    fn static_path_is_bit_identical_to_static_element() {
        let (b, g) = toy(4);
        let cache = KernelCache::default();
        let pair = BasisPair::new(vec![1, -1, 1, 1], vec![-1, -1, 1, -1]).unwrap();
        let t = 2.5;
        let profile = DecayProfile::compute(&b, &g, t, &cache).unwrap();
        let st = static_element(&pair, &profile, None, &Bias::None).unwrap();
        let inf = influence_functional(&PiecewisePath::static_pair(&pair, t).unwrap(), &b, &g, &cache).unwrap();
        assert_eq!(st.lambda_b.to_bits(), inf.lambda.to_bits());
        assert_eq!(st.x_b.to_bits(), inf.x.to_bits());
    }

    #[test]
    fn diagonal_path_has_no_influence() {
        let (b, g) = toy(2);
        let path = PiecewisePath::new(3.0, vec![1.0, 2.0], vec![vec![0, 0]; 3], vec![vec![1, -1], vec![-1, -1], vec![1, 1]])
            .unwrap();
        let inf = influence_functional(&path, &b, &g, &KernelCache::default()).unwrap();
        assert_eq!((inf.lambda, inf.x), (0.0, 0.0));
    }

    #[test]
    fn single_flip_single_qubit() {
        // xi = +1 then -1 on a single qubit: Lambda = 8 Q(t/2) - 2 Q(t)
        let (b, g) = toy(1);
        let cache = KernelCache::default();
        let t = 2.0;
        let path = PiecewisePath::new(t, vec![t / 2.0], vec![vec![1], vec![-1]], vec![vec![0], vec![0]]).unwrap();
        let inf = influence_functional(&path, &b, &g, &cache).unwrap();
        let q = |s: f64| cache.kernel(&b, &g, 0, s, Kernel::Decay).unwrap();
        let want = 8.0 * q(t / 2.0) - 2.0 * q(t);
        assert!((inf.lambda - want).abs() < 1e-14 * want, "{} vs {want}", inf.lambda);
    }

    #[test]
    fn secular_part_does_not_enter_cross_terms() {
        // Using the full Q_1 in the difference kernels must give the same X.
        struct Full<'a>(&'a PhononRows);
        impl KernelRows for Full<'_> {
            fn bilinear(&self, tau: f64, kernel: Kernel, _: bool, diagonal: bool, x: &[f64], y: &[f64]) -> f64 {
                self.0.bilinear(tau, kernel, false, diagonal, x, y)
            }
        }
        let (b, g) = toy(3);
        let cache = KernelCache::default();
        let path = PiecewisePath::new(
            4.0,
            vec![0.7, 2.5],
            vec![vec![1, 0, -1], vec![0, 1, -1], vec![-1, 0, 1]],
            vec![vec![0, 1, 0], vec![-1, 0, 0], vec![0, -1, 0]],
        )
        .unwrap();
        let tau = path.boundaries();
        let rows = PhononRows::build(&b, &g, &needed_taus(&tau), &cache).unwrap();
        let (xi, chi) = path_vectors(&path);
        let osc = influence_sum(&rows, &tau, &xi, &chi);
        let full = influence_sum(&Full(&rows), &tau, &xi, &chi);
        assert!((osc.x - full.x).abs() < 1e-9 * full.x.abs().max(1e-3), "{} vs {}", osc.x, full.x);
        // and a different secular slope leaves X unchanged
        let mut shifted = PhononRows { profiles: HashMap::new() };
        for (k, p) in &rows.profiles {
            let extra = 0.37;
            let q1: Vec<f64> = p.q1().iter().map(|q| q - extra * p.t()).collect();
            let q = DecayProfile::from_values(p.t(), q1, p.q2().to_vec()).unwrap();
            shifted.profiles.insert(*k, q);
        }
        let moved = influence_sum(&Full(&shifted), &tau, &xi, &chi);
        let diag: f64 = (0..3)
            .map(|s| {
                let d = tau[s + 1] - tau[s];
                -0.37 * d * toeplitz_bilinear(&[1.0, 1.0, 1.0], 2, &xi[s], &chi[s], true)
            })
            .sum();
        assert!((moved.x - full.x - diag).abs() < 1e-12, "{} {} {}", moved.x, full.x, diag);
    }

    #[test]
    fn splitting_is_additive() {
        let (b, g) = toy(3);
        let cache = KernelCache::default();
        let path = PiecewisePath::new(
            3.0,
            vec![1.0, 2.2],
            vec![vec![1, 1, 0], vec![1, 0, -1], vec![1, -1, 0]],
            vec![vec![0, 0, 1], vec![0, 1, 0], vec![0, 0, -1]],
        )
        .unwrap();
        let full = influence_functional(&path, &b, &g, &cache).unwrap();
        let s = split_path(&path, &[0], &b, &g, &cache).unwrap();
        assert!((s.lambda_tr + s.lambda_dy + s.lambda_cross - full.lambda).abs() < 1e-12 * full.lambda.abs());
        assert!((s.x_tr + s.x_dy + s.x_cross - full.x).abs() < 1e-10 * full.x.abs().max(1e-6));
        for seg in 0..3 {
            for q in 0..3 {
                assert_eq!(s.trivial.xi[seg][q] + s.dynamical.xi[seg][q], path.xi()[seg][q]);
                assert_eq!(s.trivial.chi[seg][q] + s.dynamical.chi[seg][q], path.chi()[seg][q]);
            }
        }
    }

    #[test]
    fn split_extremes() {
        let (b, g) = toy(2);
        let cache = KernelCache::default();
        let stat = PiecewisePath::new(2.0, vec![1.0], vec![vec![1, -1]; 2], vec![vec![0, 0]; 2]).unwrap();
        let full = influence_functional(&stat, &b, &g, &cache).unwrap();
        let all = split_path(&stat, &[0, 1], &b, &g, &cache).unwrap();
        assert!(all.dynamical.xi.iter().flatten().all(|x| *x == 0));
        assert_eq!(all.x_cross, 0.0);
        assert!((all.lambda_tr - full.lambda).abs() < 1e-13 * full.lambda);
        let none = split_path(&stat, &[], &b, &g, &cache).unwrap();
        assert_eq!((none.lambda_tr, none.x_tr, none.x_cross), (0.0, 0.0, 0.0));
        let moving = PiecewisePath::new(2.0, vec![1.0], vec![vec![1, -1], vec![0, -1]], vec![vec![0, 0], vec![1, 0]]).unwrap();
        assert!(matches!(split_path(&moving, &[0], &b, &g, &cache), Err(Error::Precondition(_))));
    }

    #[test]
    fn gate_bath_reduces_to_static_form() {
        let f = BathModel::ohmic_fermionic(1e-3, 1e3, 0.0).unwrap();
        let cfg = QuadratureConfig::default();
        let pair = BasisPair::new(vec![1, -1, 1], vec![-1, -1, -1]).unwrap();
        let t = 0.01;
        let inf = influence_functional_gates(&PiecewisePath::static_pair(&pair, t).unwrap(), &f, &cfg).unwrap();
        let q2 = q_fermionic_bath(&f, t, Kernel::Decay, &cfg).unwrap();
        assert!((inf.lambda - 2.0 * pair.difference_norm_sq() * q2).abs() < 1e-15);
        assert_eq!(inf.x, 0.0);
    }

    #[test]
    fn truncated_profiles_still_reproduce_full_sums() {
        let (b, g) = toy(5);
        let cache = KernelCache::default();
        let pair = BasisPair::most_off_diagonal(5).unwrap();
        let full = DecayProfile::compute_with(&b, &g, 1.0, &cache, Truncation::Full).unwrap();
        let st = static_element(&pair, &full, None, &Bias::None).unwrap();
        let inf = influence_functional(&PiecewisePath::static_pair(&pair, 1.0).unwrap(), &b, &g, &cache).unwrap();
        assert!((st.lambda_b - inf.lambda).abs() < 1e-12 * st.lambda_b);
    }

    #[test]
    fn gate_duration_examples() {
        let d = gate_durations(PI / 2.0, PI).unwrap();
        assert!((d.not - 1.0).abs() < 1e-15);
        assert!((d.phase_3pi_4 - 0.75).abs() < 1e-15);
        assert!((d.phase_7pi_8 - 0.875).abs() < 1e-15);
        let h = gate_durations(1.0, 1.0).unwrap();
        assert!((h.hadamard - PI / (2.0 * 2f64.sqrt())).abs() < 1e-15);
        assert!(gate_durations(0.0, 1.0).is_err());
        assert!(gate_durations(1.0, -1.0).is_err());
    }
}

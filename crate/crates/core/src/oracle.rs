//! Brute-force sums over a discrete phonon lattice.
//!
//! Nothing here goes through the continuum integrals of [`crate::spectral`]
//! or the quadrature engine: each quantity is a plain sum over wave vectors
//! `k = 2 pi (n_1/L_1, n_2/L_2, n_3/L_3)`, `0 < |k| < k_cut`, with the coupling
//! normalised so that `|g(k)|^2 = P(w_k) / c_1`, `c_1 = V / (2 pi^2 c_L^3)`.
//! As the box grows the sums converge to the continuum kernels.
//!
//! Modes are grouped into shells of equal `|k|`. Angular factors are summed
//! per shell once; radial factors (which carry all time and temperature
//! dependence) are applied per shell afterwards.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::bath::BathModel;
use crate::decay::Kernel;
use crate::error::{check_finite_positive, domain, Error, Result};
use crate::geometry::RegisterGeometry;
use crate::numerics::special::{one_minus_cos, sin_minus_x};
use crate::numerics::NeumaierSum;
use crate::paths::{Influence, PiecewisePath};

/// Default cap on the number of enumerated modes.
pub const DEFAULT_MODE_CAP: u64 = 30_000_000;

#[derive(Clone, Debug, PartialEq)]
enum Modes {
    Grid { spacing: f64, multipliers: [u32; 3], cutoff: f64 },
    Explicit { volume: f64, modes: Vec<[f64; 3]> },
}

/// A finite set of phonon wave vectors in a periodic box.
#[derive(Clone, Debug, PartialEq)]
pub struct KLattice {
    modes: Modes,
    mode_cap: u64,
}

impl KLattice {
    /// A box of side `m_i * 2 pi / spacing` along axis `i`, keeping modes with
    /// `|k| < cutoff` (the inverse lattice constant).
    pub fn new(spacing: f64, multipliers: [u32; 3], cutoff: f64) -> Result<Self> {
        check_finite_positive("spacing", spacing)?;
        check_finite_positive("cutoff", cutoff)?;
        if multipliers.contains(&0) {
            return domain("box multipliers must be positive");
        }
        Ok(Self { modes: Modes::Grid { spacing, multipliers, cutoff }, mode_cap: DEFAULT_MODE_CAP })
    }

    /// A cubic box with mode spacing `spacing`.
    pub fn cubic(spacing: f64, cutoff: f64) -> Result<Self> {
        Self::new(spacing, [1, 1, 1], cutoff)
    }

    /// An explicit mode list in a box of volume `volume`.
    pub fn from_modes(volume: f64, modes: Vec<[f64; 3]>) -> Result<Self> {
        check_finite_positive("volume", volume)?;
        if modes.iter().any(|k| !k.iter().all(|x| x.is_finite()) || k.iter().all(|x| *x == 0.0)) {
            return domain("explicit modes must be finite and non-zero");
        }
        Ok(Self { modes: Modes::Explicit { volume, modes }, mode_cap: DEFAULT_MODE_CAP })
    }

    pub fn with_mode_cap(mut self, cap: u64) -> Self {
        self.mode_cap = cap;
        self
    }

    pub fn volume(&self) -> f64 {
        match &self.modes {
            Modes::Grid { spacing, multipliers, .. } => {
                multipliers.iter().map(|m| f64::from(*m) * 2.0 * PI / spacing).product()
            }
            Modes::Explicit { volume, .. } => *volume,
        }
    }

    /// Number of modes, without enumerating their angular factors.
    pub fn mode_count(&self) -> u64 {
        match &self.modes {
            Modes::Explicit { modes, .. } => modes.len() as u64,
            Modes::Grid { .. } => {
                let g = GridIter::new(self);
                let mut count = 0u64;
                for n1 in -g.bound[0]..=g.bound[0] {
                    for n2 in -g.bound[1]..=g.bound[1] {
                        let base = g.key2(n1, n2);
                        if base as f64 >= g.limit {
                            continue;
                        }
                        count += g.n3_range(base).map_or(0, |(lo, hi)| (hi - lo + 1) as u64);
                        if base == 0 && g.n3_range(0).is_some() {
                            count -= 1;
                        }
                    }
                }
                count
            }
        }
    }

    fn check_cap(&self) -> Result<u64> {
        let n = self.mode_count();
        if n > self.mode_cap {
            return Err(Error::ResourceCap { what: "lattice modes", requested: n, cap: self.mode_cap });
        }
        if n == 0 {
            return domain("lattice has no modes");
        }
        Ok(n)
    }

    /// Per-shell sums of `f(k, out)`, where `f` writes `nf` angular factors.
    fn shells(&self, nf: usize, mut f: impl FnMut(&[f64; 3], &mut [f64])) -> Result<Shells> {
        self.check_cap()?;
        let mut buf = vec![0.0; nf];
        match &self.modes {
            Modes::Explicit { modes, .. } => {
                let mut order: Vec<usize> = (0..modes.len()).collect();
                let norm = |k: &[f64; 3]| k.iter().map(|x| x * x).sum::<f64>().sqrt();
                order.sort_by(|a, b| norm(&modes[*a]).total_cmp(&norm(&modes[*b])).then(a.cmp(b)));
                let mut k_abs = Vec::new();
                let mut sums = Vec::new();
                for i in order {
                    f(&modes[i], &mut buf);
                    k_abs.push(norm(&modes[i]));
                    sums.extend_from_slice(&buf);
                }
                Ok(Shells { k_abs, sums, nf })
            }
            Modes::Grid { spacing, multipliers, .. } => {
                let g = GridIter::new(self);
                let max_key = g.limit.ceil() as usize;
                let mut acc = vec![NeumaierSum::new(); (max_key + 1) * nf];
                let mut used = vec![false; max_key + 1];
                let step = [
                    spacing / f64::from(multipliers[0]),
                    spacing / f64::from(multipliers[1]),
                    spacing / f64::from(multipliers[2]),
                ];
                for n1 in -g.bound[0]..=g.bound[0] {
                    for n2 in -g.bound[1]..=g.bound[1] {
                        let base = g.key2(n1, n2);
                        let Some((lo, hi)) = g.n3_range(base) else { continue };
                        for n3 in lo..=hi {
                            let key = base + g.w2[2] * (n3 * n3) as u64;
                            if key == 0 {
                                continue;
                            }
                            let k = [step[0] * n1 as f64, step[1] * n2 as f64, step[2] * n3 as f64];
                            f(&k, &mut buf);
                            let key = key as usize;
                            used[key] = true;
                            for (a, v) in acc[key * nf..(key + 1) * nf].iter_mut().zip(&buf) {
                                a.add(*v);
                            }
                        }
                    }
                }
                let unit = spacing / f64::from(g.lcm);
                let mut k_abs = Vec::new();
                let mut sums = Vec::new();
                for key in (1..=max_key).filter(|k| used[*k]) {
                    k_abs.push(unit * (key as f64).sqrt());
                    sums.extend(acc[key * nf..(key + 1) * nf].iter().map(NeumaierSum::value));
                }
                Ok(Shells { k_abs, sums, nf })
            }
        }
    }
}

/// Integer bookkeeping for the grid: with `M = lcm(m_i)` and `w_i = M / m_i`,
/// `|k|^2 = (spacing / M)^2 * sum (w_i n_i)^2` is an integer multiple.
struct GridIter {
    w2: [u64; 3],
    bound: [i64; 3],
    limit: f64,
    lcm: u32,
}

impl GridIter {
    fn new(lattice: &KLattice) -> Self {
        let Modes::Grid { spacing, multipliers, cutoff } = &lattice.modes else { unreachable!() };
        let gcd = |mut a: u32, mut b: u32| {
            while b != 0 {
                (a, b) = (b, a % b);
            }
            a
        };
        let lcm = multipliers.iter().fold(1u32, |l, m| l / gcd(l, *m) * m);
        let w = multipliers.map(|m| u64::from(lcm / m));
        let limit = (cutoff * f64::from(lcm) / spacing).powi(2);
        let bound = multipliers.map(|m| (cutoff * f64::from(m) / spacing).floor() as i64);
        Self { w2: w.map(|x| x * x), bound, limit, lcm }
    }

    fn key2(&self, n1: i64, n2: i64) -> u64 {
        self.w2[0] * (n1 * n1) as u64 + self.w2[1] * (n2 * n2) as u64
    }

    /// Symmetric `n_3` range with `base + w_3^2 n_3^2 < limit`.
    fn n3_range(&self, base: u64) -> Option<(i64, i64)> {
        if base as f64 >= self.limit {
            return None;
        }
        let mut hi = self.bound[2];
        while hi >= 0 && (base + self.w2[2] * (hi * hi) as u64) as f64 >= self.limit {
            hi -= 1;
        }
        (hi >= 0).then_some((-hi, hi))
    }
}

struct Shells {
    k_abs: Vec<f64>,
    sums: Vec<f64>,
    nf: usize,
}

impl Shells {
    fn row(&self, i: usize) -> &[f64] {
        &self.sums[i * self.nf..(i + 1) * self.nf]
    }
}

/// Directions of the inter-qubit axis `d` and the in-dot axis `q0` relative
/// to the box. They must be orthogonal unit vectors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Orientation {
    pub d_hat: [f64; 3],
    pub q_hat: [f64; 3],
}

impl Orientation {
    /// Axis-aligned choice: `d` along `x`, `q0` along `z`. Reflections of the
    /// box then make some odd sums cancel exactly, mode by mode.
    pub fn axis_aligned() -> Self {
        Self { d_hat: [1.0, 0.0, 0.0], q_hat: [0.0, 0.0, 1.0] }
    }

    /// A generic orientation with no lattice symmetry relating `k.q0` to `-k.q0`
    /// at fixed `k.d`.
    pub fn oblique() -> Self {
        let (a, b) = (0.4_f64, 0.3_f64);
        Self {
            d_hat: [a.cos(), a.sin(), 0.0],
            q_hat: [-b.sin() * a.sin(), b.sin() * a.cos(), b.cos()],
        }
    }
}

impl Default for Orientation {
    fn default() -> Self {
        Self::oblique()
    }
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Radial weights shared by all sums: `|g|^2 = P(w)/c_1`.
struct Radial<'a> {
    bath: &'a BathModel,
    c_l: f64,
    inv_c1: f64,
}

impl<'a> Radial<'a> {
    fn new(bath: &'a BathModel, geom: &RegisterGeometry, volume: f64) -> Result<Self> {
        if !bath.is_phonon() {
            return Err(Error::Unsupported("the lattice oracle only covers the phonon baths".into()));
        }
        let c_l = geom.sound_speed();
        Ok(Self { bath, c_l, inv_c1: 2.0 * PI * PI * c_l.powi(3) / volume })
    }

    /// `(w, |g|^2)` on a shell of radius `k`.
    fn at(&self, k: f64) -> (f64, f64) {
        let w = self.c_l * k;
        (w, self.bath.prefactor(w) * self.inv_c1)
    }
}

/// `int_0^t ds int_0^s ds' exp(-i w (s - s'))`, in closed form.
pub fn q_k(omega: f64, t: f64) -> Complex64 {
    let w2 = omega * omega;
    Complex64::new(one_minus_cos(omega * t) / w2, sin_minus_x(omega * t) / w2)
}

/// The same double integral over `s` in segment `j` and `s'` in segment `m`
/// of the boundaries `tau`, for `j >= m`.
pub fn m_k(omega: f64, tau: &[f64], j: usize, m: usize) -> Complex64 {
    if j == m {
        return q_k(omega, tau[j + 1] - tau[j]);
    }
    q_k(omega, tau[j + 1] - tau[m]) + q_k(omega, tau[j] - tau[m + 1])
        - q_k(omega, tau[j + 1] - tau[m + 1])
        - q_k(omega, tau[j] - tau[m])
}

/// Angular sums for `Q^r`, `r = 0..=r_max`: `sum sin^2(k.q0) cos(r k.d)`.
pub struct QTable {
    shells: Shells,
    volume: f64,
    r_max: usize,
}

impl QTable {
    pub fn build(lattice: &KLattice, geom: &RegisterGeometry, orientation: Orientation, r_max: usize) -> Result<Self> {
        let (q0, d) = (geom.q0(), geom.d());
        let shells = lattice.shells(r_max + 1, |k, out| {
            let s = (q0 * dot(k, &orientation.q_hat)).sin();
            let x = d * dot(k, &orientation.d_hat);
            for (r, o) in out.iter_mut().enumerate() {
                *o = s * s * (r as f64 * x).cos();
            }
        })?;
        Ok(Self { shells, volume: lattice.volume(), r_max })
    }

    /// The lattice value of `Q_1^r(t)` or `Q_2^r(t)`.
    pub fn q(&self, bath: &BathModel, geom: &RegisterGeometry, r: usize, t: f64, kernel: Kernel) -> Result<f64> {
        if r > self.r_max {
            return domain(format!("table holds r <= {}, asked for {r}", self.r_max));
        }
        if !t.is_finite() {
            return domain("t must be finite");
        }
        let radial = Radial::new(bath, geom, self.volume)?;
        let beta = bath.beta();
        let mut acc = NeumaierSum::new();
        for (i, &k) in self.shells.k_abs.iter().enumerate() {
            let (w, g2) = radial.at(k);
            let qk = q_k(w, t);
            let f = match kernel {
                Kernel::Decay => qk.re * beta.coth(w),
                Kernel::Phase => qk.im,
            };
            acc.add(2.0 * g2 * f * self.shells.row(i)[r]);
        }
        Ok(acc.value())
    }
}

/// Lattice value of `Q_m^r(t)`.
pub fn oracle_q(
    lattice: &KLattice,
    bath: &BathModel,
    geom: &RegisterGeometry,
    r: usize,
    t: f64,
    kernel: Kernel,
) -> Result<f64> {
    QTable::build(lattice, geom, Orientation::default(), r)?.q(bath, geom, r, t, kernel)
}

/// `Psi_n(t)`, `Psi_n(0)` and `Phi_n` on one lattice. All three vanish in the
/// continuum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PsiPhi {
    pub psi_t: f64,
    pub psi_0: f64,
    pub phi: f64,
    pub t: f64,
}

impl PsiPhi {
    /// `Psi_n(t) - Psi_n(0) - Phi_n t`, the combination entering `X`.
    pub fn residual(&self) -> f64 {
        self.psi_t - self.psi_0 - self.phi * self.t
    }
}

/// Angular sums for `Psi_n`, `Phi_n`. With `c = n - 1/2 - N/2` and the
/// Dirichlet kernel `D_N(x) = sin(N x / 2) / sin(x / 2)`, the bracketed
/// differences reduce to `-2 cos(w t - c x) D_N(x)` and `-2 sin(c x) D_N(x)`.
pub struct PsiPhiTable {
    shells: Shells,
    volume: f64,
}

impl PsiPhiTable {
    /// `n` counts qubits from 1.
    pub fn build(lattice: &KLattice, geom: &RegisterGeometry, orientation: Orientation, n: usize) -> Result<Self> {
        let big_n = geom.n_qubits();
        if n == 0 || n > big_n {
            return domain(format!("qubit index must be in 1..={big_n}, got {n}"));
        }
        let (q0, d) = (geom.q0(), geom.d());
        let c = n as f64 - 0.5 - 0.5 * big_n as f64;
        let half = 0.5 * (big_n as f64 - 1.0);
        let shells = lattice.shells(2, |k, out| {
            let kq = q0 * dot(k, &orientation.q_hat);
            let x = d * dot(k, &orientation.d_hat);
            let dirichlet: f64 = (0..big_n).map(|j| ((j as f64 - half) * x).cos()).sum();
            let sc = kq.sin() * kq.cos() * dirichlet;
            out[0] = (c * x).cos() * sc;
            out[1] = (c * x).sin() * sc;
        })?;
        Ok(Self { shells, volume: lattice.volume() })
    }

    pub fn eval(&self, bath: &BathModel, geom: &RegisterGeometry, t: f64) -> Result<PsiPhi> {
        let radial = Radial::new(bath, geom, self.volume)?;
        let (mut psi_t, mut psi_0, mut phi) = (NeumaierSum::new(), NeumaierSum::new(), NeumaierSum::new());
        for (i, &k) in self.shells.k_abs.iter().enumerate() {
            let (w, g2) = radial.at(k);
            let row = self.shells.row(i);
            let (s, c) = (w * t).sin_cos();
            psi_t.add(-4.0 * g2 / (w * w) * (c * row[0] + s * row[1]));
            psi_0.add(-4.0 * g2 / (w * w) * row[0]);
            phi.add(-4.0 * g2 / w * row[1]);
        }
        Ok(PsiPhi { psi_t: psi_t.value(), psi_0: psi_0.value(), phi: phi.value(), t })
    }
}

/// Lattice values of `Psi_n(t)`, `Psi_n(0)`, `Phi_n`.
pub fn oracle_psi_phi(lattice: &KLattice, bath: &BathModel, geom: &RegisterGeometry, n: usize, t: f64) -> Result<PsiPhi> {
    PsiPhiTable::build(lattice, geom, Orientation::default(), n)?.eval(bath, geom, t)
}

/// `Lambda^b` and `X^b` of `path` as a mode sum of per-segment double
/// integrals:
///
/// ```text
/// Lambda = sum_k coth * sum_{j>=m} Re[ D_j(xi)^* D_m(xi)  M_k^{jm} ] * 4 |g|^2 sin^2(k.q0)
/// X      = sum_k        sum_{j>=m} Im[ D_j(xi)^* D_m(chi) M_k^{jm} ] * 4 |g|^2 sin^2(k.q0)
/// ```
///
/// with `D_j(v) = sum_n v_n exp(-i k.d n)`. The part of the sojourn coupling
/// that is independent of `chi` is left out; it enters only through
/// `Psi_n` and `Phi_n`.
pub fn oracle_influence(
    lattice: &KLattice,
    bath: &BathModel,
    geom: &RegisterGeometry,
    path: &PiecewisePath,
) -> Result<Influence> {
    if path.n_qubits() != geom.n_qubits() {
        return Err(Error::Dimension { expected: geom.n_qubits(), got: path.n_qubits() });
    }
    let segs = path.segments();
    let pairs: Vec<(usize, usize)> = (0..segs).flat_map(|j| (0..=j).map(move |m| (j, m))).collect();
    let (q0, d) = (geom.q0(), geom.d());
    let orientation = Orientation::default();
    let xi: Vec<Vec<f64>> = path.xi().iter().map(|v| v.iter().map(|x| f64::from(*x)).collect()).collect();
    let chi: Vec<Vec<f64>> = path.chi().iter().map(|v| v.iter().map(|x| f64::from(*x)).collect()).collect();
    let phased = |v: &[f64], ph: &[Complex64]| -> Complex64 { v.iter().zip(ph).map(|(a, p)| *a * p).sum() };

    // four reals per pair: Re/Im of the xi-xi and xi-chi angular products
    let shells = lattice.shells(4 * pairs.len(), |k, out| {
        let s = (q0 * dot(k, &orientation.q_hat)).sin();
        let x = d * dot(k, &orientation.d_hat);
        let ph: Vec<Complex64> = (0..xi[0].len()).map(|n| Complex64::from_polar(1.0, -x * n as f64)).collect();
        let dxi: Vec<Complex64> = xi.iter().map(|v| phased(v, &ph)).collect();
        let dchi: Vec<Complex64> = chi.iter().map(|v| phased(v, &ph)).collect();
        for (p, &(j, m)) in pairs.iter().enumerate() {
            let a = dxi[j].conj() * dxi[m] * (s * s);
            let b = dxi[j].conj() * dchi[m] * (s * s);
            out[4 * p..4 * p + 4].copy_from_slice(&[a.re, a.im, b.re, b.im]);
        }
    })?;

    let radial = Radial::new(bath, geom, lattice.volume())?;
    let beta = bath.beta();
    let tau = path.boundaries();
    let (mut lambda, mut x) = (NeumaierSum::new(), NeumaierSum::new());
    for (i, &k) in shells.k_abs.iter().enumerate() {
        let (w, g2) = radial.at(k);
        let row = shells.row(i);
        let coth = beta.coth(w);
        for (p, &(j, m)) in pairs.iter().enumerate() {
            let mk = m_k(w, &tau, j, m);
            let a = Complex64::new(row[4 * p], row[4 * p + 1]);
            let b = Complex64::new(row[4 * p + 2], row[4 * p + 3]);
            lambda.add(4.0 * g2 * coth * (a * mk).re);
            x.add(4.0 * g2 * (b * mk).im);
        }
    }
    Ok(Influence { lambda: lambda.value(), x: x.value() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::influence_functional;
    use crate::decay::KernelCache;

    fn toy(n: usize) -> (BathModel, RegisterGeometry) {
        (BathModel::piezo(1.0, 1.0, 0.0).unwrap(), RegisterGeometry::new(n, 0.5, 4.0, 1.0).unwrap())
    }

    /// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
    fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
        (1..=n)
            .map(|i| {
                let mut x = (PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
                let mut dp = 0.0;
                for _ in 0..100 {
                    let (mut p0, mut p1) = (1.0, x);
                    for k in 2..=n {
                        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                        p0 = p1;
                        p1 = p2;
                    }
                    dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                    let dx = p1 / dp;
                    x -= dx;
                    if dx.abs() < 1e-16 {
                        break;
                    }
                }
                (x, 2.0 / ((1.0 - x * x) * dp * dp))
            })
            .collect()
    }

    fn integrate(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, rule: &[(f64, f64)], panels: usize) -> Complex64 {
        let h = (b - a) / panels as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for p in 0..panels {
            let (lo, hi) = (a + p as f64 * h, a + (p + 1) as f64 * h);
            for (x, w) in rule {
                acc += f(0.5 * (lo + hi) + 0.5 * (hi - lo) * x) * (0.5 * (hi - lo) * w);
            }
        }
        acc
    }

    #[test]
    fn q_k_matches_triangle_quadrature() {
        let rule = gauss_legendre(24);
        for (w, t) in [(0.3, 1.0), (2.0, 1.7), (15.0, 0.9), (1e-3, 2.0)] {
            let want = integrate(
                &|s| integrate(&|u| Complex64::from_polar(1.0, -w * (s - u)), 0.0, s, &rule, 8),
                0.0,
                t,
                &rule,
                8,
            );
            let got = q_k(w, t);
            assert!((got - want).norm() < 1e-10 * want.norm().max(1e-3), "w={w} t={t}: {got} vs {want}");
        }
    }

    #[test]
    fn m_k_matches_rectangle_quadrature() {
        let rule = gauss_legendre(24);
        let tau = [0.0, 0.4, 1.3, 2.0];
        for w in [0.5, 3.0, 12.0] {
            for (j, m) in [(1, 0), (2, 0), (2, 1)] {
                let want = integrate(
                    &|s| integrate(&|u| Complex64::from_polar(1.0, -w * (s - u)), tau[m], tau[m + 1], &rule, 6),
                    tau[j],
                    tau[j + 1],
                    &rule,
                    6,
                );
                let got = m_k(w, &tau, j, m);
                assert!((got - want).norm() < 1e-10, "w={w} ({j},{m}): {got} vs {want}");
            }
        }
    }

    #[test]
    fn grid_counts_and_shells() {
        let lat = KLattice::cubic(1.0, 1.5).unwrap();
        // |n|^2 in {1, 2}: 6 + 12 modes
        assert_eq!(lat.mode_count(), 18);
        let shells = lat.shells(1, |_, out| out[0] = 1.0).unwrap();
        assert_eq!(shells.k_abs.len(), 2);
        assert_eq!(shells.sums, vec![6.0, 12.0]);
        assert!((shells.k_abs[1] - 2f64.sqrt()).abs() < 1e-15);
        let long = KLattice::new(1.0, [2, 1, 1], 1.1).unwrap();
        // n1/2 in {+-1/2, +-1}, plus the four unit modes along y, z
        assert_eq!(long.mode_count(), 8);
        assert!((long.volume() - 2.0 * (2.0 * PI).powi(3)).abs() < 1e-9);
    }

    #[test]
    fn mode_cap_is_enforced() {
        let lat = KLattice::cubic(0.5, 10.0).unwrap().with_mode_cap(1000);
        let (b, g) = toy(1);
        match oracle_q(&lat, &b, &g, 0, 1.0, Kernel::Decay) {
            Err(Error::ResourceCap { requested, cap, .. }) => assert!(requested > cap),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn zero_time_and_single_mode() {
        let (b, g) = toy(2);
        let lat = KLattice::cubic(0.5, 6.0).unwrap();
        assert_eq!(oracle_q(&lat, &b, &g, 0, 0.0, Kernel::Decay).unwrap(), 0.0);

        let k = [0.3, -0.2, 0.7];
        let volume = 50.0;
        let one = KLattice::from_modes(volume, vec![k]).unwrap();
        let w: f64 = dot(&k, &k).sqrt();
        let c1 = volume / (2.0 * PI * PI);
        let g2 = w.recip() * (-w).exp() / c1;
        let o = Orientation::oblique();
        let s = (0.5 * dot(&k, &o.q_hat)).sin();
        let t = 1.3;
        let hand = 2.0 * g2 * s * s * (1.0 - (w * t).cos()) / (w * w);
        let got = oracle_q(&one, &b, &g, 0, t, Kernel::Decay).unwrap();
        assert!((got - hand).abs() < 1e-14 * hand, "{got} vs {hand}");
        let x = 4.0 * dot(&k, &o.d_hat);
        let hand1 = 2.0 * g2 * s * s * x.cos() * ((w * t).sin() - w * t) / (w * w);
        let got1 = oracle_q(&one, &b, &g, 1, t, Kernel::Phase).unwrap();
        assert!((got1 - hand1).abs() < 1e-13 * hand1.abs(), "{got1} vs {hand1}");

        // two qubits, n = 1: c = -1/2, D_2(x) = 2 cos(x/2)
        let kq = 0.5 * dot(&k, &o.q_hat);
        let d2 = 2.0 * (0.5 * x).cos();
        let sc = kq.sin() * kq.cos() * d2;
        let pp = oracle_psi_phi(&one, &b, &g, 1, t).unwrap();
        let want_psi = -4.0 * g2 / (w * w) * (w * t + 0.5 * x).cos() * sc;
        let want_phi = -4.0 * g2 / w * (-0.5 * x).sin() * sc;
        assert!((pp.psi_t - want_psi).abs() < 1e-14 * want_psi.abs());
        assert!((pp.phi - want_phi).abs() < 1e-14 * want_phi.abs());
    }

    #[test]
    fn psi_phi_bracket_matches_dirichlet_form() {
        // sin(A - x(n-1/2)) - sin(A - x(n-1/2-N)) == -2 cos(A - c x) sin(N x/2)
        let (n, big_n) = (2.0_f64, 3.0_f64);
        for (a, x) in [(0.3_f64, 1.1_f64), (-2.0, 0.4), (5.0, -2.5)] {
            let lhs: f64 = (a - x * (n - 0.5)).sin() - (a - x * (n - 0.5 - big_n)).sin();
            let c = n - 0.5 - big_n / 2.0;
            let rhs = -2.0 * (a - c * x).cos() * (big_n * x / 2.0).sin();
            assert!((lhs - rhs).abs() < 1e-14);
            let lhs: f64 = (x * (n - 0.5)).cos() - (x * (n - 0.5 - big_n)).cos();
            let rhs = -2.0 * (c * x).sin() * (big_n * x / 2.0).sin();
            assert!((lhs - rhs).abs() < 1e-14);
        }
    }

    #[test]
    fn static_path_matches_q_table() {
        // p = 0, N = 1: Lambda = 2 Q_2^0, X = 0 term by term
        let (b, g) = toy(1);
        let lat = KLattice::cubic(0.5, 8.0).unwrap();
        let t = 1.0;
        let path = PiecewisePath::new(t, vec![], vec![vec![1]], vec![vec![0]]).unwrap();
        let inf = oracle_influence(&lat, &b, &g, &path).unwrap();
        let q2 = oracle_q(&lat, &b, &g, 0, t, Kernel::Decay).unwrap();
        assert!((inf.lambda - 2.0 * q2).abs() < 1e-13 * q2);
        assert_eq!(inf.x, 0.0);
        let diag = PiecewisePath::new(t, vec![0.5], vec![vec![0]; 2], vec![vec![1], vec![-1]]).unwrap();
        assert_eq!(oracle_influence(&lat, &b, &g, &diag).unwrap(), Influence { lambda: 0.0, x: 0.0 });
    }

    #[test]
    fn lattice_converges_to_quadrature() {
        let (b, g) = toy(3);
        let cache = KernelCache::default();
        let lat = KLattice::cubic(0.3, 20.0).unwrap();
        let table = QTable::build(&lat, &g, Orientation::oblique(), 1).unwrap();
        for (r, tol) in [(0usize, 1e-3), (1, 1e-2)] {
            let want = cache.kernel(&b, &g, r, 1.0, Kernel::Decay).unwrap();
            let got = table.q(&b, &g, r, 1.0, Kernel::Decay).unwrap();
            assert!((got - want).abs() < tol * want, "r={r}: {got} vs {want}");
        }
        let want = cache.kernel(&b, &g, 0, 1.0, Kernel::Phase).unwrap();
        let got = table.q(&b, &g, 0, 1.0, Kernel::Phase).unwrap();
        assert!((got - want).abs() < 1e-4 * want.abs(), "{got} vs {want}");
    }

    #[test]
    fn volume_independence() {
        let (b, g) = toy(2);
        let base = KLattice::cubic(0.3, 20.0).unwrap();
        let doubled = KLattice::new(0.3, [2, 1, 1], 20.0).unwrap();
        assert!((doubled.volume() / base.volume() - 2.0).abs() < 1e-12);
        for r in 0..2 {
            let a = oracle_q(&base, &b, &g, r, 1.0, Kernel::Decay).unwrap();
            let c = oracle_q(&doubled, &b, &g, r, 1.0, Kernel::Decay).unwrap();
            assert!((a - c).abs() < 5e-3 * a.abs(), "r={r}: {a} vs {c}");
        }
    }

    #[test]
    fn p1_path_matches_influence_functional() {
        let (b, g) = toy(1);
        let cache = KernelCache::default();
        let lat = KLattice::cubic(0.3, 20.0).unwrap();
        let flip = PiecewisePath::new(1.0, vec![0.5], vec![vec![1], vec![-1]], vec![vec![0], vec![0]]).unwrap();
        let land = PiecewisePath::new(1.0, vec![0.4], vec![vec![0], vec![1]], vec![vec![1], vec![0]]).unwrap();
        for path in [flip, land] {
            let want = influence_functional(&path, &b, &g, &cache).unwrap();
            let got = oracle_influence(&lat, &b, &g, &path).unwrap();
            assert!((got.lambda - want.lambda).abs() < 1e-3 * want.lambda, "{got:?} vs {want:?}");
            assert!((got.x - want.x).abs() < 1e-3 * want.x.abs().max(1e-12), "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn fermionic_bath_rejected() {
        let (_, g) = toy(1);
        let f = BathModel::ohmic_fermionic(0.1, 1.0, 0.0).unwrap();
        let lat = KLattice::cubic(1.0, 3.0).unwrap();
        assert!(matches!(oracle_q(&lat, &f, &g, 0, 1.0, Kernel::Decay), Err(Error::Unsupported(_))));
    }
}

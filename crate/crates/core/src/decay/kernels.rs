//! The time kernels `Q_1^r(t)`, `Q_2^r(t)` and their gate-bath counterparts.
//!
//! Each kernel is `int_0^inf P(w) S_r(w) K(w t) dw` with `P` the bath
//! prefactor, `S_r` the sinc structure factor and `K` one of
//! `(1 - cos) coth` or `sin - x`. Products of sines and cosines are expanded
//! into single harmonics so the oscillatory tail can go through the Filon
//! route; the full product is kept for the direct region near the origin.

use crate::bath::{BathKind, BathModel};
use crate::error::{domain, Result};
use crate::geometry::RegisterGeometry;
use crate::numerics::{one_minus_cos, sin_minus_x};
use crate::quadrature::{integrate_fourier, integrate_oscillatory, FourierTerm, OscillationHints, QuadratureConfig, Trig};
use crate::spectral::{hypot_excess, structure_factor};

/// Which kernel to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kernel {
    /// `Q_1`: the phase kernel, `int J/w^2 (sin wt - wt)`.
    Phase,
    /// `Q_2`: the decay kernel, `int J/w^2 (1 - cos wt) coth(beta w / 2)`.
    Decay,
}

impl Kernel {
    pub fn index(self) -> u8 {
        match self {
            Kernel::Phase => 1,
            Kernel::Decay => 2,
        }
    }

    pub fn from_index(i: u8) -> Option<Self> {
        match i {
            1 => Some(Kernel::Phase),
            2 => Some(Kernel::Decay),
            _ => None,
        }
    }
}

/// What is being integrated: one of the two kernels, or the rate of the
/// secular part of `Q_1`, `int J_r / w dw`, so that
/// `Q_1^r(t) = (oscillatory part) - t * rate`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Target {
    Kernel(Kernel),
    SecularRate,
}

struct Setup {
    hints: OscillationHints,
    terms: Vec<FourierTerm>,
}

fn t_check(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        domain(format!("t must be finite and non-negative, got {t}"))
    }
}

fn check_phonon(bath: &BathModel, geom: &RegisterGeometry, r: usize) -> Result<()> {
    if !bath.is_phonon() {
        return Err(crate::Error::Unsupported("phonon kernels need a piezo or deformation bath".into()));
    }
    if r >= geom.n_qubits() {
        return domain(format!("r = {r} must be below N = {}", geom.n_qubits()));
    }
    Ok(())
}

/// For `r >= 1` the structure factor is written as
/// `[A(w) sin(a w) - B(w) cos(a w)] / w` with `delta = b - a`,
/// `A = (delta + a (1 - cos delta w)) / (a b)` and `B = sin(delta w) / b`.
/// The two sincs nearly cancel at large `r`; this form never subtracts them.
///
/// Envelope layout for `r >= 1`: 0 = `C P A / w`, 1 = `C P B / w`,
/// 2 = `P A`, 3 = `P B`. For `r = 0`: 0 = `C P`, 1 = `C P / (b w)`,
/// 2 = `P w`, 3 = `P / b`. `C` is the thermal weight for the decay kernel and
/// one otherwise.
fn phonon_setup(bath: &BathModel, a: f64, b: f64, t: f64, target: Target) -> Result<Setup> {
    use Trig::{Cos, Sin};
    let f = FourierTerm::new;
    let terms = match (target, a == 0.0) {
        (Target::Kernel(Kernel::Decay), true) => vec![
            f(1.0, 0.0, Cos, 0),
            f(-1.0, t, Cos, 0),
            f(-1.0, b, Sin, 1),
            f(0.5, b + t, Sin, 1),
            f(0.5, b - t, Sin, 1),
        ],
        (Target::Kernel(Kernel::Decay), false) => vec![
            f(1.0, a, Sin, 0),
            f(-1.0, a, Cos, 1),
            f(-0.5, a + t, Sin, 0),
            f(-0.5, a - t, Sin, 0),
            f(0.5, a + t, Cos, 1),
            f(0.5, a - t, Cos, 1),
        ],
        (Target::Kernel(Kernel::Phase), true) => vec![
            f(1.0, t, Sin, 0),
            f(-t, 0.0, Cos, 2),
            f(-0.5, b - t, Cos, 1),
            f(0.5, b + t, Cos, 1),
            f(t, b, Sin, 3),
        ],
        (Target::Kernel(Kernel::Phase), false) => vec![
            f(0.5, a - t, Cos, 0),
            f(-0.5, a + t, Cos, 0),
            f(-0.5, a + t, Sin, 1),
            f(0.5, a - t, Sin, 1),
            f(-t, a, Sin, 2),
            f(t, a, Cos, 3),
        ],
        (Target::SecularRate, true) => vec![f(1.0, 0.0, Cos, 2), f(-1.0, b, Sin, 3)],
        (Target::SecularRate, false) => vec![f(1.0, a, Sin, 2), f(-1.0, a, Cos, 3)],
    };
    let mut freqs = vec![a, b];
    if matches!(target, Target::Kernel(_)) {
        freqs.push(t);
    }
    let hints = OscillationHints::new(freqs, bath.cutoff())?;
    Ok(Setup { hints, terms })
}

/// Phonon kernel through the Fourier-split route.
pub(crate) fn phonon_target(
    bath: &BathModel,
    geom: &RegisterGeometry,
    r: usize,
    t: f64,
    target: Target,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    check_phonon(bath, geom, r)?;
    t_check(t)?;
    if t == 0.0 && matches!(target, Target::Kernel(_)) {
        return Ok(0.0);
    }
    let tau = geom.transit_time();
    let alpha = geom.alpha();
    let rf = r as f64;
    let a = rf * tau;
    let delta = hypot_excess(rf, alpha) * tau;
    let b = if r == 0 { alpha * tau } else { a + delta };
    let setup = phonon_setup(bath, a, b, t, target)?;
    let beta = bath.beta();
    let thermal = matches!(target, Target::Kernel(Kernel::Decay));

    let full = |w: f64| {
        let ps = bath.prefactor(w) * structure_factor(geom, rf, w);
        match target {
            Target::Kernel(Kernel::Decay) => ps * one_minus_cos(w * t) * beta.coth(w),
            Target::Kernel(Kernel::Phase) => ps * sin_minus_x(w * t),
            Target::SecularRate => ps * w,
        }
    };
    let envelopes = |w: f64, out: &mut [f64]| {
        let p = bath.prefactor(w);
        let c = if thermal { beta.coth(w) } else { 1.0 };
        if a == 0.0 {
            out[0] = c * p;
            out[1] = c * p / (b * w);
            out[2] = p * w;
            out[3] = p / b;
        } else {
            let big_a = (delta + a * one_minus_cos(delta * w)) / (a * b);
            let big_b = (delta * w).sin() / b;
            out[0] = c * p * big_a / w;
            out[1] = c * p * big_b / w;
            out[2] = p * big_a;
            out[3] = p * big_b;
        }
    };
    let est = integrate_fourier(full, 4, envelopes, &setup.terms, &setup.hints, cfg)?;
    Ok(est.value)
}

/// Same integral sampled directly on hint-sized panels; slower, used as an
/// independent cross-check of the Fourier-split route.
pub fn phonon_kernel_direct(
    bath: &BathModel,
    geom: &RegisterGeometry,
    r: usize,
    t: f64,
    kernel: Kernel,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    check_phonon(bath, geom, r)?;
    t_check(t)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    let rf = r as f64;
    let tau = geom.transit_time();
    let alpha = geom.alpha();
    let hints = OscillationHints::new(vec![t, rf * tau, (rf * rf + alpha * alpha).sqrt() * tau], bath.cutoff())?;
    let beta = bath.beta();
    let f = |w: f64| {
        let ps = bath.prefactor(w) * structure_factor(geom, rf, w);
        match kernel {
            Kernel::Decay => ps * one_minus_cos(w * t) * beta.coth(w),
            Kernel::Phase => ps * sin_minus_x(w * t),
        }
    };
    Ok(integrate_oscillatory(f, &hints, cfg)?.value)
}

/// `Q_2^r(t)` for a phonon bath.
pub fn q2_r(bath: &BathModel, geom: &RegisterGeometry, r: usize, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
    phonon_target(bath, geom, r, t, Target::Kernel(Kernel::Decay), cfg)
}

/// `Q_1^r(t)` for a phonon bath, secular part included.
pub fn q1_r(bath: &BathModel, geom: &RegisterGeometry, r: usize, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
    phonon_target(bath, geom, r, t, Target::Kernel(Kernel::Phase), cfg)
}

/// `int_0^inf J_r(w) / w dw`, the slope of the secular part of `Q_1^r`.
pub fn q1_secular_rate(bath: &BathModel, geom: &RegisterGeometry, r: usize, cfg: &QuadratureConfig) -> Result<f64> {
    phonon_target(bath, geom, r, 1.0, Target::SecularRate, cfg)
}

/// Gate-bath kernels `q_1^f(t)` / `q_2^f(t)` for the ohmic density
/// `eta w exp(-w / w_c)`.
pub fn q_fermionic(
    eta: f64,
    omega_c_f: f64,
    temperature: f64,
    t: f64,
    kernel: Kernel,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let bath = BathModel::ohmic_fermionic(eta, omega_c_f, temperature)?;
    q_fermionic_bath(&bath, t, kernel, cfg)
}

pub fn q_fermionic_bath(bath: &BathModel, t: f64, kernel: Kernel, cfg: &QuadratureConfig) -> Result<f64> {
    let BathKind::OhmicFermionic { .. } = bath.kind() else {
        return Err(crate::Error::Unsupported("q_fermionic needs the ohmic gate bath".into()));
    };
    t_check(t)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    use Trig::{Cos, Sin};
    let terms = match kernel {
        Kernel::Decay => vec![FourierTerm::new(1.0, 0.0, Cos, 0), FourierTerm::new(-1.0, t, Cos, 0)],
        Kernel::Phase => vec![FourierTerm::new(1.0, t, Sin, 1), FourierTerm::new(-t, 0.0, Cos, 2)],
    };
    let hints = OscillationHints::new(vec![t], bath.cutoff())?;
    let beta = bath.beta();
    let full = |w: f64| match kernel {
        Kernel::Decay => bath.prefactor(w) * one_minus_cos(w * t) * beta.coth(w),
        Kernel::Phase => bath.prefactor(w) * sin_minus_x(w * t),
    };
    let envelopes = |w: f64, out: &mut [f64]| {
        let p = bath.prefactor(w);
        out[0] = p * beta.coth(w);
        out[1] = p;
        out[2] = p * w;
    };
    Ok(integrate_fourier(full, 3, envelopes, &terms, &hints, cfg)?.value)
}

/// Both gate-bath kernels at one time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FermionicKernels {
    pub t: f64,
    pub q1: f64,
    pub q2: f64,
}

impl FermionicKernels {
    pub fn compute(bath: &BathModel, t: f64, cfg: &QuadratureConfig) -> Result<Self> {
        Ok(Self {
            t,
            q1: q_fermionic_bath(bath, t, Kernel::Phase, cfg)?,
            q2: q_fermionic_bath(bath, t, Kernel::Decay, cfg)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn reference(n: usize) -> (BathModel, RegisterGeometry) {
        (BathModel::reference_piezo(0.0).unwrap(), RegisterGeometry::reference(n).unwrap())
    }

    #[test]
    fn fermionic_closed_forms() {
        let q2 = q_fermionic(1.0, 1.0, 0.0, 3.0, Kernel::Decay, &cfg()).unwrap();
        assert!((q2 - 0.5 * 10f64.ln()).abs() < 1e-9);
        let q1 = q_fermionic(1.0, 1.0, 0.0, 1.0, Kernel::Phase, &cfg()).unwrap();
        assert!((q1 - (std::f64::consts::FRAC_PI_4 - 1.0)).abs() < 1e-9);
        // q1 has no temperature dependence
        let q1_hot = q_fermionic(1.0, 1.0, 5.0, 1.0, Kernel::Phase, &cfg()).unwrap();
        assert_eq!(q1, q1_hot);
        assert_eq!(q_fermionic(1.0, 1.0, 0.0, 0.0, Kernel::Decay, &cfg()).unwrap(), 0.0);
    }

    #[test]
    fn zero_time() {
        let (b, g) = reference(4);
        for r in 0..4 {
            assert_eq!(q2_r(&b, &g, r, 0.0, &cfg()).unwrap(), 0.0);
            assert_eq!(q1_r(&b, &g, r, 0.0, &cfg()).unwrap(), 0.0);
        }
    }

    #[test]
    fn fourier_route_agrees_with_direct_route() {
        let (b, g) = reference(4);
        let hot = b.with_temperature(1.0).unwrap();
        let def = BathModel::reference_deformation(0.3).unwrap();
        for bath in [b, hot, def] {
            for r in 0..4 {
                for t in [1e-12, 7e-12, 80e-12, 3e-10] {
                    for k in [Kernel::Decay, Kernel::Phase] {
                        let fs = phonon_target(&bath, &g, r, t, Target::Kernel(k), &cfg()).unwrap();
                        let d = phonon_kernel_direct(&bath, &g, r, t, k, &cfg()).unwrap();
                        let scale = d.abs().max(1e-12);
                        assert!((fs - d).abs() < 1e-7 * scale, "{bath:?} r={r} t={t} {k:?}: {fs} vs {d}");
                    }
                }
            }
        }
    }

    #[test]
    fn large_separations_converge_and_match_direct_route() {
        let (b, g) = reference(1000);
        // the hint-sized panels of the direct route need a larger budget here
        let wide = QuadratureConfig { max_subdivisions: 400_000, ..cfg() };
        for r in [30, 100, 300, 999] {
            let s = q1_secular_rate(&b, &g, r, &cfg()).unwrap();
            let direct = crate::quadrature::integrate_oscillatory(
                |w: f64| b.prefactor(w) * structure_factor(&g, r as f64, w) * w,
                &OscillationHints::new(vec![r as f64 * g.transit_time()], b.cutoff()).unwrap(),
                &wide,
            )
            .unwrap()
            .value;
            assert!((s - direct).abs() < 1e-7 * direct.abs(), "r={r}: {s} vs {direct}");
            let q2 = q2_r(&b, &g, r, 10e-12, &cfg()).unwrap();
            let d2 = phonon_kernel_direct(&b, &g, r, 10e-12, Kernel::Decay, &wide).unwrap();
            assert!((q2 - d2).abs() < 2e-14, "r={r}: {q2} vs {d2}");
        }
    }

    #[test]
    fn secular_rate_is_the_slope_of_q1() {
        // Q1(t) + t S stays bounded, so (Q1(t2) - Q1(t1)) / (t2 - t1) -> -S.
        let (b, g) = reference(3);
        for r in 0..3 {
            let s = q1_secular_rate(&b, &g, r, &cfg()).unwrap();
            let direct = crate::quadrature::integrate_oscillatory(
                |w: f64| b.prefactor(w) * structure_factor(&g, r as f64, w) * w,
                &OscillationHints::new(vec![r as f64 * g.transit_time(), g.transit_time()], b.cutoff()).unwrap(),
                &cfg(),
            )
            .unwrap()
            .value;
            assert!((s - direct).abs() < 1e-8 * direct.abs(), "r={r}: {s} vs {direct}");
            let (t1, t2) = (1e-8, 2e-8);
            let slope = (q1_r(&b, &g, r, t2, &cfg()).unwrap() - q1_r(&b, &g, r, t1, &cfg()).unwrap()) / (t2 - t1);
            assert!((slope + s).abs() < 1e-3 * s.abs(), "r={r}: slope {slope} vs {s}");
        }
    }

    #[test]
    fn small_budgets_fail_rather_than_truncate() {
        let (b, g) = reference(1);
        let want = q2_r(&b, &g, 0, 1e-10, &cfg()).unwrap();
        for budget in [1, 2, 3, 5, 8, 13] {
            let small = QuadratureConfig { max_subdivisions: budget, ..cfg() };
            if let Ok(v) = q2_r(&b, &g, 0, 1e-10, &small) {
                assert!((v / want - 1.0).abs() < 1e-6, "budget {budget}: {v} vs {want}");
            }
        }
    }

    #[test]
    fn temperature_monotone() {
        let (b, g) = reference(1);
        let mut last = 0.0;
        for temp in [0.0, 0.05, 0.1, 1.0, 10.0] {
            let q = q2_r(&b.with_temperature(temp).unwrap(), &g, 0, 10e-12, &cfg()).unwrap();
            assert!(q >= last);
            last = q;
        }
    }

    #[test]
    fn rejects_gate_bath_and_bad_r() {
        let (b, g) = reference(2);
        let f = BathModel::reference_top_gate(0.0).unwrap();
        assert!(q2_r(&f, &g, 0, 1e-12, &cfg()).is_err());
        assert!(q2_r(&b, &g, 2, 1e-12, &cfg()).is_err());
        assert!(q2_r(&b, &g, 0, -1e-12, &cfg()).is_err());
        assert!(q_fermionic_bath(&b, 1e-12, Kernel::Decay, &cfg()).is_err());
    }
}

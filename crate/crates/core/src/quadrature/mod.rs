//! Quadrature for semi-infinite integrals with an exponential cutoff and a
//! few known oscillation frequencies.
//!
//! Two routes are provided. [`integrate_oscillatory`] samples the full
//! integrand with Gauss-Kronrod panels no wider than half the shortest
//! period. [`integrate_fourier`] takes the integrand split into smooth
//! envelopes times `sin`/`cos` and only samples the envelopes past the first
//! period, which keeps the cost flat in the oscillation frequency.

mod engine;
mod filon;
pub(crate) mod gauss_kronrod;

pub use filon::{chebyshev_fourier_moments, FourierTerm, Trig};

use crate::error::QuadratureError;
use crate::numerics::{bessel_j0, sinc};
use std::f64::consts::PI;

/// Tolerances and budgets shared by every integral.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Cap on the total number of panels.
    pub max_subdivisions: usize,
    /// `K`: integrals stop at `K` times the cutoff frequency.
    pub cutoff_decades: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { rel_tol: 1e-9, abs_tol: 1e-14, max_subdivisions: 10_000, cutoff_decades: 40.0 }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<(), QuadratureError> {
        let bad = |m: &str| Err(QuadratureError::InvalidConfig(m.to_string()));
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return bad("rel_tol must be positive");
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return bad("abs_tol must be positive");
        }
        if self.max_subdivisions < 1 {
            return bad("max_subdivisions must be at least 1");
        }
        if !(self.cutoff_decades >= 10.0 && self.cutoff_decades.is_finite()) {
            return bad("cutoff_decades must be at least 10");
        }
        Ok(())
    }
}

/// What the caller knows about the integrand: the oscillation periods
/// present (as multipliers of `w` inside `sin`/`cos`) and the cutoff scale.
#[derive(Clone, Debug, PartialEq)]
pub struct OscillationHints {
    frequencies: Vec<f64>,
    cutoff: f64,
}

impl OscillationHints {
    pub fn new(frequencies: Vec<f64>, cutoff: f64) -> Result<Self, QuadratureError> {
        if frequencies.iter().any(|f| !f.is_finite() || *f < 0.0) {
            return Err(QuadratureError::InvalidConfig("frequencies must be finite and non-negative".into()));
        }
        if !(cutoff > 0.0 && cutoff.is_finite()) {
            return Err(QuadratureError::InvalidConfig("cutoff must be positive".into()));
        }
        Ok(Self { frequencies, cutoff })
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    fn max_frequency(&self) -> f64 {
        self.frequencies.iter().copied().fold(0.0, f64::max)
    }
}

/// A value with its estimated absolute error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
}

fn uniform_edges(a: f64, b: f64, width: f64, cap: usize) -> Vec<f64> {
    let n = ((b - a) / width).ceil().clamp(1.0, cap.max(1) as f64) as usize;
    let mut edges: Vec<f64> = (0..n).map(|i| a + (b - a) * i as f64 / n as f64).collect();
    edges.push(b);
    edges
}

fn checked<F: FnMut(f64) -> f64>(f: &mut F) -> impl FnMut(f64, f64) -> Result<(f64, f64, f64), QuadratureError> + '_ {
    move |a, b| {
        let (v, e, floor) = gauss_kronrod::qk21(f, a, b);
        if v.is_finite() && e.is_finite() {
            Ok((v, e, floor))
        } else {
            Err(QuadratureError::NonFinite { at: 0.5 * (a + b) })
        }
    }
}

/// `int_0^{K w_c} f(w) dw` by Gauss-Kronrod panels tied to the hints, refined
/// by bisection where the error estimate requires it. `f` is never evaluated
/// at `w = 0`.
pub fn integrate_oscillatory<F>(mut f: F, hints: &OscillationHints, cfg: &QuadratureConfig) -> Result<Estimate, QuadratureError>
where
    F: FnMut(f64) -> f64,
{
    cfg.validate()?;
    let w_max = cfg.cutoff_decades * hints.cutoff;
    let nu = hints.max_frequency();
    let mut width = hints.cutoff;
    if nu > 0.0 {
        width = width.min(PI / nu);
    }
    width = width.max(w_max / cfg.max_subdivisions as f64);
    let edges = uniform_edges(0.0, w_max, width, cfg.max_subdivisions);
    engine::adaptive(&edges, checked(&mut f), cfg)
}

/// `int_a^b f(x) dx` on a finite interval by adaptive Gauss-Kronrod, starting
/// from `initial_panels` equal panels.
pub fn integrate_interval<F>(mut f: F, a: f64, b: f64, initial_panels: usize, cfg: &QuadratureConfig) -> Result<Estimate, QuadratureError>
where
    F: FnMut(f64) -> f64,
{
    cfg.validate()?;
    if !(a.is_finite() && b.is_finite() && b >= a) {
        return Err(QuadratureError::InvalidConfig(format!("bad interval [{a}, {b}]")));
    }
    if a == b {
        return Ok(Estimate { value: 0.0, error: 0.0, panels: 0 });
    }
    let n = initial_panels.clamp(1, cfg.max_subdivisions);
    let edges = uniform_edges(a, b, (b - a) / n as f64, n);
    engine::adaptive(&edges, checked(&mut f), cfg)
}

/// `int_0^{K w_c}` of an integrand given both in full and as a sum of
/// envelope-times-trig terms.
///
/// Below `W = 2 pi / nu_max` the full integrand is sampled directly (the
/// envelopes may be singular at the origin while their sum is not). Above
/// `W` each term is integrated by Clenshaw-Curtis-Filon panels that grow
/// geometrically from `W` up to twice the cutoff.
pub fn integrate_fourier<F, E>(
    mut full: F,
    n_envelopes: usize,
    mut envelopes: E,
    terms: &[FourierTerm],
    hints: &OscillationHints,
    cfg: &QuadratureConfig,
) -> Result<Estimate, QuadratureError>
where
    F: FnMut(f64) -> f64,
    E: FnMut(f64, &mut [f64]),
{
    cfg.validate()?;
    if let Some(t) = terms.iter().find(|t| t.envelope >= n_envelopes || !t.frequency.is_finite()) {
        return Err(QuadratureError::InvalidConfig(format!("bad Fourier term {t:?}")));
    }
    let w_max = cfg.cutoff_decades * hints.cutoff;
    let nu = terms.iter().map(|t| t.frequency.abs()).fold(hints.max_frequency(), f64::max);
    let split = if nu > 0.0 { (2.0 * PI / nu).min(w_max) } else { w_max };

    let mut width = hints.cutoff;
    if nu > 0.0 {
        width = width.min(PI / nu);
    }
    width = width.max(w_max / cfg.max_subdivisions as f64);
    let mut edges = uniform_edges(0.0, split, width, cfg.max_subdivisions);
    let mut x = split;
    while x < w_max && edges.len() < cfg.max_subdivisions {
        x = (x + x.min(2.0 * hints.cutoff)).min(w_max);
        edges.push(x);
    }
    // Out of budget: one last panel to the end, left for refinement to judge.
    if x < w_max {
        edges.push(w_max);
    }

    let mut sorted = terms.to_vec();
    sorted.sort_by(|a, b| a.frequency.total_cmp(&b.frequency));

    let rule = |a: f64, b: f64| {
        let (v, e, floor) = if b <= split {
            gauss_kronrod::qk21(&mut full, a, b)
        } else {
            filon::filon_panel(&mut envelopes, n_envelopes, &sorted, a, b)
        };
        if v.is_finite() && e.is_finite() {
            Ok((v, e, floor))
        } else {
            Err(QuadratureError::NonFinite { at: 0.5 * (a + b) })
        }
    };
    engine::adaptive(&edges, rule, cfg)
}

/// `|int_0^pi sin^2(y cos th) J0(z sin th) sin th dth - (sinc z - sinc sqrt(z^2 + 4 y^2))|`.
pub fn angular_bessel_identity_check(y: f64, z: f64) -> Result<f64, QuadratureError> {
    if !(z > 0.0 && z.is_finite() && y.is_finite()) {
        return Err(QuadratureError::InvalidConfig(format!("need z > 0, got y={y}, z={z}")));
    }
    let cfg = QuadratureConfig { rel_tol: 1e-13, abs_tol: 1e-15, ..QuadratureConfig::default() };
    let panels = 4 + (y.abs() + z) as usize;
    let integral = integrate_interval(
        |th: f64| {
            let s = (y * th.cos()).sin();
            s * s * bessel_j0(z * th.sin()) * th.sin()
        },
        0.0,
        PI,
        panels,
        &cfg,
    )?;
    let closed = sinc(z) - sinc((z * z + 4.0 * y * y).sqrt());
    Ok((integral.value - closed).abs())
}

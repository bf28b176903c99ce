//! Distance-resolved spectral functions `J_r(w)` of the shared phonon bath.

use crate::bath::{BathKind, BathModel};
use crate::error::{domain, Error, Result};
use crate::geometry::RegisterGeometry;
use crate::numerics::{one_minus_cos, sinc_difference};

/// `sqrt(r^2 + alpha^2) - r`, computed without cancellation.
#[inline]
pub(crate) fn hypot_excess(r: f64, alpha: f64) -> f64 {
    alpha * alpha / ((r * r + alpha * alpha).sqrt() + r)
}

/// `sinc(x) - sinc(x + d)` for `x > 0`, `d >= 0`, written as
/// `[sin x (d + x (1 - cos d)) - x cos x sin d] / (x (x + d))` so nothing
/// cancels when `d` is small next to `x`.
#[inline]
fn sinc_gap(x: f64, d: f64) -> f64 {
    let y = x + d;
    if y < 0.5 {
        return sinc_difference(x, y);
    }
    let (s, c) = x.sin_cos();
    (s * (d + x * one_minus_cos(d)) - x * c * d.sin()) / (x * y)
}

/// `sinc(w r tau_s) - sinc(w sqrt(r^2 + alpha^2) tau_s)` with `r` real.
/// At `r = 0` this is `1 - sinc(w / w_q)`.
#[inline]
pub fn structure_factor(geom: &RegisterGeometry, r: f64, omega: f64) -> f64 {
    let tau = geom.transit_time();
    let alpha = geom.alpha();
    if r == 0.0 {
        sinc_difference(0.0, omega / geom.omega_q())
    } else {
        sinc_gap(omega * r * tau, omega * hypot_excess(r, alpha) * tau)
    }
}

/// `J_r(w)` for the phonon bath at separation `r` qubits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralFunction {
    bath: BathModel,
    geometry: RegisterGeometry,
    r: usize,
}

impl SpectralFunction {
    pub fn new(bath: BathModel, geometry: RegisterGeometry, r: usize) -> Result<Self> {
        if !bath.is_phonon() {
            return Err(Error::Unsupported(
                "the gate bath has no distance structure; use eval_j_ohmic".into(),
            ));
        }
        if r >= geometry.n_qubits() {
            return domain(format!("r = {r} must be below N = {}", geometry.n_qubits()));
        }
        Ok(Self { bath, geometry, r })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn eval(&self, omega: f64) -> Result<f64> {
        eval_j_real_r(&self.bath, &self.geometry, self.r as f64, omega)
    }
}

pub fn eval_j(s: &SpectralFunction, omega: f64) -> Result<f64> {
    s.eval(omega)
}

/// `J_r(w)` with the separation as a real parameter.
pub fn eval_j_real_r(bath: &BathModel, geom: &RegisterGeometry, r: f64, omega: f64) -> Result<f64> {
    if !bath.is_phonon() {
        return Err(Error::Unsupported("ohmic gate bath has no J_r".into()));
    }
    if !(omega >= 0.0 && omega.is_finite()) {
        return domain(format!("omega must be non-negative, got {omega}"));
    }
    if !(r >= 0.0 && r.is_finite()) {
        return domain(format!("r must be non-negative, got {r}"));
    }
    if omega == 0.0 {
        return Ok(0.0);
    }
    Ok(omega * omega * bath.prefactor(omega) * structure_factor(geom, r, omega))
}

/// Ohmic spectral density `eta w exp(-w / w_c)`.
pub fn eval_j_ohmic(eta: f64, omega_c_f: f64, omega: f64) -> f64 {
    eta * omega * (-omega / omega_c_f).exp()
}

/// `J_r` from a gate bath model, for callers holding a [`BathModel`].
pub fn eval_j_ohmic_bath(bath: &BathModel, omega: f64) -> Result<f64> {
    match bath.kind() {
        BathKind::OhmicFermionic { eta, omega_c_f } => Ok(eval_j_ohmic(eta, omega_c_f, omega)),
        _ => Err(Error::Unsupported("not an ohmic bath".into())),
    }
}

use crate::error::{check_finite_nonneg, check_finite_positive, Result};
use crate::units::{eta_from_gate, fermionic_cutoff_from_ev, InverseTemperature};

/// The coupling model of a bath. Phonon baths are shared by the whole
/// register; the fermionic one describes an independent gate per qubit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BathKind {
    /// Piezoelectric phonons: `c1 |g|^2 = (g / w) exp(-w / w_c)`.
    Piezo { g: f64, omega_c: f64 },
    /// Deformation-potential phonons: `c1 |g|^2 = (w / w_s^2) exp(-w / w_c)`.
    Deformation { omega_s_sq: f64, omega_c: f64 },
    /// Gate electrons, mapped to an ohmic bosonic bath `J = eta w exp(-w / w_c)`.
    OhmicFermionic { eta: f64, omega_c_f: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BathModel {
    kind: BathKind,
    temperature: f64,
}

impl BathModel {
    pub fn new(kind: BathKind, temperature: f64) -> Result<Self> {
        check_finite_nonneg("temperature", temperature)?;
        match kind {
            BathKind::Piezo { g, omega_c } => {
                check_finite_nonneg("g", g)?;
                check_finite_positive("omega_c", omega_c)?;
            }
            BathKind::Deformation { omega_s_sq, omega_c } => {
                check_finite_positive("omega_s^2", omega_s_sq)?;
                check_finite_positive("omega_c", omega_c)?;
            }
            BathKind::OhmicFermionic { eta, omega_c_f } => {
                check_finite_nonneg("eta", eta)?;
                check_finite_positive("omega_c_f", omega_c_f)?;
            }
        }
        Ok(Self { kind, temperature })
    }

    pub fn piezo(g: f64, omega_c: f64, temperature: f64) -> Result<Self> {
        Self::new(BathKind::Piezo { g, omega_c }, temperature)
    }

    pub fn deformation(omega_s_sq: f64, omega_c: f64, temperature: f64) -> Result<Self> {
        Self::new(BathKind::Deformation { omega_s_sq, omega_c }, temperature)
    }

    pub fn ohmic_fermionic(eta: f64, omega_c_f: f64, temperature: f64) -> Result<Self> {
        Self::new(BathKind::OhmicFermionic { eta, omega_c_f }, temperature)
    }

    /// Gate bath from the Fermi energy and scattering potential (both in eV),
    /// with the cutoff set to `E_F / h`.
    pub fn from_gate(fermi_energy_ev: f64, v0_ev: f64, temperature: f64) -> Result<Self> {
        let eta = eta_from_gate(fermi_energy_ev, v0_ev)?;
        Self::ohmic_fermionic(eta, fermionic_cutoff_from_ev(fermi_energy_ev)?, temperature)
    }

    /// GaAs piezoelectric coupling `g = 0.03` with `w_c = 5e10 /s`.
    pub fn reference_piezo(temperature: f64) -> Result<Self> {
        Self::piezo(0.03, 5e10, temperature)
    }

    /// GaAs deformation potential `w_s^2 = 1e25 /s^2` with `w_c = 5e10 /s`.
    pub fn reference_deformation(temperature: f64) -> Result<Self> {
        Self::deformation(1e25, 5e10, temperature)
    }

    /// Metallic top gate: `eta = 9.3e-8`, `w_c = 1.3e15 /s`.
    pub fn reference_top_gate(temperature: f64) -> Result<Self> {
        Self::ohmic_fermionic(9.3e-8, 1.3e15, temperature)
    }

    pub fn with_temperature(self, temperature: f64) -> Result<Self> {
        Self::new(self.kind, temperature)
    }

    pub fn kind(&self) -> BathKind {
        self.kind
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn beta(&self) -> InverseTemperature {
        // validated at construction
        InverseTemperature::from_kelvin(self.temperature).unwrap_or(InverseTemperature::Infinite)
    }

    pub fn cutoff(&self) -> f64 {
        match self.kind {
            BathKind::Piezo { omega_c, .. } | BathKind::Deformation { omega_c, .. } => omega_c,
            BathKind::OhmicFermionic { omega_c_f, .. } => omega_c_f,
        }
    }

    pub fn is_phonon(&self) -> bool {
        !matches!(self.kind, BathKind::OhmicFermionic { .. })
    }

    /// `c1 |g(w / c_L)|^2` for a phonon bath, `eta exp(-w / w_c) / w` for
    /// the fermionic one. In both cases `J(w) = w^2 P(w) S(w)`.
    #[inline]
    pub fn prefactor(&self, omega: f64) -> f64 {
        match self.kind {
            BathKind::Piezo { g, omega_c } => g / omega * (-omega / omega_c).exp(),
            BathKind::Deformation { omega_s_sq, omega_c } => omega / omega_s_sq * (-omega / omega_c).exp(),
            BathKind::OhmicFermionic { eta, omega_c_f } => eta / omega * (-omega / omega_c_f).exp(),
        }
    }

    /// Bit pattern of every parameter, used as a cache key.
    pub(crate) fn key(&self) -> [u64; 4] {
        let (tag, a, b) = match self.kind {
            BathKind::Piezo { g, omega_c } => (0, g, omega_c),
            BathKind::Deformation { omega_s_sq, omega_c } => (1, omega_s_sq, omega_c),
            BathKind::OhmicFermionic { eta, omega_c_f } => (2, eta, omega_c_f),
        };
        [tag, a.to_bits(), b.to_bits(), self.temperature.to_bits()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(BathModel::piezo(-1.0, 1.0, 0.0).is_err());
        assert!(BathModel::piezo(0.0, 1.0, 0.0).is_ok());
        assert!(BathModel::piezo(1.0, 0.0, 0.0).is_err());
        assert!(BathModel::deformation(0.0, 1.0, 0.0).is_err());
        assert!(BathModel::ohmic_fermionic(-1e-9, 1.0, 0.0).is_err());
        assert!(BathModel::ohmic_fermionic(0.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn gold_gate_matches_reference_values() {
        let b = BathModel::from_gate(5.5, 1.2e-3, 0.0).unwrap();
        let BathKind::OhmicFermionic { eta, omega_c_f } = b.kind() else { unreachable!() };
        assert!((eta / 9.3e-8 - 1.0).abs() < 0.05);
        assert!((omega_c_f / 1.3e15 - 1.0).abs() < 0.05);
    }

    #[test]
    fn temperature_is_part_of_the_key() {
        let a = BathModel::reference_piezo(0.0).unwrap();
        let b = a.with_temperature(1.0).unwrap();
        assert_ne!(a.key(), b.key());
        assert_eq!(b.beta(), InverseTemperature::Finite(7.64e-12));
    }
}

//! Constants and the thermal weight.

use crate::error::{check_finite_nonneg, check_finite_positive, domain, Result};
use std::f64::consts::PI;

/// `beta * T` in seconds times kelvin.
pub const BETA_TIMES_T: f64 = 7.64e-12;

/// Elementary charge in coulombs (joules per electronvolt).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Planck constant in joule seconds.
pub const PLANCK: f64 = 6.626_070_15e-34;

/// Inverse temperature `beta`, with zero temperature kept exact.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InverseTemperature {
    /// `T = 0`: the thermal weight is identically one.
    Infinite,
    Finite(f64),
}

impl InverseTemperature {
    pub fn from_kelvin(temperature: f64) -> Result<Self> {
        check_finite_nonneg("temperature", temperature)?;
        if temperature == 0.0 {
            Ok(Self::Infinite)
        } else {
            Ok(Self::Finite(BETA_TIMES_T / temperature))
        }
    }

    /// `coth(beta w / 2)` for `w > 0`. The caller guarantees `w > 0`.
    #[inline]
    pub fn coth(self, omega: f64) -> f64 {
        match self {
            Self::Infinite => 1.0,
            Self::Finite(beta) => {
                let x = 0.5 * beta * omega;
                if x < 1e-4 {
                    1.0 / x + x / 3.0
                } else {
                    1.0 / x.tanh()
                }
            }
        }
    }
}

/// `coth(beta w / 2)`, exactly one at `T = 0`.
pub fn coth_factor(temperature: f64, omega: f64) -> Result<f64> {
    if !(omega > 0.0 && omega.is_finite()) {
        return domain(format!("omega must be positive, got {omega}"));
    }
    Ok(InverseTemperature::from_kelvin(temperature)?.coth(omega))
}

/// Dimensionless coupling of a gate electron gas,
/// `eta = (2/pi^2) atan^2(pi V0 / E_F)`. Only the ratio enters, so any
/// common energy unit works.
pub fn eta_from_gate(fermi_energy: f64, v0: f64) -> Result<f64> {
    check_finite_positive("Fermi energy", fermi_energy)?;
    check_finite_nonneg("V0", v0)?;
    let a = (PI * v0 / fermi_energy).atan();
    Ok(2.0 / (PI * PI) * a * a)
}

/// Fermionic cutoff `E_F / h` for a Fermi energy in electronvolts.
pub fn fermionic_cutoff_from_ev(fermi_energy_ev: f64) -> Result<f64> {
    check_finite_positive("Fermi energy", fermi_energy_ev)?;
    Ok(fermi_energy_ev * ELEMENTARY_CHARGE / PLANCK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_temperature_is_exactly_one() {
        for w in [1e-30, 1.0, 1e12, 1e300] {
            assert_eq!(coth_factor(0.0, w).unwrap(), 1.0);
        }
    }

    #[test]
    fn coth_at_unit_argument() {
        // beta w / 2 = 1
        let t = 1.0;
        let w = 2.0 / BETA_TIMES_T;
        let want = 1.0 / 1f64.tanh();
        assert!((coth_factor(t, w).unwrap() - want).abs() < 1e-15);
        assert!((want - 1.313_035_285_499_331_3).abs() < 1e-15);
    }

    #[test]
    fn coth_small_argument_series() {
        let t = 1.0;
        let w = 2e-6 / BETA_TIMES_T;
        let got = coth_factor(t, w).unwrap();
        let want = 1e6 + 1e-6 / 3.0;
        assert!((got - want).abs() / want < 1e-15, "{got}");
    }

    #[test]
    fn coth_domain() {
        assert!(coth_factor(1.0, 0.0).is_err());
        assert!(coth_factor(-1.0, 1.0).is_err());
    }

    #[test]
    fn eta_examples() {
        let lateral = eta_from_gate(8.9e-3, 1.2e-3).unwrap();
        assert!((lateral / 3.2e-2 - 1.0).abs() < 0.05, "{lateral}");
        let gold = eta_from_gate(5.5, 1.2e-3).unwrap();
        assert!((gold / 9.3e-8 - 1.0).abs() < 0.05, "{gold}");
        assert_eq!(eta_from_gate(3.0, 0.0).unwrap(), 0.0);
        assert!(eta_from_gate(0.0, 1.0).is_err());
    }

    #[test]
    fn gold_cutoff() {
        let w = fermionic_cutoff_from_ev(5.5).unwrap();
        assert!((w / 1.33e15 - 1.0).abs() < 0.01, "{w}");
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn coth_at_least_one_and_monotone_in_t(w in 1e6f64..1e16, t1 in 0.0f64..100.0, dt in 0.0f64..100.0) {
            let a = coth_factor(t1, w).unwrap();
            let b = coth_factor(t1 + dt, w).unwrap();
            prop_assert!(a >= 1.0);
            prop_assert!(b >= a * (1.0 - 1e-15));
        }

        #[test]
        fn eta_scale_invariant(ef in 1e-4f64..10.0, ratio in 0.0f64..5.0, c in 1e-3f64..1e3) {
            let v0 = ratio * ef;
            let a = eta_from_gate(ef, v0).unwrap();
            let b = eta_from_gate(c * ef, c * v0).unwrap();
            prop_assert!((a - b).abs() <= 1e-14 * a.max(1e-300));
            prop_assert!((0.0..0.5).contains(&a));
        }
    }
}

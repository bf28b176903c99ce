use crate::error::{check_finite_positive, domain, Result};

/// A linear register of `N` double-dot qubits.
///
/// `q0` is half the dot separation inside a qubit, `d` the spacing between
/// neighbouring qubits, `c_L` the longitudinal sound speed (SI units).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegisterGeometry {
    n_qubits: usize,
    q0: f64,
    d: f64,
    sound_speed: f64,
}

impl RegisterGeometry {
    pub fn new(n_qubits: usize, q0: f64, d: f64, sound_speed: f64) -> Result<Self> {
        if n_qubits == 0 {
            return domain("register needs at least one qubit");
        }
        check_finite_positive("q0", q0)?;
        check_finite_positive("d", d)?;
        check_finite_positive("sound speed", sound_speed)?;
        Ok(Self { n_qubits, q0, d, sound_speed })
    }

    /// The register used for the zero-temperature decay curves:
    /// `q0 = 50 nm`, `d = 400 nm`, `c_L = 5e3 m/s`.
    pub fn reference(n_qubits: usize) -> Result<Self> {
        Self::new(n_qubits, 50e-9, 400e-9, 5e3)
    }

    pub fn with_qubits(self, n_qubits: usize) -> Result<Self> {
        Self::new(n_qubits, self.q0, self.d, self.sound_speed)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn q0(&self) -> f64 {
        self.q0
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn sound_speed(&self) -> f64 {
        self.sound_speed
    }

    /// `alpha = 2 q0 / d`.
    pub fn alpha(&self) -> f64 {
        2.0 * self.q0 / self.d
    }

    /// Transit time `tau_s = d / c_L`.
    pub fn transit_time(&self) -> f64 {
        self.d / self.sound_speed
    }

    /// `omega_q = c_L / (2 q0)`.
    pub fn omega_q(&self) -> f64 {
        self.sound_speed / (2.0 * self.q0)
    }
}

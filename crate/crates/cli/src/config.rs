//! Flat `key = value` configuration with dotted section prefixes.
//!
//! Units are fixed by the key suffix (`_nm`, `_per_s`, `_eV`, `_K`, `_s`).
//! Unknown keys, duplicates and malformed values are errors that name the
//! line and key.

use std::collections::BTreeMap;
use std::fmt;

use qdecoherence::bath::BathModel;
use qdecoherence::geometry::RegisterGeometry;
use qdecoherence::quadrature::QuadratureConfig;
use qdecoherence::units::eta_from_gate;

/// Every accepted key with its default. Empty defaults mean "unset".
pub const KEYS: &[(&str, &str)] = &[
    ("geometry.N", "1000"),
    ("geometry.q0_nm", "50"),
    ("geometry.d_nm", "400"),
    ("geometry.cL_m_per_s", "5e3"),
    ("bath.piezo.g", "0.03"),
    ("bath.piezo.omega_c_per_s", "5e10"),
    ("bath.deformation.omega_s_sq_per_s2", "1e25"),
    ("bath.deformation.omega_c_per_s", "5e10"),
    ("bath.fermionic.eta", ""),
    ("bath.fermionic.E_F_eV", ""),
    ("bath.fermionic.V0_eV", ""),
    ("bath.fermionic.omega_c_f_per_s", "1.3e15"),
    ("temperature_K", "0"),
    ("time_s", "1e-11"),
    ("sweep.variable", "time"),
    ("sweep.start", "1e-13"),
    ("sweep.stop", "1e-10"),
    ("sweep.points", "16"),
    ("sweep.scale", "log"),
    ("element.preset", "most-offdiagonal"),
    ("element.l", ""),
    ("element.m", ""),
    ("element.rho0_re", "0.5"),
    ("element.rho0_im", "0"),
    ("element.max_pairs", "4096"),
    ("q_functions.r", ""),
    ("quadrature.rel_tol", "1e-9"),
    ("quadrature.abs_tol", "1e-14"),
    ("quadrature.max_subdivisions", "10000"),
    ("quadrature.cutoff_decades", "40"),
    ("oracle.spacing_reduced", "0.3,0.2,0.15"),
    ("oracle.cutoff_reduced", "20"),
    ("oracle.t_reduced", "1"),
    ("oracle.single_mode", "false"),
    ("oracle.mode_cap", "30000000"),
];

/// Fallback for `bath.fermionic.eta` when neither it nor the gate energies
/// are set: the top-gate value.
const DEFAULT_ETA: f64 = 9.3e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub key: Option<String>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.line, &self.key) {
            (Some(l), Some(k)) => write!(f, "line {l}, {k}: {}", self.message),
            (None, Some(k)) => write!(f, "{k}: {}", self.message),
            (Some(l), None) => write!(f, "line {l}: {}", self.message),
            (None, None) => write!(f, "{}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

fn err(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError { line: None, key: Some(key.to_string()), message: message.into() }
}

pub fn is_key(key: &str) -> bool {
    KEYS.iter().any(|(k, _)| *k == key)
}

/// Raw values keyed by name, remembering the line each came from.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RawConfig {
    values: BTreeMap<String, (String, Option<usize>)>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut raw = Self::default();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((k, v)) = body.split_once('=') else {
                return Err(ConfigError { line: Some(line_no), key: None, message: "expected key = value".into() });
            };
            let k = k.trim();
            if !is_key(k) {
                return Err(ConfigError { line: Some(line_no), key: Some(k.into()), message: "unknown key".into() });
            }
            if raw.values.contains_key(k) {
                return Err(ConfigError { line: Some(line_no), key: Some(k.into()), message: "duplicate key".into() });
            }
            raw.values.insert(k.to_string(), (v.trim().to_string(), Some(line_no)));
        }
        Ok(raw)
    }

    /// Applies a command-line override; later overrides win.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        if !is_key(key) {
            return Err(err(key, "unknown key"));
        }
        self.values.insert(key.to_string(), (value.trim().to_string(), None));
        Ok(())
    }

    fn get(&self, key: &str) -> (&str, Option<usize>) {
        match self.values.get(key) {
            Some((v, line)) => (v.as_str(), *line),
            None => (KEYS.iter().find(|(k, _)| *k == key).map_or("", |(_, d)| d), None),
        }
    }

    fn is_set(&self, key: &str) -> bool {
        !self.get(key).0.is_empty()
    }

    fn parse_as<T: std::str::FromStr>(&self, key: &str) -> Result<T, ConfigError> {
        let (v, line) = self.get(key);
        v.parse().map_err(|_| ConfigError {
            line,
            key: Some(key.into()),
            message: format!("cannot parse {v:?}"),
        })
    }

    fn list(&self, key: &str) -> Result<Vec<f64>, ConfigError> {
        let (v, line) = self.get(key);
        v.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse().map_err(|_| ConfigError {
                    line,
                    key: Some(key.into()),
                    message: format!("cannot parse list entry {s:?}"),
                })
            })
            .collect()
    }

    /// All keys with their effective values, sorted.
    pub fn resolved(&self) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> =
            KEYS.iter().map(|(k, _)| (k.to_string(), self.get(k).0.to_string())).collect();
        out.sort();
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepVariable {
    Time,
    Temperature,
    N,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sweep {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub scale: Scale,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|i| {
                let f = i as f64 / (n - 1) as f64;
                let v = match self.scale {
                    Scale::Linear => self.start + (self.stop - self.start) * f,
                    Scale::Log => (self.start.ln() + (self.stop.ln() - self.start.ln()) * f).exp(),
                };
                if i == n - 1 {
                    self.stop
                } else if i == 0 {
                    self.start
                } else {
                    v
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ElementSpec {
    MostOffDiagonal,
    Explicit { l: Vec<i8>, m: Vec<i8> },
    All,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleSettings {
    pub spacing: Vec<f64>,
    pub cutoff: f64,
    pub t: f64,
    pub single_mode: bool,
    pub mode_cap: u64,
}

/// A validated run configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub raw: RawConfig,
    pub n_qubits: usize,
    pub q0: f64,
    pub d: f64,
    pub sound_speed: f64,
    pub piezo: (f64, f64),
    pub deformation: (f64, f64),
    pub eta: f64,
    pub omega_c_f: f64,
    pub temperature: f64,
    pub time: f64,
    pub sweep: Sweep,
    pub element: ElementSpec,
    pub rho0: (f64, f64),
    pub max_pairs: u64,
    pub q_r: Vec<usize>,
    pub quadrature: QuadratureConfig,
    pub oracle: OracleSettings,
}

impl RunConfig {
    pub fn from_raw(raw: RawConfig) -> Result<Self, ConfigError> {
        let positive = |key: &str| -> Result<f64, ConfigError> {
            let v: f64 = raw.parse_as(key)?;
            if v.is_finite() && v > 0.0 {
                Ok(v)
            } else {
                Err(err(key, format!("must be finite and positive, got {v}")))
            }
        };
        let n_qubits: usize = raw.parse_as("geometry.N")?;
        if n_qubits == 0 {
            return Err(err("geometry.N", "must be at least 1"));
        }
        let temperature: f64 = raw.parse_as("temperature_K")?;
        if !(temperature.is_finite() && temperature >= 0.0) {
            return Err(err("temperature_K", "must be finite and non-negative"));
        }

        let eta = match (raw.is_set("bath.fermionic.eta"), raw.is_set("bath.fermionic.E_F_eV"), raw.is_set("bath.fermionic.V0_eV")) {
            (true, false, false) => raw.parse_as("bath.fermionic.eta")?,
            (false, true, true) => {
                let ef = positive("bath.fermionic.E_F_eV")?;
                let v0: f64 = raw.parse_as("bath.fermionic.V0_eV")?;
                eta_from_gate(ef, v0).map_err(|e| err("bath.fermionic.V0_eV", e.to_string()))?
            }
            (false, false, false) => DEFAULT_ETA,
            _ => {
                return Err(err(
                    "bath.fermionic.eta",
                    "give either eta or both E_F_eV and V0_eV, not a mix",
                ))
            }
        };

        let variable = match raw.get("sweep.variable").0 {
            "time" => SweepVariable::Time,
            "temperature" => SweepVariable::Temperature,
            "N" => SweepVariable::N,
            other => return Err(err("sweep.variable", format!("expected time, temperature or N, got {other:?}"))),
        };
        let scale = match raw.get("sweep.scale").0 {
            "linear" => Scale::Linear,
            "log" => Scale::Log,
            other => return Err(err("sweep.scale", format!("expected linear or log, got {other:?}"))),
        };
        let start: f64 = raw.parse_as("sweep.start")?;
        let stop: f64 = raw.parse_as("sweep.stop")?;
        let points: usize = raw.parse_as("sweep.points")?;
        if points < 2 {
            return Err(err("sweep.points", "need at least 2 points"));
        }
        if !(start.is_finite() && stop.is_finite() && start >= 0.0 && stop >= 0.0) {
            return Err(err("sweep.start", "endpoints must be finite and non-negative"));
        }
        if scale == Scale::Log && !(start > 0.0 && stop > 0.0) {
            return Err(err("sweep.scale", "log scale needs positive endpoints"));
        }
        if variable == SweepVariable::N && start < 1.0 {
            return Err(err("sweep.start", "N sweeps start at 1 or above"));
        }

        let element = match raw.get("element.preset").0 {
            "most-offdiagonal" => ElementSpec::MostOffDiagonal,
            "all" => ElementSpec::All,
            "explicit" => {
                let l = crate::label::parse(raw.get("element.l").0).map_err(|m| err("element.l", m))?;
                let m = crate::label::parse(raw.get("element.m").0).map_err(|e| err("element.m", e))?;
                if l.len() != n_qubits || m.len() != n_qubits {
                    return Err(err("element.l", format!("labels need {n_qubits} entries")));
                }
                ElementSpec::Explicit { l, m }
            }
            other => {
                return Err(err("element.preset", format!("expected most-offdiagonal, explicit or all, got {other:?}")))
            }
        };

        let q_r = raw
            .list("q_functions.r")?
            .into_iter()
            .map(|r| {
                if r >= 1.0 && r.fract() == 0.0 {
                    Ok(r as usize)
                } else {
                    Err(err("q_functions.r", format!("r must be a positive integer, got {r}")))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;

        let quadrature = QuadratureConfig {
            rel_tol: raw.parse_as("quadrature.rel_tol")?,
            abs_tol: raw.parse_as("quadrature.abs_tol")?,
            max_subdivisions: raw.parse_as("quadrature.max_subdivisions")?,
            cutoff_decades: raw.parse_as("quadrature.cutoff_decades")?,
        };
        quadrature.validate().map_err(|e| err("quadrature", e.to_string()))?;

        let spacing = raw.list("oracle.spacing_reduced")?;
        if spacing.is_empty() || spacing.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(err("oracle.spacing_reduced", "need one or more positive spacings"));
        }
        let oracle = OracleSettings {
            spacing,
            cutoff: positive("oracle.cutoff_reduced")?,
            t: positive("oracle.t_reduced")?,
            single_mode: raw.parse_as("oracle.single_mode")?,
            mode_cap: raw.parse_as("oracle.mode_cap")?,
        };

        Ok(Self {
            n_qubits,
            q0: positive("geometry.q0_nm")? / 1e9,
            d: positive("geometry.d_nm")? / 1e9,
            sound_speed: positive("geometry.cL_m_per_s")?,
            piezo: (positive("bath.piezo.g")?, positive("bath.piezo.omega_c_per_s")?),
            deformation: (
                positive("bath.deformation.omega_s_sq_per_s2")?,
                positive("bath.deformation.omega_c_per_s")?,
            ),
            eta,
            omega_c_f: positive("bath.fermionic.omega_c_f_per_s")?,
            temperature,
            time: {
                let t: f64 = raw.parse_as("time_s")?;
                if !(t.is_finite() && t >= 0.0) {
                    return Err(err("time_s", "must be finite and non-negative"));
                }
                t
            },
            sweep: Sweep { variable, start, stop, points, scale },
            element,
            rho0: (raw.parse_as("element.rho0_re")?, raw.parse_as("element.rho0_im")?),
            max_pairs: raw.parse_as("element.max_pairs")?,
            q_r,
            quadrature,
            oracle,
            raw,
        })
    }

    pub fn geometry(&self, n_qubits: usize) -> Result<RegisterGeometry, ConfigError> {
        RegisterGeometry::new(n_qubits, self.q0, self.d, self.sound_speed).map_err(|e| err("geometry", e.to_string()))
    }

    pub fn piezo(&self, temperature: f64) -> Result<BathModel, ConfigError> {
        BathModel::piezo(self.piezo.0, self.piezo.1, temperature).map_err(|e| err("bath.piezo", e.to_string()))
    }

    pub fn deformation(&self, temperature: f64) -> Result<BathModel, ConfigError> {
        BathModel::deformation(self.deformation.0, self.deformation.1, temperature)
            .map_err(|e| err("bath.deformation", e.to_string()))
    }

    pub fn fermionic(&self, temperature: f64) -> Result<BathModel, ConfigError> {
        BathModel::ohmic_fermionic(self.eta, self.omega_c_f, temperature).map_err(|e| err("bath.fermionic", e.to_string()))
    }
}

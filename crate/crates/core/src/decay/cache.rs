use std::collections::HashMap;
use std::sync::RwLock;

use super::kernels::{phonon_target, Kernel, Target};
use crate::bath::BathModel;
use crate::error::Result;
use crate::geometry::RegisterGeometry;
use crate::quadrature::QuadratureConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Key {
    bath: [u64; 4],
    // q0, d, c_L; the qubit count does not enter a kernel
    geometry: [u64; 3],
    r: usize,
    t: u64,
    target: u8,
}

/// Memo table for phonon kernels, shared across threads.
///
/// Entries are keyed by the bit patterns of every parameter that enters the
/// integral, so two lookups hit the same entry only if they would compute
/// the identical value.
#[derive(Debug)]
pub struct KernelCache {
    cfg: QuadratureConfig,
    map: RwLock<HashMap<Key, f64>>,
}

impl KernelCache {
    pub fn new(cfg: QuadratureConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self { cfg, map: RwLock::new(HashMap::new()) })
    }

    pub fn config(&self) -> &QuadratureConfig {
        &self.cfg
    }

    pub fn len(&self) -> usize {
        self.map.read().map(|m| m.len()).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn clear(&self) {
        if let Ok(mut m) = self.map.write() {
            m.clear();
        }
    }

    fn lookup(&self, bath: &BathModel, geom: &RegisterGeometry, r: usize, t: f64, target: Target) -> Result<f64> {
        let key = Key {
            bath: bath.key(),
            geometry: [geom.q0().to_bits(), geom.d().to_bits(), geom.sound_speed().to_bits()],
            r,
            t: t.to_bits(),
            target: match target {
                Target::Kernel(k) => k.index(),
                Target::SecularRate => 0,
            },
        };
        if let Some(v) = self.map.read().ok().and_then(|m| m.get(&key).copied()) {
            return Ok(v);
        }
        let v = phonon_target(bath, geom, r, t, target, &self.cfg)?;
        if let Ok(mut m) = self.map.write() {
            m.insert(key, v);
        }
        Ok(v)
    }

    /// `Q_m^r(t)` for `t >= 0`, extended to negative `t` as an even (`Q_2`)
    /// or odd (`Q_1`) function.
    pub fn kernel(&self, bath: &BathModel, geom: &RegisterGeometry, r: usize, t: f64, kernel: Kernel) -> Result<f64> {
        if t < 0.0 {
            let v = self.lookup(bath, geom, r, -t, Target::Kernel(kernel))?;
            return Ok(match kernel {
                Kernel::Decay => v,
                Kernel::Phase => -v,
            });
        }
        self.lookup(bath, geom, r, t, Target::Kernel(kernel))
    }

    pub fn secular_rate(&self, bath: &BathModel, geom: &RegisterGeometry, r: usize) -> Result<f64> {
        self.lookup(bath, geom, r, 1.0, Target::SecularRate)
    }
}

impl Default for KernelCache {
    fn default() -> Self {
        Self { cfg: QuadratureConfig::default(), map: RwLock::new(HashMap::new()) }
    }
}

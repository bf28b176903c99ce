//! The four subcommands, each producing a [`Table`].

use num_complex::Complex64;
use qdecoherence::decay::{e_factor, e_tilde_factor, DecayProfile, FermionicKernels, Kernel, KernelCache};
use qdecoherence::geometry::RegisterGeometry;
use qdecoherence::oracle::{KLattice, Orientation, PsiPhiTable, QTable};
use qdecoherence::register::{bounds, evolve_element, static_element, BasisPair, Bias};
use qdecoherence::Error;

use crate::config::{ConfigError, ElementSpec, RunConfig, SweepVariable};
use crate::label;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Scan,
    QFunctions,
    Rho,
    OracleCompare,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Scan => "scan",
            Command::QFunctions => "q-functions",
            Command::Rho => "rho",
            Command::OracleCompare => "oracle-compare",
        }
    }
}

/// Failures that stop a run, each with its exit code.
#[derive(Debug)]
pub enum Failure {
    Config(ConfigError),
    Numerical(String),
    Resource(String),
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Io(_) => 1,
            Failure::Config(_) => 2,
            Failure::Numerical(_) => 3,
            Failure::Resource(_) => 4,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Config(e) => write!(f, "config error: {e}"),
            Failure::Numerical(m) => write!(f, "numerical failure: {m}"),
            Failure::Resource(m) => write!(f, "resource cap: {m}"),
            Failure::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Quadrature(q) => Failure::Numerical(q.to_string()),
            Error::ResourceCap { .. } => Failure::Resource(e.to_string()),
            other => Failure::Config(ConfigError { line: None, key: None, message: other.to_string() }),
        }
    }
}

fn config_error(key: &str, message: impl Into<String>) -> Failure {
    Failure::Config(ConfigError { line: None, key: Some(key.into()), message: message.into() })
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Largest `r` any decay profile needed.
    pub r_max_used: usize,
    /// Cells that hold the `nan` sentinel because a quadrature failed.
    pub failed_cells: usize,
}

/// Shortest round-trip representation, so CSV values parse back bit for bit.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        format!("{x:e}")
    }
}

/// Collects one row, turning per-cell errors into `nan` plus a note in the
/// trailing `status` column. Only quadrature failures count as failed cells;
/// quantities undefined at the point (such as `e` at `t = 0`) are `nan` with
/// an `undefined` note.
struct Row<'a> {
    cells: Vec<String>,
    notes: Vec<String>,
    table: &'a mut Table,
}

impl<'a> Row<'a> {
    fn new(table: &'a mut Table) -> Self {
        Self { cells: Vec::new(), notes: Vec::new(), table }
    }

    fn text(&mut self, s: impl Into<String>) {
        self.cells.push(s.into());
    }

    fn value(&mut self, name: &str, v: qdecoherence::Result<f64>) -> Result<Option<f64>, Failure> {
        match v {
            Ok(x) => {
                self.cells.push(fmt_f64(x));
                Ok(Some(x))
            }
            Err(Error::Quadrature(_)) => {
                self.table.failed_cells += 1;
                self.notes.push(format!("{name}:no-convergence"));
                self.cells.push("nan".into());
                Ok(None)
            }
            Err(e @ Error::ResourceCap { .. }) => Err(e.into()),
            Err(_) => {
                self.notes.push(format!("{name}:undefined"));
                self.cells.push("nan".into());
                Ok(None)
            }
        }
    }

    fn finish(mut self) {
        let status = if self.notes.is_empty() { "ok".to_string() } else { self.notes.join(";") };
        self.cells.push(status);
        self.table.rows.push(self.cells);
    }
}

fn header(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|s| s.to_string()).collect()
}

fn single_pair(config: &RunConfig, n: usize) -> Result<BasisPair, Failure> {
    match &config.element {
        ElementSpec::MostOffDiagonal => Ok(BasisPair::most_off_diagonal(n)?),
        ElementSpec::Explicit { l, m } if l.len() == n => Ok(BasisPair::new(l.clone(), m.clone())?),
        ElementSpec::Explicit { .. } => Err(config_error("element.preset", "explicit labels cannot follow an N sweep")),
        ElementSpec::All => Err(config_error("element.preset", "this command takes a single element")),
    }
}

fn quantity<T>(r: &qdecoherence::Result<T>) -> qdecoherence::Result<&T> {
    r.as_ref().map_err(Clone::clone)
}

/// Decay quantities against the sweep variable, one row per point.
pub fn scan(config: &RunConfig) -> Result<Table, Failure> {
    let mut table = Table {
        header: header(&[
            "sweep_value",
            "lambda_b_piezo",
            "lambda_b_deformation",
            "lambda_f",
            "x_b",
            "e_factor",
            "e_tilde",
            "two_N_Q2_0",
            "r_max_used",
            "status",
        ]),
        ..Table::default()
    };
    let cache = KernelCache::new(config.quadrature)?;
    for v in config.sweep.values() {
        let (t, temperature, n) = match config.sweep.variable {
            SweepVariable::Time => (v, config.temperature, config.n_qubits),
            SweepVariable::Temperature => (config.time, v, config.n_qubits),
            SweepVariable::N => (config.time, config.temperature, v.round() as usize),
        };
        let geom = config.geometry(n)?;
        let pair = single_pair(config, n)?;
        let piezo = config.piezo(temperature)?;
        let deformation = config.deformation(temperature)?;
        let gate = config.fermionic(temperature)?;

        let p_profile = DecayProfile::compute(&piezo, &geom, t, &cache);
        let d_profile = DecayProfile::compute(&deformation, &geom, t, &cache);
        let gate_k = FermionicKernels::compute(&gate, t, &config.quadrature);
        let piezo_el = quantity(&p_profile).and_then(|p| static_element(&pair, p, None, &Bias::None));
        let r_max = p_profile.as_ref().map_or(0, |p| p.r_max());
        table.r_max_used = table.r_max_used.max(r_max);
        if let Ok(p) = &d_profile {
            table.r_max_used = table.r_max_used.max(p.r_max());
        }

        let mut row = Row::new(&mut table);
        row.text(fmt_f64(v));
        row.value("lambda_b_piezo", piezo_el.clone().map(|e| e.lambda_b))?;
        row.value(
            "lambda_b_deformation",
            quantity(&d_profile).and_then(|p| static_element(&pair, p, None, &Bias::None)).map(|e| e.lambda_b),
        )?;
        row.value("lambda_f", quantity(&gate_k).map(|k| 2.0 * pair.difference_norm_sq() * k.q2))?;
        row.value("x_b", piezo_el.clone().map(|e| e.x_b))?;
        row.value("e_factor", quantity(&p_profile).and_then(e_factor))?;
        row.value("e_tilde", quantity(&p_profile).and_then(e_tilde_factor))?;
        row.value("two_N_Q2_0", quantity(&p_profile).map(|p| 2.0 * n as f64 * p.q2()[0]))?;
        row.text(r_max.to_string());
        row.finish();
    }
    Ok(table)
}

fn require_time_sweep(config: &RunConfig) -> Result<(), Failure> {
    if config.sweep.variable == SweepVariable::Time {
        Ok(())
    } else {
        Err(config_error("sweep.variable", "this command sweeps time only"))
    }
}

/// Piezo kernels scaled as the register sums use them: `2N Q^0` and `4N Q^r`
/// for each requested `r`.
pub fn q_functions(config: &RunConfig) -> Result<Table, Failure> {
    require_time_sweep(config)?;
    let n = config.n_qubits;
    if let Some(r) = config.q_r.iter().find(|r| **r >= n) {
        return Err(config_error("q_functions.r", format!("r = {r} needs r < N = {n}")));
    }
    let mut cols = vec!["t".to_string(), "two_N_Q1_0".into(), "two_N_Q2_0".into()];
    for r in &config.q_r {
        cols.push(format!("four_N_Q1_{r}"));
        cols.push(format!("four_N_Q2_{r}"));
    }
    cols.push("status".into());
    let mut table = Table { header: cols, r_max_used: config.q_r.iter().copied().max().unwrap_or(0), ..Table::default() };
    let cache = KernelCache::new(config.quadrature)?;
    let geom = config.geometry(n)?;
    let bath = config.piezo(config.temperature)?;
    let nf = n as f64;
    for t in config.sweep.values() {
        let mut row = Row::new(&mut table);
        row.text(fmt_f64(t));
        row.value("Q1_0", cache.kernel(&bath, &geom, 0, t, Kernel::Phase).map(|q| 2.0 * nf * q))?;
        row.value("Q2_0", cache.kernel(&bath, &geom, 0, t, Kernel::Decay).map(|q| 2.0 * nf * q))?;
        for &r in &config.q_r {
            row.value(&format!("Q1_{r}"), cache.kernel(&bath, &geom, r, t, Kernel::Phase).map(|q| 4.0 * nf * q))?;
            row.value(&format!("Q2_{r}"), cache.kernel(&bath, &geom, r, t, Kernel::Decay).map(|q| 4.0 * nf * q))?;
        }
        row.finish();
    }
    Ok(table)
}

/// Largest register for which explicit element lists are accepted.
pub const MAX_EXPLICIT_QUBITS: usize = 12;

fn element_pairs(config: &RunConfig) -> Result<Vec<BasisPair>, Failure> {
    let n = config.n_qubits;
    match &config.element {
        ElementSpec::All => {
            let count = 1u128 << (2 * n.min(63));
            if n > 31 || count > u128::from(config.max_pairs) {
                return Err(Error::ResourceCap {
                    what: "matrix elements",
                    requested: u64::try_from(count).unwrap_or(u64::MAX),
                    cap: config.max_pairs,
                }
                .into());
            }
            let states = 1u64 << n;
            let mut pairs = Vec::with_capacity(count as usize);
            for l in 0..states {
                for m in 0..states {
                    pairs.push(BasisPair::new(label::from_mask(l, n), label::from_mask(m, n))?);
                }
            }
            Ok(pairs)
        }
        ElementSpec::Explicit { .. } if n > MAX_EXPLICIT_QUBITS => Err(config_error(
            "element.preset",
            format!("explicit elements need N <= {MAX_EXPLICIT_QUBITS}, got {n}"),
        )),
        _ => Ok(vec![single_pair(config, n)?]),
    }
}

/// Density-matrix elements over time with the piezo and gate baths, plus the
/// magnitude bounds.
pub fn rho(config: &RunConfig) -> Result<Table, Failure> {
    require_time_sweep(config)?;
    let pairs = element_pairs(config)?;
    let mut table = Table {
        header: header(&[
            "t",
            "l",
            "m",
            "magnitude",
            "phase",
            "b_minus",
            "b_plus",
            "lambda_b",
            "lambda_f",
            "x_b",
            "within_bounds",
            "status",
        ]),
        ..Table::default()
    };
    let cache = KernelCache::new(config.quadrature)?;
    let geom = config.geometry(config.n_qubits)?;
    let bath = config.piezo(config.temperature)?;
    let gate = config.fermionic(config.temperature)?;
    let rho0 = Complex64::new(config.rho0.0, config.rho0.1);
    for t in config.sweep.values() {
        let profile = DecayProfile::compute(&bath, &geom, t, &cache);
        let gate_k = FermionicKernels::compute(&gate, t, &config.quadrature);
        if let Ok(p) = &profile {
            table.r_max_used = table.r_max_used.max(p.r_max());
        }
        for pair in &pairs {
            let el = quantity(&profile)
                .and_then(|p| quantity(&gate_k).and_then(|k| static_element(pair, p, Some(k), &Bias::None)));
            let value = el.clone().map(|e| evolve_element(rho0, &e));
            let b = quantity(&profile).and_then(|p| quantity(&gate_k).and_then(|k| bounds(pair, p, Some(k), rho0.norm())));
            let mut row = Row::new(&mut table);
            row.text(fmt_f64(t));
            row.text(label::format(pair.l()));
            row.text(label::format(pair.m()));
            let mag = row.value("magnitude", value.clone().map(|z| z.norm()))?;
            row.value("phase", value.map(|z| z.arg()))?;
            let lo = row.value("b_minus", b.clone().map(|b| b.0))?;
            let hi = row.value("b_plus", b.map(|b| b.1))?;
            row.value("lambda_b", el.clone().map(|e| e.lambda_b))?;
            row.value("lambda_f", el.clone().map(|e| e.lambda_f))?;
            row.value("x_b", el.clone().map(|e| e.x_b))?;
            row.text(match (mag, lo, hi) {
                (Some(x), Some(lo), Some(hi)) => {
                    let slack = 1e-12 * hi.abs().max(f64::MIN_POSITIVE);
                    (lo - slack <= x && x <= hi + slack).to_string()
                }
                _ => "unknown".into(),
            });
            row.finish();
        }
    }
    Ok(table)
}

/// Deviation below which a converged lattice counts as agreeing.
pub const ORACLE_THRESHOLD: f64 = 0.01;

/// Wave vector of the single-mode lattice, in units of `omega_c / c_L`.
const SINGLE_MODE: [f64; 3] = [0.3, -0.2, 0.7];

/// Largest register for which the per-mode `Psi`/`Phi` sums are run.
const MAX_PSI_PHI_QUBITS: usize = 64;

/// Piezo kernels against the discrete-mode lattice sum, at each lattice
/// spacing in turn. Only the finest of two or more levels is judged against
/// [`ORACLE_THRESHOLD`]; coarser levels are labelled `coarse` and a lone or
/// single-mode lattice `unconverged`. `Psi`/`Phi` rows report the residual
/// for qubit 1 relative to `|Q_1^0(t)|`; it vanishes in the continuum and
/// should shrink under refinement. (`Psi_1(0)` itself cancels under
/// `k -> -k` and is no use as a scale.)
pub fn oracle_compare(config: &RunConfig) -> Result<Table, Failure> {
    let mut table = Table {
        header: header(&[
            "quantity",
            "r",
            "spacing_reduced",
            "modes",
            "lattice",
            "quadrature",
            "rel_deviation",
            "status",
        ]),
        ..Table::default()
    };
    let n = config.n_qubits;
    let geom = config.geometry(n)?;
    let bath = config.piezo(config.temperature)?;
    let scale = config.piezo.1 / config.sound_speed;
    let t = config.oracle.t / config.piezo.1;
    let r_top = (n - 1).min(2);
    table.r_max_used = r_top;
    let cache = KernelCache::new(config.quadrature)?;

    let lattices: Vec<(f64, KLattice)> = if config.oracle.single_mode {
        let dk = config.oracle.spacing[0] * scale;
        let k = SINGLE_MODE.map(|x| x * scale);
        let volume = (2.0 * std::f64::consts::PI / dk).powi(3);
        vec![(config.oracle.spacing[0], KLattice::from_modes(volume, vec![k])?)]
    } else {
        config
            .oracle
            .spacing
            .iter()
            .map(|s| {
                KLattice::cubic(s * scale, config.oracle.cutoff * scale)
                    .map(|l| (*s, l.with_mode_cap(config.oracle.mode_cap)))
            })
            .collect::<Result<_, _>>()?
    };
    let judged = !config.oracle.single_mode && lattices.len() >= 2;

    for (level, (spacing, lattice)) in lattices.iter().enumerate() {
        let modes = lattice.mode_count();
        let status = |dev: f64| -> String {
            if !judged {
                "unconverged".into()
            } else if level + 1 < lattices.len() {
                "coarse".into()
            } else if dev < ORACLE_THRESHOLD {
                "pass".into()
            } else {
                "fail".into()
            }
        };
        let qt = QTable::build(lattice, &geom, Orientation::default(), r_top)?;
        for r in 0..=r_top {
            for (name, kernel) in [("Q1", Kernel::Phase), ("Q2", Kernel::Decay)] {
                let lat = qt.q(&bath, &geom, r, t, kernel)?;
                let quad = cache.kernel(&bath, &geom, r, t, kernel)?;
                let dev = (lat - quad).abs() / quad.abs();
                table.rows.push(vec![
                    name.into(),
                    r.to_string(),
                    fmt_f64(*spacing),
                    modes.to_string(),
                    fmt_f64(lat),
                    fmt_f64(quad),
                    fmt_f64(dev),
                    status(dev),
                ]);
            }
        }
        if n <= MAX_PSI_PHI_QUBITS {
            let pp = PsiPhiTable::build(lattice, &geom, Orientation::default(), 1)?.eval(&bath, &geom, t)?;
            let scale = cache.kernel(&bath, &geom, 0, t, Kernel::Phase)?.abs();
            table.rows.push(vec![
                "psi_phi_residual".into(),
                String::new(),
                fmt_f64(*spacing),
                modes.to_string(),
                fmt_f64(pp.residual()),
                fmt_f64(0.0),
                fmt_f64(pp.residual().abs() / scale),
                "info".into(),
            ]);
        }
    }
    Ok(table)
}

pub fn run(command: Command, config: &RunConfig) -> Result<Table, Failure> {
    match command {
        Command::Scan => scan(config),
        Command::QFunctions => q_functions(config),
        Command::Rho => rho(config),
        Command::OracleCompare => oracle_compare(config),
    }
}

/// Geometry used by a run, exposed for callers comparing against the library.
pub fn geometry(config: &RunConfig) -> Result<RegisterGeometry, Failure> {
    Ok(config.geometry(config.n_qubits)?)
}

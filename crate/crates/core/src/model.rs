//! Domain types for the molecule, the two field modes and the experiment, plus
//! model-file ingestion and validation.
//!
//! Everything is stored in SI units. Files may declare energies in eV or J,
//! electric dipoles in debye or C·m and magnetic dipoles in Bohr magnetons or
//! J/T; conversion happens once at load time.

use std::fmt;
use std::path::Path;

use nalgebra::{DMatrix, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;
pub type CMatrix = DMatrix<Complex64>;

/// Fixed CODATA 2018 constants, SI.
pub mod consts {
    /// Reduced Planck constant, J·s.
    pub const HBAR: f64 = 1.054_571_817e-34;
    /// Speed of light in vacuum, m/s.
    pub const C: f64 = 299_792_458.0;
    /// Vacuum permeability, N/A².
    pub const MU0: f64 = 1.256_637_062_12e-6;
    /// Vacuum permittivity, F/m.
    pub const EPS0: f64 = 8.854_187_812_8e-12;

    /// 1 eV in J.
    pub const ELECTRON_VOLT: f64 = 1.602_176_634e-19;
    /// 1 debye in C·m.
    pub const DEBYE: f64 = 3.335_640_95e-30;
    /// Bohr magneton, J/T.
    pub const BOHR_MAGNETON: f64 = 9.274_010_078_3e-24;
}

/// The constant set as a value, for callers that want to pass it around.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub c: f64,
    pub mu0: f64,
    pub eps0: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        PhysicalConstants {
            hbar: consts::HBAR,
            c: consts::C,
            mu0: consts::MU0,
            eps0: consts::EPS0,
        }
    }
}

// ---------------------------------------------------------------------------
// Units

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnergyUnit {
    #[serde(rename = "J")]
    Joule,
    #[serde(rename = "eV")]
    ElectronVolt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ElectricDipoleUnit {
    #[serde(rename = "C*m")]
    CoulombMetre,
    #[serde(rename = "debye")]
    Debye,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MagneticDipoleUnit {
    #[serde(rename = "J/T")]
    JoulePerTesla,
    #[serde(rename = "bohr_magneton")]
    BohrMagneton,
}

impl EnergyUnit {
    pub fn parse(tag: &str) -> Result<Self> {
        match tag.trim() {
            "J" | "joule" => Ok(EnergyUnit::Joule),
            "eV" | "ev" | "electron_volt" => Ok(EnergyUnit::ElectronVolt),
            other => Err(Error::Unit { quantity: "energy", tag: other.to_string() }),
        }
    }

    pub fn to_si(self) -> f64 {
        match self {
            EnergyUnit::Joule => 1.0,
            EnergyUnit::ElectronVolt => consts::ELECTRON_VOLT,
        }
    }
}

impl ElectricDipoleUnit {
    pub fn parse(tag: &str) -> Result<Self> {
        match tag.trim() {
            "C*m" | "C m" | "C·m" | "Cm" => Ok(ElectricDipoleUnit::CoulombMetre),
            "debye" | "D" => Ok(ElectricDipoleUnit::Debye),
            other => Err(Error::Unit { quantity: "electric_dipole", tag: other.to_string() }),
        }
    }

    pub fn to_si(self) -> f64 {
        match self {
            ElectricDipoleUnit::CoulombMetre => 1.0,
            ElectricDipoleUnit::Debye => consts::DEBYE,
        }
    }
}

impl MagneticDipoleUnit {
    pub fn parse(tag: &str) -> Result<Self> {
        match tag.trim() {
            "J/T" => Ok(MagneticDipoleUnit::JoulePerTesla),
            "bohr_magneton" | "mu_B" | "muB" => Ok(MagneticDipoleUnit::BohrMagneton),
            other => Err(Error::Unit { quantity: "magnetic_dipole", tag: other.to_string() }),
        }
    }

    pub fn to_si(self) -> f64 {
        match self {
            MagneticDipoleUnit::JoulePerTesla => 1.0,
            MagneticDipoleUnit::BohrMagneton => consts::BOHR_MAGNETON,
        }
    }
}

/// Units declared by a model file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnitSystem {
    pub energy: EnergyUnit,
    pub electric_dipole: ElectricDipoleUnit,
    pub magnetic_dipole: MagneticDipoleUnit,
}

impl UnitSystem {
    pub const SI: UnitSystem = UnitSystem {
        energy: EnergyUnit::Joule,
        electric_dipole: ElectricDipoleUnit::CoulombMetre,
        magnetic_dipole: MagneticDipoleUnit::JoulePerTesla,
    };

    /// eV, debye, Bohr magnetons.
    pub const ATOMIC_LIKE: UnitSystem = UnitSystem {
        energy: EnergyUnit::ElectronVolt,
        electric_dipole: ElectricDipoleUnit::Debye,
        magnetic_dipole: MagneticDipoleUnit::BohrMagneton,
    };

    /// Named unit systems: `si` or `spectroscopic` (eV, debye, Bohr magnetons).
    pub fn from_tag(tag: &str) -> Result<Self> {
        match tag.trim() {
            "si" | "SI" => Ok(UnitSystem::SI),
            "spectroscopic" | "atomic_like" => Ok(UnitSystem::ATOMIC_LIKE),
            other => Err(Error::Unit { quantity: "unit system", tag: other.to_string() }),
        }
    }
}

impl Default for UnitSystem {
    fn default() -> Self {
        UnitSystem::SI
    }
}

// ---------------------------------------------------------------------------
// Tolerances

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Absolute energy splitting below which two levels count as degenerate, J.
    pub degeneracy_abs: f64,
    /// Relative splitting below which two levels count as degenerate.
    pub degeneracy_rel: f64,
    /// Absolute floor on |ħω − |E_rg||, J.
    pub resonance_guard: f64,
    /// Relative guard: ħω within this fraction of |E_rg| is resonant.
    pub resonance_rel: f64,
    /// Relative tolerance for Hermiticity of dipole matrices.
    pub hermiticity_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            degeneracy_abs: 1e-30,
            degeneracy_rel: 1e-9,
            resonance_guard: 1e-30,
            resonance_rel: 1e-3,
            hermiticity_rel: 1e-12,
        }
    }
}

/// Name of the environment variable selecting the default tolerance profile.
pub const TOLERANCE_PROFILE_ENV: &str = "FARADAY_TOLERANCE_PROFILE";

impl Tolerances {
    /// Named profiles: `default`, `strict`, `loose`.
    pub fn profile(name: &str) -> Result<Self> {
        let base = Tolerances::default();
        match name.trim() {
            "" | "default" => Ok(base),
            "strict" => Ok(Tolerances {
                degeneracy_rel: 1e-6,
                resonance_rel: 1e-2,
                hermiticity_rel: 1e-14,
                ..base
            }),
            "loose" => Ok(Tolerances {
                degeneracy_rel: 1e-12,
                resonance_rel: 1e-5,
                hermiticity_rel: 1e-9,
                ..base
            }),
            other => Err(Error::Config(format!("unknown tolerance profile '{other}'"))),
        }
    }

    /// Profile named by `FARADAY_TOLERANCE_PROFILE`, or the defaults.
    pub fn from_env() -> Result<Self> {
        match std::env::var(TOLERANCE_PROFILE_ENV) {
            Ok(name) => Tolerances::profile(&name),
            Err(_) => Ok(Tolerances::default()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("degeneracy_abs", self.degeneracy_abs),
            ("degeneracy_rel", self.degeneracy_rel),
            ("resonance_guard", self.resonance_guard),
            ("resonance_rel", self.resonance_rel),
            ("hermiticity_rel", self.hermiticity_rel),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::Config(format!("tolerance {name} must be strictly positive, got {value}")));
            }
        }
        Ok(())
    }

    /// Degeneracy threshold for a pair of energies.
    pub fn degeneracy_threshold(&self, e_i: f64, e_j: f64) -> f64 {
        self.degeneracy_abs
            .max(self.degeneracy_rel * e_i.abs().max(e_j.abs()))
    }

    /// Resonance threshold for a transition energy.
    pub fn resonance_threshold(&self, transition_energy: f64) -> f64 {
        self.resonance_guard
            .max(self.resonance_rel * transition_energy.abs())
    }
}

// ---------------------------------------------------------------------------
// Molecule

#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub label: String,
    /// Energy, J.
    pub energy: f64,
}

/// A finite-level molecule: energies plus Cartesian electric and magnetic
/// dipole transition-moment matrices in the energy eigenbasis.
#[derive(Debug, Clone, PartialEq)]
pub struct MolecularModel {
    levels: Vec<Level>,
    mu: [CMatrix; 3],
    m: [CMatrix; 3],
    ground: usize,
}

const AXES: [char; 3] = ['x', 'y', 'z'];

impl MolecularModel {
    /// Builds and validates a model. All inputs in SI.
    pub fn new(
        levels: Vec<Level>,
        mu: [CMatrix; 3],
        m: [CMatrix; 3],
        ground: usize,
        tol: &Tolerances,
    ) -> Result<Self> {
        let dim = levels.len();
        if dim < 2 {
            return Err(Error::InvalidModel(format!("need at least 2 levels, got {dim}")));
        }
        for (op, mats) in [("mu", &mu), ("m", &m)] {
            for (axis, mat) in AXES.iter().zip(mats.iter()) {
                if mat.nrows() != dim || mat.ncols() != dim {
                    return Err(Error::Shape(format!(
                        "{op}_{axis} is {}x{}, expected {dim}x{dim}",
                        mat.nrows(),
                        mat.ncols()
                    )));
                }
                if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                    return Err(Error::InvalidModel(format!("{op}_{axis} has non-finite entries")));
                }
            }
        }
        for (i, level) in levels.iter().enumerate() {
            if !level.energy.is_finite() {
                return Err(Error::InvalidModel(format!("level {i} ('{}') has non-finite energy", level.label)));
            }
            if levels[..i].iter().any(|l| l.label == level.label) {
                return Err(Error::InvalidModel(format!("duplicate level label '{}'", level.label)));
            }
        }
        if ground >= dim {
            return Err(Error::InvalidModel(format!("ground index {ground} out of range")));
        }
        let e_min = levels.iter().map(|l| l.energy).fold(f64::INFINITY, f64::min);
        if levels[ground].energy > e_min {
            return Err(Error::InvalidModel(format!(
                "ground level '{}' is not the lowest-energy level",
                levels[ground].label
            )));
        }
        check_hermitian("mu", &mu, tol.hermiticity_rel)?;
        check_hermitian("m", &m, tol.hermiticity_rel)?;
        Ok(MolecularModel { levels, mu, m, ground })
    }

    pub fn dim(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn energy(&self, i: usize) -> f64 {
        self.levels[i].energy
    }

    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }

    pub fn ground_index(&self) -> usize {
        self.ground
    }

    /// Electric dipole components (x, y, z), C·m.
    pub fn mu(&self) -> &[CMatrix; 3] {
        &self.mu
    }

    /// Magnetic dipole components (x, y, z), J/T.
    pub fn m(&self) -> &[CMatrix; 3] {
        &self.m
    }

    /// Electric dipole transition moment ⟨p|μ|q⟩ as a complex 3-vector.
    pub fn mu_vector(&self, p: usize, q: usize) -> [Complex64; 3] {
        [self.mu[0][(p, q)], self.mu[1][(p, q)], self.mu[2][(p, q)]]
    }

    /// Index of the level carrying `label`.
    pub fn level_index(&self, label: &str) -> Option<usize> {
        self.levels.iter().position(|l| l.label == label)
    }

    pub fn load(path: impl AsRef<Path>, fallback_units: UnitSystem) -> Result<Self> {
        load_model(path, fallback_units)
    }

    /// Serializes the model as a model file in SI units.
    pub fn to_json(&self) -> String {
        let file = ModelFile {
            name: None,
            description: None,
            units: Some(UnitsFile {
                energy: "J".into(),
                electric_dipole: "C*m".into(),
                magnetic_dipole: "J/T".into(),
            }),
            levels: self
                .levels
                .iter()
                .map(|l| LevelFile { label: l.label.clone(), energy: l.energy })
                .collect(),
            ground: self.levels[self.ground].label.clone(),
            mu: CartesianFile::from_matrices(&self.mu),
            m: CartesianFile::from_matrices(&self.m),
        };
        serde_json::to_string_pretty(&file).expect("model serialization cannot fail")
    }
}

fn check_hermitian(op: &'static str, mats: &[CMatrix; 3], rel: f64) -> Result<()> {
    for (axis, mat) in AXES.iter().zip(mats.iter()) {
        let scale = mat.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            continue;
        }
        for p in 0..mat.nrows() {
            for q in p..mat.ncols() {
                let deviation = (mat[(p, q)] - mat[(q, p)].conj()).norm();
                if deviation > rel * scale {
                    return Err(Error::HermiticityViolation {
                        operator: op,
                        component: *axis,
                        row: p,
                        col: q,
                        deviation,
                        scale,
                    });
                }
            }
        }
    }
    Ok(())
}

impl fmt::Display for MolecularModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-level model, ground '{}'", self.dim(), self.levels[self.ground].label)
    }
}

/// All pairs (i, j), i < j, closer in energy than the degeneracy threshold.
pub fn detect_degeneracy(model: &MolecularModel, tol: &Tolerances) -> Vec<(usize, usize)> {
    let energies = model.energies();
    let mut pairs = Vec::new();
    for i in 0..energies.len() {
        for j in (i + 1)..energies.len() {
            let (ei, ej) = (energies[i], energies[j]);
            if (ei - ej).abs() < tol.degeneracy_threshold(ei, ej) {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

/// Fails with [`Error::DegenerateSpectrum`] when any pair is degenerate.
pub fn require_nondegenerate(model: &MolecularModel, tol: &Tolerances) -> Result<()> {
    let pairs = detect_degeneracy(model, tol);
    if pairs.is_empty() {
        Ok(())
    } else {
        Err(Error::DegenerateSpectrum { pairs })
    }
}

// ---------------------------------------------------------------------------
// Field and experiment

/// Modes 1 and 2: one wave vector, two orthogonal real linear polarizations.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldConfig {
    k: Vec3,
    e1: Vec3,
    e2: Vec3,
    n_photons: u64,
    volume: f64,
}

const GEOMETRY_TOL: f64 = 1e-12;

impl FieldConfig {
    /// `k` in rad/m, `volume` in m³.
    pub fn new(k: Vec3, e1: Vec3, e2: Vec3, n_photons: u64, volume: f64) -> Result<Self> {
        let k_norm = k.norm();
        if !(k_norm.is_finite() && k_norm > 0.0) {
            return Err(Error::InvalidField("wave vector must be finite and nonzero".into()));
        }
        if !(volume.is_finite() && volume > 0.0) {
            return Err(Error::InvalidField(format!("quantization volume must be positive, got {volume}")));
        }
        let k_hat = k / k_norm;
        for (name, e) in [("e1", &e1), ("e2", &e2)] {
            if (e.norm() - 1.0).abs() > GEOMETRY_TOL {
                return Err(Error::InvalidField(format!("{name} is not a unit vector (|{name}| = {})", e.norm())));
            }
            if e.dot(&k_hat).abs() > GEOMETRY_TOL {
                return Err(Error::InvalidField(format!("{name} is not transverse to k")));
            }
        }
        if e1.dot(&e2).abs() > GEOMETRY_TOL {
            return Err(Error::InvalidField("e1 and e2 are not orthogonal".into()));
        }
        Ok(FieldConfig { k, e1, e2, n_photons, volume })
    }

    /// Builds k from a propagation direction and an angular frequency.
    pub fn from_direction(
        direction: Vec3,
        omega: f64,
        e1: Vec3,
        e2: Vec3,
        n_photons: u64,
        volume: f64,
    ) -> Result<Self> {
        let norm = direction.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidField("propagation direction must be nonzero".into()));
        }
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidField(format!("angular frequency must be positive, got {omega}")));
        }
        FieldConfig::new(direction / norm * (omega / consts::C), e1, e2, n_photons, volume)
    }

    /// Same geometry at a different angular frequency.
    pub fn with_omega(&self, omega: f64) -> Result<Self> {
        FieldConfig::from_direction(self.k, omega, self.e1, self.e2, self.n_photons, self.volume)
    }

    pub fn with_photons(&self, n_photons: u64) -> Self {
        FieldConfig { n_photons, ..self.clone() }
    }

    pub fn k(&self) -> &Vec3 {
        &self.k
    }

    pub fn k_hat(&self) -> Vec3 {
        self.k / self.k.norm()
    }

    pub fn e1(&self) -> &Vec3 {
        &self.e1
    }

    pub fn e2(&self) -> &Vec3 {
        &self.e2
    }

    pub fn n_photons(&self) -> u64 {
        self.n_photons
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// ω = c|k|, rad/s.
    pub fn omega(&self) -> f64 {
        consts::C * self.k.norm()
    }

    /// ħω, J.
    pub fn photon_energy(&self) -> f64 {
        consts::HBAR * self.omega()
    }

    /// Vacuum field amplitude per mode, √(ħω / 2ε₀V), V/m.
    pub fn field_amplitude(&self) -> f64 {
        (self.photon_energy() / (2.0 * consts::EPS0 * self.volume)).sqrt()
    }
}

/// Static field and sample parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    b: Vec3,
    length: f64,
    density: f64,
    n_molecules: u64,
}

impl ExperimentConfig {
    /// `b` in T, `length` in m, `density` in m⁻³.
    pub fn new(b: Vec3, length: f64, density: f64, n_molecules: u64) -> Result<Self> {
        if b.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidExperiment("magnetic field must be finite".into()));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidExperiment(format!("path length must be positive, got {length}")));
        }
        if !(density.is_finite() && density >= 0.0) {
            return Err(Error::InvalidExperiment(format!("number density must be nonnegative, got {density}")));
        }
        if n_molecules == 0 {
            return Err(Error::InvalidExperiment("molecule count must be positive".into()));
        }
        Ok(ExperimentConfig { b, length, density, n_molecules })
    }

    pub fn b(&self) -> &Vec3 {
        &self.b
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn density(&self) -> f64 {
        self.density
    }

    pub fn n_molecules(&self) -> u64 {
        self.n_molecules
    }

    pub fn with_b(&self, b: Vec3) -> Self {
        ExperimentConfig { b, ..self.clone() }
    }

    pub fn with_length(&self, length: f64) -> Result<Self> {
        ExperimentConfig::new(self.b, length, self.density, self.n_molecules)
    }

    pub fn with_molecules(&self, n_molecules: u64) -> Result<Self> {
        ExperimentConfig::new(self.b, self.length, self.density, n_molecules)
    }
}

// ---------------------------------------------------------------------------
// Model file

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    description: Option<String>,
    #[serde(default)]
    units: Option<UnitsFile>,
    levels: Vec<LevelFile>,
    ground: String,
    mu: CartesianFile,
    m: CartesianFile,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct UnitsFile {
    energy: String,
    electric_dipole: String,
    magnetic_dipole: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LevelFile {
    label: String,
    energy: f64,
}

type MatrixFile = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CartesianFile {
    x: MatrixFile,
    y: MatrixFile,
    z: MatrixFile,
}

impl CartesianFile {
    fn from_matrices(mats: &[CMatrix; 3]) -> Self {
        let conv = |mat: &CMatrix| -> MatrixFile {
            (0..mat.nrows())
                .map(|p| (0..mat.ncols()).map(|q| [mat[(p, q)].re, mat[(p, q)].im]).collect())
                .collect()
        };
        CartesianFile { x: conv(&mats[0]), y: conv(&mats[1]), z: conv(&mats[2]) }
    }

    fn to_matrices(&self, op: &str, dim: usize, scale: f64) -> Result<[CMatrix; 3]> {
        let conv = |axis: char, rows: &MatrixFile| -> Result<CMatrix> {
            if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                let cols: Vec<usize> = rows.iter().map(|r| r.len()).collect();
                return Err(Error::Shape(format!(
                    "{op}.{axis} has {} rows with lengths {cols:?}, expected {dim}x{dim}",
                    rows.len()
                )));
            }
            Ok(CMatrix::from_fn(dim, dim, |p, q| {
                let [re, im] = rows[p][q];
                Complex64::new(re * scale, im * scale)
            }))
        };
        Ok([conv('x', &self.x)?, conv('y', &self.y)?, conv('z', &self.z)?])
    }
}

/// Parses a model document. `fallback_units` applies when the document has no
/// `units` block.
pub fn parse_model(text: &str, fallback_units: UnitSystem, tol: &Tolerances) -> Result<MolecularModel> {
    let file: ModelFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let units = match &file.units {
        Some(u) => UnitSystem {
            energy: EnergyUnit::parse(&u.energy)?,
            electric_dipole: ElectricDipoleUnit::parse(&u.electric_dipole)?,
            magnetic_dipole: MagneticDipoleUnit::parse(&u.magnetic_dipole)?,
        },
        None => fallback_units,
    };
    let dim = file.levels.len();
    let levels: Vec<Level> = file
        .levels
        .iter()
        .map(|l| Level { label: l.label.clone(), energy: l.energy * units.energy.to_si() })
        .collect();
    let ground = levels
        .iter()
        .position(|l| l.label == file.ground)
        .ok_or_else(|| Error::InvalidModel(format!("ground label '{}' not among levels", file.ground)))?;
    let mu = file.mu.to_matrices("mu", dim, units.electric_dipole.to_si())?;
    let m = file.m.to_matrices("m", dim, units.magnetic_dipole.to_si())?;
    MolecularModel::new(levels, mu, m, ground, tol)
}

/// Reads and validates a model file with default tolerances.
pub fn load_model(path: impl AsRef<Path>, fallback_units: UnitSystem) -> Result<MolecularModel> {
    load_model_with(path, fallback_units, &Tolerances::default())
}

pub fn load_model_with(
    path: impl AsRef<Path>,
    fallback_units: UnitSystem,
    tol: &Tolerances,
) -> Result<MolecularModel> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_model(&text, fallback_units, tol)
}

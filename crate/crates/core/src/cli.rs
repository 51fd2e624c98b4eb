//! Config-driven front end: single points, dispersion scans θ(ω), field scans
//! θ(|B|), validation and oracle reports.
//!
//! A run config is a JSON document; relative paths inside it resolve against
//! the config file's directory. See `docs/config.md` for the schema and the
//! output columns.

use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::amplitude::{amplitude_second_order_closed, faraday_b_term_angle, via_amplitude_angle};
use crate::error::{Error, Result};
use crate::fock_oracle::{oracle_report, oracle_runs, FockBasis, OracleReport};
use crate::model::{
    consts, detect_degeneracy, load_model_with, ExperimentConfig, FieldConfig, MolecularModel, Tolerances,
    UnitSystem, Vec3,
};
use crate::perturbation::first_order_corrections;

// ---------------------------------------------------------------------------
// Config schema

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: PathBuf,
    /// Unit system assumed when the model file has no `units` block.
    #[serde(default)]
    pub units: Option<String>,
    pub field: FieldSection,
    pub experiment: ExperimentSection,
    #[serde(default)]
    pub scan: Option<ScanSection>,
    #[serde(default)]
    pub method: Method,
    #[serde(default)]
    pub output: Option<OutputSection>,
    /// Per-field overrides on top of the tolerance profile.
    #[serde(default)]
    pub tolerances: Option<serde_json::Value>,
    #[serde(default)]
    pub oracle: OracleSection,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSection {
    pub k_direction: [f64; 3],
    pub e1: [f64; 3],
    pub e2: [f64; 3],
    /// Angular frequency, rad/s. Exactly one of `omega` and `photon_energy_ev`.
    #[serde(default)]
    pub omega: Option<f64>,
    #[serde(default)]
    pub photon_energy_ev: Option<f64>,
    pub n_photons: u64,
    /// Quantization volume, m³.
    pub volume: f64,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    /// Static field, T.
    pub b: [f64; 3],
    /// Path length, m.
    pub length: f64,
    /// Number density, m⁻³.
    pub density: f64,
    pub n_molecules: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanVariable {
    Omega,
    #[serde(alias = "B_magnitude")]
    BMagnitude,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSection {
    pub variable: ScanVariable,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    #[default]
    BTerm,
    ViaAmplitude,
    Oracle,
    All,
}

impl Method {
    fn b_term(self) -> bool {
        matches!(self, Method::BTerm | Method::All)
    }

    fn via_amplitude(self) -> bool {
        matches!(self, Method::ViaAmplitude | Method::All)
    }

    fn oracle(self) -> bool {
        matches!(self, Method::Oracle | Method::All)
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "b_term" => Ok(Method::BTerm),
            "via_amplitude" => Ok(Method::ViaAmplitude),
            "oracle" => Ok(Method::Oracle),
            "all" => Ok(Method::All),
            other => Err(Error::Config(format!("unknown method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Config(format!("unknown output format '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub path: PathBuf,
    #[serde(default)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSection {
    /// Defaults to the photon number.
    #[serde(default)]
    pub n1_max: Option<u64>,
    /// Defaults to 2.
    #[serde(default)]
    pub n2_max: Option<u64>,
    /// Interaction time, s. Defaults to length / c.
    #[serde(default)]
    pub time: Option<f64>,
}

/// Command-line overrides applied on top of a config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub model: Option<PathBuf>,
    pub method: Option<Method>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub points: Option<usize>,
}

/// A config with its paths resolved and its tolerances built.
#[derive(Debug, Clone)]
pub struct ResolvedConfig {
    pub config: RunConfig,
    pub model_path: PathBuf,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub tolerances: Tolerances,
}

fn resolve_path(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

fn format_for(path: &Path, declared: Option<Format>) -> Format {
    declared.unwrap_or_else(|| match path.extension().and_then(|e| e.to_str()) {
        Some("json") => Format::Json,
        _ => Format::Csv,
    })
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid run config: {e}")))
}

/// Reads a config file and applies overrides. Override paths are taken
/// relative to the working directory, config paths relative to the config.
pub fn load_config(path: &Path, overrides: &Overrides) -> Result<ResolvedConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut config = parse_config(&text)?;
    let base = path.parent().unwrap_or(Path::new("."));

    let model_path = match &overrides.model {
        Some(p) => p.clone(),
        None => resolve_path(base, &config.model),
    };
    if let Some(method) = overrides.method {
        config.method = method;
    }
    if let Some(points) = overrides.points {
        match config.scan.as_mut() {
            Some(scan) => scan.points = points,
            None => return Err(Error::Config("--points given but the config has no scan section".into())),
        }
    }
    let output = match (&overrides.output, &config.output) {
        (Some(p), _) => Some(p.clone()),
        (None, Some(o)) => Some(resolve_path(base, &o.path)),
        (None, None) => None,
    };
    let declared = overrides.format.or(config.output.as_ref().and_then(|o| o.format));
    let format = match &output {
        Some(p) => format_for(p, declared),
        None => declared.unwrap_or_default(),
    };
    let tolerances = build_tolerances(config.tolerances.as_ref())?;
    Ok(ResolvedConfig { config, model_path, output, format, tolerances })
}

fn build_tolerances(overrides: Option<&serde_json::Value>) -> Result<Tolerances> {
    let base = Tolerances::from_env()?;
    let tol = match overrides {
        None => base,
        Some(value) => {
            let mut merged = serde_json::to_value(base).expect("tolerances serialize");
            let (Some(target), Some(src)) = (merged.as_object_mut(), value.as_object()) else {
                return Err(Error::Config("tolerances must be an object".into()));
            };
            for (k, v) in src {
                target.insert(k.clone(), v.clone());
            }
            serde_json::from_value(merged).map_err(|e| Error::Config(format!("invalid tolerances: {e}")))?
        }
    };
    tol.validate()?;
    Ok(tol)
}

impl RunConfig {
    pub fn omega(&self) -> Result<f64> {
        match (self.field.omega, self.field.photon_energy_ev) {
            (Some(w), None) => Ok(w),
            (None, Some(ev)) => Ok(ev * consts::ELECTRON_VOLT / consts::HBAR),
            _ => Err(Error::Config("field needs exactly one of omega and photon_energy_ev".into())),
        }
    }

    pub fn field_config(&self) -> Result<FieldConfig> {
        FieldConfig::from_direction(
            Vec3::from(self.field.k_direction),
            self.omega()?,
            Vec3::from(self.field.e1),
            Vec3::from(self.field.e2),
            self.field.n_photons,
            self.field.volume,
        )
    }

    pub fn experiment_config(&self) -> Result<ExperimentConfig> {
        let x = &self.experiment;
        ExperimentConfig::new(Vec3::from(x.b), x.length, x.density, x.n_molecules)
    }

    pub fn unit_system(&self) -> Result<UnitSystem> {
        match &self.units {
            Some(tag) => UnitSystem::from_tag(tag).map_err(|e| Error::Config(e.to_string())),
            None => Ok(UnitSystem::SI),
        }
    }

    /// Scan values; a config without a scan is a single point at the
    /// configured ω or |B|.
    pub fn scan_values(&self) -> Result<(ScanVariable, Vec<f64>)> {
        match &self.scan {
            None => Ok((ScanVariable::Omega, vec![self.omega()?])),
            Some(scan) => Ok((scan.variable, scan_grid(scan)?)),
        }
    }
}

pub fn scan_grid(scan: &ScanSection) -> Result<Vec<f64>> {
    if scan.points == 0 {
        return Err(Error::Config("scan needs at least one point".into()));
    }
    if !(scan.start.is_finite() && scan.stop.is_finite()) {
        return Err(Error::Config("scan bounds must be finite".into()));
    }
    if scan.points == 1 {
        return Ok(vec![scan.start]);
    }
    if !(scan.start < scan.stop) {
        return Err(Error::Config(format!("scan start {} must be below stop {}", scan.start, scan.stop)));
    }
    let n = scan.points - 1;
    match scan.spacing {
        Spacing::Linear => Ok((0..=n)
            .map(|i| if i == n { scan.stop } else { scan.start + (scan.stop - scan.start) * i as f64 / n as f64 })
            .collect()),
        Spacing::Log => {
            if scan.start <= 0.0 {
                return Err(Error::Config("log spacing needs a positive start".into()));
            }
            let (a, b) = (scan.start.ln(), scan.stop.ln());
            Ok((0..=n)
                .map(|i| match i {
                    0 => scan.start,
                    i if i == n => scan.stop,
                    i => (a + (b - a) * i as f64 / n as f64).exp(),
                })
                .collect())
        }
    }
}

// ---------------------------------------------------------------------------
// Run

/// One scan point. `None` marks a value that could not be computed (see
/// `warnings`) or was not requested.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub scan_index: usize,
    pub scan_value: f64,
    pub theta_b_term: Option<f64>,
    pub theta_via_amplitude: Option<f64>,
    pub theta_oracle: Option<f64>,
    pub amplitude_abs: Option<f64>,
    pub leakage: Option<f64>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunOutput {
    pub scan_variable: ScanVariable,
    pub method: Method,
    pub rows: Vec<Row>,
}

/// Error at a specific scan point.
#[derive(Debug)]
pub struct PointError {
    pub scan_index: Option<usize>,
    pub error: Error,
}

impl From<Error> for PointError {
    fn from(error: Error) -> Self {
        PointError { scan_index: None, error }
    }
}

impl PointError {
    /// Machine-readable record for stderr.
    pub fn record(&self) -> serde_json::Value {
        serde_json::json!({
            "error": self.error.kind(),
            "message": self.error.to_string(),
            "scan_index": self.scan_index,
            "exit_code": self.error.exit_code(),
        })
    }
}

/// Point-level context shared by every scan point.
struct Inputs<'a> {
    model: &'a MolecularModel,
    field: FieldConfig,
    experiment: ExperimentConfig,
    tol: Tolerances,
    method: Method,
    oracle: OracleSection,
}

/// Coupling below this fraction of the Hamiltonian's energy scale cannot be
/// resolved by a double-precision exact evolution.
const ORACLE_RESOLUTION: f64 = 1e-12;

impl Inputs<'_> {
    fn point(&self, scan_variable: ScanVariable, index: usize, value: f64) -> std::result::Result<Row, PointError> {
        let at = |error: Error| PointError { scan_index: Some(index), error };
        let (field, experiment) = match scan_variable {
            ScanVariable::Omega => (self.field.with_omega(value).map_err(at)?, self.experiment.clone()),
            ScanVariable::BMagnitude => {
                let b = self.experiment.b();
                let direction = if b.norm() > 0.0 { b / b.norm() } else { self.field.k_hat() };
                (self.field.clone(), self.experiment.with_b(direction * value))
            }
        };

        let mut row = Row {
            scan_index: index,
            scan_value: value,
            theta_b_term: None,
            theta_via_amplitude: None,
            theta_oracle: None,
            amplitude_abs: None,
            leakage: None,
            warnings: Vec::new(),
        };
        let soft = |row: &mut Row, err: Error| -> std::result::Result<(), PointError> {
            match err {
                Error::NearResonance { .. } => {
                    row.warnings.push(format!("{}: {}", err.kind(), err));
                    Ok(())
                }
                other => Err(at(other)),
            }
        };

        let pm = first_order_corrections(self.model, experiment.b(), &self.tol).map_err(at)?;
        for w in pm.warnings() {
            row.warnings.push(format!("SmallDenominator: levels {} and {} gap {:.3e} J", w.i, w.j, w.gap));
        }
        match amplitude_second_order_closed(&pm, &field, &self.tol) {
            Ok(m) => row.amplitude_abs = Some(m.abs()),
            Err(e) => soft(&mut row, e)?,
        }
        if self.method.b_term() {
            match faraday_b_term_angle(self.model, &field, &experiment, &self.tol) {
                Ok(r) => row.theta_b_term = Some(r.theta),
                Err(e) => soft(&mut row, e)?,
            }
        }
        if self.method.via_amplitude() && row.amplitude_abs.is_some() {
            match via_amplitude_angle(self.model, &field, &experiment, &self.tol) {
                Ok(r) => row.theta_via_amplitude = Some(r.theta),
                Err(e) => soft(&mut row, e)?,
            }
        }
        if self.method.oracle() {
            if let Some(m_abs) = row.amplitude_abs {
                self.oracle_point(&field, &experiment, m_abs, &mut row).map_err(at)?;
            }
        }
        row.warnings.dedup();
        Ok(row)
    }

    fn oracle_point(&self, field: &FieldConfig, experiment: &ExperimentConfig, m_abs: f64, row: &mut Row) -> Result<()> {
        let basis = FockBasis::new(
            self.model.dim(),
            self.oracle.n1_max.unwrap_or(field.n_photons()),
            self.oracle.n2_max.unwrap_or(2),
        )?;
        let energies = self.model.energies();
        let g = self.model.ground_index();
        let spread = energies.iter().map(|e| (e - energies[g]).abs()).fold(0.0, f64::max);
        let scale = spread + field.photon_energy() * (basis.n1_max() + basis.n2_max() + 1) as f64;
        if m_abs < ORACLE_RESOLUTION * scale {
            row.warnings.push(format!(
                "OracleUnresolved: |M| = {m_abs:.3e} J is below {ORACLE_RESOLUTION:e} of the energy scale {scale:.3e} J"
            ));
            return Ok(());
        }
        let t = self.oracle.time.unwrap_or(experiment.length() / consts::C);
        let run = oracle_runs(self.model, field, experiment.b(), &basis, &[t])?.remove(0);
        // Forward scattering is coherent: N molecules rotate N times as far.
        row.theta_oracle = Some(run.theta * experiment.n_molecules() as f64);
        row.leakage = Some(run.leakage);
        Ok(())
    }
}

/// Computes every scan point. Points run concurrently; rows come back in scan
/// order. Near-resonant points become nulls with a warning; any other error
/// aborts the run and names the offending point.
pub fn run(resolved: &ResolvedConfig) -> std::result::Result<RunOutput, PointError> {
    let config = &resolved.config;
    let units = config.unit_system()?;
    let model = load_model_with(&resolved.model_path, units, &resolved.tolerances)?;
    let (variable, values) = config.scan_values()?;
    let inputs = Inputs {
        model: &model,
        field: config.field_config()?,
        experiment: config.experiment_config()?,
        tol: resolved.tolerances,
        method: config.method,
        oracle: config.oracle.clone(),
    };
    let rows = values
        .par_iter()
        .enumerate()
        .map(|(i, &v)| inputs.point(variable, i, v))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(RunOutput { scan_variable: variable, method: config.method, rows })
}

pub const CSV_HEADER: &str = "scan_index,scan_variable,scan_value,theta_b_term_rad,theta_via_amplitude_rad,theta_oracle_rad,amplitude_abs_j,leakage,warnings";

fn csv_number(x: Option<f64>) -> String {
    // Adding zero folds −0 into +0.
    x.map(|v| format!("{:.16e}", v + 0.0)).unwrap_or_default()
}

fn csv_text(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl RunOutput {
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let variable = match self.scan_variable {
            ScanVariable::Omega => "omega",
            ScanVariable::BMagnitude => "b_magnitude",
        };
        writeln!(out, "{CSV_HEADER}")?;
        for row in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                row.scan_index,
                variable,
                csv_number(Some(row.scan_value)),
                csv_number(row.theta_b_term),
                csv_number(row.theta_via_amplitude),
                csv_number(row.theta_oracle),
                csv_number(row.amplitude_abs),
                csv_number(row.leakage),
                csv_text(&row.warnings.join("; ")),
            )?;
        }
        Ok(())
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut out, self)?;
        writeln!(out)
    }

    pub fn render(&self, format: Format) -> Vec<u8> {
        let mut buf = Vec::new();
        match format {
            Format::Csv => self.write_csv(&mut buf),
            Format::Json => self.write_json(&mut buf),
        }
        .expect("writing to a Vec cannot fail");
        buf
    }
}

/// Runs and writes the output file (or stdout when none is configured). Nothing
/// is written unless every point succeeds.
pub fn run_and_write(resolved: &ResolvedConfig) -> std::result::Result<RunOutput, PointError> {
    let output = run(resolved)?;
    match &resolved.output {
        Some(path) => {
            std::fs::write(path, output.render(resolved.format)).map_err(|source| Error::Io {
                path: path.display().to_string(),
                source,
            })?;
        }
        None => {
            std::io::stdout()
                .write_all(&output.render(resolved.format))
                .map_err(|source| Error::Io { path: "<stdout>".into(), source })?;
        }
    }
    Ok(output)
}

// ---------------------------------------------------------------------------
// Validate

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResonanceHit {
    pub transition: String,
    pub omega_transition: f64,
    /// Scan points within the resonance guard.
    pub guarded_indices: Vec<usize>,
    /// Scan point closest to the transition when the scan range brackets it.
    pub nearest_index: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub pass: bool,
    pub checks: Vec<Check>,
    pub degenerate_pairs: Vec<(String, String)>,
    pub resonances: Vec<ResonanceHit>,
}

impl ValidationReport {
    /// Every scan index flagged as resonant, ascending.
    pub fn resonant_indices(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = self
            .resonances
            .iter()
            .flat_map(|r| r.guarded_indices.iter().copied().chain(r.nearest_index))
            .collect();
        idx.sort_unstable();
        idx.dedup();
        idx
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!("{} {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail));
        }
        out.push_str(if self.pass { "pass\n" } else { "fail\n" });
        out
    }
}

struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.0.push(Check { name: name.to_string(), passed, detail: detail.into() });
    }
}

/// Checks a config without computing anything.
pub fn validate(config_path: &Path, overrides: &Overrides) -> ValidationReport {
    let mut checks = Checks(Vec::new());
    let report = |checks: Checks, degenerate_pairs, resonances| {
        let pass = checks.0.iter().all(|c| c.passed);
        ValidationReport { pass, checks: checks.0, degenerate_pairs, resonances }
    };

    let resolved = match load_config(config_path, overrides) {
        Ok(r) => {
            checks.push("config", true, format!("{} parsed", config_path.display()));
            r
        }
        Err(e) => {
            checks.push("config", false, e.to_string());
            return report(checks, Vec::new(), Vec::new());
        }
    };
    let config = &resolved.config;
    let tol = resolved.tolerances;

    let model = config
        .unit_system()
        .and_then(|units| load_model_with(&resolved.model_path, units, &tol));
    let model = match model {
        Ok(m) => {
            checks.push("model", true, format!("{} ({})", m, resolved.model_path.display()));
            Some(m)
        }
        Err(e) => {
            checks.push("model", false, format!("{}: {e}", e.kind()));
            None
        }
    };

    let field = config.field_config();
    match &field {
        Ok(f) => checks.push("field", true, format!("omega = {:.6e} rad/s, n = {}", f.omega(), f.n_photons())),
        Err(e) => checks.push("field", false, e.to_string()),
    }
    let experiment = config.experiment_config();
    match &experiment {
        Ok(_) => checks.push("experiment", true, "ok"),
        Err(e) => checks.push("experiment", false, e.to_string()),
    }
    if let (Ok(f), Ok(x)) = (&field, &experiment) {
        let implied = x.n_molecules() as f64 / f.volume();
        let rel = (implied - x.density()).abs() / x.density().max(implied);
        let consistent = rel <= 1e-9 || (implied == 0.0 && x.density() == 0.0);
        checks.push(
            "density",
            consistent,
            format!("n_molecules / volume = {implied:.6e} m^-3, density = {:.6e} m^-3", x.density()),
        );
    }

    let scan = config.scan_values();
    match &scan {
        Ok((_, values)) => checks.push("scan", true, format!("{} point(s)", values.len())),
        Err(e) => checks.push("scan", false, e.to_string()),
    }

    let mut degenerate_pairs = Vec::new();
    let mut resonances = Vec::new();
    if let Some(model) = &model {
        let pairs = detect_degeneracy(model, &tol);
        let labels = |i: usize| model.levels()[i].label.clone();
        degenerate_pairs = pairs.iter().map(|&(i, j)| (labels(i), labels(j))).collect();
        if pairs.is_empty() {
            checks.push("degeneracy", true, "non-degenerate spectrum");
        } else {
            let names: Vec<String> = degenerate_pairs.iter().map(|(a, b)| format!("({a}, {b})")).collect();
            checks.push(
                "degeneracy",
                false,
                format!("degenerate levels {}; Faraday A and C terms are unsupported", names.join(", ")),
            );
        }

        if let (Ok(f), Ok((variable, values))) = (&field, &scan) {
            let omegas: Vec<f64> = match variable {
                ScanVariable::Omega => values.clone(),
                ScanVariable::BMagnitude => vec![f.omega(); values.len()],
            };
            resonances = find_resonances(model, &omegas, &tol);
            if resonances.is_empty() {
                checks.push("resonance", true, "scan stays clear of every transition");
            } else {
                let detail: Vec<String> = resonances
                    .iter()
                    .map(|r| {
                        let mut idx = r.guarded_indices.clone();
                        idx.extend(r.nearest_index);
                        idx.sort_unstable();
                        idx.dedup();
                        format!("{} (omega = {:.6e} rad/s) at scan indices {:?}", r.transition, r.omega_transition, idx)
                    })
                    .collect();
                checks.push("resonance", false, detail.join("; "));
            }
        }
    }
    report(checks, degenerate_pairs, resonances)
}

fn find_resonances(model: &MolecularModel, omegas: &[f64], tol: &Tolerances) -> Vec<ResonanceHit> {
    let g = model.ground_index();
    let mut hits = Vec::new();
    for r in (0..model.dim()).filter(|&r| r != g) {
        let e_rg = model.energy(r) - model.energy(g);
        let guard = tol.resonance_threshold(e_rg);
        let omega_rg = e_rg.abs() / consts::HBAR;
        let guarded_indices: Vec<usize> = omegas
            .iter()
            .enumerate()
            .filter(|(_, &w)| (consts::HBAR * w - e_rg.abs()).abs() < guard)
            .map(|(i, _)| i)
            .collect();
        let lo = omegas.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = omegas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let nearest_index = (omegas.len() > 1 && lo < omega_rg && omega_rg < hi)
            .then(|| {
                omegas
                    .iter()
                    .enumerate()
                    .min_by(|a, b| (a.1 - omega_rg).abs().total_cmp(&(b.1 - omega_rg).abs()))
                    .map(|(i, _)| i)
            })
            .flatten();
        if !guarded_indices.is_empty() || nearest_index.is_some() {
            hits.push(ResonanceHit {
                transition: format!("{}->{}", model.levels()[g].label, model.levels()[r].label),
                omega_transition: omega_rg,
                guarded_indices,
                nearest_index,
            });
        }
    }
    hits
}

// ---------------------------------------------------------------------------
// Oracle report

/// Exact-evolution comparison at the configured point (first scan value).
pub fn oracle_report_from_config(resolved: &ResolvedConfig) -> std::result::Result<OracleReport, PointError> {
    let config = &resolved.config;
    let units = config.unit_system()?;
    let model = load_model_with(&resolved.model_path, units, &resolved.tolerances)?;
    let field = config.field_config()?;
    let experiment = config.experiment_config()?;
    let basis = FockBasis::new(
        model.dim(),
        config.oracle.n1_max.unwrap_or(field.n_photons()),
        config.oracle.n2_max.unwrap_or(2),
    )?;
    let t = config.oracle.time.unwrap_or(experiment.length() / consts::C);
    Ok(oracle_report(&model, &field, &experiment, &basis, t, &resolved.tolerances)?)
}

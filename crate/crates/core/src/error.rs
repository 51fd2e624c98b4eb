use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown unit tag '{tag}' for {quantity}")]
    Unit { quantity: &'static str, tag: String },

    #[error("{operator}_{component} is not Hermitian: entry ({row},{col}) deviates by {deviation:.3e} (scale {scale:.3e})")]
    HermiticityViolation {
        operator: &'static str,
        component: char,
        row: usize,
        col: usize,
        deviation: f64,
        scale: f64,
    },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid field configuration: {0}")]
    InvalidField(String),

    #[error("invalid experiment configuration: {0}")]
    InvalidExperiment(String),

    #[error("degenerate spectrum: level pairs {pairs:?} (Faraday A and C terms require degenerate perturbation theory and are not supported)")]
    DegenerateSpectrum { pairs: Vec<(usize, usize)> },

    #[error("near resonance: photon energy {photon_energy:.6e} J lies within the guard of transition {from}->{to} ({transition_energy:.6e} J)")]
    NearResonance {
        from: usize,
        to: usize,
        photon_energy: f64,
        transition_energy: f64,
    },

    #[error("no photons in mode 1")]
    NoPhotons,

    #[error("step {dt:.3e} s exceeds the RK4 stability bound {bound:.3e} s")]
    StepTooLarge { dt: f64, bound: f64 },

    #[error("time step must be positive, got {0:e}")]
    NonPositiveStep(f64),

    #[error("time grid must be nonnegative and ascending")]
    InvalidTimeGrid,

    #[error("mode 1 occupation {0:e} is not positive: rotation angle undefined")]
    EmptyMode1(f64),

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("eigensolver failed to converge (dimension {0})")]
    ConvergenceFailure(usize),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Stable machine-readable tag for error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "ParseError",
            Error::Unit { .. } => "UnitError",
            Error::HermiticityViolation { .. } => "HermiticityViolation",
            Error::Shape(_) => "ShapeError",
            Error::InvalidModel(_) => "InvalidModel",
            Error::InvalidField(_) => "InvalidField",
            Error::InvalidExperiment(_) => "InvalidExperiment",
            Error::DegenerateSpectrum { .. } => "DegenerateSpectrum",
            Error::NearResonance { .. } => "NearResonance",
            Error::NoPhotons => "NoPhotons",
            Error::StepTooLarge { .. } => "StepTooLarge",
            Error::NonPositiveStep(_) => "NonPositiveStep",
            Error::InvalidTimeGrid => "InvalidTimeGrid",
            Error::EmptyMode1(_) => "EmptyMode1",
            Error::Dimension(_) => "DimensionError",
            Error::ConvergenceFailure(_) => "ConvergenceFailure",
            Error::Config(_) => "ConfigError",
            Error::Io { .. } => "IoError",
        }
    }

    /// Process exit code: 2 config, 3 model, 4 numerical.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Io { .. } | Error::InvalidField(_) | Error::InvalidExperiment(_) => 2,
            Error::Parse(_)
            | Error::Unit { .. }
            | Error::HermiticityViolation { .. }
            | Error::Shape(_)
            | Error::InvalidModel(_)
            | Error::DegenerateSpectrum { .. } => 3,
            _ => 4,
        }
    }
}

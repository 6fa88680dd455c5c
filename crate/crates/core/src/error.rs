use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no Morse/Casimir matching point in ({lo} Å, {hi} Å)")]
    NoMatchingRoot { lo: f64, hi: f64 },

    #[error("multiple Morse/Casimir matching points found: {candidates:?} Å")]
    MultipleMatchingRoots { candidates: Vec<f64> },

    #[error("channel n = {n} requested on a flat surface")]
    FlatSurfaceOrder { n: i32 },

    #[error("diffraction order {n} is evanescent (cos θ_n = {cos_theta})")]
    EvanescentOrder { n: i32, cos_theta: f64 },

    #[error("step {step} Å at z = {z} Å exceeds the resolution limit {limit} Å")]
    StepTooCoarse { z: f64, step: f64, limit: f64 },

    #[error("non-finite value during propagation at z = {z} Å")]
    NonFinite { z: f64 },

    #[error("z_max = {z_max} Å is not asymptotic: |V| = {magnitude:e} meV")]
    NotAsymptotic { z_max: f64, magnitude: f64 },

    #[error("singular matching system at z_max")]
    SingularMatching,

    #[error("no reflected flux to normalize (P_QR = {p_qr:e})")]
    NoReflectedFlux { p_qr: f64 },

    #[error("need at least {needed} points, got {got}")]
    InsufficientPoints { needed: usize, got: usize },

    #[error("scan failed at θ = {theta_mrad} mrad: {source}")]
    ScanPoint {
        theta_mrad: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("unknown surface preset `{name}` (available: {available})")]
    UnknownPreset { name: String, available: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

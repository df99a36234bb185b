use thiserror::Error;

/// Unified error type. Every variant names the violated invariant so CLI
/// messages can surface it verbatim.
#[derive(Debug, Error)]
pub enum SchottkyError {
    #[error("NotLoxodromic: eigenvalue moduli equal within 1e-12 (parabolic/elliptic input)")]
    NotLoxodromic,
    #[error("DiscsOverlap: closed pairing discs {0} and {1} intersect")]
    DiscsOverlap(usize, usize),
    #[error("PairingBroken: image of circle {0} is not circle {1} within tolerance")]
    PairingBroken(usize, usize),
    #[error("WordNotReduced: adjacent inverse pair at position {0}")]
    WordNotReduced(usize),
    #[error("DegenerateEndpoints: geodesic endpoints coincide")]
    DegenerateEndpoints,
    #[error("LevelTooLarge: level {0} exceeds the configured cap {1}")]
    LevelTooLarge(usize, usize),
    #[error("NonpositiveMeasure: cylinder measure must be strictly positive")]
    NonpositiveMeasure,
    #[error("PoleAtNonpositiveInteger: gamma evaluated at a non-positive integer")]
    PoleAtNonpositiveInteger,
    #[error("PoleAtZEqualsOne: Hurwitz zeta has a pole at z = 1")]
    PoleAtZEqualsOne,
    #[error("UnsupportedSpectrum: {0}")]
    UnsupportedSpectrum(String),
    #[error("BranchCut: shifted eigenvalue s - lambda lies on (-inf, 0]")]
    BranchCut,
    #[error("NonConvergence: {0}")]
    NonConvergence(String),
    #[error("DepthTooLarge: depth {0} produces more than {1} cylinders")]
    DepthTooLarge(usize, usize),
    #[error("NestingViolated: cylinder disc of word {0:?} escapes its parent")]
    NestingViolated(Vec<usize>),
    #[error("DimensionOutOfRange: leading eigenvalue at s=0 is below 1")]
    DimensionOutOfRange,
    #[error("TailNotSmall: Selberg tail bound {0:.3e} exceeds 1e-3")]
    TailNotSmall(f64),
    #[error("WordTooLong: word length {0} exceeds depth {1}")]
    WordTooLong(usize, usize),
    #[error("GroupFileInvalid: {0}")]
    GroupFileInvalid(String),
    #[error("Io: {0}")]
    Io(#[from] std::io::Error),
    #[error("Json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, SchottkyError>;

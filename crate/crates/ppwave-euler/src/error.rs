use thiserror::Error;

/// Everything that can go wrong in the library.
///
/// Numeric diagnostics are carried as `f64` regardless of the scalar type so
/// that errors stay `Clone + PartialEq` and print uniformly.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("configuration shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("singular point: conformal factor vanishes near (tau, sigma) = ({tau}, {sigma})")]
    SingularPoint { tau: f64, sigma: f64 },

    #[error("endpoint singularity: |x| or |y| reached 1 at ({x}, {y})")]
    Endpoint { x: f64, y: f64 },

    #[error("degenerate phase lattice: characteristics are parallel")]
    DegenerateLattice,

    #[error("epsilon {epsilon} too large (limit {limit})")]
    EpsilonTooLarge { epsilon: f64, limit: f64 },

    #[error("grid_n = {grid_n} too coarse (minimum {minimum})")]
    GridTooCoarse { grid_n: usize, minimum: usize },

    #[error("no spectrum for k = {k}: smallest admissible k is {min_k}")]
    NoSpectrum { k: i64, min_k: i64 },

    #[error("arctanh divergence at u = 1")]
    ArcTanhDivergence,

    #[error("region contains {count} singular point(s)")]
    RegionNotRegular { count: usize },

    #[error("no sign change of the p+ condition in [{lo}, {hi}]; left side ranges over [{min}, {max}]")]
    NoBracket { lo: f64, hi: f64, min: f64, max: f64 },

    #[error("not converged: {0}")]
    NotConverged(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParams(_) => "invalid_params",
            Error::InvalidConfig(_) => "invalid_config",
            Error::Parse { .. } => "parse",
            Error::ShapeMismatch(_) => "shape_mismatch",
            Error::SingularPoint { .. } => "singular_point",
            Error::Endpoint { .. } => "endpoint",
            Error::DegenerateLattice => "degenerate_lattice",
            Error::EpsilonTooLarge { .. } => "epsilon_too_large",
            Error::GridTooCoarse { .. } => "grid_too_coarse",
            Error::NoSpectrum { .. } => "no_spectrum",
            Error::ArcTanhDivergence => "arctanh_divergence",
            Error::RegionNotRegular { .. } => "region_not_regular",
            Error::NoBracket { .. } => "no_bracket",
            Error::NotConverged(_) => "not_converged",
        }
    }

    /// Whether the error describes bad input rather than a numeric failure.
    pub fn is_input(&self) -> bool {
        matches!(
            self,
            Error::InvalidParams(_) | Error::InvalidConfig(_) | Error::Parse { .. } | Error::ShapeMismatch(_)
        )
    }
}

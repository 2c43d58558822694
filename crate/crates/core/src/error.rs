use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated a documented precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation point coincides with the field source.
    #[error("source singularity: separation {0:.3e} below threshold")]
    Singularity(f64),

    /// Field evaluation requested closer to the boundary than the
    /// quadrature supports.
    #[error("point is {dist:.3e} from the boundary, minimum supported distance is {min:.3e}")]
    NearBoundary { dist: f64, min: f64 },

    /// Invalid scene: overlapping curves, sources inside obstacles, ...
    #[error("geometry error: {0}")]
    Geometry(String),

    /// The dense boundary system could not be solved.
    #[error("linear solve failed: {0}")]
    Solver(String),

    /// An operation requiring complex total-field data got magnitude-only data.
    #[error("dataset carries no phase information")]
    MissingPhase,

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// Quantile thresholds are undefined on a constant image.
    #[error("image is constant")]
    ConstantImage,

    /// Malformed dataset or image file.
    #[error("format error: {0}")]
    Format(String),

    /// Malformed experiment configuration.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// `true` for errors caused by bad user input (config/recipe files),
    /// as opposed to numerical failures at run time.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config(_) | Error::Domain(_))
    }
}

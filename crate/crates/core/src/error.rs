use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("missing field `{0}`")]
    MissingField(String),

    #[error("coefficient count mismatch: {form} form expects {expected} coefficients, got {got}")]
    CoefficientCount {
        form: &'static str,
        expected: &'static str,
        got: usize,
    },

    #[error("empty valid range [{min}, {max}] um")]
    EmptyRange { min: f64, max: f64 },

    #[error("wavelength {wavelength} um is outside the valid range [{min}, {max}] um of `{medium}`")]
    OutOfRange {
        medium: String,
        wavelength: f64,
        min: f64,
        max: f64,
    },

    #[error("unknown medium `{0}`")]
    UnknownMedium(String),

    #[error("invalid parameter `{name}`: {detail}")]
    InvalidParameter { name: &'static str, detail: String },

    /// A physics domain violation: the named quantity has no real solution.
    #[error("domain error in {quantity}: {detail}")]
    Domain { quantity: &'static str, detail: String },

    #[error("erfi({re}{im:+}i) overflows double precision; use erfi_scaled for this argument")]
    Overflow { re: f64, im: f64 },

    #[error("chirp rate is zero: the chirped amplitude is undefined for an unchirped grating")]
    Unchirped,

    #[error("frequency grid is not uniform")]
    NonUniformGrid,

    #[error("spectrum has {0} flagged cells; the transform needs the full band")]
    FlaggedCells(usize),

    #[error("compensator reference grid does not match the amplitude grid")]
    GridMismatch,

    #[error("shape mismatch: {0} vs {1} samples")]
    ShapeMismatch(usize, usize),

    #[error("trace peak sits on the grid boundary")]
    PeakAtBoundary,

    #[error("trace never falls below half maximum inside the grid")]
    NoHalfMaximum,

    #[error("{0}")]
    Grid(String),

    #[error("FFT and direct quadrature disagree at tau = {tau} fs (deviation {deviation:e})")]
    TransformMismatch { tau: f64, deviation: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for malformed input documents, as opposed to physics failures.
    pub fn is_schema(&self) -> bool {
        matches!(
            self,
            Error::MissingField(_)
                | Error::CoefficientCount { .. }
                | Error::EmptyRange { .. }
                | Error::UnknownMedium(_)
                | Error::Parse(_)
        )
    }

    pub(crate) fn invalid(name: &'static str, detail: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            detail: detail.into(),
        }
    }
}

impl From<toml::de::Error> for Error {
    fn from(err: toml::de::Error) -> Self {
        Error::Parse(err.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Parse(err.to_string())
    }
}

pub(crate) fn invalid(name: &'static str, detail: impl Into<String>) -> Error {
    Error::invalid(name, detail)
}

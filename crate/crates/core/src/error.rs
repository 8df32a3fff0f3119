use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("rewrite system is not confluent: critical pair of rules {first} and {second} leaves remainder {remainder}")]
    NotConfluent {
        first: usize,
        second: usize,
        remainder: String,
    },

    #[error("class is not invertible: degree-0 part vanishes")]
    NonInvertible,

    #[error("presentation incomplete: no integration value for top-degree monomial {0}")]
    PresentationIncomplete(String),

    #[error("classes live in different rings")]
    RingMismatch,

    #[error("Bott nondegeneracy violated: {0}")]
    Nondegeneracy(String),

    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error("parameter constraint violated: {0}")]
    Constraint(String),

    #[error("field does not vanish on the declared component: normal component {component} restricts to a nonzero polynomial (witness monomial {witness})")]
    NotVanishing { component: usize, witness: String },

    #[error("tube parametrization failed at u = {point}: {reason}")]
    TubeFailure { point: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("toml: {0}")]
    TomlDe(#[from] toml::de::Error),

    #[error("toml: {0}")]
    TomlSer(#[from] toml::ser::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}

impl Error {
    /// Stable machine-readable label for reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Input(_) => "input",
            Error::UnknownGenerator(_) => "unknown_generator",
            Error::NotConfluent { .. } => "not_confluent",
            Error::NonInvertible => "non_invertible",
            Error::PresentationIncomplete(_) => "presentation_incomplete",
            Error::RingMismatch => "ring_mismatch",
            Error::Nondegeneracy(_) => "nondegeneracy",
            Error::Consistency(_) => "consistency",
            Error::Constraint(_) => "constraint",
            Error::NotVanishing { .. } => "not_vanishing",
            Error::TubeFailure { .. } => "tube_failure",
            Error::Io(_) => "io",
            Error::Json(_) | Error::TomlDe(_) | Error::TomlSer(_) => "parse",
        }
    }
}

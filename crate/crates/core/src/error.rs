use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested combination is valid input but not supported (for example,
    /// closed-form asymptotics with a custom weight sequence).
    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    /// A precondition on sizes or resolution was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A computed quantity broke an invariant it must satisfy, e.g. a negative
    /// variance produced by truncation error.
    #[error("internal consistency error: {entry} = {value:e}")]
    Consistency { entry: &'static str, value: f64 },

    /// Several invalid parameters, reported together.
    #[error("invalid configuration:{}", bullet_list(.0))]
    Validation(Vec<String>),

    /// The sample is identically zero, so every point is critical.
    #[error("degenerate sample: all coefficients vanish")]
    DegenerateSample,
}

impl Error {
    pub fn is_consistency(&self) -> bool {
        matches!(self, Error::Consistency { .. })
    }
}

fn bullet_list(items: &[String]) -> String {
    items.iter().map(|i| format!("\n  - {i}")).collect()
}

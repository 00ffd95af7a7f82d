use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not a p-th power")]
    NotAPthPower,
    #[error("input set is not p-independent")]
    InputNotPIndependent,
    #[error("input set is not 2-independent")]
    InputNot2Independent,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("norm set has p-degree zero")]
    EmptyNormSet,
    #[error("logarithmic form of a zero argument")]
    ZeroArgument,
    #[error("the zero form has no norm field")]
    ZeroForm,
    #[error("Pfister slot is zero")]
    ZeroSlot,
    #[error("norm degree collapses to 1 over the extension")]
    NormDegreeCollapsed,
    #[error("no closed form covers this configuration: {0}")]
    CaseNotCovered(String),
    #[error("operation requires characteristic 2, field has characteristic {0}")]
    WrongCharacteristic(u32),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Semantic(String),
}

impl Error {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::NotAPthPower => "NotAPthPower",
            Error::InputNotPIndependent => "InputNotPIndependent",
            Error::InputNot2Independent => "InputNot2Independent",
            Error::HypothesisViolated(_) => "HypothesisViolated",
            Error::EmptyNormSet => "EmptyNormSet",
            Error::ZeroArgument => "ZeroArgument",
            Error::ZeroForm => "ZeroForm",
            Error::ZeroSlot => "ZeroSlot",
            Error::NormDegreeCollapsed => "NormDegreeCollapsed",
            Error::CaseNotCovered(_) => "CaseNotCovered",
            Error::WrongCharacteristic(_) => "WrongCharacteristic",
            Error::DegreeMismatch(..) => "DegreeMismatch",
            Error::Parse { .. } => "ParseError",
            Error::Semantic(_) => "SemanticError",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

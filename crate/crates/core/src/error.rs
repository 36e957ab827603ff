use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("form is not homogeneous")]
    NotHomogeneous,
    #[error("zero form")]
    ZeroForm,
    #[error("divisor is not in Div*: restriction to H is not a single monomial")]
    NotInDivStar,
    #[error("invalid resultant problem: {0}")]
    InvalidProblem(String),
    #[error("resultant computation failed after all fallbacks")]
    ResultantFailure,
    #[error("unsupported family: N = {0}, d = {1}")]
    UnsupportedFamily(usize, u32),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

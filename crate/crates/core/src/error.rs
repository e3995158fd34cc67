use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid system size N={0}: need N >= 2")]
    InvalidSize(usize),

    #[error("parameters sit on a topological boundary: {0}")]
    BoundaryDegenerate(String),

    #[error("outside the supported parameter domain: {0}")]
    Domain(String),

    #[error("point gap closed: |det H(k)| = {value:e} at k = {k}")]
    GapClosed { k: f64, value: f64 },

    #[error("Taylor expansion around E=0 is singular (t1^2 - t2^2 - gamma^2 = 0)")]
    SingularExpansion,

    #[error("pole: {0}")]
    Pole(String),

    #[error("singular quantity: {0}")]
    Singular(String),

    #[error("eigensolver failure: {0}")]
    SolverFailure(String),

    #[error("no sign change of the consistency function within |E| <= {radius:e}")]
    NoRoot { radius: f64 },

    #[error("linear-law intercept diverges (t1^2 - gamma^2 - t2^2 = 0)")]
    DivergentIntercept,

    #[error("closed-form saturation formula out of domain: {0}")]
    FormulaDomain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("no saturation detected in the sweep window")]
    NotSaturated,

    #[error("configuration error: {0}")]
    Config(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

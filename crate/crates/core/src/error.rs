use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// One state uses waveguide rails where the other uses polarizations.
    #[error("basis mismatch on port `{port}`: rail channels cannot be compared with polarization channels")]
    BasisMismatch { port: String },

    #[error("zero state: squared norm is zero")]
    ZeroState,

    #[error("reflectance {0} outside [0, 1]")]
    InvalidReflectance(f64),

    #[error("element matrix is not unitary (max deviation {0:e})")]
    NonUnitary(f64),

    #[error("element matrix is {rows}x{cols} but {modes} modes were given")]
    ShapeMismatch { rows: usize, cols: usize, modes: usize },

    #[error("element modes must be distinct, `{0}` appears twice")]
    RepeatedMode(String),

    #[error("port `{0}` already carries polarization channels")]
    DoubleRelabel(String),

    #[error("pair source `{id}` emission must contain only two-photon terms")]
    InvalidEmission { id: String },

    #[error("GHZ builder requires even N >= 2, got {0}")]
    GhzParity(usize),

    #[error("W builder requires odd N >= 3, got {0}")]
    WParity(usize),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("invalid process: {0}")]
    InvalidProcess(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("vertex/port mapping mismatch: {0}")]
    MappingMismatch(String),

    #[error("invalid mode literal `{0}`")]
    InvalidMode(String),

    #[error("unsupported format version {0}")]
    FormatVersion(u64),

    #[error("parse error at `{path}`: {message}")]
    Parse { path: String, message: String },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

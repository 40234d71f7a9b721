use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("non-finite value {value} at node ({i}, {j})")]
    NonFinite { i: usize, j: usize, value: f64 },

    #[error("stencil offset ({di}, {dj}) of node ({i}, {j}) leaves the grid")]
    StencilOutOfDomain {
        i: usize,
        j: usize,
        di: i32,
        dj: i32,
    },

    #[error("{edge} boundary condition does not match the velocity at node ({i}, {j}): {reason}")]
    BoundaryMismatch {
        edge: &'static str,
        i: usize,
        j: usize,
        reason: &'static str,
    },

    #[error("no sign change between phi_in = {phi_in} and phi_out = {phi_out}")]
    NoSignChange { phi_in: f64, phi_out: f64 },

    #[error("gamma = {0} is outside (0, 1)")]
    InvalidGamma(f64),

    #[error("row of node ({i}, {j}) cannot be closed: it needs the unsolved node ({qi}, {qj})")]
    UnclosedRow {
        i: usize,
        j: usize,
        qi: usize,
        qj: usize,
    },

    #[error("zero diagonal in the row of node {node}")]
    ZeroDiagonal { node: usize },

    #[error("invalid scheme: {0}")]
    InvalidScheme(String),

    #[error("implicit symbol vanishes at xi = {xi}, eta = {eta}")]
    VanishingSymbol { xi: f64, eta: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown experiment case `{0}`")]
    UnknownCase(String),

    #[error("line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: malformed field dump: {message}")]
    MalformedDump { path: PathBuf, message: String },
}

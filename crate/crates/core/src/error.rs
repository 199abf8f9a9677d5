use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("self-loop {{{0},{0}}} is not allowed")]
    SelfLoop(usize),

    #[error("edge endpoint {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("graph must have at least one vertex")]
    EmptyGraph,

    #[error("root {root} out of range for a graph on {n} vertices")]
    RootOutOfRange { root: usize, n: usize },

    #[error("matrix is not square: {rows} rows, {cols} columns")]
    NotSquare { rows: usize, cols: usize },

    #[error("entry ({row},{col}) = {value} does not equal its transpose ({col},{row}) = {mirror}")]
    NotSymmetric {
        row: usize,
        col: usize,
        value: f64,
        mirror: f64,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operator entry ({row},{col}) = {value} is nonzero but {{{row},{col}}} is not an edge")]
    IncompatibleEntry { row: usize, col: usize, value: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("z = {z} lies within {tol:e} of the eigenvalue {eigenvalue}")]
    NearEigenvalue { z: f64, eigenvalue: f64, tol: f64 },

    #[error("E = {energy} lies within {tol:e} of the pole {pole}")]
    AtPole { energy: f64, pole: f64, tol: f64 },

    #[error("invalid spectral map: {0}")]
    InvalidMap(String),

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("branch {branch} out of range: a map with {poles} poles has branches 0..={poles}")]
    InvalidBranch { branch: usize, poles: usize },

    #[error("root-deleted projection of a 1-dimensional operator is empty")]
    EmptyProjection,

    #[error("shifted system (A - z) is numerically singular at z = {z}")]
    SingularShift { z: f64 },

    #[error("no eigenfunction lift at E = {energy}: the root resolvent vanishes (pole of the spectral map)")]
    NoLift { energy: f64 },

    #[error("unknown base-spectrum preset {0:?}")]
    UnknownPreset(String),
}

//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("n_points = {n_points} is below the minimum of {min}")]
    TooFewPoints { n_points: usize, min: usize },
    #[error("r_max = {r_max} must be finite and positive")]
    BadRadius { r_max: f64 },
    #[error("sample vector has length {got}, grid has {expected} nodes")]
    LengthMismatch { expected: usize, got: usize },
    #[error("non-finite sample at node {index}")]
    NonFiniteSample { index: usize },
    #[error("cut radius {r_cut} outside [0, {r_max}]")]
    CutOutOfRange { r_cut: f64, r_max: f64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FunctionalsError {
    #[error("ratio = {ratio} is outside the admissible range (must be < 1)")]
    RatioOutOfRange { ratio: f64 },
    #[error("ground state has non-positive energy {energy}")]
    BadGroundState { energy: f64 },
    #[error(
        "mass-energy ratio {ratio} violates the two-sided eta bound \
         (lower {lower}, upper {upper}) beyond tolerance; the ground state \
         constants or the quadrature are inconsistent"
    )]
    InconsistentSandwich { ratio: f64, lower: f64, upper: f64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroundStateError {
    #[error("fixed-point iteration did not reach tol = {tol} after {iters} iterations (residual {residual})")]
    NonConvergence { iters: usize, tol: f64, residual: f64 },
    #[error("iterate lost positivity at iteration {iter}")]
    SignFlip { iter: usize },
    #[error("zero field cannot be fitted")]
    ZeroField,
    #[error(transparent)]
    Grid(#[from] GridError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CutoffError {
    #[error("blend parameter out of range: {what}")]
    BadParameter { what: String },
    #[error("cutoff blend violates {constraint}: worst value {worst} at s = {at}")]
    ConstraintViolated { constraint: String, worst: f64, at: f64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VirialError {
    #[error("lambda = {lambda} must exceed 1")]
    LambdaNotSupercritical { lambda: f64 },
    #[error("gamma = {gamma} must lie in (0, min(lambda - 1, 1)) = (0, {upper})")]
    GammaOutOfRange { gamma: f64, upper: f64 },
    #[error("zero field")]
    ZeroField,
    #[error(transparent)]
    Grid(#[from] GridError),
}

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad header: expected {expected:?}, got {got:?}")]
    VersionMismatch { expected: String, got: String },
    #[error("file truncated or malformed at line {line}: {what}")]
    Malformed { line: usize, what: String },
    #[error("grid mismatch: file has (n_points = {file_n}, r_max = {file_r}), requested (n_points = {want_n}, r_max = {want_r})")]
    GridMismatch { file_n: usize, file_r: f64, want_n: usize, want_r: f64 },
}

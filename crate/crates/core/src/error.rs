use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("self-loop at node {node}")]
    SelfLoop { node: usize },
    #[error("link ({i}, {j}) has non-positive or non-finite weight {weight}")]
    NonpositiveWeight { i: usize, j: usize, weight: f64 },
    #[error("link ({i}, {j}) listed twice with different weights")]
    DuplicateLink { i: usize, j: usize },
    #[error("node {node} out of range for a graph on {n} nodes")]
    IndexOutOfRange { node: usize, n: usize },
    #[error("link ({i}, {j}) is not in the graph")]
    LinkNotFound { i: usize, j: usize },
    #[error("Laplacian block of size {size} could not be inverted")]
    SingularBlock { size: usize },
    #[error("conjugate gradient stalled after {iterations} iterations (relative residual {residual:e})")]
    SolverDivergence { iterations: usize, residual: f64 },
    #[error("node {node} has zero degree")]
    ZeroDegree { node: usize },
    #[error("resistance matrix of a component with {size} nodes is numerically singular")]
    SingularOmega { size: usize },
    #[error("small-t tail is not affine (residual {residual:e} after {halvings} halvings)")]
    NonLinearTail { residual: f64, halvings: usize },
    #[error("vector is not a probability distribution: {reason}")]
    NotADistribution { reason: String },
    #[error("pseudoinverse has eigenvalue {value:e} below zero")]
    NegativeEigenvalue { value: f64 },
    #[error("face degree {degree} is below 3")]
    InvalidFaceDegree { degree: u32 },
    #[error("marginals do not describe a transport problem: {reason}")]
    InfeasibleMarginals { reason: String },
    #[error("graph has {beta} components; a connected graph is required")]
    Disconnected { beta: usize },
    #[error("support of Q split into {beta} components during the flow")]
    DisconnectedDuringFlow { beta: usize },
    #[error("flow blew up at t = {t}")]
    BlowUpDetected { t: f64 },
    #[error("flow left the Laplacian cone at t = {t}")]
    LeftLaplacianCone { t: f64 },
    #[error("t = {t} is at or beyond the blow-up time {t_max}")]
    PastBlowUp { t: f64, t_max: f64 },
    #[error("invalid size: {reason}")]
    InvalidSize { reason: String },
    #[error("value {value} outside [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },
    #[error("coverage area must be positive, got {area}")]
    ZeroArea { area: f64 },
    #[error("quadrature did not settle at D = {d} (last change {change:e})")]
    QuadratureFailure { d: f64, change: f64 },
    #[error("graph carries no geometry")]
    MissingGeometry,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

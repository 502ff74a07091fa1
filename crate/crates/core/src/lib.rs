//! Exact symbolic minors of weight matrices of planar networks.

pub mod chains;
pub mod cli;
pub mod corpus;
pub mod geometry;
pub mod lindstrom;
pub mod logconcavity;
pub mod minors;
pub mod network;
pub mod polynomial;

use thiserror::Error;

/// Crate-wide error for operations that span several modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Polynomial(#[from] polynomial::PolyError),
    #[error(transparent)]
    Network(#[from] network::NetworkError),
    #[error(transparent)]
    Matrix(#[from] minors::MatrixError),
    #[error("{0}")]
    Input(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

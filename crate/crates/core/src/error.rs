use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid quiver presentation: {0}")]
    InvalidPresentation(String),

    #[error("ill-formed relation {relation:?}: {reason}")]
    IllFormedRelation { relation: Vec<String>, reason: String },

    #[error("algebra is not certified finite-dimensional at path length {bound}: path {path} survives past the horizon")]
    NotFiniteAtBound { bound: usize, path: String },

    #[error("basis index {index} is foreign to an algebra of dimension {dim}")]
    ForeignBasis { index: usize, dim: usize },

    #[error("unknown {what} {name:?}")]
    UnknownName { what: &'static str, name: String },

    #[error("duplicate generator name {0:?}")]
    DuplicateGenerator(String),

    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),

    #[error("morphism is not closed: {0}")]
    NotClosed(String),

    #[error("wrong algebra: {0}")]
    WrongAlgebra(String),

    #[error("idempotent incompatibility: {0}")]
    IdempotentMismatch(String),

    #[error("coefficient relation violated: {0}")]
    CoefficientRelationViolated(String),

    #[error("homotopy identity fails: {0}")]
    HomotopyIdentityFails(String),

    #[error("generalized coefficient relations fail: {0}")]
    GeneralizedRelationsFail(String),

    #[error("box tensor expansion exceeded cap {cap} with {live} live configurations")]
    NonTerminatingBoxTensor { cap: usize, live: usize },

    #[error("box tensor of a cone does not match the cone of the box tensor: {0}")]
    ConeIdentificationFailed(String),

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("invalid flip module: {0}")]
    InvalidFlipModule(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

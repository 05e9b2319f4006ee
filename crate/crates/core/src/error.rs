use thiserror::Error;

use crate::network::NodeId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid coordinate: {0}")]
    InvalidCoordinate(String),
    #[error("invalid heading: {0}")]
    InvalidHeading(String),
    #[error("undefined bearing between coincident points")]
    UndefinedBearing,

    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("duplicate node {0}")]
    DuplicateNode(NodeId),
    #[error("line {line}: travel time must be positive, got {value}")]
    NonPositiveWeight { line: usize, value: String },
    #[error("unknown edge ({0}, {1})")]
    UnknownEdge(NodeId, NodeId),
    #[error("travel time must be positive on edge ({0}, {1})")]
    InvalidTravelTime(NodeId, NodeId),
    #[error("shortest-path search needs at least one source")]
    NoSources,
    #[error("node filter rejects source {0}")]
    SourceFiltered(NodeId),

    #[error("nothing to index")]
    EmptyIndex,
    #[error("cell size must be positive, got ({0}, {1})")]
    InvalidCellSize(f64, f64),
    #[error("no node in sector")]
    NoNodeInSector,

    #[error("duplicate poi id {0}")]
    DuplicatePoi(String),
    #[error("invalid preference: {0}")]
    InvalidPreference(String),
    #[error("unknown attribute {0}")]
    UnknownAttribute(String),

    #[error("cost vector schema mismatch")]
    SchemaMismatch,
    #[error("cannot compare unreachable cost vector of {0}")]
    UnreachableVector(String),

    #[error("query parse error: {0}")]
    QueryParse(String),
}

pub type Result<V, E = Error> = std::result::Result<V, E>;

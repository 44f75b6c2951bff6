use thiserror::Error;

use crate::graph::Vertex;

/// DIMACS `.col` parse failures. `line` is 1-based; 0 means "not from a file".
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("no `p edge <n> <m>` problem line")]
    MissingProblemLine,
    #[error("line {line}: malformed problem line {content:?}")]
    BadProblemLine { line: usize, content: String },
    #[error("line {line}: second problem line")]
    DuplicateProblemLine { line: usize },
    #[error("line {line}: edge record before the problem line")]
    EdgeBeforeHeader { line: usize },
    #[error("line {line}: malformed edge record {content:?}")]
    BadEdgeLine { line: usize, content: String },
    #[error("line {line}: vertex {vertex} outside 1..={n}")]
    VertexOutOfRange { line: usize, vertex: Vertex, n: usize },
    #[error("line {line}: self-loop on vertex {vertex} admits no proper coloring")]
    SelfLoop { line: usize, vertex: Vertex },
    #[error("line {line}: unknown record type {tag:?}")]
    UnknownRecord { line: usize, tag: String },
    #[error("line {line}: non-ASCII content")]
    NonAscii { line: usize },
}

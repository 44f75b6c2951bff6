//! Exact integer programming models for graph colouring.

pub mod bnb;
pub mod coloring;
pub mod error;
pub mod graph;
pub mod lp;
pub mod model;
pub mod mps;
pub mod pipeline;
pub mod preprocess;
pub mod rational;
pub mod verify;

pub use coloring::{validate_coloring, Coloring, ColoringError};
pub use error::ParseError;
pub use graph::{parse_dimacs, Graph, Vertex};
pub use model::{build_model, IlpModel, ModelError, ModelKind};
pub use rational::Rational;

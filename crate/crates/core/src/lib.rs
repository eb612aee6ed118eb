//! Tagged triangulations of marked surfaces: flips, exchange matrices,
//! framed mutation, the tagged rotation and exchange-graph exploration.

pub mod cli;
pub mod explorer;
pub mod matrix;
pub mod mcg;
pub mod models;
pub mod mutation;
pub mod proofkit;
pub mod scalar;
pub mod surface;
pub mod triangulation;

pub use matrix::{ExchangeMatrix, MatrixError, Quiver};
pub use mcg::MappingClassElement;
pub use mutation::{
    find_maximal_green_sequences, GreenSearchOptions, GreenSearchResult, MaximalGreenSequence,
    MutationError,
};
pub use scalar::Scalar;
pub use surface::{ClusterType, MarkedSurface, SurfaceError};
pub use triangulation::{
    IdealTriangulation, MarkedPoint, Side, Tag, TaggedEnd, TaggedTriangulation, Triangle,
    TriangulationError,
};

/// Exchange matrix with machine-integer entries.
pub type BMatrix = ExchangeMatrix<i32>;

/// Framed seed with machine-integer entries.
pub type FramedSeed = mutation::FramedSeed<i32>;

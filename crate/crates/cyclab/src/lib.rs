//! Laboratory for oriented cycles in digraphs.
//!
//! The crate revolves around one question: which orientations of a cycle must
//! appear in every digraph of sufficiently large chromatic number or minimum
//! out-degree, and how do we find a copy constructively when one is promised?
//!
//! The pieces:
//!
//! * [`digraph`]: dense-id digraph with sorted adjacency, induced subdigraphs,
//!   vertex cloning, degree and domination queries.
//! * [`pattern`]: cyclic orientation words over `{F, B}`, canonical forms,
//!   block structure, and the three-way classification of cycle orientations.
//! * [`chromatic`]: exact and bounded chromatic number, Gallai-Roy style
//!   longest-path colorings, degree surrogates.
//! * [`search`]: backtracking embeddings of oriented cycles and paths.
//! * [`extract`]: constructive procedures that locate a prescribed orientation
//!   inside a digraph with large chromatic number, following the block
//!   structure of the target pattern.
//! * [`construct`]: extremal constructions with high connectivity-like
//!   parameters and no short cycles, plus chromatic shift digraphs.
//! * [`certificate`]: replayable JSON certificates for search and construction
//!   claims.
//! * [`oracle`]: small brute-force reference implementations used to validate
//!   the production code paths in tests and in the self-check suite.

pub mod certificate;
pub mod chromatic;
pub mod construct;
pub mod digraph;
pub mod extract;
pub mod io;
pub mod oracle;
pub mod pattern;
pub mod random;
pub mod search;
pub mod suite;

pub use digraph::{Digraph, DigraphError, VertexSet};
pub use pattern::{CyclePattern, Dir, PathPattern, PatternClass, PatternError};

//! Complete sets of representations for axis-aligned rectangle placements.
//!
//! * [`geometry`]: exact placements, spatial relations, forced relations and
//!   canonical representations.
//! * [`permutation`]: plane and biplane permutations and the digraph `G_pi`.
//! * [`seqpair`]: sequence pairs, constraint graphs and bad quartets. Sequence
//!   pairs without a bad quartet already form a complete set.
//! * [`forcing`]: forcing placements for biplane permutations, which bound
//!   the size of any complete set from below.
//! * [`evaluate`]: packing and exhaustive optimization over sequence pairs.
//! * [`oracle`]: brute-force references for testing.
//!
//! Indices are 0-based in the library and 1-based in the JSON formats of
//! [`io`].

pub mod digraph;
pub mod error;
pub mod evaluate;
pub mod forcing;
pub mod geometry;
pub mod io;
pub mod oracle;
pub mod permutation;
pub mod render;
pub mod seqpair;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{Placement, Rational, Rect, RelationSet, Representation, SpatialRelation};
pub use permutation::Permutation;
pub use seqpair::{BadQuartet, SequencePair};

//! Exact combinatorics of sign representations of Weyl groups.
//!
//! The crate computes, in exact integer/rational arithmetic:
//!
//! - Kostka numbers, Littlewood-Richardson coefficients and the split-square
//!   coefficients of a Schur function ([`tableaux`]);
//! - sign-representation multiplicities, sign signatures, recovery of
//!   irreducible labels from signatures, and branching rules for the Weyl
//!   groups of types A, B/C and D ([`type_a`], [`type_b`], [`type_d`]);
//! - weak W-graphs, their projector algebra and tau-signatures, including a
//!   parser for Atlas `wcell` output ([`wgraph`]);
//! - extended sign signatures over additively closed root subsystems for the
//!   exceptional group G2 (and optionally F4) ([`exceptional`]);
//! - a brute-force character oracle built from explicit matrix modules of
//!   symmetric, hyperoctahedral and even-signed permutation groups
//!   ([`oracle`]) used to cross-validate every closed formula.

pub mod error;
pub mod exceptional;
pub mod oracle;
pub mod partitions;
pub mod ratmat;
pub mod tableaux;
pub mod type_a;
pub mod type_b;
pub mod type_d;
pub mod wgraph;

pub use error::Error;
pub use partitions::{Composition, Partition, SkewShape};
pub use tableaux::CoefficientCache;

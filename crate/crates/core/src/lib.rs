//! Lower bounds, upper bounds and certified exact values for the essential
//! dimension of reduced split semisimple groups of types A, B, C, D and E6,
//! and of their strict reductive envelopes.
//!
//! A group is written `(G_1 x ... x G_m) / mu` with each `G_i` simply
//! connected and `mu` a subgroup of the product of the centers. Upper bounds
//! come from generically free representations attached to a minimal
//! generating set of the character group of the center; lower bounds come
//! from an index-minimal basis of the dual of its p-socle. When the two meet
//! the value is certified exact.
//!
//! All arithmetic is exact. The integer matrix layer is generic over the
//! scalar type (any signed `num_integer::Integer`); everything above it uses
//! arbitrary precision through the [`Int`] alias.

pub mod abelian;
pub mod basis_search;
pub mod catalog;
pub mod engine;
pub mod fixtures;
pub mod freeness;
pub mod oracle;
pub mod repdata;
pub mod serde_util;
pub mod spec_io;

use std::fmt::Debug;

use num_integer::Integer;
use num_traits::Signed;

/// Scalar type accepted by the matrix and Smith normal form layer.
pub trait Scalar: Clone + Debug + Integer + Signed {}

impl<T: Clone + Debug + Integer + Signed> Scalar for T {}

/// Arbitrary-precision integer used for dimensions, orders and coordinates.
pub type Int = num_bigint::BigInt;
/// Integer matrix over [`Int`].
pub type Matrix = abelian::IntMatrix<Int>;
/// Machine-word integer matrix, handy for tests and small inputs.
pub type SmallMatrix = abelian::IntMatrix<i64>;
/// Smith normal form over [`Int`].
pub type Snf = abelian::SmithForm<Int>;

pub use abelian::{Character, CyclicDecomposition, GroupElement, SubgroupPresentation};
pub use catalog::{GroupSpec, SemisimpleGroup, SimpleFactor};
pub use engine::{compute_ed, extend_ed, EdReport};

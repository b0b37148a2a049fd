//! Exact arithmetic on finite abelian groups given by cyclic decompositions:
//! Smith normal form, subgroup structure, annihilators, socles.

mod group;
mod matrix;
mod snf;

use num_bigint::BigInt;
use thiserror::Error;

pub use group::{
    annihilator, annihilator_brute_force, rank, socle_dual, span_brute_force,
    subgroup_structure, Character, CyclicDecomposition, GroupElement, SocleDual,
    SubgroupPresentation, ENUMERATION_CAP,
};
pub use matrix::IntMatrix;
pub use snf::{integer_kernel, smith_normal_form, solve_integer, SmithForm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbelianError {
    #[error("cyclic factor order {0} is below 2")]
    InvalidOrder(BigInt),
    #[error("malformed element {element}: {detail}")]
    MalformedElement { element: String, detail: String },
    #[error("the {p}-socle is trivial")]
    TrivialSocle { p: u64 },
    #[error("enumeration of {count} elements exceeds the cap of {cap}")]
    TooLarge { count: BigInt, cap: u64 },
}

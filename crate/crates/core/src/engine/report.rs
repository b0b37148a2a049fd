use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::abelian::{Character, GroupElement};
use crate::basis_search::BasisCandidate;
use crate::freeness::FreenessVerdict;

/// Bumped whenever a field changes meaning or disappears.
pub const SCHEMA_VERSION: u32 = 1;

/// How the headline numbers were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Route {
    /// Bounds from an index-minimal basis of the group itself.
    Direct,
    /// Exact value transferred from a quotient by a central `Z/p`.
    CentralExtension,
}

/// A premise of the exactness argument that did not hold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum HypothesisFailure {
    NoAdmissibleLift { detail: String },
    NotGenericallyFree { character: Character, verdict: FreenessVerdict },
    SupportNotCovering,
    DimensionExceedsN {
        character: Character,
        #[serde(with = "crate::serde_util::decimal")]
        dim: BigInt,
        #[serde(with = "crate::serde_util::decimal")]
        n: BigInt,
    },
    NValueUpperBoundOnly { character: Character },
    BasisSizeMismatch { size: usize, rank: usize },
    TieSearchTruncated,
    ExtensionHypothesisFailed { detail: String },
}

impl fmt::Display for HypothesisFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NoAdmissibleLift { detail } => write!(f, "no admissible lift: {detail}"),
            Self::NotGenericallyFree { character, verdict } => {
                write!(f, "character {character} is {verdict}")
            }
            Self::SupportNotCovering => {
                write!(f, "no set of freely acting characters covers every factor")
            }
            Self::DimensionExceedsN { character, dim, n } => {
                write!(f, "character {character}: dim V = {dim} exceeds n = {n}")
            }
            Self::NValueUpperBoundOnly { character } => {
                write!(f, "n of {character} is only an upper bound")
            }
            Self::BasisSizeMismatch { size, rank } => {
                write!(f, "basis has {size} elements but rank Z(G) = {rank}")
            }
            Self::TieSearchTruncated => write!(f, "too many tied optimal bases; search truncated"),
            Self::ExtensionHypothesisFailed { detail } => {
                write!(f, "central extension hypothesis failed: {detail}")
            }
        }
    }
}

/// Data of a central extension `1 -> Z/p -> H -> G -> 1` used to pin
/// down `ed(H)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionData {
    pub base_group: String,
    pub nu: GroupElement,
    pub omega: Character,
    #[serde(with = "crate::serde_util::decimal")]
    pub n_h_omega: BigInt,
    #[serde(with = "crate::serde_util::decimal")]
    pub ed_base: BigInt,
    #[serde(with = "crate::serde_util::decimal")]
    pub ed_red_base: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdReport {
    pub schema_version: u32,
    pub group: String,
    pub canonical_group: String,
    /// `factor_permutation[new] = old`.
    pub factor_permutation: Vec<usize>,
    pub route: Route,
    pub prime: u64,
    #[serde(with = "crate::serde_util::decimal")]
    pub dim_g: BigInt,
    pub rank_z: usize,
    /// Invariant factors of the character group of the center.
    #[serde(with = "crate::serde_util::vec_decimal")]
    pub center_structure: Vec<BigInt>,
    pub basis: Option<BasisCandidate>,
    /// Freeness verdict of each basis character.
    pub verdicts: Vec<FreenessVerdict>,
    /// Indices into the basis of a freely acting covering subset.
    pub b0: Option<Vec<usize>>,
    #[serde(with = "crate::serde_util::opt_decimal")]
    pub lower: Option<BigInt>,
    #[serde(with = "crate::serde_util::opt_decimal")]
    pub upper: Option<BigInt>,
    pub exact: bool,
    #[serde(with = "crate::serde_util::opt_decimal")]
    pub ed: Option<BigInt>,
    #[serde(with = "crate::serde_util::opt_decimal")]
    pub ed_red_upper: Option<BigInt>,
    pub ed_red_exact: bool,
    #[serde(with = "crate::serde_util::opt_decimal")]
    pub ed_red: Option<BigInt>,
    pub hypothesis_failures: Vec<HypothesisFailure>,
    pub caveats: Vec<String>,
    pub extension: Option<ExtensionData>,
}

impl EdReport {
    /// Checks the internal consistency rules every report must satisfy.
    pub fn check_invariants(&self) -> Result<(), String> {
        if let (Some(l), Some(u)) = (&self.lower, &self.upper) {
            if l > u {
                return Err(format!("lower {l} exceeds upper {u}"));
            }
        }
        if self.exact {
            let (Some(ed), Some(l), Some(u)) = (&self.ed, &self.lower, &self.upper) else {
                return Err("exact report lacks ed or a bound".into());
            };
            if ed != l || ed != u {
                return Err(format!("exact ed {ed} differs from bounds {l}..{u}"));
            }
        } else if self.ed.is_some() {
            return Err("ed present on a non-exact report".into());
        }
        if self.ed_red_exact {
            let (Some(ed), Some(red)) = (&self.ed, &self.ed_red) else {
                return Err("ed_red_exact without values".into());
            };
            if *red != ed - BigInt::from(self.rank_z) {
                return Err(format!("ed_red {red} != ed - rank_z"));
            }
        }
        if self.route == Route::Direct {
            if let (Some(u), Some(b)) = (&self.upper, &self.basis) {
                if *u != b.dim_sum() - &self.dim_g {
                    return Err(format!("upper {u} is not the basis dimension sum minus dim G"));
                }
            }
        }
        Ok(())
    }
}

//! Representation choice per center-character component, and the
//! gcd-invariant `n` of each component.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Pow, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abelian::Character;
use crate::catalog::{SemisimpleGroup, SimpleFactor};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("unsupported component {component} on {factor}")]
    UnsupportedComponent { factor: String, component: String },
    #[error("component {component} does not fit the center of {factor}")]
    MalformedComponent { factor: String, component: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RepTag {
    Trivial,
    Spin,
    HalfSpinPlus,
    HalfSpinMinus,
    Vector,
    ExtPower(u64),
    Minuscule(Sign),
}

impl RepTag {
    pub fn is_trivial(self) -> bool {
        self == RepTag::Trivial
    }

    /// Spin or half-spin, the kinds that Table-style freeness rows list.
    pub fn is_spinor(self) -> bool {
        matches!(self, RepTag::Spin | RepTag::HalfSpinPlus | RepTag::HalfSpinMinus)
    }
}

impl fmt::Display for RepTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepTag::Trivial => write!(f, "trivial"),
            RepTag::Spin => write!(f, "spin"),
            RepTag::HalfSpinPlus => write!(f, "half-spin+"),
            RepTag::HalfSpinMinus => write!(f, "half-spin-"),
            RepTag::Vector => write!(f, "vector"),
            RepTag::ExtPower(c) => write!(f, "ext^{c}"),
            RepTag::Minuscule(Sign::Plus) => write!(f, "minuscule+"),
            RepTag::Minuscule(Sign::Minus) => write!(f, "minuscule-"),
        }
    }
}

/// Whether an `n` value is proved, or only known to bound the true one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Validity {
    Exact,
    UpperBoundOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NValue {
    #[serde(with = "crate::serde_util::decimal")]
    pub value: BigInt,
    pub validity: Validity,
}

impl NValue {
    pub fn exact(value: BigInt) -> Self {
        Self {
            value,
            validity: Validity::Exact,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.validity == Validity::Exact
    }

    fn times(self, other: NValue) -> NValue {
        NValue {
            value: self.value * other.value,
            validity: self.validity.max(other.validity),
        }
    }
}

/// Representation chosen for each factor of a character.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepChoice {
    pub tags: Vec<RepTag>,
    #[serde(with = "crate::serde_util::vec_decimal")]
    pub dims: Vec<BigInt>,
}

impl RepChoice {
    pub fn dimension(&self) -> BigInt {
        self.dims.iter().product()
    }
}

fn small(c: &[BigInt]) -> Vec<u64> {
    c.iter().map(|x| x.to_u64().unwrap_or(u64::MAX)).collect()
}

fn malformed(f: &SimpleFactor, c: &[BigInt]) -> RepError {
    RepError::MalformedComponent {
        factor: f.to_string(),
        component: format!("{c:?}"),
    }
}

pub fn rep_tag(f: &SimpleFactor, c: &[BigInt]) -> Result<RepTag, RepError> {
    let orders = f.center_orders();
    if c.len() != orders.len() || c.iter().zip(&orders).any(|(x, o)| x.sign() == num_bigint::Sign::Minus || x >= o) {
        return Err(malformed(f, c));
    }
    if c.iter().all(Zero::is_zero) {
        return Ok(RepTag::Trivial);
    }
    let s = small(c);
    Ok(match *f {
        SimpleFactor::Spin(n) if n % 2 == 1 => RepTag::Spin,
        SimpleFactor::Spin(n) if n % 4 == 2 => match s[0] {
            1 => RepTag::HalfSpinPlus,
            3 => RepTag::HalfSpinMinus,
            _ => RepTag::Vector,
        },
        SimpleFactor::Spin(_) => match (s[0], s[1]) {
            (1, 0) => RepTag::HalfSpinPlus,
            (0, 1) => RepTag::HalfSpinMinus,
            _ => RepTag::Vector,
        },
        SimpleFactor::Sp(_) => RepTag::Vector,
        SimpleFactor::SL { p, k } => {
            let q = p.pow(k);
            if s[0] == 1 || s[0] == q - 1 {
                RepTag::ExtPower(s[0])
            } else {
                return Err(RepError::UnsupportedComponent {
                    factor: f.to_string(),
                    component: s[0].to_string(),
                });
            }
        }
        SimpleFactor::E6 => RepTag::Minuscule(if s[0] == 1 { Sign::Plus } else { Sign::Minus }),
    })
}

fn two_pow(e: u32) -> BigInt {
    BigInt::from(2).pow(e)
}

fn tag_dimension(f: &SimpleFactor, tag: RepTag) -> BigInt {
    match (*f, tag) {
        (_, RepTag::Trivial) => BigInt::one(),
        (SimpleFactor::Spin(n), RepTag::Spin) => two_pow((n - 1) / 2),
        (SimpleFactor::Spin(n), RepTag::HalfSpinPlus | RepTag::HalfSpinMinus) => two_pow((n - 2) / 2),
        (SimpleFactor::Spin(n), RepTag::Vector) => BigInt::from(n),
        (SimpleFactor::Sp(n), _) => BigInt::from(2 * u64::from(n)),
        (SimpleFactor::SL { p, k }, _) => BigInt::from(p).pow(k),
        (SimpleFactor::E6, _) => BigInt::from(27),
        _ => unreachable!("tag {tag} does not belong to {f}"),
    }
}

/// Dimension of the representation attached to component `c` of `f`.
pub fn rep_dimension(f: &SimpleFactor, c: &[BigInt]) -> Result<BigInt, RepError> {
    Ok(tag_dimension(f, rep_tag(f, c)?))
}

/// `n` of a single component.
pub fn n_component(f: &SimpleFactor, c: &[BigInt]) -> Result<NValue, RepError> {
    let tag = rep_tag(f, c)?;
    Ok(match (*f, tag) {
        (SimpleFactor::Spin(n), RepTag::Vector) => NValue::exact(two_pow(n.trailing_zeros())),
        (SimpleFactor::Sp(n), RepTag::Vector) => NValue {
            value: tag_dimension(f, tag),
            validity: if n.is_power_of_two() {
                Validity::Exact
            } else {
                Validity::UpperBoundOnly
            },
        },
        _ => NValue::exact(tag_dimension(f, tag)),
    })
}

pub fn rep_choice(g: &SemisimpleGroup, chi: &Character) -> Result<RepChoice, RepError> {
    let mut tags = Vec::with_capacity(g.factor_count());
    let mut dims = Vec::with_capacity(g.factor_count());
    for (i, f) in g.factors().iter().enumerate() {
        let tag = rep_tag(f, g.component(chi, i))?;
        tags.push(tag);
        dims.push(tag_dimension(f, tag));
    }
    Ok(RepChoice { tags, dims })
}

/// `n` of a character: the product of its component values.
pub fn n_char(g: &SemisimpleGroup, chi: &Character) -> Result<NValue, RepError> {
    g.factors()
        .iter()
        .enumerate()
        .try_fold(NValue::exact(BigInt::one()), |acc, (i, f)| {
            Ok(acc.times(n_component(f, g.component(chi, i))?))
        })
}

/// Dimension of the tensor product representation attached to `chi`.
#[allow(non_snake_case)]
pub fn dim_V(g: &SemisimpleGroup, chi: &Character) -> Result<BigInt, RepError> {
    Ok(rep_choice(g, chi)?.dimension())
}

//! Generic freeness of the representation attached to a character.
//!
//! For spin groups this is a lookup against the classification of
//! non-generically-free spinor and vector tensor products; types C, A and
//! E6 have closed-form criteria. The same verdict is used for the linear
//! and the projective action.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abelian::Character;
use crate::catalog::{FamilyTag, SemisimpleGroup, SimpleFactor};
use crate::repdata::{rep_choice, RepError, RepTag};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FreenessError {
    #[error("expected only Spin factors with spin, half-spin or vector reps")]
    NotSpinFamily,
    #[error("expected only Sp factors")]
    NotSpFamily,
    #[error("expected SL factors over a single prime")]
    NotSLFamily,
    #[error(transparent)]
    Rep(#[from] RepError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FreenessReason {
    NotInTable,
    TableRow { row: u8 },
    TypeCCriterion,
    TypeACriterion,
    E6Criterion,
    CriterionFailed { detail: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FreenessVerdict {
    pub free: bool,
    pub reason: FreenessReason,
}

impl FreenessVerdict {
    fn free(reason: FreenessReason) -> Self {
        Self { free: true, reason }
    }

    fn failed(detail: impl Into<String>) -> Self {
        Self {
            free: false,
            reason: FreenessReason::CriterionFailed {
                detail: detail.into(),
            },
        }
    }

    fn row(row: u8) -> Self {
        Self {
            free: false,
            reason: FreenessReason::TableRow { row },
        }
    }
}

impl fmt::Display for FreenessVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = if self.free { "free" } else { "not free" };
        match &self.reason {
            FreenessReason::NotInTable => write!(f, "{word} (no table row matches)"),
            FreenessReason::TableRow { row } => write!(f, "{word} (table row {row})"),
            FreenessReason::TypeCCriterion => write!(f, "{word} (type C criterion)"),
            FreenessReason::TypeACriterion => write!(f, "{word} (type A criterion)"),
            FreenessReason::E6Criterion => write!(f, "{word} (E6 criterion)"),
            FreenessReason::CriterionFailed { detail } => write!(f, "{word} ({detail})"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Kind {
    Spinor,
    Vector,
}

fn rep_dim(n: u32, tag: RepTag) -> u128 {
    match tag {
        RepTag::Spin => 1u128.checked_shl((n - 1) / 2).unwrap_or(u128::MAX),
        RepTag::HalfSpinPlus | RepTag::HalfSpinMinus => {
            1u128.checked_shl((n - 2) / 2).unwrap_or(u128::MAX)
        }
        _ => u128::from(n),
    }
}

/// Verdict for a tensor product of spin-group representations. `support`
/// lists `(n, tag)` for the factors acting nontrivially; trivial entries are
/// dropped.
pub fn check_bd(support: &[(u32, RepTag)]) -> Result<FreenessVerdict, FreenessError> {
    let mut items: Vec<(u32, RepTag)> = Vec::with_capacity(support.len());
    for &(n, tag) in support {
        match tag {
            RepTag::Trivial => continue,
            RepTag::Spin if n % 2 == 1 => {}
            RepTag::HalfSpinPlus | RepTag::HalfSpinMinus | RepTag::Vector if n % 2 == 0 => {}
            _ => return Err(FreenessError::NotSpinFamily),
        }
        items.push((n, tag));
    }
    let mut keyed: Vec<(u32, Kind)> = items
        .iter()
        .map(|&(n, t)| (n, if t == RepTag::Vector { Kind::Vector } else { Kind::Spinor }))
        .collect();
    keyed.sort();

    if keyed.iter().all(|&(_, k)| k == Kind::Spinor) {
        let ns: Vec<u32> = keyed.iter().map(|&(n, _)| n).collect();
        let row = match ns.as_slice() {
            [n] if (3..=16).contains(n) && *n != 4 && *n != 15 => Some(1),
            [3, n] if [3, 5, 6, 7, 9, 11].contains(n) => Some(2),
            [5, n] if [5, 6, 7].contains(n) => Some(3),
            [6, n] if [6, 7, 10].contains(n) => Some(4),
            [3, 3, n] if [3, 5, 6, 7].contains(n) => Some(5),
            [3, 5, 6] | [3, 6, 6] => Some(6),
            [3, 3, 3, 3] => Some(7),
            _ => None,
        };
        if let Some(r) = row {
            return Ok(FreenessVerdict::row(r));
        }
    }

    match keyed.as_slice() {
        [(n, Kind::Vector)] if *n >= 6 => return Ok(FreenessVerdict::row(8)),
        [(a, Kind::Vector), (b, Kind::Vector)] if a == b && *a >= 6 => {
            return Ok(FreenessVerdict::row(9))
        }
        _ => {}
    }

    if items.len() >= 2 {
        for (i, &(n, tag)) in items.iter().enumerate() {
            if tag != RepTag::Vector || n == 4 {
                continue;
            }
            let rest = items
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(1u128, |acc, (_, &(m, t))| acc.saturating_mul(rep_dim(m, t)));
            if u128::from(n) > rest.saturating_add(1) {
                return Ok(FreenessVerdict::row(10));
            }
        }
    }
    Ok(FreenessVerdict::free(FreenessReason::NotInTable))
}

/// Type C: `ranks` are the ranks `n` of the `Sp(2n)` factors in the support.
pub fn check_c(ranks: &[u32]) -> Result<FreenessVerdict, FreenessError> {
    if ranks.is_empty() {
        return Err(FreenessError::NotSpFamily);
    }
    let mut r = ranks.to_vec();
    r.sort_unstable_by(|a, b| b.cmp(a));
    if r.len() < 3 {
        return Ok(FreenessVerdict::failed(format!(
            "support of size {} < 3",
            r.len()
        )));
    }
    let top = 2 * u128::from(r[0]);
    let rest = r[1..]
        .iter()
        .fold(1u128, |acc, &n| acc.saturating_mul(2 * u128::from(n)));
    if top <= rest {
        Ok(FreenessVerdict::free(FreenessReason::TypeCCriterion))
    } else {
        Ok(FreenessVerdict::failed(format!(
            "2n = {top} exceeds the product {rest} of the others"
        )))
    }
}

/// Type A: `supported` lists `(p, k)` for each `SL(p^k)` in the support.
pub fn check_a(supported: &[(u64, u32)]) -> Result<FreenessVerdict, FreenessError> {
    let Some(&(p, _)) = supported.first() else {
        return Err(FreenessError::NotSLFamily);
    };
    if supported.iter().any(|&(q, _)| q != p) {
        return Err(FreenessError::NotSLFamily);
    }
    let mut ks: Vec<u32> = supported.iter().map(|&(_, k)| k).collect();
    ks.sort_unstable_by(|a, b| b.cmp(a));
    if ks.len() < 3 {
        return Ok(FreenessVerdict::failed(format!(
            "support of size {} < 3",
            ks.len()
        )));
    }
    let tail: u64 = ks[1..].iter().map(|&k| u64::from(k)).sum();
    if u64::from(ks[0]) >= tail {
        return Ok(FreenessVerdict::failed(format!(
            "largest exponent {} is not below the sum {tail} of the others",
            ks[0]
        )));
    }
    let excluded = match (p, ks.as_slice()) {
        (2, [1, 1, 1, 1]) => true,
        (3, [1, 1, 1]) => true,
        (2, [a, b, 1]) => a == b,
        _ => false,
    };
    if excluded {
        return Ok(FreenessVerdict::failed("excluded product of SL factors"));
    }
    Ok(FreenessVerdict::free(FreenessReason::TypeACriterion))
}

pub fn check_e6(support_size: usize) -> FreenessVerdict {
    if support_size >= 2 {
        FreenessVerdict::free(FreenessReason::E6Criterion)
    } else {
        FreenessVerdict::failed(format!("support of size {support_size} < 2"))
    }
}

/// Verdict for the representation attached to `chi`, dispatched on family.
pub fn check_character(g: &SemisimpleGroup, chi: &Character) -> Result<FreenessVerdict, FreenessError> {
    let choice = rep_choice(g, chi)?;
    let support = g.support(chi);
    match g.family() {
        FamilyTag::BD => {
            let items: Vec<(u32, RepTag)> = support
                .iter()
                .map(|&i| match g.factors()[i] {
                    SimpleFactor::Spin(n) => Ok((n, choice.tags[i])),
                    _ => Err(FreenessError::NotSpinFamily),
                })
                .collect::<Result<_, _>>()?;
            check_bd(&items)
        }
        FamilyTag::C => {
            let ranks: Vec<u32> = support
                .iter()
                .map(|&i| match g.factors()[i] {
                    SimpleFactor::Sp(n) => Ok(n),
                    _ => Err(FreenessError::NotSpFamily),
                })
                .collect::<Result<_, _>>()?;
            if ranks.is_empty() {
                return Ok(FreenessVerdict::failed("empty support"));
            }
            check_c(&ranks)
        }
        FamilyTag::A { .. } => {
            let items: Vec<(u64, u32)> = support
                .iter()
                .map(|&i| match g.factors()[i] {
                    SimpleFactor::SL { p, k } => Ok((p, k)),
                    _ => Err(FreenessError::NotSLFamily),
                })
                .collect::<Result<_, _>>()?;
            if items.is_empty() {
                return Ok(FreenessVerdict::failed("empty support"));
            }
            check_a(&items)
        }
        FamilyTag::E6 => Ok(check_e6(support.len())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use RepTag::{HalfSpinMinus as Hm, HalfSpinPlus as Hp, Spin as S, Vector as V};

    fn bd(items: &[(u32, RepTag)]) -> FreenessVerdict {
        check_bd(items).unwrap()
    }

    fn spinor(n: u32) -> (u32, RepTag) {
        (n, if n % 2 == 1 { S } else { Hp })
    }

    #[test]
    fn single_spin_rows() {
        assert!(bd(&[(15, S)]).free);
        assert_eq!(bd(&[(13, S)]), FreenessVerdict::row(1));
        assert_eq!(bd(&[(16, Hm)]), FreenessVerdict::row(1));
        assert!(bd(&[(17, S)]).free);
        assert!(bd(&[(18, Hp)]).free);
    }

    #[test]
    fn each_row_and_its_neighbour() {
        let hits: Vec<(Vec<(u32, RepTag)>, u8)> = vec![
            (vec![spinor(13)], 1),
            (vec![spinor(3), spinor(11)], 2),
            (vec![spinor(5), spinor(7)], 3),
            (vec![spinor(10), spinor(6)], 4),
            (vec![spinor(3), spinor(7), spinor(3)], 5),
            (vec![spinor(6), spinor(3), spinor(5)], 6),
            (vec![spinor(3); 4], 7),
            (vec![(8, V)], 8),
            (vec![(10, V), (10, V)], 9),
            (vec![(20, V), spinor(3), spinor(3)], 10),
        ];
        for (items, row) in hits {
            assert_eq!(bd(&items), FreenessVerdict::row(row), "{items:?}");
        }
        let misses: Vec<Vec<(u32, RepTag)>> = vec![
            vec![spinor(17)],
            vec![spinor(3), spinor(13)],
            vec![spinor(5), spinor(8)],
            vec![spinor(6), spinor(11)],
            vec![spinor(3), spinor(3), spinor(8)],
            vec![spinor(3), spinor(6), spinor(7)],
            vec![spinor(3); 5],
            vec![(8, V), spinor(9)],
            vec![(6, V); 3],
            vec![(8, V), spinor(7)],
        ];
        for items in misses {
            assert!(bd(&items).free, "{items:?}");
        }
    }

    #[test]
    fn tags_matter() {
        // Spin(6) vector is not the half-spin of row 4
        assert!(bd(&[(6, V), spinor(10)]).free);
        assert_eq!(bd(&[(6, Hp), spinor(10)]), FreenessVerdict::row(4));
        assert!(bd(&[(7, S), (7, S), (7, S)]).free);
    }

    #[test]
    fn row_ten_boundary() {
        // rest = Spin(3) x Spin(3) has dimension 4
        assert_eq!(bd(&[(6, V), spinor(3), spinor(3)]), FreenessVerdict::row(10));
        assert_eq!(bd(&[(12, V), (10, V)]), FreenessVerdict::row(10));
        // Spin(9) spin rep has dimension 16
        assert!(bd(&[(16, V), spinor(9)]).free);
        assert_eq!(bd(&[(18, V), spinor(9)]), FreenessVerdict::row(10));
    }

    #[test]
    fn invariant_under_order_and_sign() {
        let a = bd(&[(6, Hp), (3, S), (5, S)]);
        let b = bd(&[(5, S), (6, Hm), (3, S)]);
        assert_eq!(a, b);
        assert_eq!(a, FreenessVerdict::row(6));
    }

    #[test]
    fn wrong_family() {
        assert_eq!(check_bd(&[(7, RepTag::ExtPower(1))]), Err(FreenessError::NotSpinFamily));
        assert_eq!(check_bd(&[(7, V)]), Err(FreenessError::NotSpinFamily));
    }

    #[test]
    fn type_c() {
        assert!(check_c(&[4, 4, 4]).unwrap().free);
        assert!(!check_c(&[4, 4]).unwrap().free);
        assert!(!check_c(&[64, 3, 3]).unwrap().free);
        assert_eq!(check_c(&[3, 64, 3]), check_c(&[64, 3, 3]));
        assert!(check_c(&[18, 3, 3]).unwrap().free);
        assert!(!check_c(&[19, 3, 3]).unwrap().free);
    }

    #[test]
    fn type_a() {
        assert!(check_a(&[(2, 1); 5]).unwrap().free);
        assert!(!check_a(&[(3, 1); 3]).unwrap().free);
        assert!(!check_a(&[(2, 3), (2, 3), (2, 1)]).unwrap().free);
        assert!(!check_a(&[(2, 1); 4]).unwrap().free);
        assert!(!check_a(&[(2, 1); 2]).unwrap().free);
        assert!(!check_a(&[(5, 3), (5, 1), (5, 1)]).unwrap().free);
        assert!(check_a(&[(5, 1), (5, 1), (5, 1)]).unwrap().free);
        assert_eq!(check_a(&[(2, 1), (2, 3), (2, 3)]), check_a(&[(2, 3), (2, 3), (2, 1)]));
        assert_eq!(check_a(&[(2, 1), (3, 1), (3, 1)]), Err(FreenessError::NotSLFamily));
    }

    #[test]
    fn e6() {
        assert!(check_e6(2).free);
        assert!(check_e6(3).free);
        assert!(!check_e6(1).free);
    }
}

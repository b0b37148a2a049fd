//! End-to-end computation of bounds and exact values.
//!
//! The pipeline: canonical factor order, build, socle table, index-minimal
//! bases, lifts, a freely acting covering subset, then bounds. A basis whose
//! representation dimensions equal the socle `n` values and whose lifts act
//! freely closes the gap between the two bounds.

mod extend;
mod report;

pub use extend::{extend_ed, extend_or_fallback, nu_order};
pub use report::{EdReport, ExtensionData, HypothesisFailure, Route, SCHEMA_VERSION};

use num_bigint::BigInt;
use num_traits::Signed;
use thiserror::Error;

use crate::basis_search::{
    candidate, family_prime, lift_basis, optimum, socle_table, BasisCandidate, BasisError,
    LiftConstraints, Lifted, Optimum, SocleTable,
};
use crate::catalog::{build, CatalogError, GroupSpec, SemisimpleGroup, SimpleFactor};
use crate::freeness::FreenessVerdict;
use crate::repdata::Validity;
use crate::spec_io::render;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("group is not reduced: the full center of factor {index} ({factor}) lies in mu")]
    NotReduced { index: usize, factor: String },
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error("central extension hypothesis failed: {0}")]
    ExtensionHypothesisFailed(String),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Options {
    /// Overrides the family's torsion prime.
    pub prime: Option<u64>,
}

/// Canonical order, build, and the reducedness check.
pub fn prepare(spec: &GroupSpec) -> Result<(GroupSpec, Vec<usize>, SemisimpleGroup), EngineError> {
    spec.validate()?;
    let (canon, perm) = spec.canonicalize();
    let g = build(&canon)?;
    if !g.is_reduced() {
        let index = (0..g.factor_count())
            .find(|&i| {
                g.char_group()
                    .basis()
                    .iter()
                    .all(|b| g.component(b, i).iter().all(|c| c.sign() == num_bigint::Sign::NoSign))
            })
            .unwrap_or(0);
        return Err(EngineError::NotReduced {
            index: perm[index],
            factor: g.factors()[index].to_string(),
        });
    }
    Ok((canon, perm, g))
}

/// `score - dim G` for an index-minimal score.
pub fn lower_bound(g: &SemisimpleGroup, score: &BigInt) -> BigInt {
    score - g.dim_g()
}

/// `sum dim V - dim G`, valid when a freely acting covering subset exists.
pub fn upper_bound(g: &SemisimpleGroup, basis: &BasisCandidate) -> BigInt {
    basis.dim_sum() - g.dim_g()
}

/// The premises for exactness, each failure listed.
pub fn certify_exact(
    g: &SemisimpleGroup,
    basis: &BasisCandidate,
    lifted: &Lifted,
    optimal_score: &BigInt,
) -> Vec<HypothesisFailure> {
    let mut failures = Vec::new();
    if basis.chars.len() != g.rank_z() {
        failures.push(HypothesisFailure::BasisSizeMismatch {
            size: basis.chars.len(),
            rank: g.rank_z(),
        });
    }
    for ((chi, dim), n) in basis.chars.iter().zip(&basis.dims).zip(&basis.n_values) {
        if n.validity == Validity::UpperBoundOnly {
            failures.push(HypothesisFailure::NValueUpperBoundOnly {
                character: chi.clone(),
            });
        }
        if *dim != n.value {
            failures.push(HypothesisFailure::DimensionExceedsN {
                character: chi.clone(),
                dim: dim.clone(),
                n: n.value.clone(),
            });
        }
    }
    debug_assert_eq!(&basis.score, optimal_score);
    if lifted.b0.is_none() {
        failures.extend(freeness_failures(&basis.chars, &lifted.verdicts));
    }
    failures
}

fn freeness_failures(chars: &[crate::abelian::Character], verdicts: &[FreenessVerdict]) -> Vec<HypothesisFailure> {
    let mut out: Vec<HypothesisFailure> = chars
        .iter()
        .zip(verdicts)
        .filter(|(_, v)| !v.free)
        .map(|(c, v)| HypothesisFailure::NotGenericallyFree {
            character: c.clone(),
            verdict: v.clone(),
        })
        .collect();
    out.push(HypothesisFailure::SupportNotCovering);
    out
}

pub fn compute_ed(spec: &GroupSpec) -> Result<EdReport, EngineError> {
    compute_ed_with(spec, Options::default())
}

struct Attempt {
    basis: BasisCandidate,
    lifted: Lifted,
}

pub fn compute_ed_with(spec: &GroupSpec, opts: Options) -> Result<EdReport, EngineError> {
    let (canon, perm, g) = prepare(spec)?;
    let p = opts.prime.unwrap_or_else(|| family_prime(&g));
    let table = socle_table(&g, p)?;
    let opt = optimum(&table);
    let flagged = table.entries.iter().any(|e| !e.n.is_exact());
    let lower = (!flagged).then(|| lower_bound(&g, &opt.score));

    let mut exact: Option<Attempt> = None;
    let mut first_failures: Option<Vec<HypothesisFailure>> = None;
    let mut first_attempt: Option<Attempt> = None;
    for tie in &opt.ties {
        let images: Vec<_> = tie.iter().map(|&i| table.image(i)).collect();
        match lift_basis(&g, &table.socle, &images, LiftConstraints::Exact) {
            Ok(lifted) => {
                let basis = candidate(&g, &table, tie, lifted.chars.clone())?;
                let failures = certify_exact(&g, &basis, &lifted, &opt.score);
                let attempt = Attempt { basis, lifted };
                if failures.is_empty() {
                    exact = Some(attempt);
                    break;
                }
                first_failures.get_or_insert(failures);
                first_attempt.get_or_insert(attempt);
            }
            Err(BasisError::NoAdmissibleLift(detail)) => {
                first_failures.get_or_insert_with(|| vec![HypothesisFailure::NoAdmissibleLift { detail }]);
            }
            Err(e) => return Err(e.into()),
        }
    }

    let mut report = base_report(spec, &canon, perm, &g, p);
    report.lower = lower.clone();

    if let Some(a) = exact {
        let ed = upper_bound(&g, &a.basis);
        debug_assert_eq!(Some(&ed), lower.as_ref());
        report.upper = Some(ed.clone());
        report.exact = true;
        report.ed = Some(ed.clone());
        report.ed_red_upper = Some(&ed - BigInt::from(g.rank_z()));
        if g.center_is_p_group(p) {
            report.ed_red_exact = true;
            report.ed_red = report.ed_red_upper.clone();
        }
        report.verdicts = a.lifted.verdicts;
        report.b0 = a.lifted.b0;
        report.basis = Some(a.basis);
        report.caveats.push(format!(
            "ed_{p}(G) is expected to coincide with ed(G) here; this is a remark and is not computed"
        ));
    } else {
        let mut failures = first_failures.unwrap_or_default();
        if opt.truncated {
            failures.push(HypothesisFailure::TieSearchTruncated);
        }
        let shown = match best_relaxed(&g, &table, &opt)? {
            Some(a) => {
                let u = upper_bound(&g, &a.basis);
                report.ed_red_upper = Some(&u - BigInt::from(g.rank_z()));
                report.upper = Some(u);
                Some(a)
            }
            None => first_attempt.map(Ok).or_else(|| {
                let tie = opt.ties.first()?;
                let images: Vec<_> = tie.iter().map(|&i| table.image(i)).collect();
                Some(
                    lift_basis(&g, &table.socle, &images, LiftConstraints::Relaxed)
                        .and_then(|lifted| {
                            let basis = candidate(&g, &table, tie, lifted.chars.clone())?;
                            Ok(Attempt { basis, lifted })
                        }),
                )
            })
            .transpose()?,
        };
        if let Some(a) = shown {
            report.verdicts = a.lifted.verdicts;
            report.b0 = a.lifted.b0;
            report.basis = Some(a.basis);
        }
        report.hypothesis_failures = failures;
        if flagged {
            report.caveats.push(
                "Sp(2n) with n not a power of 2: n-values are only upper bounds, so no lower bound or exact value is reported".into(),
            );
        }
        if canon.factors == [SimpleFactor::Spin(16)] {
            report.caveats.push(
                "Spin(16): neither the half-spin nor the vector character acts generically freely, so the exactness argument does not apply; whether the lower bound is attained is left open".into(),
            );
        }
    }
    if let Some(l) = &report.lower {
        if l.is_negative() {
            report
                .caveats
                .push("lower bound is negative and therefore vacuous (shown as 0)".into());
        }
    }
    Ok(report)
}

/// Among tied optimal bases with relaxed lifts, the one with a freely acting
/// covering subset and the smallest dimension sum.
fn best_relaxed(g: &SemisimpleGroup, table: &SocleTable, opt: &Optimum) -> Result<Option<Attempt>, EngineError> {
    let mut best: Option<Attempt> = None;
    for tie in &opt.ties {
        let images: Vec<_> = tie.iter().map(|&i| table.image(i)).collect();
        let lifted = match lift_basis(g, &table.socle, &images, LiftConstraints::Relaxed) {
            Ok(l) => l,
            Err(BasisError::NoAdmissibleLift(_)) => continue,
            Err(e) => return Err(e.into()),
        };
        if lifted.b0.is_none() {
            continue;
        }
        let basis = candidate(g, table, tie, lifted.chars.clone())?;
        if best.as_ref().is_none_or(|b| basis.dim_sum() < b.basis.dim_sum()) {
            best = Some(Attempt { basis, lifted });
        }
    }
    Ok(best)
}

pub(crate) fn base_report(
    spec: &GroupSpec,
    canon: &GroupSpec,
    perm: Vec<usize>,
    g: &SemisimpleGroup,
    p: u64,
) -> EdReport {
    let mut caveats = vec![format!("char(k) != {p} assumed")];
    if perm.iter().enumerate().any(|(i, &j)| i != j) {
        caveats.push(format!(
            "factors reordered by descending parameter to {}",
            render(canon)
        ));
    }
    EdReport {
        schema_version: SCHEMA_VERSION,
        group: render(spec),
        canonical_group: render(canon),
        factor_permutation: perm,
        route: Route::Direct,
        prime: p,
        dim_g: g.dim_g().clone(),
        rank_z: g.rank_z(),
        center_structure: g.char_group().structure().orders().to_vec(),
        basis: None,
        verdicts: Vec::new(),
        b0: None,
        lower: None,
        upper: None,
        exact: false,
        ed: None,
        ed_red_upper: None,
        ed_red_exact: false,
        ed_red: None,
        hypothesis_failures: Vec::new(),
        caveats,
        extension: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::GroupElement;

    fn spin(n: u32) -> GroupSpec {
        GroupSpec::simply_connected(vec![SimpleFactor::Spin(n)]).unwrap()
    }

    fn big(x: i64) -> Option<BigInt> {
        Some(BigInt::from(x))
    }

    #[test]
    fn single_spin_exact() {
        for (n, ed) in [(15, 23), (17, 120), (19, 341), (18, 103)] {
            let r = compute_ed(&spin(n)).unwrap();
            assert!(r.exact, "Spin({n})");
            assert_eq!(r.ed, big(ed));
            assert_eq!(r.ed_red, big(ed - 1));
            r.check_invariants().unwrap();
        }
    }

    #[test]
    fn spin_scaling() {
        let two = BigInt::from(2);
        for n in (15u32..=25).step_by(2) {
            let r = compute_ed(&spin(n)).unwrap();
            let want = num_traits::Pow::pow(&two, (n - 1) / 2) - BigInt::from(n * (n - 1) / 2);
            assert_eq!(r.ed, Some(want.clone()), "Spin({n})");
            assert_eq!(r.ed_red, Some(want - 1));
        }
        for n in [18u32, 22, 26] {
            let r = compute_ed(&spin(n)).unwrap();
            let want = num_traits::Pow::pow(&two, (n - 2) / 2) - BigInt::from(n * (n - 1) / 2);
            assert_eq!(r.ed, Some(want.clone()), "Spin({n})");
            assert_eq!(r.ed_red, Some(want - 1));
        }
    }

    #[test]
    fn spin16_bounds_only() {
        let r = compute_ed(&spin(16)).unwrap();
        assert!(!r.exact);
        assert_eq!(r.lower, big(24));
        assert_eq!(r.upper, None);
        assert!(r.hypothesis_failures.contains(&HypothesisFailure::SupportNotCovering));
        assert!(r.caveats.iter().any(|c| c.starts_with("Spin(16)")));
        r.check_invariants().unwrap();
    }

    #[test]
    fn spin20_gap() {
        let r = compute_ed(&spin(20)).unwrap();
        assert!(!r.exact);
        assert_eq!(r.lower, big(326));
        assert_eq!(r.upper, big(342));
        assert_eq!(r.ed_red_upper, big(340));
        r.check_invariants().unwrap();
    }

    #[test]
    fn negative_lower_bound_kept_raw() {
        let r = compute_ed(&spin(12)).unwrap();
        assert_eq!(r.lower, big(-30));
        assert!(r.caveats.iter().any(|c| c.contains("vacuous")));
    }

    #[test]
    fn sp_not_two_power_is_flagged() {
        let spec = GroupSpec::new(
            vec![SimpleFactor::Sp(3); 3],
            vec![GroupElement::from_i64(&[1, 1, 0]), GroupElement::from_i64(&[0, 1, 1])],
        )
        .unwrap();
        let r = compute_ed(&spec).unwrap();
        assert!(!r.exact);
        assert_eq!(r.lower, None);
        assert_eq!(r.upper, big(216 - 63));
        r.check_invariants().unwrap();
    }

    #[test]
    fn not_reduced() {
        let spec = GroupSpec::new(
            vec![SimpleFactor::Spin(7), SimpleFactor::Spin(9)],
            vec![GroupElement::from_i64(&[0, 1])],
        )
        .unwrap();
        assert!(matches!(compute_ed(&spec), Err(EngineError::NotReduced { index: 1, .. })));
    }

    #[test]
    fn canonical_order_echoed() {
        let spec = GroupSpec::new(
            vec![SimpleFactor::Spin(3), SimpleFactor::Spin(10), SimpleFactor::Spin(3)],
            vec![GroupElement::from_i64(&[1, 2, 0]), GroupElement::from_i64(&[0, 2, 1])],
        )
        .unwrap();
        let r = compute_ed(&spec).unwrap();
        assert_eq!(r.factor_permutation, vec![1, 0, 2]);
        assert_eq!(r.ed, big(13));
    }

    #[test]
    fn prime_override() {
        let r = compute_ed_with(&spin(15), Options { prime: Some(3) });
        assert!(matches!(r, Err(EngineError::Basis(BasisError::Abelian(_)))));
        let r = compute_ed_with(&spin(15), Options { prime: Some(4) });
        assert!(matches!(r, Err(EngineError::Basis(BasisError::NotPrime(4)))));
    }
}

//! Randomized cross-checks of the optimized code against brute force.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::abelian::{
    annihilator, annihilator_brute_force, smith_normal_form, subgroup_structure, AbelianError,
    CyclicDecomposition, GroupElement, IntMatrix,
};
use crate::basis_search::{brute_force_min, family_prime, index_minimal_basis, BasisError};
use crate::catalog::{build, GroupSpec, SemisimpleGroup, SimpleFactor};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Specs to check.
    pub count: usize,
    /// Largest socle dual `|C*|` admitted.
    pub max_order: u64,
    pub seed: u64,
    /// Random Smith normal form checks.
    pub snf_count: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            count: 50,
            max_order: 81,
            seed: 0x5eed,
            snf_count: 200,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OracleSummary {
    pub basis_checked: usize,
    pub annihilator_checked: usize,
    pub snf_checked: usize,
    pub skipped: usize,
    pub failures: Vec<String>,
}

impl OracleSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn random_factor(rng: &mut impl Rng, family: usize, a_prime: u64) -> SimpleFactor {
    match family {
        0 => SimpleFactor::Spin(*[3u32, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 16, 17, 18].choose(rng).expect("nonempty")),
        1 => SimpleFactor::Sp(rng.gen_range(3..=8)),
        2 => SimpleFactor::SL {
            p: a_prime,
            k: rng.gen_range(1..=2),
        },
        _ => SimpleFactor::E6,
    }
}

fn random_element(rng: &mut impl Rng, ambient: &CyclicDecomposition) -> GroupElement {
    GroupElement::new(
        ambient
            .orders()
            .iter()
            .map(|o| BigInt::from(rng.gen_range(0..u64::try_from(o).expect("small order"))))
            .collect(),
    )
}

/// A random reduced group from one family with a socle dual of at most
/// `max_order` elements, or `None` if the draw missed.
pub fn random_reduced_spec(rng: &mut impl Rng, max_order: u64) -> Option<(GroupSpec, SemisimpleGroup)> {
    let family = rng.gen_range(0..4);
    let a_prime = *[2u64, 3].choose(rng)?;
    let m = rng.gen_range(1..=3);
    let factors: Vec<SimpleFactor> = (0..m).map(|_| random_factor(rng, family, a_prime)).collect();
    let ambient = CyclicDecomposition::new(factors.iter().flat_map(|f| f.center_orders()).collect()).ok()?;
    let mu: Vec<GroupElement> = (0..rng.gen_range(0..=2)).map(|_| random_element(rng, &ambient)).collect();
    let spec = GroupSpec::new(factors, mu).ok()?;
    let g = build(&spec).ok()?;
    if !g.is_reduced() {
        return None;
    }
    let p = family_prime(&g);
    let socle = crate::abelian::socle_dual(g.char_group(), p).ok()?;
    let size = BigInt::from(p).pow(socle.dimension() as u32);
    (size <= BigInt::from(max_order)).then_some((spec, g))
}

fn check_basis(g: &SemisimpleGroup, summary: &mut OracleSummary, label: &str) {
    let p = family_prime(g);
    let fast = index_minimal_basis(g, p);
    let slow = brute_force_min(g, p);
    match (fast, slow) {
        (Ok(a), Ok(b)) if a.score == b => summary.basis_checked += 1,
        (Ok(a), Ok(b)) => summary
            .failures
            .push(format!("{label}: optimizer score {} but brute force {b}", a.score)),
        (_, Err(BasisError::Abelian(AbelianError::TooLarge { .. }))) | (Err(BasisError::Rep(_)), Err(BasisError::Rep(_))) => {
            summary.skipped += 1
        }
        (Err(e), _) | (_, Err(e)) => summary.failures.push(format!("{label}: {e}")),
    }
}

fn check_annihilator(spec: &GroupSpec, summary: &mut OracleSummary, label: &str) {
    let ambient = match CyclicDecomposition::new(spec.factors.iter().flat_map(|f| f.center_orders()).collect()) {
        Ok(a) => a,
        Err(e) => {
            summary.failures.push(format!("{label}: {e}"));
            return;
        }
    };
    let result = (|| -> Result<Option<String>, AbelianError> {
        let ann = annihilator(&ambient, &spec.mu)?;
        let span = subgroup_structure(&ambient, &spec.mu)?;
        if ann.order() * span.order() != ambient.order() {
            return Ok(Some(format!(
                "|ann| {} * |<mu>| {} != |Z| {}",
                ann.order(),
                span.order(),
                ambient.order()
            )));
        }
        let brute = annihilator_brute_force(&ambient, &spec.mu)?;
        if BigInt::from(brute.len()) != ann.order() || !brute.iter().all(|c| ann.contains(c)) {
            return Ok(Some("annihilator differs from brute force".into()));
        }
        Ok(None)
    })();
    match result {
        Ok(None) => summary.annihilator_checked += 1,
        Ok(Some(msg)) => summary.failures.push(format!("{label}: {msg}")),
        Err(AbelianError::TooLarge { .. }) => summary.skipped += 1,
        Err(e) => summary.failures.push(format!("{label}: {e}")),
    }
}

/// Checks `u a v = d`, the divisibility chain and unimodularity.
pub fn snf_holds(a: &IntMatrix<BigInt>) -> bool {
    use num_traits::{One, Signed, Zero};
    let s = smith_normal_form(a);
    if &(&s.u * a) * &s.v != s.d || !s.d.is_diagonal() {
        return false;
    }
    let diag = s.d.diagonal();
    let chain = diag.iter().all(|x| !x.is_negative())
        && diag.windows(2).all(|w| {
            if w[0].is_zero() {
                w[1].is_zero()
            } else {
                (&w[1] % &w[0]).is_zero()
            }
        });
    let unimodular = |m: &IntMatrix<BigInt>| m.determinant().is_some_and(|d| d.abs().is_one());
    chain && unimodular(&s.u) && unimodular(&s.v)
}

pub fn random_matrix(rng: &mut impl Rng, max_dim: usize, bound: i64) -> IntMatrix<BigInt> {
    let rows = rng.gen_range(1..=max_dim);
    let cols = rng.gen_range(1..=max_dim);
    IntMatrix::from_fn(rows, cols, |_, _| BigInt::from(rng.gen_range(-bound..=bound)))
}

pub fn run(config: &OracleConfig) -> OracleSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut summary = OracleSummary::default();
    let mut attempts = 0;
    while summary.basis_checked < config.count && attempts < config.count * 200 {
        attempts += 1;
        let Some((spec, g)) = random_reduced_spec(&mut rng, config.max_order) else {
            continue;
        };
        let label = crate::spec_io::render(&spec);
        check_basis(&g, &mut summary, &label);
        check_annihilator(&spec, &mut summary, &label);
    }
    if summary.basis_checked < config.count {
        summary.failures.push(format!(
            "only {} of {} specs could be checked",
            summary.basis_checked, config.count
        ));
    }
    for _ in 0..config.snf_count {
        let a = random_matrix(&mut rng, 6, 50);
        if snf_holds(&a) {
            summary.snf_checked += 1;
        } else {
            summary.failures.push(format!("Smith form law fails for {a:?}"));
        }
    }
    summary
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes() {
        let s = run(&OracleConfig {
            count: 10,
            snf_count: 20,
            ..OracleConfig::default()
        });
        assert!(s.passed(), "{:?}", s.failures);
        assert_eq!(s.basis_checked, 10);
        assert_eq!(s.snf_checked, 20);
    }

    #[test]
    fn generated_specs_are_reduced() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut seen = 0;
        for _ in 0..500 {
            if let Some((_, g)) = random_reduced_spec(&mut rng, 81) {
                assert!(g.is_reduced());
                seen += 1;
            }
        }
        assert!(seen > 50);
    }
}

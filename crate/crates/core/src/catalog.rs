//! Simple factors, their centers and dimensions, and construction of a
//! semisimple group `(G_1 x ... x G_m) / mu` from a [`GroupSpec`].
//!
//! Center coordinates follow one fixed convention:
//!
//! | factor              | center        | character -> representation            |
//! |---------------------|---------------|----------------------------------------|
//! | Spin(n), n odd      | Z/2           | 1 -> spin rep V(n)                     |
//! | Spin(n), n = 2 mod 4| Z/4           | 1, 3 -> half-spin V(n)+-, 2 -> vector  |
//! | Spin(n), n = 0 mod 4| Z/2 x Z/2     | (1,0), (0,1) -> half-spin, (1,1) -> vector |
//! | Sp(2n)              | Z/2           | 1 -> W(2n)                             |
//! | SL(p^k)             | Z/p^k         | c -> c-th exterior power, c in {1, p^k-1} |
//! | E6                  | Z/3           | 1, 2 -> the two 27-dim minuscule reps  |
//!
//! In root-of-unity terms a primitive 4th root `i` of Spin(4k+2) is `1`,
//! `-1` is `2`, and `-i` is `3`.

use std::fmt;
use std::ops::Range;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abelian::{
    annihilator, rank, AbelianError, Character, CyclicDecomposition, GroupElement,
    SubgroupPresentation,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("the product has no factors")]
    EmptyProduct,
    #[error("unsupported mix of families: {0}")]
    UnsupportedFamilyMix(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("malformed mu generator #{index}: {detail}")]
    MalformedMuGenerator { index: usize, detail: String },
    #[error(transparent)]
    Abelian(#[from] AbelianError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    SpinOdd,
    SpinEven,
    Sp,
    SL,
    E6,
}

/// The homogeneous family a whole group belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyTag {
    BD,
    C,
    A { p: u64 },
    E6,
}

impl FamilyTag {
    /// The torsion prime used for the socle.
    pub fn prime(self) -> u64 {
        match self {
            FamilyTag::BD | FamilyTag::C => 2,
            FamilyTag::A { p } => p,
            FamilyTag::E6 => 3,
        }
    }
}

/// A simple simply connected factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SimpleFactor {
    /// `Spin(n)`.
    Spin(u32),
    /// `Sp(2n)`, stored by its rank `n`.
    Sp(u32),
    /// `SL(p^k)`.
    SL { p: u64, k: u32 },
    E6,
}

impl SimpleFactor {
    pub fn validate(&self) -> Result<(), CatalogError> {
        match *self {
            SimpleFactor::Spin(n) if n < 3 => {
                Err(CatalogError::BadParameter(format!("Spin({n}) needs n >= 3")))
            }
            SimpleFactor::Spin(4) => Err(CatalogError::BadParameter(
                "Spin(4) is not simple".into(),
            )),
            SimpleFactor::Sp(n) if n < 3 => Err(CatalogError::BadParameter(format!(
                "Sp({}) needs rank n >= 3, i.e. Sp(6) or larger",
                2 * u64::from(n)
            ))),
            SimpleFactor::SL { p, k } if k == 0 || !is_prime(p) => Err(
                CatalogError::BadParameter(format!("SL needs a prime power, got p={p}, k={k}")),
            ),
            _ => Ok(()),
        }
    }

    pub fn family(&self) -> Family {
        match self {
            SimpleFactor::Spin(n) if n % 2 == 1 => Family::SpinOdd,
            SimpleFactor::Spin(_) => Family::SpinEven,
            SimpleFactor::Sp(_) => Family::Sp,
            SimpleFactor::SL { .. } => Family::SL,
            SimpleFactor::E6 => Family::E6,
        }
    }

    /// Orders of the cyclic factors of the center, in coordinate order.
    pub fn center_orders(&self) -> Vec<BigInt> {
        match *self {
            SimpleFactor::Spin(n) if n % 2 == 1 => vec![BigInt::from(2)],
            SimpleFactor::Spin(n) if n % 4 == 2 => vec![BigInt::from(4)],
            SimpleFactor::Spin(_) => vec![BigInt::from(2), BigInt::from(2)],
            SimpleFactor::Sp(_) => vec![BigInt::from(2)],
            SimpleFactor::SL { p, k } => vec![BigInt::from(p).pow(k)],
            SimpleFactor::E6 => vec![BigInt::from(3)],
        }
    }

    pub fn center_order(&self) -> BigInt {
        self.center_orders().iter().product()
    }

    pub fn dimension(&self) -> BigInt {
        match *self {
            SimpleFactor::Spin(n) => {
                let n = BigInt::from(n);
                &n * (&n - 1) / 2
            }
            SimpleFactor::Sp(n) => {
                let n = BigInt::from(n);
                &n * (2 * &n + 1)
            }
            SimpleFactor::SL { p, k } => BigInt::from(p).pow(2 * k) - 1,
            SimpleFactor::E6 => BigInt::from(78),
        }
    }

    /// Parameter used for the descending canonical order.
    pub fn sort_key(&self) -> u64 {
        match *self {
            SimpleFactor::Spin(n) | SimpleFactor::Sp(n) => n.into(),
            SimpleFactor::SL { k, .. } => k.into(),
            SimpleFactor::E6 => 0,
        }
    }
}

impl fmt::Display for SimpleFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SimpleFactor::Spin(n) => write!(f, "Spin({n})"),
            SimpleFactor::Sp(n) => write!(f, "Sp({})", 2 * u64::from(n)),
            SimpleFactor::SL { p, k } => write!(f, "SL({})", BigInt::from(p).pow(k)),
            SimpleFactor::E6 => write!(f, "E6"),
        }
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^k` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0 || d.saturating_mul(*d) > q)?;
    let p = if q % p == 0 { p } else { q };
    let mut k = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

/// The user's group: simple factors and generators of `mu` in the product
/// of their centers (coordinates laid out factor by factor).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    pub factors: Vec<SimpleFactor>,
    pub mu: Vec<GroupElement>,
}

impl GroupSpec {
    pub fn new(factors: Vec<SimpleFactor>, mu: Vec<GroupElement>) -> Result<Self, CatalogError> {
        let spec = Self { factors, mu };
        spec.validate()?;
        Ok(spec)
    }

    /// Simply connected product, `mu` trivial.
    pub fn simply_connected(factors: Vec<SimpleFactor>) -> Result<Self, CatalogError> {
        Self::new(factors, Vec::new())
    }

    pub fn validate(&self) -> Result<FamilyTag, CatalogError> {
        let first = self.factors.first().ok_or(CatalogError::EmptyProduct)?;
        for f in &self.factors {
            f.validate()?;
        }
        let tag = match *first {
            SimpleFactor::Spin(_) => FamilyTag::BD,
            SimpleFactor::Sp(_) => FamilyTag::C,
            SimpleFactor::SL { p, .. } => FamilyTag::A { p },
            SimpleFactor::E6 => FamilyTag::E6,
        };
        for f in &self.factors {
            let ok = matches!(
                (tag, f),
                (FamilyTag::BD, SimpleFactor::Spin(_))
                    | (FamilyTag::C, SimpleFactor::Sp(_))
                    | (FamilyTag::E6, SimpleFactor::E6)
            ) || matches!((tag, f), (FamilyTag::A { p }, SimpleFactor::SL { p: q, .. }) if p == *q);
            if !ok {
                return Err(CatalogError::UnsupportedFamilyMix(format!(
                    "{first} cannot be combined with {f}"
                )));
            }
        }
        let ambient = center_of(&self.factors)?;
        for (index, g) in self.mu.iter().enumerate() {
            ambient
                .check(g)
                .map_err(|e| CatalogError::MalformedMuGenerator {
                    index,
                    detail: e.to_string(),
                })?;
        }
        Ok(tag)
    }

    /// Stable sort of the factors by descending parameter, with `mu`
    /// coordinates permuted to match. `perm[new] = old`.
    pub fn canonicalize(&self) -> (GroupSpec, Vec<usize>) {
        let mut perm: Vec<usize> = (0..self.factors.len()).collect();
        perm.sort_by(|&a, &b| self.factors[b].sort_key().cmp(&self.factors[a].sort_key()));
        let spec = GroupSpec {
            factors: perm.iter().map(|&i| self.factors[i]).collect(),
            mu: self.mu.iter().map(|g| permute_element(&self.factors, &perm, g)).collect(),
        };
        (spec, perm)
    }
}

/// Reorders the coordinate blocks of `g` (laid out for `factors`) by `perm`.
pub fn permute_element(factors: &[SimpleFactor], perm: &[usize], g: &GroupElement) -> GroupElement {
    let blocks = block_ranges(factors);
    let coords = perm
        .iter()
        .flat_map(|&i| g.coords()[blocks[i].clone()].iter().cloned())
        .collect();
    GroupElement::new(coords)
}

pub(crate) fn block_ranges(factors: &[SimpleFactor]) -> Vec<Range<usize>> {
    let mut start = 0;
    factors
        .iter()
        .map(|f| {
            let len = f.center_orders().len();
            let r = start..start + len;
            start += len;
            r
        })
        .collect()
}

fn center_of(factors: &[SimpleFactor]) -> Result<CyclicDecomposition, AbelianError> {
    CyclicDecomposition::new(factors.iter().flat_map(|f| f.center_orders()).collect())
}

/// Derived data of `(G_1 x ... x G_m) / mu`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemisimpleGroup {
    spec: GroupSpec,
    dim_g: BigInt,
    center_tilde: CyclicDecomposition,
    char_group: SubgroupPresentation,
    rank_z: usize,
    family: FamilyTag,
    blocks: Vec<Range<usize>>,
}

pub fn build(spec: &GroupSpec) -> Result<SemisimpleGroup, CatalogError> {
    let family = spec.validate()?;
    let center_tilde = center_of(&spec.factors)?;
    let char_group = annihilator(&center_tilde, &spec.mu)?;
    let rank_z = rank(&char_group);
    Ok(SemisimpleGroup {
        dim_g: spec.factors.iter().map(SimpleFactor::dimension).sum(),
        blocks: block_ranges(&spec.factors),
        spec: spec.clone(),
        center_tilde,
        char_group,
        rank_z,
        family,
    })
}

impl SemisimpleGroup {
    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn factors(&self) -> &[SimpleFactor] {
        &self.spec.factors
    }

    pub fn factor_count(&self) -> usize {
        self.spec.factors.len()
    }

    pub fn dim_g(&self) -> &BigInt {
        &self.dim_g
    }

    /// Center of the simply connected cover; also the ambient of characters.
    pub fn center_tilde(&self) -> &CyclicDecomposition {
        &self.center_tilde
    }

    /// `Z(G)*` realized inside `Z(G~)*`.
    pub fn char_group(&self) -> &SubgroupPresentation {
        &self.char_group
    }

    pub fn rank_z(&self) -> usize {
        self.rank_z
    }

    pub fn family(&self) -> FamilyTag {
        self.family
    }

    pub fn block(&self, i: usize) -> Range<usize> {
        self.blocks[i].clone()
    }

    /// The component of `chi` on factor `i`.
    pub fn component<'a>(&self, chi: &'a Character, i: usize) -> &'a [BigInt] {
        &chi.coords()[self.blocks[i].clone()]
    }

    /// Factors on which `chi` is nontrivial.
    pub fn support(&self, chi: &Character) -> Vec<usize> {
        (0..self.factor_count())
            .filter(|&i| self.component(chi, i).iter().any(|c| !c.is_zero()))
            .collect()
    }

    /// Whether the full center of some factor lies in `<mu>`. By double
    /// annihilation that happens exactly when every character of `Z(G)`
    /// vanishes on that factor's block.
    pub fn is_reduced(&self) -> bool {
        (0..self.factor_count()).all(|i| {
            self.char_group
                .basis()
                .iter()
                .any(|b| self.component(b, i).iter().any(|c| !c.is_zero()))
        })
    }

    /// Whether `Z(G)` is a p-group.
    pub fn center_is_p_group(&self, p: u64) -> bool {
        let p = BigInt::from(p);
        self.char_group.structure().orders().iter().all(|d| {
            let mut d = d.clone();
            while (&d % &p).is_zero() {
                d /= &p;
            }
            d.is_one()
        })
    }

    /// Whether `x` (in `Z(G~)` coordinates) lies in `<mu>`.
    pub fn in_mu(&self, x: &GroupElement) -> bool {
        self.char_group
            .basis()
            .iter()
            .all(|b| self.center_tilde.pairing(b, x).is_zero())
    }
}

pub fn support(g: &SemisimpleGroup, chi: &Character) -> Vec<usize> {
    g.support(chi)
}

pub fn is_reduced(g: &SemisimpleGroup) -> bool {
    g.is_reduced()
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::abelian::span_brute_force;

    fn el(c: &[i64]) -> GroupElement {
        GroupElement::from_i64(c)
    }

    fn kernel_of_product_2(m: usize) -> Vec<GroupElement> {
        (0..m - 1)
            .map(|i| {
                let mut v = vec![0; m];
                v[i] = 1;
                v[i + 1] = 1;
                el(&v)
            })
            .collect()
    }

    #[test]
    fn spin15_simply_connected() {
        let g = build(&GroupSpec::simply_connected(vec![SimpleFactor::Spin(15)]).unwrap()).unwrap();
        assert_eq!(g.dim_g(), &BigInt::from(105));
        assert_eq!(g.center_tilde().orders(), &[BigInt::from(2)]);
        assert_eq!(g.char_group().order(), BigInt::from(2));
        assert_eq!(g.rank_z(), 1);
        assert!(g.is_reduced());
    }

    #[test]
    fn spin10_squared_mod_i_minus_i() {
        let spec = GroupSpec::new(
            vec![SimpleFactor::Spin(10), SimpleFactor::Spin(10)],
            vec![el(&[1, 3])],
        )
        .unwrap();
        let g = build(&spec).unwrap();
        assert_eq!(g.dim_g(), &BigInt::from(90));
        assert_eq!(g.char_group().structure().orders(), &[BigInt::from(4)]);
        assert!(g.char_group().contains(&el(&[1, 1])));
        assert_eq!(g.rank_z(), 1);
    }

    #[test]
    fn e6_squared() {
        let spec = GroupSpec::new(vec![SimpleFactor::E6; 2], vec![el(&[1, 2])]).unwrap();
        let g = build(&spec).unwrap();
        assert_eq!(g.dim_g(), &BigInt::from(156));
        assert_eq!(g.char_group().structure().orders(), &[BigInt::from(3)]);
        assert!(g.char_group().contains(&el(&[1, 1])));
        assert_eq!(g.family(), FamilyTag::E6);
    }

    #[test]
    fn dimensions_and_centers() {
        let cases = [
            (SimpleFactor::Spin(7), 21, 2),
            (SimpleFactor::Spin(10), 45, 4),
            (SimpleFactor::Spin(16), 120, 4),
            (SimpleFactor::Sp(4), 36, 2),
            (SimpleFactor::SL { p: 2, k: 3 }, 63, 8),
            (SimpleFactor::SL { p: 3, k: 1 }, 8, 3),
            (SimpleFactor::E6, 78, 3),
        ];
        for (f, dim, center) in cases {
            assert_eq!(f.dimension(), BigInt::from(dim), "{f}");
            assert_eq!(f.center_order(), BigInt::from(center), "{f}");
        }
        assert_eq!(SimpleFactor::Spin(16).center_orders().len(), 2);
    }

    #[test]
    fn bad_parameters() {
        for f in [
            SimpleFactor::Spin(4),
            SimpleFactor::Spin(2),
            SimpleFactor::Sp(2),
            SimpleFactor::SL { p: 6, k: 1 },
            SimpleFactor::SL { p: 2, k: 0 },
        ] {
            assert!(matches!(
                GroupSpec::simply_connected(vec![f]),
                Err(CatalogError::BadParameter(_))
            ));
        }
        assert!(GroupSpec::simply_connected(vec![SimpleFactor::Spin(6)]).is_ok());
    }

    #[test]
    fn family_mixes() {
        let mixed = GroupSpec::simply_connected(vec![SimpleFactor::Spin(7), SimpleFactor::Sp(3)]);
        assert!(matches!(mixed, Err(CatalogError::UnsupportedFamilyMix(_))));
        let primes = GroupSpec::simply_connected(vec![
            SimpleFactor::SL { p: 2, k: 1 },
            SimpleFactor::SL { p: 3, k: 1 },
        ]);
        assert!(matches!(primes, Err(CatalogError::UnsupportedFamilyMix(_))));
        assert!(GroupSpec::simply_connected(vec![SimpleFactor::Spin(7), SimpleFactor::Spin(10)]).is_ok());
        assert_eq!(GroupSpec::simply_connected(vec![]), Err(CatalogError::EmptyProduct));
    }

    #[test]
    fn malformed_mu() {
        let r = GroupSpec::new(vec![SimpleFactor::Spin(7)], vec![el(&[2])]);
        assert!(matches!(r, Err(CatalogError::MalformedMuGenerator { index: 0, .. })));
        let r = GroupSpec::new(vec![SimpleFactor::Spin(16)], vec![el(&[1])]);
        assert!(matches!(r, Err(CatalogError::MalformedMuGenerator { .. })));
    }

    #[test]
    fn reducedness() {
        let spin7_cubed = GroupSpec::new(vec![SimpleFactor::Spin(7); 3], kernel_of_product_2(3)).unwrap();
        assert!(build(&spin7_cubed).unwrap().is_reduced());

        let split = GroupSpec::new(
            vec![SimpleFactor::Spin(7), SimpleFactor::Spin(9)],
            vec![el(&[1, 0])],
        )
        .unwrap();
        assert!(!build(&split).unwrap().is_reduced());

        let plain = GroupSpec::simply_connected(vec![SimpleFactor::Spin(16), SimpleFactor::Sp(3)]);
        assert!(plain.is_err());
        let plain = GroupSpec::simply_connected(vec![SimpleFactor::Spin(16), SimpleFactor::Spin(5)]).unwrap();
        assert!(build(&plain).unwrap().is_reduced());
    }

    #[test]
    fn support_blocks() {
        let spec = GroupSpec::simply_connected(vec![
            SimpleFactor::Spin(11),
            SimpleFactor::Spin(13),
            SimpleFactor::Spin(7),
        ])
        .unwrap();
        let g = build(&spec).unwrap();
        assert_eq!(g.support(&el(&[1, 1, 0])), vec![0, 1]);
        assert!(g.support(&el(&[0, 0, 0])).is_empty());

        let spec = GroupSpec::simply_connected(vec![SimpleFactor::Spin(16), SimpleFactor::Spin(7)]).unwrap();
        let g = build(&spec).unwrap();
        assert_eq!(g.support(&el(&[1, 1, 0])), vec![0]);
        assert_eq!(g.support(&el(&[0, 1, 1])), vec![0, 1]);
    }

    #[test]
    fn canonical_order_permutes_mu() {
        let spec = GroupSpec::new(
            vec![SimpleFactor::Spin(3), SimpleFactor::Spin(16), SimpleFactor::Spin(10)],
            vec![el(&[1, 1, 0, 2])],
        )
        .unwrap();
        let (canon, perm) = spec.canonicalize();
        assert_eq!(perm, vec![1, 2, 0]);
        assert_eq!(
            canon.factors,
            vec![SimpleFactor::Spin(16), SimpleFactor::Spin(10), SimpleFactor::Spin(3)]
        );
        assert_eq!(canon.mu, vec![el(&[1, 0, 2, 1])]);
        canon.validate().unwrap();
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }

    /// Brute force: enumerate <mu> and test containment of each factor center.
    fn reduced_brute_force(g: &SemisimpleGroup) -> bool {
        let span: BTreeSet<_> = span_brute_force(g.center_tilde(), &g.spec().mu).unwrap();
        (0..g.factor_count()).all(|i| {
            let block = g.block(i);
            let gens: Vec<GroupElement> = block
                .clone()
                .map(|c| {
                    let mut v = vec![BigInt::zero(); g.center_tilde().len()];
                    v[c] = BigInt::one();
                    GroupElement::new(v)
                })
                .collect();
            let center_i = span_brute_force(g.center_tilde(), &gens).unwrap();
            !center_i.is_subset(&span)
        })
    }

    #[test]
    fn reducedness_agrees_with_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let pool = [
            SimpleFactor::Spin(3),
            SimpleFactor::Spin(6),
            SimpleFactor::Spin(8),
            SimpleFactor::Spin(9),
            SimpleFactor::Spin(10),
        ];
        let mut checked = 0;
        while checked < 200 {
            let m = rng.gen_range(1..=4);
            let factors: Vec<_> = (0..m).map(|_| pool[rng.gen_range(0..pool.len())]).collect();
            let center = center_of(&factors).unwrap();
            if center.order() > BigInt::from(1 << 12) {
                continue;
            }
            let mu: Vec<GroupElement> = (0..rng.gen_range(0..=3))
                .map(|_| {
                    let coords = center
                        .orders()
                        .iter()
                        .map(|o| BigInt::from(rng.gen_range(0..u64::try_from(o).unwrap())))
                        .collect();
                    GroupElement::new(coords)
                })
                .collect();
            let g = build(&GroupSpec::new(factors, mu).unwrap()).unwrap();
            assert_eq!(g.is_reduced(), reduced_brute_force(&g), "{:?}", g.spec());
            checked += 1;
        }
    }
}

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use super::snf::{integer_kernel, smith_normal_form, solve_integer, SmithForm};
use super::AbelianError;

/// Hard cap on any brute-force enumeration.
pub const ENUMERATION_CAP: u64 = 1 << 20;

/// A finite abelian group `Z/o_1 + ... + Z/o_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclicDecomposition {
    orders: Vec<BigInt>,
}

/// A point of a [`CyclicDecomposition`], one residue per cyclic factor.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<crate::serde_util::Decimal>", into = "Vec<crate::serde_util::Decimal>")]
pub struct GroupElement {
    coords: Vec<BigInt>,
}

/// Characters of `Z/o_1 + ... + Z/o_k` are coordinate vectors against the
/// same orders; `<chi, g> = sum chi_i g_i / o_i mod 1`.
pub type Character = GroupElement;

impl GroupElement {
    pub fn new(coords: Vec<BigInt>) -> Self {
        Self { coords }
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        Self::new(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

impl From<Vec<crate::serde_util::Decimal>> for GroupElement {
    fn from(v: Vec<crate::serde_util::Decimal>) -> Self {
        Self::new(v.into_iter().map(|d| d.0).collect())
    }
}

impl From<GroupElement> for Vec<crate::serde_util::Decimal> {
    fn from(g: GroupElement) -> Self {
        g.coords.into_iter().map(crate::serde_util::Decimal).collect()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl CyclicDecomposition {
    pub fn new(orders: Vec<BigInt>) -> Result<Self, AbelianError> {
        if let Some(bad) = orders.iter().find(|o| **o < BigInt::from(2)) {
            return Err(AbelianError::InvalidOrder(bad.clone()));
        }
        Ok(Self { orders })
    }

    pub fn from_u64(orders: &[u64]) -> Result<Self, AbelianError> {
        Self::new(orders.iter().map(|&o| BigInt::from(o)).collect())
    }

    pub fn trivial() -> Self {
        Self { orders: Vec::new() }
    }

    pub fn orders(&self) -> &[BigInt] {
        &self.orders
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn order(&self) -> BigInt {
        self.orders.iter().product()
    }

    pub fn exponent(&self) -> BigInt {
        self.orders.iter().fold(BigInt::one(), |acc, o| acc.lcm(o))
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement::new(vec![BigInt::zero(); self.len()])
    }

    pub fn check(&self, g: &GroupElement) -> Result<(), AbelianError> {
        if g.len() != self.len() {
            return Err(AbelianError::MalformedElement {
                element: g.to_string(),
                detail: format!("expected {} coordinates, got {}", self.len(), g.len()),
            });
        }
        for (c, o) in g.coords.iter().zip(&self.orders) {
            if c < &BigInt::zero() || c >= o {
                return Err(AbelianError::MalformedElement {
                    element: g.to_string(),
                    detail: format!("coordinate {c} outside [0, {o})"),
                });
            }
        }
        Ok(())
    }

    /// Reduces arbitrary integer coordinates into canonical residues.
    pub fn reduce(&self, coords: &[BigInt]) -> GroupElement {
        debug_assert_eq!(coords.len(), self.len());
        GroupElement::new(
            coords
                .iter()
                .zip(&self.orders)
                .map(|(c, o)| c.mod_floor(o))
                .collect(),
        )
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let sum: Vec<BigInt> = a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect();
        self.reduce(&sum)
    }

    pub fn scale(&self, a: &GroupElement, k: &BigInt) -> GroupElement {
        let v: Vec<BigInt> = a.coords.iter().map(|x| x * k).collect();
        self.reduce(&v)
    }

    /// `<chi, g>` as a residue modulo the exponent `e`, i.e. the pairing
    /// value multiplied by `e`.
    pub fn pairing(&self, chi: &Character, g: &GroupElement) -> BigInt {
        let e = self.exponent();
        let mut acc = BigInt::zero();
        for ((x, y), o) in chi.coords.iter().zip(&g.coords).zip(&self.orders) {
            acc += x * y * (&e / o);
        }
        acc.mod_floor(&e)
    }

    /// Order of a single element.
    pub fn element_order(&self, g: &GroupElement) -> BigInt {
        g.coords
            .iter()
            .zip(&self.orders)
            .fold(BigInt::one(), |acc, (c, o)| acc.lcm(&(o / c.gcd(o))))
    }

    /// Every element, in lexicographic order of coordinates.
    pub fn elements(&self) -> Result<Vec<GroupElement>, AbelianError> {
        let count = self.order();
        enumeration_guard(&count)?;
        let mut out = Vec::new();
        let mut cur = vec![BigInt::zero(); self.len()];
        loop {
            out.push(GroupElement::new(cur.clone()));
            if !odometer_step(&mut cur, &self.orders) {
                return Ok(out);
            }
        }
    }
}

pub(crate) fn enumeration_guard(count: &BigInt) -> Result<(), AbelianError> {
    if *count > BigInt::from(ENUMERATION_CAP) {
        Err(AbelianError::TooLarge {
            count: count.clone(),
            cap: ENUMERATION_CAP,
        })
    } else {
        Ok(())
    }
}

/// Advances `cur` to the next tuple with `0 <= cur[i] < bounds[i]`, last
/// coordinate fastest. Returns `false` after the final tuple.
pub(crate) fn odometer_step(cur: &mut [BigInt], bounds: &[BigInt]) -> bool {
    for i in (0..cur.len()).rev() {
        cur[i] += 1;
        if cur[i] < bounds[i] {
            return true;
        }
        cur[i] = BigInt::zero();
    }
    false
}

/// A subgroup of a [`CyclicDecomposition`] together with an invariant-factor
/// basis: `basis[i]` has order `structure.orders()[i]` and the basis
/// generates the same subgroup as `generators`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupPresentation {
    ambient: CyclicDecomposition,
    generators: Vec<GroupElement>,
    structure: CyclicDecomposition,
    basis: Vec<GroupElement>,
    solver: SmithForm<BigInt>,
}

impl SubgroupPresentation {
    pub fn ambient(&self) -> &CyclicDecomposition {
        &self.ambient
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn structure(&self) -> &CyclicDecomposition {
        &self.structure
    }

    pub fn basis(&self) -> &[GroupElement] {
        &self.basis
    }

    pub fn order(&self) -> BigInt {
        self.structure.order()
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }

    /// Coordinates of `g` in the computed basis, each reduced modulo its
    /// basis order, or `None` if `g` is not in the subgroup.
    pub fn coordinates(&self, g: &GroupElement) -> Option<Vec<BigInt>> {
        if self.ambient.check(g).is_err() {
            return None;
        }
        let x = solve_integer(&self.solver, g.coords())?;
        Some(
            x.iter()
                .zip(self.structure.orders())
                .map(|(a, d)| a.mod_floor(d))
                .collect(),
        )
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.coordinates(g).is_some()
    }

    /// `sum coeffs[i] * basis[i]`, reduced in the ambient group.
    pub fn combine(&self, coeffs: &[BigInt]) -> GroupElement {
        let mut acc = vec![BigInt::zero(); self.ambient.len()];
        for (a, b) in coeffs.iter().zip(&self.basis) {
            for (slot, c) in acc.iter_mut().zip(b.coords()) {
                *slot += a * c;
            }
        }
        self.ambient.reduce(&acc)
    }

    /// Every element of the subgroup (brute force, capped).
    pub fn elements(&self) -> Result<Vec<GroupElement>, AbelianError> {
        let mut out: Vec<GroupElement> = self
            .structure
            .elements()?
            .into_iter()
            .map(|c| self.combine(c.coords()))
            .collect();
        out.sort();
        Ok(out)
    }
}

/// Invariant factors and a matching basis of the subgroup generated by
/// `generators`.
pub fn subgroup_structure(
    ambient: &CyclicDecomposition,
    generators: &[GroupElement],
) -> Result<SubgroupPresentation, AbelianError> {
    for g in generators {
        ambient.check(g)?;
    }
    let n = ambient.len();
    let s = generators.len();

    // relations c with sum c_j g_j = 0: kernel of [G^T | diag(o)], first s coords
    let a = IntMatrix::from_fn(n, s + n, |i, j| {
        if j < s {
            generators[j].coords()[i].clone()
        } else if j - s == i {
            ambient.orders()[i].clone()
        } else {
            BigInt::zero()
        }
    });
    let relations: Vec<Vec<BigInt>> = integer_kernel(&a)
        .into_iter()
        .map(|k| k[..s].to_vec())
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();

    let mut orders = Vec::new();
    let mut basis = Vec::new();
    if s > 0 {
        let rel = if relations.is_empty() {
            IntMatrix::zeros(0, s)
        } else {
            IntMatrix::from_rows(relations).expect("kernel vectors share a length")
        };
        let snf = smith_normal_form(&rel);
        let diag = snf.d.diagonal();
        for i in 0..s {
            // every generator has finite order, so the relation lattice has full rank
            let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
            debug_assert!(!d.is_zero(), "relation lattice must have full rank");
            if d.is_one() {
                continue;
            }
            let mut acc = vec![BigInt::zero(); n];
            for j in 0..s {
                let k = &snf.v_inv[(i, j)];
                for (slot, c) in acc.iter_mut().zip(generators[j].coords()) {
                    *slot += k * c;
                }
            }
            orders.push(d);
            basis.push(ambient.reduce(&acc));
        }
    }
    let structure = CyclicDecomposition::new(orders)?;
    let solver = coordinate_solver(ambient, &basis);
    Ok(SubgroupPresentation {
        ambient: ambient.clone(),
        generators: generators.to_vec(),
        structure,
        basis,
        solver,
    })
}

fn coordinate_solver(ambient: &CyclicDecomposition, basis: &[GroupElement]) -> SmithForm<BigInt> {
    let n = ambient.len();
    let r = basis.len();
    let a = IntMatrix::from_fn(n, r + n, |i, j| {
        if j < r {
            basis[j].coords()[i].clone()
        } else if j - r == i {
            ambient.orders()[i].clone()
        } else {
            BigInt::zero()
        }
    });
    smith_normal_form(&a)
}

/// The characters of `ambient` vanishing on every element of `mu`, i.e. the
/// character group of `ambient / <mu>` realized inside the dual of `ambient`.
pub fn annihilator(
    ambient: &CyclicDecomposition,
    mu: &[GroupElement],
) -> Result<SubgroupPresentation, AbelianError> {
    for g in mu {
        ambient.check(g)?;
    }
    let n = ambient.len();
    let k = mu.len();
    let e = ambient.exponent();
    // chi annihilates g_j iff sum_i chi_i g_ji (e / o_i) = 0 mod e
    let a = IntMatrix::from_fn(k, n + k, |j, i| {
        if i < n {
            &mu[j].coords()[i] * (&e / &ambient.orders()[i])
        } else if i - n == j {
            e.clone()
        } else {
            BigInt::zero()
        }
    });
    let mut gens: Vec<GroupElement> = integer_kernel(&a)
        .into_iter()
        .map(|v| ambient.reduce(&v[..n]))
        .filter(|g| !g.is_zero())
        .collect();
    gens.sort();
    gens.dedup();
    subgroup_structure(ambient, &gens)
}

/// Minimal number of generators: the count of nontrivial invariant factors.
pub fn rank(s: &SubgroupPresentation) -> usize {
    s.structure
        .orders()
        .iter()
        .filter(|o| !o.is_one())
        .count()
}

/// Restriction of characters of a group (presented by `s`) to its p-socle.
///
/// If the group has basis `b_i` of orders `d_i`, the dual basis `e_i`
/// satisfies `<b_i, e_j> = delta_ij / d_i`, so the socle is spanned by
/// `(d_i / p) e_i` for `p | d_i`, and `sum a_i b_i` restricts to
/// `(a_i mod p)` on those factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SocleDual {
    p: u64,
    presentation: SubgroupPresentation,
    factors: Vec<usize>,
    structure: CyclicDecomposition,
}

pub fn socle_dual(s: &SubgroupPresentation, p: u64) -> Result<SocleDual, AbelianError> {
    let pb = BigInt::from(p);
    let factors: Vec<usize> = s
        .structure()
        .orders()
        .iter()
        .enumerate()
        .filter(|(_, d)| d.is_multiple_of(&pb))
        .map(|(i, _)| i)
        .collect();
    if factors.is_empty() {
        return Err(AbelianError::TrivialSocle { p });
    }
    let structure = CyclicDecomposition::new(vec![pb; factors.len()])?;
    Ok(SocleDual {
        p,
        presentation: s.clone(),
        factors,
        structure,
    })
}

impl SocleDual {
    pub fn p(&self) -> u64 {
        self.p
    }

    /// `(Z/p)^r`.
    pub fn structure(&self) -> &CyclicDecomposition {
        &self.structure
    }

    pub fn dimension(&self) -> usize {
        self.factors.len()
    }

    pub fn presentation(&self) -> &SubgroupPresentation {
        &self.presentation
    }

    pub fn restrict(&self, chi: &Character) -> Result<Character, AbelianError> {
        let a = self
            .presentation
            .coordinates(chi)
            .ok_or_else(|| AbelianError::MalformedElement {
                element: chi.to_string(),
                detail: "not an element of the presented group".into(),
            })?;
        let pb = BigInt::from(self.p);
        Ok(GroupElement::new(
            self.factors.iter().map(|&i| a[i].mod_floor(&pb)).collect(),
        ))
    }

    /// Restriction in machine words, for the basis search.
    pub fn restrict_small(&self, chi: &Character) -> Result<Vec<u64>, AbelianError> {
        Ok(self
            .restrict(chi)?
            .coords()
            .iter()
            .map(|c| c.to_u64().expect("residue below p"))
            .collect())
    }

    /// All characters restricting to `image`, sorted by coordinates.
    pub fn lifts(&self, image: &Character) -> Result<Vec<Character>, AbelianError> {
        self.structure.check(image)?;
        let pb = BigInt::from(self.p);
        let orders = self.presentation.structure().orders();
        // per basis coordinate: the admissible residues
        let mut bounds = Vec::with_capacity(orders.len());
        let mut offsets = Vec::with_capacity(orders.len());
        let mut steps = Vec::with_capacity(orders.len());
        for (i, d) in orders.iter().enumerate() {
            match self.factors.iter().position(|&f| f == i) {
                Some(pos) => {
                    bounds.push(d / &pb);
                    offsets.push(image.coords()[pos].clone());
                    steps.push(pb.clone());
                }
                None => {
                    bounds.push(d.clone());
                    offsets.push(BigInt::zero());
                    steps.push(BigInt::one());
                }
            }
        }
        let count: BigInt = bounds.iter().product();
        enumeration_guard(&count)?;
        let mut out = Vec::new();
        let mut t = vec![BigInt::zero(); bounds.len()];
        loop {
            let coeffs: Vec<BigInt> = t
                .iter()
                .zip(&offsets)
                .zip(&steps)
                .map(|((t, o), s)| o + t * s)
                .collect();
            out.push(self.presentation.combine(&coeffs));
            if !odometer_step(&mut t, &bounds) {
                break;
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

/// Subgroup generated by `gens`, by closing under addition.
pub fn span_brute_force(
    ambient: &CyclicDecomposition,
    gens: &[GroupElement],
) -> Result<BTreeSet<GroupElement>, AbelianError> {
    enumeration_guard(&ambient.order())?;
    for g in gens {
        ambient.check(g)?;
    }
    let mut seen = BTreeSet::new();
    let zero = ambient.zero();
    seen.insert(zero.clone());
    let mut queue = VecDeque::from([zero]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = ambient.add(&x, g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    Ok(seen)
}

/// Annihilator of `mu` by testing every character of `ambient`.
pub fn annihilator_brute_force(
    ambient: &CyclicDecomposition,
    mu: &[GroupElement],
) -> Result<BTreeSet<Character>, AbelianError> {
    for g in mu {
        ambient.check(g)?;
    }
    Ok(ambient
        .elements()?
        .into_iter()
        .filter(|chi| mu.iter().all(|g| ambient.pairing(chi, g).is_zero()))
        .collect())
}

//! Index-minimal bases of the dual of the p-socle, their lifts to
//! characters of the center, and the choice of a freely acting subset.
//!
//! Socle characters are handled as `Vec<u64>` residues mod `p`. The search
//! is an exact branch and bound over increasing candidate indices with
//! candidates sorted by `n`; since a minimum-weight basis of a vector space
//! is found greedily, the greedy score seeds the bound and the search only
//! has to enumerate the ties.

use num_bigint::BigInt;
use num_traits::{Pow, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abelian::{socle_dual, AbelianError, Character, GroupElement, SocleDual, ENUMERATION_CAP};
use crate::catalog::{FamilyTag, SemisimpleGroup, SimpleFactor};
use crate::freeness::{check_character, FreenessError, FreenessVerdict};
use crate::repdata::{n_char, rep_choice, rep_tag, NValue, RepError, RepTag, Validity};

/// Most tied optima kept for the exactness search.
pub const TIE_CAP: usize = 4096;
/// Most lift tuples examined per socle basis.
pub const LIFT_TUPLE_CAP: u64 = 1 << 16;
/// Largest socle dual the brute-force oracle accepts.
pub const BRUTE_FORCE_SOCLE_CAP: u64 = 6561;
/// Largest number of subsets the brute-force oracle will visit.
pub const BRUTE_FORCE_SUBSET_CAP: u64 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BasisError {
    #[error(transparent)]
    Abelian(#[from] AbelianError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Freeness(#[from] FreenessError),
    #[error("no admissible lift: {0}")]
    NoAdmissibleLift(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
}

/// An index-minimal basis together with its lifts to `Z(G)*`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisCandidate {
    pub chars: Vec<Character>,
    pub socle_images: Vec<Character>,
    /// `n` of each socle image.
    pub n_values: Vec<NValue>,
    /// Dimension of the representation attached to each lift.
    #[serde(with = "crate::serde_util::vec_decimal")]
    pub dims: Vec<BigInt>,
    #[serde(with = "crate::serde_util::decimal")]
    pub score: BigInt,
    /// Whether each lift meets the component rules needed for exactness.
    pub flags: Vec<bool>,
}

impl BasisCandidate {
    pub fn dim_sum(&self) -> BigInt {
        self.dims.iter().sum()
    }

    pub fn n_exact(&self) -> bool {
        self.n_values.iter().all(NValue::is_exact)
    }
}

/// Which characters may serve as lifts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftConstraints {
    /// Representation dimension must equal `n`: for spin groups no vector
    /// component unless `n` is a power of two.
    Exact,
    /// Any character whose components have known representations.
    Relaxed,
}

/// Whether `chi` is an admissible lift under `constraints`.
pub fn admissible(g: &SemisimpleGroup, chi: &Character, constraints: LiftConstraints) -> bool {
    g.factors().iter().enumerate().all(|(i, f)| {
        let Ok(tag) = rep_tag(f, g.component(chi, i)) else {
            return false;
        };
        match (constraints, f) {
            (LiftConstraints::Exact, SimpleFactor::Spin(n)) => {
                tag != RepTag::Vector || n.is_power_of_two()
            }
            _ => true,
        }
    })
}

/// One nonzero socle character with its `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SocleEntry {
    pub image: Vec<u64>,
    pub n: NValue,
}

/// The nonzero socle characters, sorted by `(n, coordinates)`.
#[derive(Debug, Clone)]
pub struct SocleTable {
    pub socle: SocleDual,
    pub entries: Vec<SocleEntry>,
}

impl SocleTable {
    pub fn p(&self) -> u64 {
        self.socle.p()
    }

    pub fn rank(&self) -> usize {
        self.socle.dimension()
    }

    pub fn image(&self, idx: usize) -> Character {
        to_character(&self.entries[idx].image)
    }
}

fn to_character(v: &[u64]) -> Character {
    GroupElement::new(v.iter().map(|&x| BigInt::from(x)).collect())
}

/// `n` of a socle character: the gcd of `n` over its lifts. All values are
/// powers of `p`, so the gcd is the minimum. Lifts with unsupported
/// components are skipped.
pub fn n_socle(g: &SemisimpleGroup, socle: &SocleDual, image: &Character) -> Result<NValue, BasisError> {
    let mut best: Option<NValue> = None;
    let mut first_err = None;
    for chi in socle.lifts(image)? {
        match n_char(g, &chi) {
            Ok(v) => {
                best = Some(match best {
                    None => v,
                    Some(b) if v.value < b.value => v,
                    Some(b) if v.value == b.value => NValue {
                        value: b.value,
                        validity: b.validity.max(v.validity),
                    },
                    Some(b) => b,
                })
            }
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    match (best, first_err) {
        (Some(v), _) => Ok(v),
        (None, Some(e)) => Err(e.into()),
        (None, None) => unreachable!("every socle character has a lift"),
    }
}

pub(crate) fn check_prime(p: u64) -> Result<(), BasisError> {
    if crate::catalog::is_prime(p) {
        Ok(())
    } else {
        Err(BasisError::NotPrime(p))
    }
}

pub fn socle_table(g: &SemisimpleGroup, p: u64) -> Result<SocleTable, BasisError> {
    check_prime(p)?;
    let socle = socle_dual(g.char_group(), p)?;
    let count = BigInt::from(p).pow(socle.dimension() as u32);
    if count > BigInt::from(ENUMERATION_CAP) {
        return Err(AbelianError::TooLarge {
            count,
            cap: ENUMERATION_CAP,
        }
        .into());
    }
    let mut entries = Vec::new();
    for el in socle.structure().elements()? {
        if el.is_zero() {
            continue;
        }
        let n = n_socle(g, &socle, &el)?;
        let image = el.coords().iter().map(|c| c.to_u64().expect("residue below p")).collect();
        entries.push(SocleEntry { image, n });
    }
    entries.sort_by(|a, b| a.n.value.cmp(&b.n.value).then_with(|| a.image.cmp(&b.image)));
    Ok(SocleTable { socle, entries })
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(p)) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut base, mut e, mut acc) = (a % p, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

/// Row echelon form over `Z/p`, built one vector at a time.
#[derive(Clone, Debug)]
struct Echelon {
    p: u64,
    rows: Vec<(usize, Vec<u64>)>,
}

impl Echelon {
    fn new(p: u64) -> Self {
        Self { p, rows: Vec::new() }
    }

    /// Adds `v` if independent of the current rows.
    fn insert(&mut self, v: &[u64]) -> bool {
        let p = self.p;
        let mut w = v.to_vec();
        for (pivot, row) in &self.rows {
            let c = w[*pivot];
            if c != 0 {
                for (x, r) in w.iter_mut().zip(row) {
                    *x = (*x + p - mul_mod(c, *r, p)) % p;
                }
            }
        }
        let Some(pivot) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inv_mod(w[pivot], p);
        for x in &mut w {
            *x = mul_mod(*x, inv, p);
        }
        self.rows.push((pivot, w));
        true
    }
}

/// Optimal score and the tied optimal bases (entry indices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Optimum {
    pub score: BigInt,
    pub ties: Vec<Vec<usize>>,
    pub truncated: bool,
}

fn greedy(table: &SocleTable) -> (BigInt, Vec<usize>) {
    let mut ech = Echelon::new(table.p());
    let mut picked = Vec::new();
    let mut score = BigInt::zero();
    for (i, e) in table.entries.iter().enumerate() {
        if picked.len() == table.rank() {
            break;
        }
        if ech.insert(&e.image) {
            score += &e.n.value;
            picked.push(i);
        }
    }
    (score, picked)
}

struct TieSearch<'a> {
    table: &'a SocleTable,
    r: usize,
    best: BigInt,
    ties: Vec<Vec<usize>>,
    truncated: bool,
}

impl TieSearch<'_> {
    fn dfs(&mut self, start: usize, ech: &Echelon, chosen: &mut Vec<usize>, sum: &BigInt) {
        if self.truncated {
            return;
        }
        let depth = chosen.len();
        if depth == self.r {
            if *sum == self.best {
                if self.ties.len() == TIE_CAP {
                    self.truncated = true;
                    return;
                }
                self.ties.push(chosen.clone());
            }
            return;
        }
        let need = self.r - depth;
        let entries = &self.table.entries;
        for i in start..entries.len() {
            if entries.len() - i < need {
                break;
            }
            // entries are sorted by n, so the next `need` values bound the rest
            let bound: BigInt = sum + entries[i..i + need].iter().map(|e| &e.n.value).sum::<BigInt>();
            if bound > self.best {
                break;
            }
            let mut next = ech.clone();
            if !next.insert(&entries[i].image) {
                continue;
            }
            chosen.push(i);
            self.dfs(i + 1, &next, chosen, &(sum + &entries[i].n.value));
            chosen.pop();
            if self.truncated {
                return;
            }
        }
    }
}

fn sorted_coords(table: &SocleTable, tie: &[usize]) -> Vec<Vec<u64>> {
    let mut v: Vec<Vec<u64>> = tie.iter().map(|&i| table.entries[i].image.clone()).collect();
    v.sort();
    v
}

/// Minimum of `sum n` over bases of the socle dual, and every basis that
/// attains it (up to [`TIE_CAP`]), each sorted by coordinates, the list
/// sorted lexicographically.
pub fn optimum(table: &SocleTable) -> Optimum {
    let r = table.rank();
    let (best, _) = greedy(table);
    let mut search = TieSearch {
        table,
        r,
        best: best.clone(),
        ties: Vec::new(),
        truncated: false,
    };
    search.dfs(0, &Echelon::new(table.p()), &mut Vec::new(), &BigInt::zero());
    let mut ties: Vec<(Vec<Vec<u64>>, Vec<usize>)> = search
        .ties
        .into_iter()
        .map(|t| {
            let mut t = t;
            t.sort_by(|&a, &b| table.entries[a].image.cmp(&table.entries[b].image));
            (sorted_coords(table, &t), t)
        })
        .collect();
    ties.sort();
    Optimum {
        score: best,
        ties: ties.into_iter().map(|(_, t)| t).collect(),
        truncated: search.truncated,
    }
}

/// Lifts of a socle basis, the freeness verdict of each, and a covering
/// free subset when one exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lifted {
    pub chars: Vec<Character>,
    pub verdicts: Vec<FreenessVerdict>,
    pub b0: Option<Vec<usize>>,
}

/// Smallest subset (then lexicographically first) of `chars` whose members
/// are all free and whose supports cover every factor.
pub fn select_b0(g: &SemisimpleGroup, chars: &[Character], verdicts: &[FreenessVerdict]) -> Option<Vec<usize>> {
    let m = g.factor_count();
    let free: Vec<usize> = (0..chars.len()).filter(|&i| verdicts[i].free).collect();
    let supports: Vec<Vec<usize>> = chars.iter().map(|c| g.support(c)).collect();
    for size in 1..=free.len() {
        let mut pick: Vec<usize> = (0..size).collect();
        loop {
            let mut covered = vec![false; m];
            for &k in &pick {
                for &f in &supports[free[k]] {
                    covered[f] = true;
                }
            }
            if covered.iter().all(|&c| c) {
                return Some(pick.iter().map(|&k| free[k]).collect());
            }
            if !next_combination(&mut pick, free.len()) {
                break;
            }
        }
    }
    None
}

/// Advances `pick` to the next increasing `k`-subset of `0..n`.
fn next_combination(pick: &mut [usize], n: usize) -> bool {
    let k = pick.len();
    for i in (0..k).rev() {
        if pick[i] < n - k + i {
            pick[i] += 1;
            for j in i + 1..k {
                pick[j] = pick[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Lifts `images` (a basis of the socle dual) to characters of `Z(G)`.
/// Tuples of admissible lifts are tried in lexicographic order; the first
/// one admitting a covering free subset wins, otherwise the first tuple.
pub fn lift_basis(
    g: &SemisimpleGroup,
    socle: &SocleDual,
    images: &[Character],
    constraints: LiftConstraints,
) -> Result<Lifted, BasisError> {
    let mut options: Vec<Vec<(Character, FreenessVerdict)>> = Vec::with_capacity(images.len());
    for img in images {
        let mut opts = Vec::new();
        for chi in socle.lifts(img)? {
            if admissible(g, &chi, constraints) {
                let v = check_character(g, &chi)?;
                opts.push((chi, v));
            }
        }
        if opts.is_empty() {
            return Err(BasisError::NoAdmissibleLift(format!(
                "socle character {img} has no lift meeting the {} component rules",
                match constraints {
                    LiftConstraints::Exact => "exact",
                    LiftConstraints::Relaxed => "relaxed",
                }
            )));
        }
        options.push(opts);
    }

    let bounds: Vec<usize> = options.iter().map(Vec::len).collect();
    let mut idx = vec![0usize; images.len()];
    let mut first: Option<Lifted> = None;
    let mut visited = 0u64;
    loop {
        let chars: Vec<Character> = idx.iter().zip(&options).map(|(&k, o)| o[k].0.clone()).collect();
        let verdicts: Vec<FreenessVerdict> = idx.iter().zip(&options).map(|(&k, o)| o[k].1.clone()).collect();
        let b0 = select_b0(g, &chars, &verdicts);
        let lifted = Lifted { chars, verdicts, b0 };
        if lifted.b0.is_some() {
            return Ok(lifted);
        }
        first.get_or_insert(lifted);
        visited += 1;
        if visited >= LIFT_TUPLE_CAP || !step(&mut idx, &bounds) {
            break;
        }
    }
    Ok(first.expect("at least one tuple"))
}

fn step(idx: &mut [usize], bounds: &[usize]) -> bool {
    for i in (0..idx.len()).rev() {
        idx[i] += 1;
        if idx[i] < bounds[i] {
            return true;
        }
        idx[i] = 0;
    }
    false
}

/// Packages a lifted optimal basis.
pub fn candidate(
    g: &SemisimpleGroup,
    table: &SocleTable,
    tie: &[usize],
    chars: Vec<Character>,
) -> Result<BasisCandidate, BasisError> {
    let socle_images = tie.iter().map(|&i| table.image(i)).collect();
    let n_values: Vec<NValue> = tie.iter().map(|&i| table.entries[i].n.clone()).collect();
    let dims = chars
        .iter()
        .map(|c| Ok(rep_choice(g, c)?.dimension()))
        .collect::<Result<Vec<_>, RepError>>()?;
    let flags = chars.iter().map(|c| admissible(g, c, LiftConstraints::Exact)).collect();
    Ok(BasisCandidate {
        chars,
        socle_images,
        score: n_values.iter().map(|n| &n.value).sum(),
        n_values,
        dims,
        flags,
    })
}

/// The first index-minimal basis, lifted under the exact rules when
/// possible and the relaxed ones otherwise.
pub fn index_minimal_basis(g: &SemisimpleGroup, p: u64) -> Result<BasisCandidate, BasisError> {
    let table = socle_table(g, p)?;
    let opt = optimum(&table);
    let tie = &opt.ties[0];
    let images: Vec<Character> = tie.iter().map(|&i| table.image(i)).collect();
    let lifted = match lift_basis(g, &table.socle, &images, LiftConstraints::Exact) {
        Ok(l) => l,
        Err(BasisError::NoAdmissibleLift(_)) => {
            lift_basis(g, &table.socle, &images, LiftConstraints::Relaxed)?
        }
        Err(e) => return Err(e),
    };
    candidate(g, &table, tie, lifted.chars)
}

/// Default torsion prime of a group's family.
pub fn family_prime(g: &SemisimpleGroup) -> u64 {
    match g.family() {
        FamilyTag::A { p } => p,
        f => f.prime(),
    }
}

fn rank_mod_p(vectors: &[&Vec<u64>], p: u64) -> usize {
    let mut rows: Vec<Vec<u64>> = vectors.iter().map(|v| (*v).clone()).collect();
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = inv_mod(rows[rank][c], p);
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let f = mul_mod(rows[r][c], inv, p);
                for k in 0..cols {
                    let sub = mul_mod(f, rows[rank][k], p);
                    rows[r][k] = (rows[r][k] + p - sub) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// True minimum of `sum n` over all `r`-element generating sets of the socle
/// dual, by plain enumeration. Socle `n` values come from walking all of
/// `Z(G)*` rather than lifting. For tests.
pub fn brute_force_min(g: &SemisimpleGroup, p: u64) -> Result<BigInt, BasisError> {
    check_prime(p)?;
    let socle = socle_dual(g.char_group(), p)?;
    let r = socle.dimension();
    let size = BigInt::from(p).pow(r as u32);
    if size > BigInt::from(BRUTE_FORCE_SOCLE_CAP) {
        return Err(AbelianError::TooLarge {
            count: size,
            cap: BRUTE_FORCE_SOCLE_CAP,
        }
        .into());
    }

    let mut n_of: std::collections::BTreeMap<Vec<u64>, BigInt> = Default::default();
    let mut unsupported: Vec<(Vec<u64>, RepError)> = Vec::new();
    for chi in g.char_group().elements()? {
        let img = socle.restrict_small(&chi)?;
        match n_char(g, &chi) {
            Ok(v) => {
                let slot = n_of.entry(img).or_insert_with(|| v.value.clone());
                if v.value < *slot {
                    *slot = v.value;
                }
            }
            Err(e) => unsupported.push((img, e)),
        }
    }
    if let Some((_, e)) = unsupported.into_iter().find(|(img, _)| !n_of.contains_key(img)) {
        return Err(e.into());
    }
    let vectors: Vec<(&Vec<u64>, &BigInt)> = n_of.iter().filter(|(v, _)| v.iter().any(|&x| x != 0)).collect();
    let subsets = binomial(vectors.len() as u64, r as u64);
    if subsets > BRUTE_FORCE_SUBSET_CAP {
        return Err(AbelianError::TooLarge {
            count: BigInt::from(subsets),
            cap: BRUTE_FORCE_SUBSET_CAP,
        }
        .into());
    }

    let mut best: Option<BigInt> = None;
    let mut pick: Vec<usize> = (0..r).collect();
    loop {
        let chosen: Vec<&Vec<u64>> = pick.iter().map(|&i| vectors[i].0).collect();
        if rank_mod_p(&chosen, p) == r {
            let s: BigInt = pick.iter().map(|&i| vectors[i].1).sum();
            if best.as_ref().is_none_or(|b| s < *b) {
                best = Some(s);
            }
        }
        if !next_combination(&mut pick, vectors.len()) {
            break;
        }
    }
    Ok(best.expect("the socle dual has a basis"))
}

/// Validity of a whole basis: flagged if any socle value is.
pub fn basis_validity(c: &BasisCandidate) -> Validity {
    c.n_values.iter().map(|n| n.validity).max().unwrap_or(Validity::Exact)
}

//! Exact values for `H` from a quotient `G = H / nu` with `nu = Z/p`.
//!
//! If `G` is certified exact and `Z(H)*` has a minimal generating set
//! `B + {omega}` (with `B` the basis used for `G`) whose socle image is
//! index-minimal, then `ed(H) = ed(G) + n_H(omega|nu)`, where the last term
//! is the gcd of `n` over the characters of `Z(H)` agreeing with `omega` on
//! `nu`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{base_report, compute_ed_with, prepare, EdReport, EngineError, HypothesisFailure, Options, Route};
use crate::abelian::{Character, GroupElement};
use crate::basis_search::{family_prime, optimum, socle_table, BasisCandidate};
use crate::catalog::{build, permute_element, GroupSpec, SemisimpleGroup};
use crate::freeness::check_character;
use crate::repdata::{n_char, rep_choice};
use crate::spec_io::render;

fn fail(detail: impl Into<String>) -> EngineError {
    EngineError::ExtensionHypothesisFailed(detail.into())
}

/// Order of the image of `nu` in `Z(H)`, read off from the pairings with a
/// basis of `Z(H)*`.
pub fn nu_order(h: &SemisimpleGroup, nu: &GroupElement) -> BigInt {
    let e = h.center_tilde().exponent();
    h.char_group().basis().iter().fold(BigInt::one(), |acc, b| {
        let v = h.center_tilde().pairing(b, nu);
        acc.lcm(&(&e / v.gcd(&e)))
    })
}

fn sorted_orders(v: &[BigInt]) -> Vec<BigInt> {
    let mut v = v.to_vec();
    v.sort();
    v
}

/// `ed(H)` through the quotient by `nu`. `nu` uses the coordinates of
/// `h_spec` as written.
pub fn extend_ed(h_spec: &GroupSpec, nu: &GroupElement, prime: Option<u64>) -> Result<EdReport, EngineError> {
    let (h_canon, perm, h) = prepare(h_spec)?;
    h.center_tilde()
        .check(nu)
        .map_err(|e| fail(format!("nu is not an element of the center: {e}")))?;
    let p = prime.unwrap_or_else(|| family_prime(&h));
    let nu_c = permute_element(h_spec.factors.as_slice(), &perm, nu);

    let order = nu_order(&h, &nu_c);
    if order != BigInt::from(p) {
        return Err(fail(format!("nu has order {order} in Z(H), expected {p}")));
    }

    let mut g_mu = h_canon.mu.clone();
    g_mu.push(nu_c.clone());
    let g_spec = GroupSpec::new(h_canon.factors.clone(), g_mu)?;
    let g_report = compute_ed_with(&g_spec, Options { prime: Some(p) })
        .map_err(|e| fail(format!("the quotient H/nu could not be computed: {e}")))?;
    if !g_report.exact {
        return Err(fail(format!(
            "the quotient {} is not certified exact",
            g_report.group
        )));
    }
    let g = build(&g_spec)?;
    let g_basis = g_report.basis.as_ref().expect("exact reports carry a basis");

    let mut want = sorted_orders(g.char_group().structure().orders());
    want.push(BigInt::from(p));
    want.sort();
    if sorted_orders(h.char_group().structure().orders()) != want {
        return Err(fail("Z(H) is not structurally Z(G) x nu"));
    }

    let table = socle_table(&h, p)?;
    let opt = optimum(&table);
    let n_of = |img: &Character| -> Option<BigInt> {
        let v: Vec<u64> = img.coords().iter().map(|c| c.try_into().unwrap_or(u64::MAX)).collect();
        table.entries.iter().find(|e| e.image == v).map(|e| e.n.value.clone())
    };
    let b_images: Vec<Character> = g_basis
        .chars
        .iter()
        .map(|c| table.socle.restrict(c))
        .collect::<Result<_, _>>()
        .map_err(|e| fail(e.to_string()))?;
    let mut b_sum = BigInt::zero();
    for img in &b_images {
        b_sum += n_of(img).ok_or_else(|| fail("a basis character of G restricts to 0 on the socle of Z(H)"))?;
    }

    if table.entries.iter().any(|e| !e.n.is_exact()) {
        return Err(fail("n-values of Z(H) characters are only upper bounds"));
    }
    let mut omega: Option<(Character, Character, BigInt)> = None;
    for w in h.char_group().elements().map_err(crate::basis_search::BasisError::from)? {
        if h.center_tilde().pairing(&w, &nu_c).is_zero() {
            continue;
        }
        let img = table.socle.restrict(&w).map_err(|e| fail(e.to_string()))?;
        let Some(n) = n_of(&img) else { continue };
        let mut vecs: Vec<Vec<u64>> = b_images
            .iter()
            .chain(std::iter::once(&img))
            .map(|c| c.coords().iter().map(|x| x.try_into().unwrap_or(0)).collect())
            .collect();
        if rank_mod(&mut vecs, p) != table.rank() || &b_sum + &n != opt.score {
            continue;
        }
        omega = Some((w, img, n));
        break;
    }
    let Some((omega, omega_img, omega_n)) = omega else {
        return Err(fail("no omega completes the basis of G to an index-minimal basis for H"));
    };

    // gcd of n over every character of Z(H) with the same value on nu
    let target = h.center_tilde().pairing(&omega, &nu_c);
    let mut n_h = BigInt::zero();
    for w in h.char_group().elements().map_err(crate::basis_search::BasisError::from)? {
        if h.center_tilde().pairing(&w, &nu_c) != target {
            continue;
        }
        let v = n_char(&h, &w).map_err(|err| fail(format!("n of {w} is unknown: {err}")))?;
        n_h = n_h.gcd(&v.value);
    }

    let ed_base = g_report.ed.clone().expect("exact");
    let ed = &ed_base + &n_h;
    let lower = &opt.score - h.dim_g();
    if lower != ed {
        return Err(fail(format!(
            "transferred value {ed} disagrees with the lower bound {lower} for H"
        )));
    }
    let ed_red = &ed - BigInt::from(h.rank_z());

    let mut chars = g_basis.chars.clone();
    chars.push(omega.clone());
    let mut socle_images = b_images.clone();
    socle_images.push(omega_img);
    let mut n_values: Vec<_> = b_images
        .iter()
        .map(|img| table.entries.iter().find(|e| to_char(&e.image) == *img).expect("present").n.clone())
        .collect();
    n_values.push(crate::repdata::NValue::exact(omega_n));
    let dims = chars
        .iter()
        .map(|c| rep_choice(&h, c).map(|r| r.dimension()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| fail(e.to_string()))?;
    let verdicts = chars
        .iter()
        .map(|c| check_character(&h, c))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| fail(e.to_string()))?;
    let flags = chars
        .iter()
        .map(|c| crate::basis_search::admissible(&h, c, crate::basis_search::LiftConstraints::Exact))
        .collect();

    let mut report = base_report(h_spec, &h_canon, perm, &h, p);
    report.route = Route::CentralExtension;
    report.basis = Some(BasisCandidate {
        chars,
        socle_images,
        score: opt.score.clone(),
        n_values,
        dims,
        flags,
    });
    report.verdicts = verdicts;
    report.b0 = g_report.b0.clone();
    report.lower = Some(lower);
    report.upper = Some(ed.clone());
    report.exact = true;
    report.ed = Some(ed.clone());
    report.ed_red_upper = Some(ed_red.clone());
    report.ed_red_exact = true;
    report.ed_red = Some(ed_red.clone());
    report.extension = Some(super::ExtensionData {
        base_group: render(&g_spec),
        nu: nu.clone(),
        omega,
        n_h_omega: n_h,
        ed_base,
        ed_red_base: g_report.ed_red.clone().expect("exact"),
    });
    report.caveats.push(format!(
        "exact value transferred from the quotient by nu = {nu}; ed_{p}(H) is expected to coincide with ed(H) but is not computed"
    ));
    Ok(report)
}

fn to_char(v: &[u64]) -> Character {
    GroupElement::new(v.iter().map(|&x| BigInt::from(x)).collect())
}

fn rank_mod(rows: &mut [Vec<u64>], p: u64) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let pm = u128::from(p);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] % p != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        for r in 0..rows.len() {
            if r == rank || rows[r][c] % p == 0 {
                continue;
            }
            // row_r = row_piv[c] * row_r - row_r[c] * row_piv
            let (a, b) = (u128::from(rows[rank][c]), u128::from(rows[r][c]));
            for k in 0..cols {
                let v = (a * u128::from(rows[r][k]) + pm * pm - (b * u128::from(rows[rank][k])) % pm) % pm;
                rows[r][k] = v as u64;
            }
        }
        rank += 1;
    }
    rank
}

/// [`extend_ed`], falling back to the direct computation for `H` with the
/// failure recorded when the extension hypotheses do not hold.
pub fn extend_or_fallback(h_spec: &GroupSpec, nu: &GroupElement, prime: Option<u64>) -> Result<EdReport, EngineError> {
    match extend_ed(h_spec, nu, prime) {
        Ok(r) => Ok(r),
        Err(EngineError::ExtensionHypothesisFailed(detail)) => {
            let mut r = compute_ed_with(h_spec, Options { prime })?;
            r.hypothesis_failures
                .insert(0, HypothesisFailure::ExtensionHypothesisFailed { detail });
            if r.exact {
                r.caveats.push("the direct route certified H although the extension route failed".into());
            }
            Ok(r)
        }
        Err(e) => Err(e),
    }
}

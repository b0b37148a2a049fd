use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::engine::{EdReport, Route};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

pub fn emit(report: &EdReport, format: Format) -> String {
    match format {
        Format::Json => emit_json(report),
        Format::Text => emit_text(report),
    }
}

/// Pretty JSON with fields in declaration order; big integers as strings.
pub fn emit_json(report: &EdReport) -> String {
    serde_json::to_string_pretty(report).expect("reports always serialize")
}

pub fn parse_report(json: &str) -> Result<EdReport, serde_json::Error> {
    serde_json::from_str(json)
}

fn opt(v: &Option<BigInt>) -> String {
    v.as_ref().map_or_else(|| "-".into(), BigInt::to_string)
}

fn clamp(v: &BigInt) -> BigInt {
    if v.is_negative() {
        BigInt::zero()
    } else {
        v.clone()
    }
}

/// Human-readable table.
pub fn emit_text(r: &EdReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "group        {}", r.group);
    if r.canonical_group != r.group {
        let _ = writeln!(s, "canonical    {}", r.canonical_group);
    }
    let route = match r.route {
        Route::Direct => "direct",
        Route::CentralExtension => "central extension",
    };
    let _ = writeln!(s, "route        {route}, p = {}", r.prime);
    let _ = writeln!(s, "dim G        {}", r.dim_g);
    let structure: Vec<String> = r.center_structure.iter().map(|o| format!("Z/{o}")).collect();
    let structure = if structure.is_empty() { "0".to_string() } else { structure.join(" + ") };
    let _ = writeln!(s, "rank Z(G)    {}   (Z(G)* = {structure})", r.rank_z);

    if r.exact {
        let _ = writeln!(s, "ed           {}   (exact)", opt(&r.ed));
    } else {
        let lower = r.lower.as_ref().map_or_else(|| "-".into(), |l| clamp(l).to_string());
        let _ = writeln!(s, "ed           {lower} <= ed <= {}   (bounds only)", opt(&r.upper));
        if let Some(l) = &r.lower {
            if l.is_negative() {
                let _ = writeln!(s, "raw lower    {l}");
            }
        }
    }
    if r.ed_red_exact {
        let _ = writeln!(s, "ed_red       {}   (exact)", opt(&r.ed_red));
    } else {
        let _ = writeln!(s, "ed_red       <= {}", opt(&r.ed_red_upper));
    }
    if let Some(ext) = &r.extension {
        let _ = writeln!(s, "quotient     {}   ed = {}, ed_red = {}", ext.base_group, ext.ed_base, ext.ed_red_base);
        let _ = writeln!(s, "nu           {}   omega = {}   n_H = {}", ext.nu, ext.omega, ext.n_h_omega);
    }

    if let Some(b) = &r.basis {
        let _ = writeln!(s, "basis        score {}", b.score);
        let rows: Vec<[String; 5]> = b
            .chars
            .iter()
            .enumerate()
            .map(|(i, chi)| {
                let n = &b.n_values[i];
                let n = if n.is_exact() { n.value.to_string() } else { format!("<={}", n.value) };
                let verdict = r.verdicts.get(i).map_or_else(String::new, ToString::to_string);
                let in_b0 = r.b0.as_ref().is_some_and(|b0| b0.contains(&i));
                [
                    chi.to_string(),
                    b.socle_images[i].to_string(),
                    n,
                    b.dims[i].to_string(),
                    format!("{}{verdict}", if in_b0 { "[B0] " } else { "" }),
                ]
            })
            .collect();
        let header = ["chi", "socle", "n", "dim V", "verdict"].map(String::from);
        let widths: Vec<usize> = (0..4)
            .map(|k| rows.iter().chain(std::iter::once(&header)).map(|r| r[k].len()).max().unwrap_or(0))
            .collect();
        for row in std::iter::once(&header).chain(&rows) {
            let _ = write!(s, "  ");
            for k in 0..4 {
                let _ = write!(s, "{:<w$}  ", row[k], w = widths[k]);
            }
            let _ = writeln!(s, "{}", row[4]);
        }
    }
    if !r.hypothesis_failures.is_empty() {
        let _ = writeln!(s, "hypothesis failures");
        for f in &r.hypothesis_failures {
            let _ = writeln!(s, "  - {f}");
        }
    }
    if !r.caveats.is_empty() {
        let _ = writeln!(s, "caveats");
        for c in &r.caveats {
            let _ = writeln!(s, "  - {c}");
        }
    }
    s
}

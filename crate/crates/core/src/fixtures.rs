//! Pinned regression values for the worked examples.

use num_bigint::BigInt;

use crate::engine::{compute_ed, extend_ed, EdReport};
use crate::spec_io::{parse, parse_element};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Input {
    Compute(&'static str),
    /// `H` and the element `nu` of its center.
    Extend(&'static str, &'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expected {
    Exact { ed: i64, ed_red: i64 },
    BoundsOnly { lower: i64 },
    Extension { ed: i64, ed_red: i64, n_h: i64 },
}

#[derive(Debug, Clone, Copy)]
pub struct Fixture {
    pub name: &'static str,
    pub input: Input,
    pub expected: Expected,
}

pub const FIXTURES: [Fixture; 12] = [
    Fixture {
        name: "spin15",
        input: Input::Compute("Spin(15)"),
        expected: Expected::Exact { ed: 23, ed_red: 22 },
    },
    Fixture {
        name: "spin17",
        input: Input::Compute("Spin(17)"),
        expected: Expected::Exact { ed: 120, ed_red: 119 },
    },
    Fixture {
        name: "spin19",
        input: Input::Compute("Spin(19)"),
        expected: Expected::Exact { ed: 341, ed_red: 340 },
    },
    Fixture {
        name: "spin18",
        input: Input::Compute("Spin(18)"),
        expected: Expected::Exact { ed: 103, ed_red: 102 },
    },
    Fixture {
        name: "spin16-bounds",
        input: Input::Compute("Spin(16)"),
        expected: Expected::BoundsOnly { lower: 24 },
    },
    Fixture {
        name: "spin10-spin3-spin3",
        input: Input::Compute("Spin(10) * Spin(3)^2 / [(2,1,0), (2,0,1)]"),
        expected: Expected::Exact { ed: 13, ed_red: 12 },
    },
    Fixture {
        name: "spin10-pair-quotient",
        input: Input::Compute("Spin(10)^2 / [(1,3)]"),
        expected: Expected::Exact { ed: 166, ed_red: 165 },
    },
    Fixture {
        name: "spin10-pair-extension",
        input: Input::Extend("Spin(10)^2 / [(2,2)]", "(1,3)"),
        expected: Expected::Extension { ed: 168, ed_red: 166, n_h: 2 },
    },
    Fixture {
        name: "sp8-cubed",
        input: Input::Compute("Sp(8)^3 / [(1,1,0), (0,1,1)]"),
        expected: Expected::Exact { ed: 404, ed_red: 403 },
    },
    Fixture {
        name: "sl2-fifth",
        input: Input::Compute("SL(2)^5 / [(1,1,0,0,0), (0,1,1,0,0), (0,0,1,1,0), (0,0,0,1,1)]"),
        expected: Expected::Exact { ed: 17, ed_red: 16 },
    },
    Fixture {
        name: "e6-squared",
        input: Input::Compute("E6^2 / [(1,2)]"),
        expected: Expected::Exact { ed: 573, ed_red: 572 },
    },
    Fixture {
        name: "spin7-cubed",
        input: Input::Compute("Spin(7)^3 / [(1,1,0), (0,1,1)]"),
        expected: Expected::Exact { ed: 449, ed_red: 448 },
    },
];

#[derive(Debug, Clone)]
pub struct Outcome {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub report: Option<EdReport>,
}

fn big(x: i64) -> Option<BigInt> {
    Some(BigInt::from(x))
}

pub fn evaluate(f: &Fixture) -> Result<EdReport, String> {
    match f.input {
        Input::Compute(src) => {
            let spec = parse(src).map_err(|e| e.to_string())?;
            compute_ed(&spec).map_err(|e| e.to_string())
        }
        Input::Extend(src, nu) => {
            let spec = parse(src).map_err(|e| e.to_string())?;
            let nu = parse_element(nu, &spec.factors).map_err(|e| e.to_string())?;
            extend_ed(&spec, &nu, None).map_err(|e| e.to_string())
        }
    }
}

/// Compares a report against the pinned values; `Err` names the mismatch.
pub fn compare(expected: Expected, r: &EdReport) -> Result<(), String> {
    r.check_invariants()?;
    let got = |name: &str, v: &Option<BigInt>, want: i64| -> Result<(), String> {
        if *v == big(want) {
            Ok(())
        } else {
            Err(format!(
                "{name}: expected {want}, got {}",
                v.as_ref().map_or_else(|| "none".into(), ToString::to_string)
            ))
        }
    };
    match expected {
        Expected::Exact { ed, ed_red } => {
            if !r.exact {
                return Err("expected an exact value".into());
            }
            got("ed", &r.ed, ed)?;
            got("ed_red", &r.ed_red, ed_red)
        }
        Expected::BoundsOnly { lower } => {
            if r.exact {
                return Err("expected bounds only".into());
            }
            if r.hypothesis_failures.is_empty() {
                return Err("bounds-only report lists no failed hypothesis".into());
            }
            got("lower", &r.lower, lower)
        }
        Expected::Extension { ed, ed_red, n_h } => {
            got("ed", &r.ed, ed)?;
            got("ed_red", &r.ed_red, ed_red)?;
            let ext = r.extension.as_ref().ok_or("missing extension data")?;
            got("n_H", &Some(ext.n_h_omega.clone()), n_h)
        }
    }
}

pub fn run(f: &Fixture) -> Outcome {
    match evaluate(f) {
        Ok(report) => {
            let (pass, detail) = match compare(f.expected, &report) {
                Ok(()) => (true, format!("{:?}", f.expected)),
                Err(e) => (false, e),
            };
            Outcome {
                name: f.name,
                pass,
                detail,
                report: Some(report),
            }
        }
        Err(e) => Outcome {
            name: f.name,
            pass: false,
            detail: e,
            report: None,
        },
    }
}

pub fn run_all() -> Vec<Outcome> {
    FIXTURES.iter().map(run).collect()
}

use std::collections::BTreeSet;
use std::path::Path;

use essdim_core::fixtures::{self, FIXTURES};
use essdim_core::spec_io::emit_json;
use serde_json::Value;

fn schema() -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/report.schema.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn keys(v: &Value) -> BTreeSet<String> {
    v.as_object().unwrap().keys().cloned().collect()
}

fn names(v: &Value) -> BTreeSet<String> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|s| s.as_str().unwrap().to_owned())
        .collect()
}

#[test]
fn schema_covers_every_report_field() {
    let s = schema();
    let required = names(&s["required"]);
    assert_eq!(required, keys(&s["properties"]));
    let basis = &s["$defs"]["basis"];
    let extension = &s["$defs"]["extension"];
    for f in &FIXTURES {
        let r = fixtures::run(f).report.unwrap();
        let v: Value = serde_json::from_str(&emit_json(&r)).unwrap();
        assert_eq!(keys(&v), required, "{}", f.name);
        assert_eq!(v["schema_version"], s["properties"]["schema_version"]["const"]);
        if !v["basis"].is_null() {
            assert_eq!(keys(&v["basis"]), names(&basis["required"]), "{}", f.name);
        }
        if !v["extension"].is_null() {
            assert_eq!(keys(&v["extension"]), names(&extension["required"]), "{}", f.name);
        }
    }
}

#[test]
fn big_integers_are_strings() {
    let r = fixtures::run(&FIXTURES[0]).report.unwrap();
    let v: Value = serde_json::from_str(&emit_json(&r)).unwrap();
    for key in ["dim_g", "lower", "upper", "ed", "ed_red"] {
        assert!(v[key].is_string(), "{key}");
    }
}

use essdim_core::catalog::{GroupSpec, SimpleFactor};
use essdim_core::engine::compute_ed;
use essdim_core::spec_io::{emit_json, parse, parse_report, render};
use essdim_core::GroupElement;
use proptest::prelude::*;

fn spin() -> impl Strategy<Value = SimpleFactor> {
    prop::sample::select(vec![3u32, 5, 6, 7, 9, 10, 11, 12, 14, 15, 17]).prop_map(SimpleFactor::Spin)
}

fn spec() -> impl Strategy<Value = GroupSpec> {
    prop::collection::vec(spin(), 1..=3).prop_flat_map(|factors| {
        let orders: Vec<i64> = factors
            .iter()
            .flat_map(|f| f.center_orders())
            .map(|o| i64::try_from(o).unwrap())
            .collect();
        let element = orders.iter().map(|&o| 0..o).collect::<Vec<_>>();
        prop::collection::vec(element, 0..=2).prop_map(move |mu| {
            let mu = mu.iter().map(|c| GroupElement::from_i64(c)).collect();
            GroupSpec::new(factors.clone(), mu).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 64,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn render_then_parse(s in spec()) {
        let back = parse(&render(&s)).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn reports_hold_invariants_and_round_trip(s in spec()) {
        if let Ok(r) = compute_ed(&s) {
            prop_assert!(r.check_invariants().is_ok(), "{:?}", r.check_invariants());
            prop_assert_eq!(parse_report(&emit_json(&r)).unwrap(), r);
        }
    }

    #[test]
    fn reversing_factors_keeps_values(s in spec()) {
        let m = s.factors.len();
        let factors: Vec<_> = s.factors.iter().rev().cloned().collect();
        let widths: Vec<usize> = s.factors.iter().map(|f| f.center_orders().len()).collect();
        let mu = s.mu.iter().map(|g| {
            let mut blocks = Vec::new();
            let mut at = 0;
            for w in &widths {
                blocks.push(g.coords()[at..at + w].to_vec());
                at += w;
            }
            GroupElement::new(blocks.into_iter().rev().flatten().collect())
        }).collect();
        let t = GroupSpec::new(factors, mu).unwrap();
        prop_assume!(m > 1);
        match (compute_ed(&s), compute_ed(&t)) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(a.lower, b.lower);
                prop_assert_eq!(a.upper, b.upper);
                prop_assert_eq!(a.ed, b.ed);
                prop_assert_eq!(a.ed_red, b.ed_red);
            }
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a.map(|r| r.ed), b.map(|r| r.ed)),
        }
    }
}

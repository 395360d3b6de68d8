//! The file formats are lossless: parsing a serialized problem, value or
//! certificate gives it back, including integers far beyond 64 bits.

use entrolab::output::{certificate_from_json, certificate_to_json, value_from_json, value_to_json};
use entrolab::problem::{CertificateSpec, EndoSpec, GroupSpec, Problem, SubgroupSpec, Task, TopologySpec};
use entrolab_core::entropy::{bernoulli_certificate, Budget, BudgetNote, EntropyValue, Mode};
use entrolab_core::window::{Flavor, IndexSet, ShiftKind};
use entrolab_core::{BigInt, BigUint};
use proptest::prelude::*;
use serde_json::{json, Map, Value};

/// Mostly small, sometimes around 2^200, either sign.
fn big() -> impl Strategy<Value = BigInt> {
    prop_oneof![
        3 => (-40i64..40).prop_map(BigInt::from),
        1 => (any::<u64>(), any::<u64>(), any::<u64>(), any::<bool>()).prop_map(|(a, b, c, neg)| {
            let v: BigInt = (BigInt::from(a) << 128u32) + (BigInt::from(b) << 64u32) + BigInt::from(c);
            if neg { -v } else { v }
        }),
    ]
}

fn natural() -> impl Strategy<Value = BigUint> {
    big().prop_map(|b| b.magnitude().clone())
}

fn rows(r: usize, c: usize) -> impl Strategy<Value = Vec<Vec<BigInt>>> {
    prop::collection::vec(prop::collection::vec(big(), c), r)
}

fn shift_kind() -> impl Strategy<Value = ShiftKind> {
    prop::sample::select(ShiftKind::ALL.to_vec())
}

fn group() -> impl Strategy<Value = GroupSpec> {
    prop_oneof![
        prop::collection::vec(big(), 0..4).prop_map(|moduli| GroupSpec::Finite { moduli }),
        (0usize..5).prop_map(|rank| GroupSpec::Lattice { rank }),
        (prop::collection::vec(big(), 1..3), any::<bool>(), any::<bool>()).prop_map(|(base, two, product)| GroupSpec::Window {
            base,
            index_set: if two { IndexSet::Integers } else { IndexSet::Naturals },
            flavor: if product { Flavor::Product } else { Flavor::DirectSum },
        }),
    ]
}

fn endo() -> impl Strategy<Value = EndoSpec> {
    prop_oneof![
        (0usize..4).prop_flat_map(|r| rows(r, r)).prop_map(|rows| EndoSpec::Matrix { rows }),
        (shift_kind(), 0u32..6).prop_map(|(kind, power)| EndoSpec::Shift { kind, power }),
        (-5i64..5, 0usize..2, prop::collection::vec(prop::collection::vec(rows(2, 2), 1..3), 1..3))
            .prop_map(|(offset, half_width, coefficients)| EndoSpec::Banded { offset, half_width, coefficients }),
        Just(EndoSpec::Identity),
        Just(EndoSpec::Zero),
        big().prop_map(|factor| EndoSpec::Scalar { factor }),
    ]
}

fn subgroup() -> impl Strategy<Value = SubgroupSpec> {
    prop_oneof![
        rows(2, 2).prop_map(SubgroupSpec::Generators),
        (-4i64..4, 0i64..4, rows(1, 3)).prop_map(|(lo, w, generators)| SubgroupSpec::Section { lo, hi: lo + w, generators }),
        (0usize..10).prop_map(SubgroupSpec::Basic),
    ]
}

fn topology() -> impl Strategy<Value = TopologySpec> {
    let size = prop::option::of(0usize..300);
    prop_oneof![
        size.clone().prop_map(|bound| TopologySpec::Profinite { bound }),
        size.clone().prop_map(|prefix| TopologySpec::Natural { prefix }),
        size.prop_map(|prefix| TopologySpec::Product { prefix }),
        (prop::collection::vec(subgroup(), 0..3), any::<bool>()).prop_map(|(members, exhaustive)| TopologySpec::Explicit { members, exhaustive }),
        Just(TopologySpec::Indiscrete),
    ]
}

fn budget() -> impl Strategy<Value = Budget> {
    (1usize..100, 1usize..20, 0usize..300, 0u64..1 << 40, 0usize..1000, 0usize..8).prop_map(|(max_steps, confirm_window, base_prefix, truncation_bound, order_bound, cert_levels)| Budget {
        max_steps,
        confirm_window,
        base_prefix,
        truncation_bound,
        order_bound,
        cert_levels,
        ..Budget::default()
    })
}

fn expect() -> impl Strategy<Value = Option<Map<String, Value>>> {
    prop::option::of(prop::collection::btree_map("[a-z_]{1,8}", prop_oneof![Just(json!(true)), "[0-9]{1,30}".prop_map(Value::from)], 0..3).prop_map(|m| m.into_iter().collect()))
}

fn problem() -> impl Strategy<Value = Problem> {
    (
        prop::sample::select(Task::ALL.to_vec()),
        prop::option::of(group()),
        prop::option::of(endo()),
        prop::option::of(topology()),
        prop::option::of(subgroup()),
        prop::option::of((1u64..1000, 0usize..8, 0usize..8, shift_kind()).prop_map(|(p, m, n_max, shift)| CertificateSpec { p, m, n_max, shift })),
        prop::option::of(0usize..500),
        budget(),
        expect(),
        prop::option::of("[ -~]{0,20}"),
    )
        .prop_map(|(task, group, endomorphism, topology, subgroup, certificate, prefix_len, budget, expect, note)| Problem {
            task,
            group,
            endomorphism,
            topology,
            subgroup,
            certificate,
            prefix_len,
            budget,
            expect,
            note,
        })
}

fn value() -> impl Strategy<Value = EntropyValue> {
    prop_oneof![
        (natural(), any::<bool>()).prop_map(|(alpha, proven)| EntropyValue::Exact { alpha, mode: if proven { Mode::Proven } else { Mode::Heuristic } }),
        (natural(), 0usize..100, 0usize..300, prop::option::of(natural()))
            .prop_map(|(alpha, max_steps, members, upper_bound)| EntropyValue::AtLeast { alpha, note: BudgetNote { max_steps, members, upper_bound } }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn problems_round_trip(p in problem()) {
        let v = p.to_json();
        prop_assert_eq!(Problem::from_json(&v).unwrap(), p);
        // through text as well
        let text = serde_json::to_string(&v).unwrap();
        prop_assert_eq!(Problem::from_json(&serde_json::from_str(&text).unwrap()).unwrap().to_json(), v);
    }

    #[test]
    fn values_round_trip(v in value()) {
        prop_assert_eq!(value_from_json(&value_to_json(&v)).unwrap(), v);
    }
}

#[test]
fn certificates_round_trip() {
    for (p, m, n, kind) in [(2, 2, 3, ShiftKind::Right), (3, 2, 2, ShiftKind::Left), (2, 3, 4, ShiftKind::TwoSided), (2, 5, 5, ShiftKind::Right)] {
        let cert = bernoulli_certificate(p, m, n, kind).unwrap();
        let back = certificate_from_json(&certificate_to_json(&cert)).unwrap();
        assert_eq!(back, cert);
        assert!(back.verify().is_ok());
        let infinite = EntropyValue::Infinite { certificates: vec![cert] };
        assert_eq!(value_from_json(&value_to_json(&infinite)).unwrap(), infinite);
    }
}

#[test]
fn bare_numbers_and_unknown_keys_are_rejected() {
    let ok = json!({"task": "hstar", "group": {"kind": "finite", "moduli": ["4"]}});
    assert!(Problem::from_json(&ok).is_ok());
    for bad in [
        json!({"task": "hstar", "group": {"kind": "finite", "moduli": [4]}}),
        json!({"task": "hstar", "colour": "blue"}),
        json!({"task": "entropy"}),
        json!({"task": "hstar", "budget": {"max_steps": "0"}}),
        json!({"task": "hstar", "budget": {"jobs": "2"}}),
        json!({"task": "hstar", "group": {"kind": "finite", "moduli": ["1.5"]}}),
    ] {
        assert!(Problem::from_json(&bad).is_err(), "{bad}");
    }
}

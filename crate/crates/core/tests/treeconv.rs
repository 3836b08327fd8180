//! Elementary extensions, saturation and the hull oracle on random wall
//! spaces, plus a regression instance where two apartments share a segment.

use std::collections::BTreeSet;
use std::sync::Arc;

use buildinglab::coxeter::{root_data, slope_system, Kind};
use buildinglab::json::WallComplexDoc;
use buildinglab::treeconv::{
    classify_degenerate, components, elementary_extensions, extend_along, hull_oracle, non_admissible_witness,
    random_complex, saturate, EdgeChoice, ExtensionKind, RandomShape, Saturation, WallComplex,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn complexes(kind: Kind, i: u8, seed: u64, n: usize) -> Vec<WallComplex> {
    let slopes = Arc::new(slope_system(&root_data(kind), i).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| random_complex(slopes.clone(), &RandomShape::default(), &mut rng).unwrap()).collect()
}

fn assert_extensions_are_minimal(c: &WallComplex, label: &str) {
    let old: BTreeSet<_> = c.chambers().unwrap().into_iter().map(|x| (x.edge, x.tri)).collect();
    for ext in elementary_extensions(c).unwrap() {
        let d = &ext.result;
        assert!(d.is_convex(), "{label}: {:?} not convex", ext.kind);
        assert_eq!(*d, hull_oracle(c, &[ext.chamber]), "{label}: {:?}", ext.kind);
        if let ExtensionKind::Along { side, component } = ext.kind {
            let comp = &components(c, side)[component];
            for choice in [EdgeChoice::Last, EdgeChoice::Middle, EdgeChoice::Seeded(3)] {
                assert_eq!(extend_along(c, comp, choice).unwrap().result, *d, "{label}: {choice:?}");
            }
        }
        for ch in d.chambers().unwrap() {
            if !old.contains(&(ch.edge, ch.tri)) {
                assert_eq!(hull_oracle(c, &[ch]), *d, "{label}: {:?} is not minimal", ext.kind);
            }
        }
    }
}

#[test]
fn extensions_on_apartments_sharing_a_segment_stay_convex() {
    // Two lines share the first half of an upper component and diverge
    // after its apex; per-line hulls alone disagree on the shared part.
    let text = include_str!("fixtures/g2_shared_lines.json");
    let c = WallComplexDoc::parse(text).unwrap();
    assert!(c.is_convex());
    assert_extensions_are_minimal(&c, "fixture");
}

#[test]
fn random_extensions_are_convex_minimal_and_choice_independent() {
    for kind in Kind::ALL {
        for i in 1..=2u8 {
            for (n, c) in complexes(kind, i, 21, 40).iter().enumerate() {
                assert_extensions_are_minimal(c, &format!("{kind} i={i} #{n}"));
            }
        }
    }
}

#[test]
fn g2_exhibits_a_non_admissible_component() {
    let found =
        (1..=2u8).flat_map(|i| complexes(Kind::G2, i, 5, 200)).find_map(|c| non_admissible_witness(&c).unwrap());
    let w = found.expect("a non-admissible witness among 400 instances");
    assert!(!w.component.admissible);
    assert!(w.smaller.result.is_subset(&w.hull) && w.smaller.result != w.hull);
    assert!(w.hull.contains_chamber(&w.chamber));
}

#[test]
fn saturations_are_convex_idempotent_and_keep_the_original() {
    for kind in Kind::ALL {
        for c in complexes(kind, 1, 8, 20) {
            for dir in [Saturation::Up, Saturation::Down, Saturation::Both] {
                let s = saturate(&c, dir).unwrap();
                assert!(s.is_convex(), "{kind} {dir:?}");
                assert!(c.is_subset(&s));
                assert_eq!(saturate(&s, dir).unwrap(), s, "{kind} {dir:?} not idempotent");
            }
            classify_degenerate(&c).unwrap();
        }
    }
}

#[test]
fn wall_complex_documents_round_trip() {
    for kind in Kind::ALL {
        for c in complexes(kind, 2, 4, 10) {
            let text = buildinglab::json::to_string(&WallComplexDoc::new(&c)).unwrap();
            let back = WallComplexDoc::parse(&text).unwrap();
            assert_eq!(back, c);
            assert_eq!(buildinglab::json::to_string(&WallComplexDoc::new(&back)).unwrap(), text);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn hull_oracle_is_a_closure(kind_idx in 0usize..4, i in 1u8..=2, seed in 0u64..1000) {
        let kind = Kind::ALL[kind_idx];
        let c = complexes(kind, i, seed, 1).pop().unwrap();
        prop_assert!(c.is_convex());
        prop_assert_eq!(hull_oracle(&c, &[]), c.clone());
        for ext in elementary_extensions(&c).unwrap() {
            prop_assert!(c.is_subset(&ext.result));
            prop_assert_eq!(hull_oracle(&ext.result, &[]), ext.result.clone());
        }
    }
}

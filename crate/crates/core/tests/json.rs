//! Document round trips: parse ∘ serialize is the identity on every schema,
//! and malformed documents are rejected as parse errors.

use std::sync::Arc;

use buildinglab::counting::count_flat;
use buildinglab::coxeter::{convex_hull, root_data, slope_system, Alcove, Kind, Point};
use buildinglab::json::{self, CoxeterDoc, ExtCountDoc, InvSystemDoc, PolygonDoc, WallComplexDoc};
use buildinglab::polygon::GeneralizedPolygon;
use buildinglab::prolim::{catalog_system, CATALOG};
use buildinglab::rational::q;
use buildinglab::treeconv::{random_complex, RandomShape};
use buildinglab::{Error, Thickness};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn point(a: i64, b: i64) -> Point {
    Point::new(q(a, 1), q(b, 1))
}

fn catalog_params(name: &str) -> Vec<u32> {
    match name {
        "line_model" => vec![2, 3, 3],
        "haar_model" => vec![2, 2],
        "tree_product" => vec![2, 3, 2, 2],
        _ => vec![2, 3],
    }
}

#[test]
fn coxeter_documents_round_trip() {
    for kind in Kind::ALL {
        let rs = root_data(kind);
        let region = convex_hull(&rs, &[point(0, 0), point(2, 1), point(-1, 3)], 14).unwrap();
        let source = convex_hull(&rs, &Alcove::fundamental(&rs).vertices, 14).unwrap();
        let doc = CoxeterDoc::new(kind).with_root_data().with_region(&region).with_pair(&source, &region);
        let text = json::to_string(&doc).unwrap();
        let back = CoxeterDoc::parse(&text).unwrap();
        assert_eq!(json::to_string(&back).unwrap(), text, "{kind}");
        assert_eq!(back.region().unwrap(), region);
        assert_eq!(back.pair().unwrap(), (source, region));
    }
}

#[test]
fn extcount_documents_round_trip() {
    for kind in Kind::ALL {
        let rs = root_data(kind);
        let th = Thickness::new(&rs, [2, 3, if kind == Kind::A2 { 2 } else { 4 }])
            .or_else(|_| Ok::<_, Error>(Thickness::uniform(kind, 3)))
            .unwrap();
        let z1 = convex_hull(&rs, &[point(0, 0)], 14).unwrap();
        let z2 = convex_hull(&rs, &[point(0, 0), point(1, 1)], 14).unwrap();
        let count = count_flat(&rs, &z1, &z2, &th).unwrap();
        let text = json::to_string(&ExtCountDoc::new(&count)).unwrap();
        let back = ExtCountDoc::parse(&text).unwrap();
        assert_eq!(back.value, count.value);
        assert_eq!(json::to_string(&ExtCountDoc::new(&back)).unwrap(), text, "{kind}");
    }
}

#[test]
fn extcount_documents_with_a_wrong_value_are_rejected() {
    let rs = root_data(Kind::A2);
    let z1 = convex_hull(&rs, &[point(0, 0)], 14).unwrap();
    let z2 = convex_hull(&rs, &Alcove::fundamental(&rs).vertices, 14).unwrap();
    let count = count_flat(&rs, &z1, &z2, &Thickness::uniform(Kind::A2, 2)).unwrap();
    let mut doc = ExtCountDoc::new(&count);
    doc.value += 1;
    let text = json::to_string(&doc).unwrap();
    assert!(ExtCountDoc::parse(&text).is_err());
}

#[test]
fn invsystem_documents_round_trip() {
    for name in CATALOG {
        let sys = catalog_system(name, &catalog_params(name)).unwrap();
        let text = json::to_string(&InvSystemDoc::new(&sys)).unwrap();
        let back = InvSystemDoc::parse(&text).unwrap();
        assert_eq!(json::to_string(&InvSystemDoc::new(&back)).unwrap(), text, "{name}");
    }
}

#[test]
fn polygon_documents_round_trip() {
    for name in ["fano", "w2", "thin3", "thin4", "thin6"] {
        let poly = GeneralizedPolygon::by_name(name).unwrap();
        let text = json::to_string(&PolygonDoc::new(&poly)).unwrap();
        let back = PolygonDoc::parse(&text).unwrap();
        assert_eq!(json::to_string(&PolygonDoc::new(&back)).unwrap(), text, "{name}");
    }
}

#[test]
fn malformed_documents_are_parse_errors() {
    for text in [
        "",
        "{",
        r#"{"schema":"wallcomplex/1"}"#,
        r#"{"schema":"polygon/2","name":"x","gonality":3,"points":1,"lines":1,"incidence":[]}"#,
        r#"{"schema":"coxeter/1","kind":"A2","points":[["1/0","0"]]}"#,
    ] {
        let results = [
            CoxeterDoc::parse(text).err(),
            WallComplexDoc::parse(text).err(),
            ExtCountDoc::parse(text).err(),
            InvSystemDoc::parse(text).err(),
            PolygonDoc::parse(text).err(),
        ];
        for e in results {
            assert!(matches!(e, Some(Error::Parse(_) | Error::Inconsistent(_))), "{text:?}: {e:?}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_hull_documents_round_trip(
        kind_idx in 0usize..4,
        pts in prop::collection::vec((-4i64..=4, -4i64..=4), 1..5),
    ) {
        let kind = Kind::ALL[kind_idx];
        let rs = root_data(kind);
        let pts: Vec<Point> = pts.into_iter().map(|(a, b)| point(a, b)).collect();
        let region = convex_hull(&rs, &pts, 40).unwrap();
        let text = json::to_string(&CoxeterDoc::new(kind).with_region(&region)).unwrap();
        let back = CoxeterDoc::parse(&text).unwrap();
        prop_assert_eq!(back.region().unwrap(), region);
        prop_assert_eq!(json::to_string(&back).unwrap(), text);
    }

    #[test]
    fn random_wall_complex_documents_round_trip(kind_idx in 0usize..4, i in 1u8..=2, seed in 0u64..500) {
        let kind = Kind::ALL[kind_idx];
        let slopes = Arc::new(slope_system(&root_data(kind), i).unwrap());
        let c = random_complex(slopes, &RandomShape::default(), &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let text = json::to_string(&WallComplexDoc::new(&c)).unwrap();
        prop_assert_eq!(WallComplexDoc::parse(&text).unwrap(), c);
    }
}

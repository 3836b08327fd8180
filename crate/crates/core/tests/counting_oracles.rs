//! Cross-checks of the symbolic extension counts against exhaustive
//! enumeration on desk models.

use std::sync::Arc;

use buildinglab::counting::{
    brute_star, brute_thin, brute_tree, count_flat, count_flat_ordered, count_wall, link_gonality, StepOrder,
    TreeModel, WallModel,
};
use buildinglab::coxeter::{convex_hull, root_data, star, vertex_neighbours, Alcove, ChamberWindow, Kind};
use buildinglab::polygon::GeneralizedPolygon;
use buildinglab::treeconv::{random_complex, RandomShape, WallComplex, WallTree};
use buildinglab::{Point, Region, RootSystem2, Thickness};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random nested pair of regions inside the box of the given radius.
fn random_pair(rs: &RootSystem2, win: &ChamberWindow, rng: &mut ChaCha8Rng) -> (Region, Region) {
    let k = rng.gen_range(1..=3);
    let pts: Vec<Point> = (0..k)
        .map(|_| {
            let a = win.alcoves[rng.gen_range(0..win.len())];
            a.vertices[rng.gen_range(0..3)]
        })
        .collect();
    let z2 = convex_hull(rs, &pts, 8).unwrap();
    let verts = z2.vertices(rs);
    let z1 = match rng.gen_range(0..3) {
        0 => convex_hull(rs, &[*verts.choose(rng).unwrap()], 8).unwrap(),
        1 => {
            let alcs = z2.alcoves(rs);
            if alcs.is_empty() {
                convex_hull(rs, &[verts[0]], 8).unwrap()
            } else {
                Region::hull_of_alcoves(rs, &[*alcs.choose(rng).unwrap()], 8).unwrap()
            }
        }
        _ => {
            let a = *verts.choose(rng).unwrap();
            let b = *verts.choose(rng).unwrap();
            convex_hull(rs, &[a, b], 8).unwrap()
        }
    };
    (z1, z2)
}

#[test]
fn thin_counts_match_enumeration() {
    for kind in Kind::ALL {
        let rs = root_data(kind);
        let win = ChamberWindow::new(&rs, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let thin = Thickness::uniform(kind, 1);
        for _ in 0..40 {
            let (z1, z2) = random_pair(&rs, &win, &mut rng);
            let c = count_flat(&rs, &z1, &z2, &thin).unwrap();
            let b = brute_thin(&rs, &z1, &z2, 1).unwrap();
            assert!(b.bases() > 0);
            assert!(b.is_constant(), "{kind}: not constant-to-one {:?}", b.counts);
            assert_eq!(Some(c.value), b.value(), "{kind}: {} vs {:?}\n{z1:?}\n{z2:?}", c.factorization(), b.counts);
        }
    }
}

#[test]
fn counts_do_not_depend_on_the_step_order() {
    for kind in Kind::ALL {
        let rs = root_data(kind);
        let win = ChamberWindow::new(&rs, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let th = Thickness::new(
            &rs,
            match kind {
                Kind::A2 => [3, 3, 3],
                Kind::G2 => [2, 2, 5],
                _ => [2, 3, 5],
            },
        )
        .unwrap();
        for _ in 0..40 {
            let (z1, z2) = random_pair(&rs, &win, &mut rng);
            let a = count_flat_ordered(&rs, &z1, &z2, &th, StepOrder::Canonical).unwrap();
            let b = count_flat_ordered(&rs, &z1, &z2, &th, StepOrder::Reversed).unwrap();
            assert_eq!(a.value, b.value, "{kind}: {} vs {}", a.factorization(), b.factorization());
            assert_eq!(a.poly, b.poly);
        }
    }
}

/// Convex regions inside the star of `v` that contain `v`.
fn star_regions(rs: &RootSystem2, v: Point) -> Vec<Region> {
    let link = vertex_neighbours(rs, v);
    let mut out: Vec<Region> = Vec::new();
    let mut push = |pts: &[Point]| {
        let mut all = vec![v];
        all.extend_from_slice(pts);
        let r = convex_hull(rs, &all, 8).unwrap();
        if r.vertices(rs).iter().all(|p| *p == v || link.contains(p)) && !out.contains(&r) {
            out.push(r);
        }
    };
    push(&[]);
    for &a in &link {
        push(&[a]);
        for &b in &link {
            push(&[a, b]);
        }
    }
    out
}

#[test]
fn star_counts_match_fano_and_w2() {
    let cases = [
        (Kind::A2, 0u8, GeneralizedPolygon::fano()),
        (Kind::B2, 0, GeneralizedPolygon::w2()),
        (Kind::C2, 1, GeneralizedPolygon::w2()),
    ];
    for (kind, t, poly) in cases {
        let rs = root_data(kind);
        assert_eq!(link_gonality(&rs, t), poly.gonality);
        let v = rs.fundamental_vertices()[t as usize];
        let th = Thickness::uniform(kind, 2);
        let regions = star_regions(&rs, v);
        assert!(regions.len() > 5);
        for z1 in &regions {
            for z2 in &regions {
                if !z1.is_subset(z2) {
                    continue;
                }
                let c = count_flat(&rs, z1, z2, &th).unwrap();
                let b = brute_star(&rs, v, z1, z2, &poly).unwrap();
                assert!(b.is_constant(), "{kind}: {:?}", b.counts);
                assert_eq!(Some(c.value), b.value(), "{kind}: {}", c.factorization());
            }
        }
        // Vertex to edge: all points of the polygon.
        let w = vertex_neighbours(&rs, v)[0];
        let c =
            count_flat(&rs, &convex_hull(&rs, &[v], 8).unwrap(), &convex_hull(&rs, &[v, w], 8).unwrap(), &th).unwrap();
        assert_eq!(c.value as usize, poly.points);
        assert_eq!(star(&rs, v).len(), 2 * poly.gonality);
    }
}

fn random_nested_complexes(kind: Kind, i: u8, seed: u64) -> (WallComplex, WallComplex) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = RandomShape { max_vertices: 12, ..RandomShape::default() };
    let slopes = Arc::new(buildinglab::coxeter::slope_system(&root_data(kind), i).unwrap());
    let z2 = random_complex(slopes, &shape, &mut rng).unwrap();
    let chambers = z2.chambers().unwrap();
    let seed_ch = *chambers.choose(&mut rng).unwrap();
    let z1 = buildinglab::treeconv::hull_oracle(&WallComplex::empty(z2.tree.clone()), &[seed_ch]);
    (z1, z2)
}

#[test]
fn wall_counts_match_tree_models() {
    for kind in Kind::ALL {
        for i in 1..=2u8 {
            for seed in 0..12 {
                let (z1, z2) = random_nested_complexes(kind, i, seed);
                for degrees in [[2, 3], [3, 3], [4, 2]] {
                    let model = TreeModel { degrees };
                    let c = count_wall(&z1, &z2, &WallModel::Tree(model)).unwrap();
                    let b = brute_tree(&z1, &z2, &model).unwrap();
                    assert!(b.is_constant());
                    assert_eq!(Some(c.value), b.value(), "{kind} i={i} seed={seed} {degrees:?}: {}", c.factorization());
                }
            }
        }
    }
}

#[test]
fn wall_counts_on_a_path_agree_with_flat_counts() {
    for kind in Kind::ALL {
        for i in 1..=2u8 {
            let tree = Arc::new(WallTree::path(kind, i, 4, 0).unwrap());
            let rs = root_data(kind);
            let th = Thickness::new(
                &rs,
                match kind {
                    Kind::A2 => [2, 2, 2],
                    Kind::G2 => [3, 3, 2],
                    _ => [2, 3, 4],
                },
            )
            .unwrap();
            let view = &tree.lines[0];
            let ss = tree.slopes.clone();
            let to_region = |c: &WallComplex| -> Region {
                let mut pts = Vec::new();
                for (k, &v) in view.path.iter().enumerate() {
                    if let Some((f, g)) = c.fibers[v] {
                        let (lo, hi) = (f.finite().unwrap(), -g.finite().unwrap());
                        for h in ss.vertex_heights(view.s[k], lo, hi) {
                            pts.push(ss.frame.from_strip(view.s[k], h));
                        }
                    }
                }
                convex_hull(&rs, &pts, 30).unwrap()
            };
            let mut rng = ChaCha8Rng::seed_from_u64(9);
            for _ in 0..10 {
                let alcs = ss.strip_alcoves(buildinglab::Q::from_integer(-3), buildinglab::Q::from_integer(3));
                let mk = |rng: &mut ChaCha8Rng| buildinglab::treeconv::YChamber {
                    edge: rng.gen_range(0..tree.edges.len()),
                    tri: *alcs.choose(rng).unwrap(),
                };
                let a = mk(&mut rng);
                let b = mk(&mut rng);
                let z1 = buildinglab::treeconv::hull_oracle(&WallComplex::empty(tree.clone()), &[a]);
                let z2 = buildinglab::treeconv::hull_oracle(&z1, &[b]);
                let cw = count_wall(&z1, &z2, &WallModel::Building(th)).unwrap();
                let cf = count_flat(&rs, &to_region(&z1), &to_region(&z2), &th).unwrap();
                assert_eq!(cw.value, cf.value, "{kind} i={i}: {} vs {}", cw.factorization(), cf.factorization());
                let _ = Alcove::fundamental(&rs);
            }
        }
    }
}

//! Comparability catalogs, multiplicativity of extension counts and
//! rejection of malformed witnesses.

use buildinglab::counting::{
    carry_to, check_witness, comparability_check, conjugate_entry, count_flat, e_chain_catalog, vertex_stabilizer,
    Morphism, Witness,
};
use buildinglab::coxeter::{convex_hull, root_data, AffineMap, ChamberWindow, Kind};
use buildinglab::{Region, Thickness};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn grid(kind: Kind) -> Vec<Thickness> {
    let rs = root_data(kind);
    let raw: &[[u64; 3]] = match kind {
        Kind::A2 => &[[1, 1, 1], [2, 2, 2], [3, 3, 3], [4, 4, 4]],
        Kind::G2 => &[[1, 1, 1], [2, 2, 3], [3, 3, 2], [2, 2, 5]],
        _ => &[[1, 1, 1], [2, 3, 4], [3, 2, 2], [5, 2, 3]],
    };
    raw.iter().filter_map(|q| Thickness::new(&rs, *q).ok()).collect()
}

fn hull_region(kind: Kind, seed: u64) -> Region {
    let rs = root_data(kind);
    let win = ChamberWindow::new(&rs, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<_> = (0..3).map(|_| win.alcoves[rng.gen_range(0..win.len())].vertices[rng.gen_range(0..3)]).collect();
    convex_hull(&rs, &pts, 8).unwrap()
}

#[test]
fn e_chain_catalogs_are_valid_and_count_preserving() {
    for kind in Kind::ALL {
        let rs = root_data(kind);
        let g = grid(kind);
        assert!(g.len() >= 3);
        let mut total = 0;
        for seed in 0..6 {
            let z = hull_region(kind, seed);
            for &i in kind.special_types() {
                let cat = e_chain_catalog(&rs, i, &z).unwrap();
                let rep = comparability_check(&rs, &cat, &g).unwrap();
                assert!(rep.failures.is_empty(), "{kind}: {:?}", rep.failures);
                total += rep.checked;
            }
        }
        assert!(total > 0, "{kind}: empty catalog");
    }
}

#[test]
fn conjugate_pairs_have_equal_counts() {
    for kind in Kind::ALL {
        let rs = root_data(kind);
        let g = grid(kind);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut cat = Vec::new();
        for seed in 0..8 {
            let z = hull_region(kind, seed);
            let verts = z.vertices(&rs);
            let y = convex_hull(&rs, &[*verts.choose(&mut rng).unwrap()], 8).unwrap();
            let x = verts[rng.gen_range(0..verts.len())];
            let stab = vertex_stabilizer(&rs, rs.fundamental_vertices()[0]);
            let map = carry_to(&rs, x).compose(stab.choose(&mut rng).unwrap());
            if let Ok(e) = conjugate_entry(&rs, &format!("{kind}-{seed}"), &y, &z, map) {
                cat.push(e);
            }
        }
        assert!(cat.len() >= 4);
        let rep = comparability_check(&rs, &cat, &g).unwrap();
        assert!(rep.failures.is_empty(), "{:?}", rep.failures);
    }
}

#[test]
fn malformed_witnesses_are_rejected() {
    let rs = root_data(Kind::A2);
    let z = hull_region(Kind::A2, 1);
    let v = z.vertices(&rs);
    let a = Morphism { source: convex_hull(&rs, &[v[0]], 8).unwrap(), target: z.clone(), map: AffineMap::identity() };
    let b = Morphism { source: convex_hull(&rs, &[v[1]], 8).unwrap(), target: z.clone(), map: AffineMap::identity() };
    assert!(check_witness(&rs, &a, &b, &Witness::Identity).is_err());
    let w = Witness::Conjugate { source_iso: AffineMap::identity(), target_iso: AffineMap::identity() };
    assert!(check_witness(&rs, &a, &b, &w).is_err());
    assert!(check_witness(&rs, &a, &a, &Witness::Identity).is_ok());
}

#[test]
fn counts_are_multiplicative_along_chains() {
    for kind in Kind::ALL {
        let rs = root_data(kind);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for (k, th) in grid(kind).iter().enumerate() {
            for seed in 0..10 {
                let z = hull_region(kind, seed * 7 + k as u64);
                let verts = z.vertices(&rs);
                let x = convex_hull(&rs, &[*verts.choose(&mut rng).unwrap()], 8).unwrap();
                let y = convex_hull(&rs, &[x.vertices(&rs)[0], *verts.choose(&mut rng).unwrap()], 8).unwrap();
                let xz = count_flat(&rs, &x, &z, th).unwrap();
                let xy = count_flat(&rs, &x, &y, th).unwrap();
                let yz = count_flat(&rs, &y, &z, th).unwrap();
                assert_eq!(xz.value, xy.value * yz.value, "{kind} q={:?}", th.q);
                assert_eq!(xz.poly, &xy.poly * &yz.poly);
            }
        }
    }
}

//! Limit-measure properties on the catalog systems.

use buildinglab::prolim::{
    additivity_check, coset_index_name, directed_forward_shift, directed_shift, disintegrate_check, fiber_size,
    first_empty, haar_model, invariance_check, line_model, pushforward, segment_shift, tree_product, Cylinder,
    CylinderFunction, InvSystem,
};
use buildinglab::rational::{q, qi};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn catalog() -> Vec<InvSystem> {
    vec![
        line_model(2, 3, 2).unwrap(),
        line_model(3, 2, 2).unwrap(),
        haar_model(2, 3).unwrap(),
        directed_shift(2, 2).unwrap(),
        tree_product(2, 2, 2, 2).unwrap().system,
    ]
}

#[test]
fn pushforward_identity_holds_on_every_map() {
    for s in catalog() {
        for m in &s.maps {
            let src = vec![s.stages[m.source].mass; s.stages[m.source].len()];
            let pushed = pushforward(&src, &m.map, s.stages[m.target].len());
            assert!(pushed.iter().all(|&x| x == s.stages[m.target].mass), "{}", s.name);
        }
    }
}

#[test]
fn masses_do_not_depend_on_the_propagation_path() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for s in catalog() {
        let reference: Vec<_> = s.stages.iter().map(|st| st.mass).collect();
        for _ in 0..10 {
            let mut order: Vec<usize> = (0..s.maps.len()).collect();
            order.shuffle(&mut rng);
            assert_eq!(s.propagate(s.base, Some(&order)).unwrap(), reference, "{}", s.name);
        }
    }
}

#[test]
fn changing_the_base_scales_globally() {
    for s in catalog() {
        for d in 0..s.len() {
            let r = s.rebased(d).unwrap();
            let factor = r.stages[0].mass / s.stages[0].mass;
            assert!(r.stages.iter().zip(&s.stages).all(|(a, b)| a.mass / b.mass == factor), "{}", s.name);
            if s.leq(s.base, d) {
                let n = fiber_size(s.composite(s.base, d).unwrap(), s.stages[s.base].len()).unwrap();
                assert_eq!(factor, qi(n as i64));
            }
        }
    }
}

/// A random two-level partition of a random cylinder.
fn random_partition(s: &InvSystem, rng: &mut ChaCha8Rng) -> (Cylinder, Vec<Cylinder>) {
    let i = rng.gen_range(0..s.len());
    let n = s.stages[i].len();
    let subset: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
    let whole = Cylinder::new(i, if subset.is_empty() { vec![0] } else { subset });
    let uppers: Vec<usize> = (0..s.len()).filter(|&j| s.leq(i, j)).collect();
    let j = *uppers.choose(rng).unwrap();
    let (keep, split): (Vec<usize>, Vec<usize>) = whole.subset.iter().partition(|_| rng.gen_bool(0.5));
    let mut parts = vec![Cylinder::new(i, keep)];
    let lifted = s.pull_back(&Cylinder::new(i, split), j).unwrap();
    let mut pieces: Vec<Vec<usize>> = vec![Vec::new(); 3];
    for x in lifted.subset {
        pieces[rng.gen_range(0..3)].push(x);
    }
    parts.extend(pieces.into_iter().map(|p| Cylinder::new(j, p)));
    (whole, parts)
}

#[test]
fn limit_measure_is_additive_on_generated_partitions() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut checked = 0;
    for s in catalog() {
        for _ in 0..30 {
            let (whole, parts) = random_partition(&s, &mut rng);
            assert!(additivity_check(&s, &whole, &parts).unwrap(), "{}", s.name);
            checked += 1;
        }
    }
    assert!(checked >= 100);
}

#[test]
fn descending_cylinders_with_empty_limit_become_empty() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for s in catalog() {
        let (whole, parts) = random_partition(&s, &mut rng);
        let idx: Vec<usize> = parts.iter().map(|c| c.index).chain([whole.index]).collect();
        let k = s.upper_bound(&idx).unwrap();
        // F_n = whole minus the first n parts.
        let mut rest = s.pull_back(&whole, k).unwrap().subset;
        let mut chain = vec![Cylinder::new(k, rest.clone())];
        for p in &parts {
            let lifted = s.pull_back(p, k).unwrap().subset;
            rest.retain(|x| lifted.binary_search(x).is_err());
            chain.push(Cylinder::new(k, rest.clone()));
        }
        let first = first_empty(&s, &chain).unwrap().expect("the chain exhausts the cylinder");
        assert!(first <= parts.len());
        assert!(chain[..first].iter().all(|c| !c.subset.is_empty()));
    }
}

#[test]
fn line_model_masses() {
    for (q1, q2) in [(2i64, 3i64), (3, 2), (2, 2)] {
        let s = line_model(q1 as u32, q2 as u32, 2).unwrap();
        assert_eq!(s.stages[s.index("v2-singleton").unwrap()].mass, q(q2 + 1, q1 + 1));
        assert_eq!(s.stages[s.index("v1-singleton").unwrap()].mass, qi(1));
        assert_eq!(s.stages[s.index("seg[0,1]").unwrap()].mass, q(1, q1 + 1));
    }
}

#[test]
fn shift_invariance_factors() {
    for qv in [2u32, 3] {
        let d = directed_shift(qv, 2).unwrap();
        let r = invariance_check(&d, &directed_forward_shift(&d, 2).unwrap()).unwrap();
        assert_eq!(r.factor, qi(qv as i64));
        assert!(!r.is_invariant());
    }
    let s = line_model(2, 3, 2).unwrap();
    let r = invariance_check(&s, &segment_shift(&s, 2, 2, true).unwrap()).unwrap();
    assert!(r.is_invariant());
    // A shift by one position swaps vertex types: it is not an automorphism.
    assert!(invariance_check(&s, &segment_shift(&s, 2, 1, false).unwrap()).is_err());
}

#[test]
fn haar_model_cylinders() {
    let h = haar_model(2, 3).unwrap();
    let top = h.index(&coset_index_name(&[3])).unwrap();
    assert_eq!(h.stages[top].len(), 128);
    let id = h.stages[top].elements.iter().position(|e| e.iter().enumerate().all(|(k, &x)| x as usize == k)).unwrap();
    assert_eq!(h.cylinder_mass(&Cylinder::new(top, vec![id])).unwrap(), qi(1));
    let whole = h.index(&coset_index_name(&[0])).unwrap();
    assert_eq!(h.cylinder_mass(&Cylinder::new(whole, vec![0])).unwrap(), qi(1 << 7));
    // The kernel of the action on level-k cosets has mass |N_k|.
    for (k, size) in [(1u32, 64i64), (2, 16)] {
        let st = h.index(&coset_index_name(&[k])).unwrap();
        let idk =
            h.stages[st].elements.iter().position(|e| e.iter().enumerate().all(|(j, &x)| x as usize == j)).unwrap();
        assert_eq!(h.cylinder_mass(&Cylinder::new(st, vec![idk])).unwrap(), qi(size));
    }
}

#[test]
fn disintegration_is_exact_on_the_tree_product() {
    let b = tree_product(2, 2, 3, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..20 {
        let terms = rng.gen_range(1..4);
        let g: CylinderFunction = (0..terms)
            .map(|_| {
                let (i, j) = (rng.gen_range(0..4), rng.gen_range(0..4));
                let k = b.grid[i][j];
                let n = b.system.stages[k].len();
                let subset: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
                (q(rng.gen_range(-5..6), rng.gen_range(1..4)), Cylinder::new(k, subset))
            })
            .collect();
        let (lhs, rhs) = disintegrate_check(&b, &g).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, b.system.integrate(&g).unwrap());
    }
    // A constant on a full cylinder scales its mass.
    let k = b.grid[1][2];
    let full = Cylinder::new(k, (0..b.system.stages[k].len()).collect());
    let (l, r) = disintegrate_check(&b, &vec![(qi(3), full.clone())]).unwrap();
    assert_eq!((l, r), (qi(3) * b.system.cylinder_mass(&full).unwrap(), l));
}

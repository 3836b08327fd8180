//! Seeded verification suites.
//!
//! Each suite is a list of named checks. A check draws its random instances
//! from a generator seeded by the suite seed and the check's position, runs
//! exact assertions against independent oracles and reports the number of
//! cases examined together with the failures. Checks may run on several
//! worker threads; results are merged in declaration order, so a report
//! depends only on the suites and the seed.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::boundary::{
    asymmetry_search, basepoint_change_check, delta_refinement_check, delta_total_mass, local_proportionality_check,
    mu_delta_cylinder, opp_bisystem, opp_disintegration_check, projectivity_group, sector_box, sector_vertex,
    thin_delta_system, unit_translations, verify_witness, AsymmetryOutcome, CountMode,
};
use crate::counting::{
    brute_star, brute_thin, brute_tree, carry_to, comparability_check, conjugate_entry, count_flat, count_flat_ordered,
    count_wall, e_chain_catalog, link_counts, link_gonality, vertex_stabilizer, StepOrder, TreeModel, WallModel,
};
use crate::coxeter::{
    convex_hull, eval_root, root_data, slope_system, vertex_neighbours, Alcove, ChamberWindow, Kind, Point, Region,
    RootSystem2, Thickness, Wall,
};
use crate::error::{Error, Result};
use crate::polygon::GeneralizedPolygon;
use crate::prolim::{
    additivity_check, coset_index_name, directed_forward_shift, directed_shift, disintegrate_check, fiber_size,
    haar_model, invariance_check, line_model, pushforward, tree_product, Cylinder, CylinderFunction, InvSystem,
};
use crate::rational::{q, qi, Q};
use crate::treeconv::{
    components, elementary_extensions, extend_along, hull_oracle, non_admissible_witness, random_complex, EdgeChoice,
    ExtensionKind, RandomShape, WallComplex,
};

/// Schema tag of verification reports.
pub const REPORT_SCHEMA: &str = "verify/1";

/// The verification suites, in report order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// Root data of the four rank-2 types.
    RootData,
    /// Combinatorial convex hulls against gallery closure.
    Hull,
    /// Elementary extensions in wall spaces.
    Treeconv,
    /// Extension counts against enumeration.
    Counting,
    /// Limit measures of inverse systems.
    Prolim,
    /// Measures at infinity and spherical residues.
    Boundary,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::RootData, Suite::Hull, Suite::Treeconv, Suite::Counting, Suite::Prolim, Suite::Boundary];

    pub fn name(self) -> &'static str {
        match self {
            Suite::RootData => "root-data",
            Suite::Hull => "hull",
            Suite::Treeconv => "treeconv",
            Suite::Counting => "counting",
            Suite::Prolim => "prolim",
            Suite::Boundary => "boundary",
        }
    }

    /// Number of the acceptance criterion the suite implements.
    pub fn criterion(self) -> u8 {
        self as u8 + 1
    }

    fn checks(self) -> Vec<(String, CheckFn)> {
        match self {
            Suite::RootData => root_data_checks(),
            Suite::Hull => hull_checks(),
            Suite::Treeconv => treeconv_checks(),
            Suite::Counting => counting_checks(),
            Suite::Prolim => prolim_checks(),
            Suite::Boundary => boundary_checks(),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            Error::Parse(format!(
                "unknown suite {s:?} (expected one of root-data, hull, treeconv, counting, prolim, boundary)"
            ))
        })
    }
}

/// Result of one named check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub cases: u64,
    /// The first few failures (empty when passed).
    pub failures: Vec<String>,
}

/// Results of one suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub criterion: u8,
    pub passed: bool,
    pub checks: Vec<CheckReport>,
}

/// A complete verification run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema: String,
    pub seed: u64,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    /// Human-readable summary: one line per check and per suite.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for s in &self.suites {
            for c in &s.checks {
                let status = if c.passed { "ok  " } else { "FAIL" };
                out.push_str(&format!("  {status} {}::{} ({} cases)\n", s.suite, c.name, c.cases));
                for f in &c.failures {
                    out.push_str(&format!("       {f}\n"));
                }
            }
            let status = if s.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{status} suite {} (criterion {})\n", s.suite, s.criterion));
        }
        let status = if self.passed { "PASS" } else { "FAIL" };
        out.push_str(&format!("{status} verify seed={}\n", self.seed));
        out
    }
}

/// Failures retained per check.
const MAX_FAILURES: usize = 5;

/// Accumulates cases and failures of one check.
#[derive(Default)]
struct Outcome {
    cases: u64,
    failures: Vec<String>,
}

impl Outcome {
    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.fail(what());
        }
    }

    fn fail(&mut self, msg: String) {
        if self.failures.len() < MAX_FAILURES {
            self.failures.push(msg);
        } else if self.failures.len() == MAX_FAILURES {
            self.failures.push("…".into());
        }
    }
}

type CheckFn = fn(&mut ChaCha8Rng, &mut Outcome) -> Result<()>;

fn run_check(f: CheckFn, seed: u64, position: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(position);
    let mut out = Outcome::default();
    if let Err(e) = f(&mut rng, &mut out) {
        out.fail(format!("error: {e}"));
    }
    out
}

/// Runs the given suites with the given seed on `workers` threads.
pub fn run(suites: &[Suite], seed: u64, workers: usize) -> VerifyReport {
    let mut order: Vec<Suite> = suites.to_vec();
    order.sort_unstable();
    order.dedup();
    // (report slot, stream position, name, check); the stream position only
    // depends on the suite and the check, not on which suites were selected.
    let jobs: Vec<(usize, u64, String, CheckFn)> = order
        .iter()
        .enumerate()
        .flat_map(|(k, s)| {
            s.checks().into_iter().enumerate().map(move |(c, (name, f))| (k, ((*s as u64) << 32) | c as u64, name, f))
        })
        .collect();
    let results: Arc<Mutex<Vec<Option<Outcome>>>> = Arc::new(Mutex::new((0..jobs.len()).map(|_| None).collect()));
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..workers.max(1).min(jobs.len().max(1)) {
            scope.spawn(|| loop {
                let j = next.fetch_add(1, Ordering::Relaxed);
                let Some((_, position, _, f)) = jobs.get(j) else { break };
                let out = run_check(*f, seed, *position);
                results.lock().expect("result lock")[j] = Some(out);
            });
        }
    });
    let results = std::mem::take(&mut *results.lock().expect("result lock"));
    let mut reports: Vec<SuiteReport> = order
        .iter()
        .map(|&s| SuiteReport { suite: s, criterion: s.criterion(), passed: true, checks: Vec::new() })
        .collect();
    for ((k, _, name, _), out) in jobs.into_iter().zip(results) {
        let out = out.expect("every job ran");
        let passed = out.failures.is_empty() && out.cases > 0;
        let mut failures = out.failures;
        if out.cases == 0 && failures.is_empty() {
            failures.push("no cases examined".into());
        }
        reports[k].passed &= passed;
        reports[k].checks.push(CheckReport { name, passed, cases: out.cases, failures });
    }
    VerifyReport { schema: REPORT_SCHEMA.into(), seed, passed: reports.iter().all(|r| r.passed), suites: reports }
}

/// Number of worker threads from `BUILDINGLAB_WORKERS`, defaulting to the
/// available parallelism.
pub fn workers_from_env() -> Result<usize> {
    match std::env::var("BUILDINGLAB_WORKERS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::Parse(format!("BUILDINGLAB_WORKERS must be a positive integer, got {v:?}"))),
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn named(list: Vec<(&str, CheckFn)>) -> Vec<(String, CheckFn)> {
    list.into_iter().map(|(n, f)| (n.to_string(), f)).collect()
}

/// A thickness with as many distinct parameters as the type allows.
pub fn generic_thickness(rs: &RootSystem2) -> Thickness {
    [[2, 3, 5], [2, 3, 3], [2, 2, 3], [3, 2, 2], [2, 3, 2], [3, 3, 2], [3, 2, 3], [2, 2, 2]]
        .iter()
        .find_map(|&q| Thickness::new(rs, q).ok())
        .unwrap_or_else(|| Thickness::uniform(rs.kind, 2))
}

fn random_rational(rng: &mut ChaCha8Rng) -> Q {
    q(rng.gen_range(-60..=60), rng.gen_range(1..=12))
}

// ------------------------------------------------------------- root data

fn root_data_checks() -> Vec<(String, CheckFn)> {
    named(vec![
        ("weights-dual-to-simple-roots", |_, out| {
            for kind in Kind::ALL {
                let rs = root_data(kind);
                for (i, a) in [[1, 0], [0, 1]].into_iter().enumerate() {
                    for j in 0..2 {
                        let v = eval_root(a, rs.weight(j as u8 + 1));
                        let expected = if i == j { Q::one() } else { Q::zero() };
                        out.expect(v == expected, || format!("{kind}: alpha{}(omega{}) = {v}", i + 1, j + 1));
                    }
                }
            }
            Ok(())
        }),
        ("reflections-are-involutions", |rng, out| {
            for kind in Kind::ALL {
                let rs = root_data(kind);
                for _ in 0..100 {
                    let p = Point::new(random_rational(rng), random_rational(rng));
                    for &root in &rs.positive_roots {
                        let level = rng.gen_range(-3..=3);
                        let w = Wall { root, level };
                        let back = rs.reflect(rs.reflect(p, w), w);
                        out.expect(back == p, || format!("{kind}: s^2 != id at {p:?} for {root:?}"));
                    }
                }
            }
            Ok(())
        }),
        ("positive-roots-and-highest-root", |_, out| {
            for (kind, n, hr) in
                [(Kind::A2, 3, [1, 1]), (Kind::B2, 4, [1, 2]), (Kind::C2, 4, [2, 1]), (Kind::G2, 6, [3, 2])]
            {
                let rs = root_data(kind);
                out.expect(rs.positive_roots.len() == n, || {
                    format!("{kind}: {} positive roots", rs.positive_roots.len())
                });
                out.expect(rs.highest_root == hr, || format!("{kind}: highest root {:?}", rs.highest_root));
            }
            Ok(())
        }),
    ])
}

// ------------------------------------------------------------------- hull

/// Window radius of the hull suite.
const HULL_RADIUS: i64 = 6;
/// Random seed sets per type.
const HULL_SAMPLES: usize = 200;

fn hull_check(kind: Kind, rng: &mut ChaCha8Rng, out: &mut Outcome) -> Result<()> {
    let rs = root_data(kind);
    let w = ChamberWindow::new(&rs, HULL_RADIUS)?;
    for _ in 0..HULL_SAMPLES {
        let seeds: Vec<usize> = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..w.len())).collect();
        let alcoves: Vec<Alcove> = seeds.iter().map(|&s| w.alcoves[s]).collect();
        let hull = Region::hull_of_alcoves(&rs, &alcoves, HULL_RADIUS + 1)?;
        let got = hull.chambers(&rs, &w);
        let expected = w.gallery_closure(&seeds);
        out.expect(got == expected, || {
            format!("{kind}: seeds {seeds:?}: {} vs {} chambers", got.len(), expected.len())
        });
    }
    Ok(())
}

fn hull_checks() -> Vec<(String, CheckFn)> {
    named(vec![
        ("A2-hull-equals-gallery-closure", |r, o| hull_check(Kind::A2, r, o)),
        ("B2-hull-equals-gallery-closure", |r, o| hull_check(Kind::B2, r, o)),
        ("C2-hull-equals-gallery-closure", |r, o| hull_check(Kind::C2, r, o)),
        ("G2-hull-equals-gallery-closure", |r, o| hull_check(Kind::G2, r, o)),
    ])
}

// --------------------------------------------------------------- treeconv

/// Random complexes per type and wall direction (two directions per type).
const TREECONV_SAMPLES: usize = 250;

fn treeconv_shape() -> RandomShape {
    RandomShape { max_vertices: 20, max_degree: 3, height: 4, seeds: (1, 3) }
}

/// Convexity, oracle equality, three-choice recomputation and exhaustive
/// minimality of every elementary extension.
fn check_extensions(c: &WallComplex, rng: &mut ChaCha8Rng, out: &mut Outcome, label: &str) -> Result<()> {
    for ext in elementary_extensions(c)? {
        let d = &ext.result;
        out.expect(d.is_convex(), || format!("{label}: extension {:?} is not convex", ext.kind));
        out.expect(c.is_subset(d) && d != c, || format!("{label}: extension {:?} is not proper", ext.kind));
        out.expect(*d == hull_oracle(c, &[ext.chamber]), || {
            format!("{label}: extension {:?} differs from the oracle", ext.kind)
        });
        if let ExtensionKind::Along { side, component } = ext.kind {
            let comp = &components(c, side)[component];
            for choice in [EdgeChoice::Last, EdgeChoice::Middle, EdgeChoice::Seeded(rng.gen())] {
                let again = extend_along(c, comp, choice)?;
                out.expect(again.result == *d, || {
                    format!("{label}: {side:?} component {component} depends on {choice:?}")
                });
            }
        }
        let old: BTreeSet<_> = c.chambers()?.into_iter().map(|x| (x.edge, x.tri)).collect();
        for ch in d.chambers()? {
            if old.contains(&(ch.edge, ch.tri)) {
                continue;
            }
            out.expect(hull_oracle(c, &[ch]) == *d, || {
                format!("{label}: {:?} has a smaller convex extension", ext.kind)
            });
        }
    }
    Ok(())
}

fn treeconv_check(kind: Kind, i: u8, rng: &mut ChaCha8Rng, out: &mut Outcome) -> Result<()> {
    let slopes = Arc::new(slope_system(&root_data(kind), i)?);
    for n in 0..TREECONV_SAMPLES {
        let c = random_complex(slopes.clone(), &treeconv_shape(), rng)?;
        check_extensions(&c, rng, out, &format!("{kind} i={i} #{n}"))?;
    }
    Ok(())
}

fn g2_witness_check(rng: &mut ChaCha8Rng, out: &mut Outcome) -> Result<()> {
    for n in 0..2 * TREECONV_SAMPLES {
        let i = 1 + (n % 2) as u8;
        let slopes = Arc::new(slope_system(&root_data(Kind::G2), i)?);
        let c = random_complex(slopes, &treeconv_shape(), rng)?;
        if let Some(w) = non_admissible_witness(&c)? {
            let strict = w.smaller.result.is_subset(&w.hull) && w.smaller.result != w.hull;
            out.expect(strict && w.hull.contains_chamber(&w.chamber), || "G2: malformed non-admissible witness".into());
            return Ok(());
        }
    }
    out.expect(false, || format!("G2: no non-admissible witness among {} instances", 2 * TREECONV_SAMPLES));
    Ok(())
}

fn treeconv_checks() -> Vec<(String, CheckFn)> {
    named(vec![
        ("A2-i1-elementary-extensions", |r, o| treeconv_check(Kind::A2, 1, r, o)),
        ("A2-i2-elementary-extensions", |r, o| treeconv_check(Kind::A2, 2, r, o)),
        ("B2-i1-elementary-extensions", |r, o| treeconv_check(Kind::B2, 1, r, o)),
        ("B2-i2-elementary-extensions", |r, o| treeconv_check(Kind::B2, 2, r, o)),
        ("C2-i1-elementary-extensions", |r, o| treeconv_check(Kind::C2, 1, r, o)),
        ("C2-i2-elementary-extensions", |r, o| treeconv_check(Kind::C2, 2, r, o)),
        ("G2-i1-elementary-extensions", |r, o| treeconv_check(Kind::G2, 1, r, o)),
        ("G2-i2-elementary-extensions", |r, o| treeconv_check(Kind::G2, 2, r, o)),
        ("G2-non-admissible-witness", g2_witness_check),
    ])
}

// --------------------------------------------------------------- counting

/// A random nested pair of regions spanned by vertices of the window.
fn random_pair(rs: &RootSystem2, win: &ChamberWindow, rng: &mut ChaCha8Rng) -> Result<(Region, Region)> {
    let k = rng.gen_range(1..=3);
    let pts: Vec<Point> =
        (0..k).map(|_| win.alcoves[rng.gen_range(0..win.len())].vertices[rng.gen_range(0..3)]).collect();
    let z2 = convex_hull(rs, &pts, 8)?;
    let verts = z2.vertices(rs);
    let pick = |rng: &mut ChaCha8Rng| verts[rng.gen_range(0..verts.len())];
    let z1 = match rng.gen_range(0..3) {
        0 => convex_hull(rs, &[pick(rng)], 8)?,
        1 => match z2.alcoves(rs).choose(rng) {
            Some(a) => Region::hull_of_alcoves(rs, &[*a], 8)?,
            None => convex_hull(rs, &[verts[0]], 8)?,
        },
        _ => {
            let (a, b) = (pick(rng), pick(rng));
            convex_hull(rs, &[a, b], 8)?
        }
    };
    Ok((z1, z2))
}

fn thickness_grid(kind: Kind) -> Vec<Thickness> {
    let rs = root_data(kind);
    let raw: &[[u64; 3]] = match kind {
        Kind::A2 => &[[1, 1, 1], [2, 2, 2], [3, 3, 3], [4, 4, 4]],
        Kind::G2 => &[[1, 1, 1], [2, 2, 3], [3, 3, 2], [2, 2, 5]],
        _ => &[[1, 1, 1], [2, 3, 4], [3, 2, 2], [5, 2, 3]],
    };
    raw.iter().filter_map(|q| Thickness::new(&rs, *q).ok()).collect()
}

fn window_region(rs: &RootSystem2, rng: &mut ChaCha8Rng) -> Result<Region> {
    let win = ChamberWindow::new(rs, 2)?;
    let pts: Vec<Point> =
        (0..3).map(|_| win.alcoves[rng.gen_range(0..win.len())].vertices[rng.gen_range(0..3)]).collect();
    convex_hull(rs, &pts, 8)
}

/// Convex regions inside the star of `v` containing `v`.
fn star_regions(rs: &RootSystem2, v: Point) -> Result<Vec<Region>> {
    let link = vertex_neighbours(rs, v);
    let mut out: Vec<Region> = Vec::new();
    let mut candidates: Vec<Vec<Point>> = vec![vec![v]];
    for &a in &link {
        candidates.push(vec![v, a]);
        for &b in &link {
            candidates.push(vec![v, a, b]);
        }
    }
    for pts in candidates {
        let r = convex_hull(rs, &pts, 8)?;
        if r.vertices(rs).iter().all(|p| *p == v || link.contains(p)) && !out.contains(&r) {
            out.push(r);
        }
    }
    Ok(out)
}

fn counting_checks() -> Vec<(String, CheckFn)> {
    named(vec![
        ("thin-counts-match-enumeration", |rng, out| {
            for kind in Kind::ALL {
                let rs = root_data(kind);
                let win = ChamberWindow::new(&rs, 2)?;
                let thin = Thickness::uniform(kind, 1);
                for _ in 0..40 {
                    let (z1, z2) = random_pair(&rs, &win, rng)?;
                    let c = count_flat(&rs, &z1, &z2, &thin)?;
                    let b = brute_thin(&rs, &z1, &z2, 1)?;
                    out.expect(b.bases() > 0 && b.is_constant(), || {
                        format!("{kind}: not constant-to-one {:?}", b.counts)
                    });
                    out.expect(Some(c.value) == b.value(), || {
                        format!("{kind}: {} vs {:?}", c.factorization(), b.counts)
                    });
                }
            }
            Ok(())
        }),
        ("counts-independent-of-step-order", |rng, out| {
            for kind in Kind::ALL {
                let rs = root_data(kind);
                let win = ChamberWindow::new(&rs, 2)?;
                let th = generic_thickness(&rs);
                for _ in 0..40 {
                    let (z1, z2) = random_pair(&rs, &win, rng)?;
                    let a = count_flat_ordered(&rs, &z1, &z2, &th, StepOrder::Canonical)?;
                    let b = count_flat_ordered(&rs, &z1, &z2, &th, StepOrder::Reversed)?;
                    out.expect(a.value == b.value && a.poly == b.poly, || {
                        format!("{kind}: {} vs {}", a.factorization(), b.factorization())
                    });
                }
            }
            Ok(())
        }),
        ("star-counts-match-fano-and-w2", |_, out| {
            let cases = [
                (Kind::A2, 0u8, GeneralizedPolygon::fano()),
                (Kind::B2, 0, GeneralizedPolygon::w2()),
                (Kind::C2, 1, GeneralizedPolygon::w2()),
            ];
            for (kind, t, poly) in cases {
                let rs = root_data(kind);
                out.expect(link_gonality(&rs, t) == poly.gonality, || format!("{kind}: link gonality"));
                let v = rs.fundamental_vertices()[t as usize];
                let th = Thickness::uniform(kind, 2);
                let regions = star_regions(&rs, v)?;
                for z1 in &regions {
                    for z2 in regions.iter().filter(|z2| z1.is_subset(z2)) {
                        let c = count_flat(&rs, z1, z2, &th)?;
                        let b = brute_star(&rs, v, z1, z2, &poly)?;
                        out.expect(b.is_constant(), || format!("{kind}: not constant-to-one {:?}", b.counts));
                        out.expect(Some(c.value) == b.value(), || {
                            format!("{kind}: {} vs {:?}", c.factorization(), b.counts)
                        });
                    }
                }
            }
            Ok(())
        }),
        ("link-tables-match-polygons", |_, out| {
            let fano = GeneralizedPolygon::fano();
            let tab = link_counts(&root_data(Kind::A2), 0, &Thickness::uniform(Kind::A2, 2))?;
            let opposite_lines = (0..fano.len()).filter(|&y| fano.opposite(fano.line(0), y)).count() as u64;
            out.expect(tab.elements[0] == 7 && fano.points == 7, || format!("Fano points {:?}", tab.elements));
            out.expect(tab.opposite[1] == 4 && opposite_lines == 4, || {
                format!("Fano opposite lines {:?}", tab.opposite)
            });
            let w2 = GeneralizedPolygon::w2();
            let opposite_points = (0..w2.len()).filter(|&y| w2.opposite(0, y)).count() as u64;
            for (kind, t) in [(Kind::B2, 0), (Kind::B2, 2), (Kind::C2, 0), (Kind::C2, 1)] {
                let tab = link_counts(&root_data(kind), t, &Thickness::uniform(kind, 2))?;
                out.expect(tab.elements == [15, 15] && w2.points == 15, || {
                    format!("{kind} type {t}: elements {:?}", tab.elements)
                });
                out.expect(tab.opposite[0] == 8 && opposite_points == 8, || {
                    format!("{kind} type {t}: opposite {:?}", tab.opposite)
                });
                out.expect(tab.chambers == w2.flags().len() as u64, || {
                    format!("{kind} type {t}: chambers {}", tab.chambers)
                });
            }
            Ok(())
        }),
        ("wall-counts-match-tree-models", |rng, out| {
            let shape = RandomShape { max_vertices: 12, ..treeconv_shape() };
            for kind in Kind::ALL {
                for i in 1..=2u8 {
                    let slopes = Arc::new(slope_system(&root_data(kind), i)?);
                    for _ in 0..12 {
                        let z2 = random_complex(slopes.clone(), &shape, rng)?;
                        let chambers = z2.chambers()?;
                        let Some(&seed) = chambers.choose(rng) else { continue };
                        let z1 = hull_oracle(&WallComplex::empty(z2.tree.clone()), &[seed]);
                        for degrees in [[2, 3], [3, 3], [4, 2]] {
                            let model = TreeModel { degrees };
                            let c = count_wall(&z1, &z2, &WallModel::Tree(model))?;
                            let b = brute_tree(&z1, &z2, &model)?;
                            out.expect(b.is_constant(), || format!("{kind} i={i}: not constant-to-one"));
                            out.expect(Some(c.value) == b.value(), || {
                                format!("{kind} i={i} {degrees:?}: {} vs {:?}", c.factorization(), b.counts)
                            });
                        }
                    }
                }
            }
            Ok(())
        }),
        ("counts-multiplicative-along-chains", |rng, out| {
            for kind in Kind::ALL {
                let rs = root_data(kind);
                for th in thickness_grid(kind) {
                    for _ in 0..10 {
                        let z = window_region(&rs, rng)?;
                        let verts = z.vertices(&rs);
                        let x = convex_hull(&rs, &[verts[rng.gen_range(0..verts.len())]], 8)?;
                        let y = convex_hull(&rs, &[x.vertices(&rs)[0], verts[rng.gen_range(0..verts.len())]], 8)?;
                        let xz = count_flat(&rs, &x, &z, &th)?;
                        let xy = count_flat(&rs, &x, &y, &th)?;
                        let yz = count_flat(&rs, &y, &z, &th)?;
                        out.expect(xz.value == xy.value * yz.value && xz.poly == &xy.poly * &yz.poly, || {
                            format!(
                                "{kind} q={:?}: {} != {} * {}",
                                th.q,
                                xz.factorization(),
                                xy.factorization(),
                                yz.factorization()
                            )
                        });
                    }
                }
            }
            Ok(())
        }),
        ("counts-independent-of-isomorphism", |rng, out| {
            for kind in Kind::ALL {
                let rs = root_data(kind);
                let grid = thickness_grid(kind);
                let stab = vertex_stabilizer(&rs, rs.fundamental_vertices()[0]);
                let mut catalog = Vec::new();
                for n in 0..8 {
                    let z = window_region(&rs, rng)?;
                    for &i in kind.special_types() {
                        catalog.extend(e_chain_catalog(&rs, i, &z)?);
                    }
                    let verts = z.vertices(&rs);
                    let y = convex_hull(&rs, &[verts[rng.gen_range(0..verts.len())]], 8)?;
                    let x = verts[rng.gen_range(0..verts.len())];
                    let map = carry_to(&rs, x).compose(&stab[rng.gen_range(0..stab.len())]);
                    if let Ok(e) = conjugate_entry(&rs, &format!("{kind}-{n}"), &y, &z, map) {
                        catalog.push(e);
                    }
                }
                let rep = comparability_check(&rs, &catalog, &grid)?;
                out.cases += rep.checked as u64;
                for f in rep.failures {
                    out.fail(format!("{kind}: {f:?}"));
                }
            }
            Ok(())
        }),
    ])
}

// ----------------------------------------------------------------- prolim

fn prolim_catalog() -> Result<Vec<InvSystem>> {
    Ok(vec![
        line_model(2, 3, 2)?,
        line_model(3, 2, 2)?,
        haar_model(2, 3)?,
        directed_shift(2, 2)?,
        tree_product(2, 2, 2, 2)?.system,
    ])
}

/// A random two-level partition of a random cylinder.
fn random_partition(s: &InvSystem, rng: &mut ChaCha8Rng) -> Result<(Cylinder, Vec<Cylinder>)> {
    let i = rng.gen_range(0..s.len());
    let n = s.stages[i].len();
    let subset: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
    let whole = Cylinder::new(i, if subset.is_empty() { vec![0] } else { subset });
    let uppers: Vec<usize> = (0..s.len()).filter(|&j| s.leq(i, j)).collect();
    let j = uppers[rng.gen_range(0..uppers.len())];
    let (keep, split): (Vec<usize>, Vec<usize>) = whole.subset.iter().partition(|_| rng.gen_bool(0.5));
    let mut parts = vec![Cylinder::new(i, keep)];
    let lifted = s.pull_back(&Cylinder::new(i, split), j)?;
    let mut pieces: Vec<Vec<usize>> = vec![Vec::new(); 3];
    for x in lifted.subset {
        pieces[rng.gen_range(0..3)].push(x);
    }
    parts.extend(pieces.into_iter().map(|p| Cylinder::new(j, p)));
    Ok((whole, parts))
}

fn random_cylinder_function(lens: &[usize], grid: &[Vec<usize>], rng: &mut ChaCha8Rng) -> CylinderFunction {
    (0..rng.gen_range(1..4))
        .map(|_| {
            let k = grid[rng.gen_range(0..grid.len())][rng.gen_range(0..grid[0].len())];
            let subset: Vec<usize> = (0..lens[k]).filter(|_| rng.gen_bool(0.3)).collect();
            (q(rng.gen_range(-5..=5), rng.gen_range(1..=4)), Cylinder::new(k, subset))
        })
        .collect()
}

fn prolim_checks() -> Vec<(String, CheckFn)> {
    named(vec![
        ("pushforward-identity", |_, out| {
            for s in prolim_catalog()? {
                for m in &s.maps {
                    let src = vec![s.stages[m.source].mass; s.stages[m.source].len()];
                    let pushed = pushforward(&src, &m.map, s.stages[m.target].len());
                    out.expect(pushed.iter().all(|&x| x == s.stages[m.target].mass), || {
                        format!("{}: map {}→{}", s.name, m.source, m.target)
                    });
                }
            }
            Ok(())
        }),
        ("path-independence", |rng, out| {
            for s in prolim_catalog()? {
                let reference: Vec<Q> = s.stages.iter().map(|st| st.mass).collect();
                for _ in 0..10 {
                    let mut order: Vec<usize> = (0..s.maps.len()).collect();
                    order.shuffle(rng);
                    out.expect(s.propagate(s.base, Some(&order))? == reference, || {
                        format!("{}: order {order:?}", s.name)
                    });
                }
            }
            Ok(())
        }),
        ("base-change-scales-globally", |_, out| {
            for s in prolim_catalog()? {
                for d in 0..s.len() {
                    let r = s.rebased(d)?;
                    let factor = r.stages[0].mass / s.stages[0].mass;
                    out.expect(r.stages.iter().zip(&s.stages).all(|(a, b)| a.mass / b.mass == factor), || {
                        format!("{}: base {d}", s.name)
                    });
                    if s.leq(s.base, d) {
                        let n = fiber_size(s.composite(s.base, d)?, s.stages[s.base].len())?;
                        out.expect(factor == qi(n as i64), || format!("{}: base {d} factor {factor}", s.name));
                    }
                }
            }
            Ok(())
        }),
        ("additivity-on-partitions", |rng, out| {
            for s in prolim_catalog()? {
                for _ in 0..30 {
                    let (whole, parts) = random_partition(&s, rng)?;
                    out.expect(additivity_check(&s, &whole, &parts)?, || format!("{}: {whole:?}", s.name));
                }
            }
            Ok(())
        }),
        ("disintegration-on-tree-product", |rng, out| {
            let b = tree_product(2, 2, 3, 3)?;
            let lens: Vec<usize> = b.system.stages.iter().map(|s| s.len()).collect();
            for _ in 0..20 {
                let g = random_cylinder_function(&lens, &b.grid, rng);
                let (lhs, rhs) = disintegrate_check(&b, &g)?;
                out.expect(lhs == rhs && lhs == b.system.integrate(&g)?, || format!("{lhs} vs {rhs}"));
            }
            Ok(())
        }),
        ("line-model-stage-masses", |_, out| {
            for (q1, q2) in [(2i64, 3i64), (3, 2), (2, 2)] {
                let s = line_model(q1 as u32, q2 as u32, 2)?;
                let m = s.stages[s.index("v2-singleton")?].mass;
                out.expect(m == q(q2 + 1, q1 + 1), || format!("({q1},{q2}): {m}"));
            }
            Ok(())
        }),
        ("directed-shift-factor", |_, out| {
            for qv in [2u32, 3] {
                let d = directed_shift(qv, 2)?;
                let r = invariance_check(&d, &directed_forward_shift(&d, 2)?)?;
                out.expect(r.factor == qi(qv as i64), || format!("q={qv}: factor {}", r.factor));
            }
            Ok(())
        }),
        ("haar-model-cylinders", |_, out| {
            let h = haar_model(2, 3)?;
            let top = h.index(&coset_index_name(&[3]))?;
            let id = h.stages[top]
                .elements
                .iter()
                .position(|e| e.iter().enumerate().all(|(k, &x)| x as usize == k))
                .ok_or_else(|| Error::Inconsistent("identity missing".into()))?;
            let stab = h.cylinder_mass(&Cylinder::new(top, vec![id]))?;
            out.expect(stab == qi(1), || format!("stabilizer cylinder mass {stab}"));
            let whole = h.index(&coset_index_name(&[0]))?;
            let all = h.cylinder_mass(&Cylinder::new(whole, vec![0]))?;
            out.expect(all == qi(1 << 7), || format!("group cylinder mass {all}"));
            Ok(())
        }),
    ])
}

// --------------------------------------------------------------- boundary

/// Window radius used for sector regions.
const SECTOR_WINDOW: i64 = 14;

fn boundary_checks() -> Vec<(String, CheckFn)> {
    named(vec![
        ("thin-refinement-and-total-mass", |_, out| {
            for kind in Kind::ALL {
                let rs = root_data(kind);
                let sys = thin_delta_system(&rs, 2, SECTOR_WINDOW)?;
                for (k, stage) in sys.stages.iter().enumerate() {
                    out.expect(stage.total_mass() == qi(1), || {
                        format!("{kind} {}: total {}", stage.name, stage.total_mass())
                    });
                    for j in (0..sys.len()).filter(|&j| j != k && sys.leq(k, j)) {
                        for x in 0..stage.len() {
                            let up = sys.pull_back(&Cylinder::new(k, vec![x]), j)?;
                            out.expect(sys.cylinder_mass(&up)? == stage.mass, || {
                                format!("{kind} {} → {}", stage.name, sys.stages[j].name)
                            });
                        }
                    }
                }
                for th in [Thickness::uniform(kind, 1), Thickness::uniform(kind, 2), generic_thickness(&rs)] {
                    let total = delta_total_mass(&rs, &th, SECTOR_WINDOW)?;
                    out.expect(total == qi(1), || format!("{kind} q={:?}: total {total}", th.q));
                    for region in [
                        sector_box(&rs, 0, 0, SECTOR_WINDOW)?,
                        sector_box(&rs, 1, 1, SECTOR_WINDOW)?,
                        sector_box(&rs, 2, 1, SECTOR_WINDOW)?,
                    ] {
                        let rep = delta_refinement_check(&rs, &region, &th)?;
                        let m = mu_delta_cylinder(&rs, &region, &th)?;
                        out.expect(rep.is_consistent() && m.mass == rep.parent, || {
                            format!("{kind} q={:?}: inconsistent refinement", th.q)
                        });
                    }
                }
            }
            Ok(())
        }),
        ("local-proportionality-depth-two", |_, out| {
            for kind in Kind::ALL {
                let rs = root_data(kind);
                let p = sector_vertex(&rs);
                let thin = local_proportionality_check(&rs, p, 2, &CountMode::Thin { base_window: 1 }, SECTOR_WINDOW)?;
                out.cases += thin.checked as u64;
                out.expect(thin.holds(), || format!("{kind} thin: {:?}", thin.violations));
                let sym = local_proportionality_check(
                    &rs,
                    p,
                    2,
                    &CountMode::Symbolic(generic_thickness(&rs)),
                    SECTOR_WINDOW,
                )?;
                out.cases += sym.checked as u64;
                out.expect(sym.holds(), || format!("{kind} symbolic: {:?}", sym.violations));
            }
            Ok(())
        }),
        ("basepoint-change-on-overlaps", |_, out| {
            for kind in Kind::ALL {
                let rs = root_data(kind);
                let th = generic_thickness(&rs);
                let fundamental = Alcove::fundamental(&rs).vertices;
                let extras = convex_hull(&rs, &[Point::origin()], SECTOR_WINDOW)?.join(&rs, &fundamental)?;
                for o in unit_translations(&rs) {
                    for v in extras.vertices(&rs) {
                        let overlap = convex_hull(&rs, &[Point::origin(), o, v], SECTOR_WINDOW)?;
                        let rep = basepoint_change_check(&rs, o, &overlap, &CountMode::Thin { base_window: 1 })?;
                        out.expect(rep.equal, || {
                            format!("{kind} thin {o:?} {v:?}: {} vs {}", rep.from_first, rep.from_second)
                        });
                    }
                    let segment = convex_hull(&rs, &[Point::origin(), o], SECTOR_WINDOW)?;
                    let widened = segment.join(&rs, &fundamental)?;
                    for overlap in [segment, widened] {
                        let rep = basepoint_change_check(&rs, o, &overlap, &CountMode::Symbolic(th))?;
                        out.expect(rep.equal, || {
                            format!("{kind} symbolic {o:?}: {} vs {}", rep.from_first, rep.from_second)
                        });
                    }
                }
            }
            Ok(())
        }),
        ("opp-disintegration-at-three", |rng, out| {
            for kind in Kind::ALL {
                let rs = root_data(kind);
                for i in [1u8, 2] {
                    for th in [Thickness::uniform(kind, 1), Thickness::uniform(kind, 2)] {
                        let bi = opp_bisystem(&rs, i, &th, 3, 3, SECTOR_WINDOW)?;
                        let lens: Vec<usize> = bi.system.stages.iter().map(|s| s.len()).collect();
                        for _ in 0..5 {
                            let g = random_cylinder_function(&lens, &bi.grid, rng);
                            let (lhs, rhs) = opp_disintegration_check(&bi, &g)?;
                            out.expect(lhs == rhs && lhs == bi.system.integrate(&g)?, || {
                                format!("{kind} i={i} q={:?}: {lhs} vs {rhs}", th.q)
                            });
                        }
                    }
                }
            }
            Ok(())
        }),
        ("projectivity-groups-two-transitive", |_, out| {
            for poly in [GeneralizedPolygon::fano(), GeneralizedPolygon::w2()] {
                for x in [0, poly.line(0)] {
                    let g = projectivity_group(&poly, x)?;
                    out.expect(g.two_transitive, || format!("{} element {x}: order {}", poly.name, g.order()));
                }
            }
            Ok(())
        }),
        ("asymmetry-witness-on-w2", |_, out| {
            let w2 = GeneralizedPolygon::w2();
            match asymmetry_search(&w2, 6)? {
                AsymmetryOutcome::Witness(w) => {
                    out.expect(verify_witness(&w2, &w)?, || "witness fails verification".into())
                }
                AsymmetryOutcome::Exhausted { examined } => {
                    out.expect(false, || format!("exhausted after {examined} patterns"))
                }
            }
            Ok(())
        }),
        ("asymmetry-exhaustion-on-thin-quadrangle", |_, out| {
            let thin4 = GeneralizedPolygon::thin(4)?;
            match asymmetry_search(&thin4, thin4.flags().len())? {
                AsymmetryOutcome::Exhausted { examined } => out.expect(examined > 0, || "nothing examined".into()),
                AsymmetryOutcome::Witness(_) => out.expect(false, || "unexpected witness".into()),
            }
            Ok(())
        }),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn root_data_suite_is_deterministic_and_passes() {
        let a = run(&[Suite::RootData], 7, 1);
        let b = run(&[Suite::RootData], 7, 3);
        assert_eq!(a, b);
        assert!(a.passed, "{}", a.summary());
    }
}

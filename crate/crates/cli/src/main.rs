//! Command-line front end for `buildinglab`.
//!
//! Every command produces a JSON report (printed with `--json`, written to
//! `--out PATH`) and a short text summary. Exit status: 0 success,
//! 1 verification failure, 2 parse error, 3 precondition violation,
//! 4 window overflow.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use buildinglab::boundary::{
    asymmetry_search, basepoint_change_check, local_proportionality_check, mu_delta_cylinder, opp_bisystem,
    opp_disintegration_check, projectivity_group, sector_box, sector_vertex, unit_translations, AsymmetryOutcome,
    CountMode,
};
use buildinglab::counting::count_flat;
use buildinglab::coxeter::{convex_hull, root_data, slope_system, Alcove, Kind, Point};
use buildinglab::json::{self, parse_point, CoxeterDoc, ExtCountDoc, InvSystemDoc, PolygonDoc, WallComplexDoc};
use buildinglab::polygon::GeneralizedPolygon;
use buildinglab::prolim::{catalog_system, disintegrate_check, tree_product, Cylinder, CylinderFunction, InvSystem};
use buildinglab::rational::{fmt_q, q};
use buildinglab::treeconv::{
    elementary_extensions, non_admissible_witness, random_complex, ExtensionKind, RandomShape, YChamber,
};
use buildinglab::verify::{self, Suite};
use buildinglab::{Error, Thickness};
use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "buildinglab", version, about = "Exact combinatorics of rank-2 Euclidean buildings")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Root system type: A2, B2, C2 or G2.
    #[arg(long = "type", value_name = "KIND", global = true)]
    kind: Option<Kind>,
    /// Thickness parameters q0 q1 q2 (panel cotypes 0, 1, 2).
    #[arg(long, num_args = 3, value_names = ["Q0", "Q1", "Q2"], global = true)]
    q: Option<Vec<u64>>,
    /// Radius of the root-value window.
    #[arg(long, value_name = "R", default_value_t = 14, global = true)]
    window: i64,
    /// Seed for generated instances.
    #[arg(long, value_name = "N", default_value_t = 0, global = true)]
    seed: u64,
    /// Write the JSON report to this file.
    #[arg(long, value_name = "PATH", global = true)]
    out: Option<PathBuf>,
    /// Print the JSON report instead of the text summary.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Combinatorial convex hull of vertices of the model apartment.
    Hull {
        /// A vertex as "x1,x2" in fundamental-weight coordinates (repeatable).
        #[arg(long = "point", value_name = "X1,X2")]
        points: Vec<String>,
        /// A coxeter/1 document whose points (and region) are hulled.
        #[arg(long, value_name = "PATH")]
        input: Option<PathBuf>,
    },
    /// Elementary extensions of a convex subcomplex of a wall space.
    Extend {
        /// A wallcomplex/1 document; a random complex is generated otherwise.
        #[arg(long, value_name = "PATH")]
        input: Option<PathBuf>,
        /// Type of the wall direction for generated complexes.
        #[arg(long = "wall-type", default_value_t = 1)]
        wall_type: u8,
    },
    /// Number of extensions of an embedding along a convex pair.
    Count {
        /// A coxeter/1 document with a source/target pair.
        #[arg(long, value_name = "PATH")]
        pair: PathBuf,
    },
    /// Mass of one element of a stage of a catalog inverse system.
    Measure {
        /// Catalog system: line_model, haar_model, tree_product, directed_shift.
        #[arg(long)]
        system: Option<String>,
        /// First thickness parameter of line_model.
        #[arg(long)]
        q1: Option<u32>,
        /// Second thickness parameter of line_model.
        #[arg(long)]
        q2: Option<u32>,
        /// Truncation length of line_model.
        #[arg(long, default_value_t = 2)]
        length: u32,
        /// Explicit system parameters, comma separated.
        #[arg(long, value_delimiter = ',')]
        params: Vec<u32>,
        /// An invsystem/1 document instead of a catalog system.
        #[arg(long, value_name = "PATH")]
        input: Option<PathBuf>,
        /// Stage name.
        #[arg(long)]
        index: String,
    },
    /// Cylinder mass of a box of the model sector seen from the origin.
    MeasureDelta {
        /// Box extents along the two simple roots.
        #[arg(long = "box", num_args = 2, value_names = ["A", "B"], default_values_t = [0, 0])]
        extent: Vec<i64>,
    },
    /// Local proportionality of cylinder masses between two basepoints.
    Proportionality {
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
    /// Basepoint change of opposition masses over overlap regions.
    Basepoint,
    /// Disintegration of the half-strip system opposite a vertex at infinity.
    OppDisintegrate {
        /// Type of the vertex at infinity (1 or 2).
        #[arg(long = "wall-type", default_value_t = 1)]
        wall_type: u8,
        /// Truncation along the line and across the panel tree.
        #[arg(long, num_args = 2, value_names = ["A", "B"], default_values_t = [3, 3])]
        depth: Vec<usize>,
        /// Number of random cylinder functions.
        #[arg(long, default_value_t = 10)]
        functions: usize,
    },
    /// Disintegration over the product of two regular trees.
    Disintegrate {
        #[arg(long, num_args = 2, value_names = ["P", "Q"], default_values_t = [2, 2])]
        degrees: Vec<u32>,
        #[arg(long, num_args = 2, value_names = ["I", "J"], default_values_t = [3, 3])]
        depth: Vec<usize>,
        #[arg(long, default_value_t = 20)]
        functions: usize,
    },
    /// Projectivity group of an element of a generalized polygon.
    Projectivity {
        /// fano, w2 or thinN.
        #[arg(long, default_value = "fano")]
        polygon: String,
        /// A polygon/1 document instead of a named polygon.
        #[arg(long, value_name = "PATH")]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        element: usize,
    },
    /// Search for asymmetric extension patterns among convex flag sets.
    SearchAsymmetry {
        #[arg(long, default_value = "w2")]
        polygon: String,
        #[arg(long, value_name = "PATH")]
        input: Option<PathBuf>,
        /// Largest convex set size examined.
        #[arg(long, default_value_t = 6)]
        max: usize,
    },
    /// Run verification suites (all by default).
    Verify {
        /// root-data, hull, treeconv, counting, prolim or boundary (repeatable).
        #[arg(long)]
        suite: Vec<Suite>,
    },
}

/// Outcome of a command: JSON report, text summary, success flag.
struct Report {
    json: Value,
    text: String,
    ok: bool,
}

impl Report {
    fn ok(json: Value, text: String) -> Report {
        Report { json, text, ok: true }
    }
}

/// Failures of the front end, each with its exit status.
#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Lib(#[from] Error),
    #[error("cannot access {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(Error::Parse(_) | Error::Inconsistent(_)) | CliError::Io { .. } => 2,
            CliError::Lib(Error::WindowOverflow(_)) => 4,
            CliError::Lib(_) => 3,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })
}

fn kind(c: &Common) -> CliResult<Kind> {
    c.kind.ok_or_else(|| Error::Parse("--type is required".into()).into())
}

fn thickness(c: &Common, kind: Kind) -> CliResult<Thickness> {
    let rs = root_data(kind);
    match &c.q {
        Some(v) => Ok(Thickness::new(&rs, [v[0], v[1], v[2]])?),
        None => Ok(Thickness::uniform(kind, 2)),
    }
}

fn polygon(name: &str, input: &Option<PathBuf>) -> CliResult<GeneralizedPolygon> {
    match input {
        Some(p) => Ok(PolygonDoc::parse(&read(p)?)?),
        None => Ok(GeneralizedPolygon::by_name(name)?),
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> CliResult<Value> {
    serde_json::to_value(x).map_err(|e| Error::Parse(e.to_string()).into())
}

fn chamber_json(c: &YChamber) -> Value {
    json!({ "edge": c.edge, "points": c.tri.iter().map(|(s, h)| [fmt_q(s), fmt_q(h)]).collect::<Vec<_>>() })
}

fn extension_name(k: &ExtensionKind) -> String {
    match k {
        ExtensionKind::Along { side, component } => format!("along {side:?} component {component}").to_lowercase(),
        ExtensionKind::Vertical { vertex, towards } => format!("vertical at {vertex} towards {towards}"),
    }
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

fn cmd_hull(c: &Common, points: &[String], input: &Option<PathBuf>) -> CliResult<Report> {
    let (kind, mut pts) = match input {
        Some(p) => {
            let doc = CoxeterDoc::parse(&read(p)?)?;
            let mut pts = doc.points()?;
            if doc.region.is_some() {
                pts.extend(doc.region()?.vertices(&root_data(doc.kind)));
            }
            (doc.kind, pts)
        }
        None => (kind(c)?, Vec::new()),
    };
    for s in points {
        let (a, b) = s.split_once(',').ok_or_else(|| Error::Parse(format!("point {s:?} is not \"x1,x2\"")))?;
        pts.push(parse_point(&[a.trim().to_string(), b.trim().to_string()])?);
    }
    if pts.is_empty() {
        return Err(Error::Precondition("no points given".into()).into());
    }
    let rs = root_data(kind);
    let region = convex_hull(&rs, &pts, c.window)?;
    let doc = CoxeterDoc::new(kind).with_root_data().with_region(&region);
    let text = format!(
        "{kind} hull of {} points: {} alcoves, {} vertices",
        pts.len(),
        region.alcoves(&rs).len(),
        region.vertices(&rs).len()
    );
    Ok(Report::ok(to_value(&doc)?, text))
}

fn cmd_extend(c: &Common, input: &Option<PathBuf>, wall_type: u8) -> CliResult<Report> {
    let complex = match input {
        Some(p) => WallComplexDoc::parse(&read(p)?)?,
        None => {
            let slopes = Arc::new(slope_system(&root_data(kind(c)?), wall_type)?);
            let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
            random_complex(slopes, &RandomShape::default(), &mut rng)?
        }
    };
    let exts = elementary_extensions(&complex)?;
    let witness = non_admissible_witness(&complex)?;
    let mut text = format!("{} extension(s) of a complex on {} tree vertices\n", exts.len(), complex.support().len());
    let mut list = Vec::new();
    for e in &exts {
        text.push_str(&format!("  {}: support {} vertices\n", extension_name(&e.kind), e.result.support().len()));
        list.push(json!({
            "kind": extension_name(&e.kind),
            "chamber": chamber_json(&e.chamber),
            "result": to_value(&WallComplexDoc::new(&e.result))?,
        }));
    }
    let witness_json = match &witness {
        Some(w) => {
            text.push_str(
                "non-admissible component: hull of a chamber below it strictly contains an elementary extension\n",
            );
            json!({ "chamber": chamber_json(&w.chamber), "hull": to_value(&WallComplexDoc::new(&w.hull))? })
        }
        None => Value::Null,
    };
    let report = json!({
        "complex": to_value(&WallComplexDoc::new(&complex))?,
        "extensions": list,
        "non_admissible_witness": witness_json,
    });
    Ok(Report::ok(report, text.trim_end().to_string()))
}

fn cmd_count(c: &Common, pair: &Path) -> CliResult<Report> {
    let doc = CoxeterDoc::parse(&read(pair)?)?;
    if c.kind.is_some_and(|k| k != doc.kind) {
        return Err(Error::Precondition(format!("--type does not match the document type {}", doc.kind)).into());
    }
    let (source, target) = doc.pair()?;
    if !source.is_subset(&target) {
        return Err(Error::Precondition("the source region must lie in the target region".into()).into());
    }
    let rs = root_data(doc.kind);
    let th = thickness(c, doc.kind)?;
    let count = count_flat(&rs, &source, &target, &th)?;
    let text = format!("{}\nfactorization: {}", count.value, count.factorization());
    Ok(Report::ok(to_value(&ExtCountDoc::new(&count))?, text))
}

#[allow(clippy::too_many_arguments)]
fn cmd_measure(
    system: &Option<String>,
    q1: Option<u32>,
    q2: Option<u32>,
    length: u32,
    params: &[u32],
    input: &Option<PathBuf>,
    index: &str,
) -> CliResult<Report> {
    let sys: InvSystem = match (input, system) {
        (Some(p), _) => InvSystemDoc::parse(&read(p)?)?,
        (None, Some(name)) => {
            let params: Vec<u32> = match (name.as_str(), q1, q2) {
                ("line_model", Some(a), Some(b)) if params.is_empty() => vec![a, b, length],
                _ => params.to_vec(),
            };
            catalog_system(name, &params)?
        }
        (None, None) => return Err(Error::Parse("either --system or --input is required".into()).into()),
    };
    let k = sys.index(index)?;
    let stage = &sys.stages[k];
    let report = json!({
        "system": sys.name,
        "stage": stage.name,
        "elements": stage.len(),
        "mass": fmt_q(&stage.mass),
        "total": fmt_q(&stage.total_mass()),
    });
    Ok(Report::ok(report, fmt_q(&stage.mass)))
}

fn cmd_measure_delta(c: &Common, extent: &[i64]) -> CliResult<Report> {
    let kind = kind(c)?;
    let rs = root_data(kind);
    let th = thickness(c, kind)?;
    let region = sector_box(&rs, extent[0], extent[1], c.window)?;
    let m = mu_delta_cylinder(&rs, &region, &th)?;
    let text =
        format!("{kind} q={:?} box [{},{}]: mass {} (1/{})", th.q, extent[0], extent[1], fmt_q(&m.mass), m.count);
    Ok(Report::ok(to_value(&m)?, text))
}

fn count_mode(th: &Thickness) -> CountMode {
    if th.is_thin() {
        CountMode::Thin { base_window: 1 }
    } else {
        CountMode::Symbolic(*th)
    }
}

fn cmd_proportionality(c: &Common, depth: usize) -> CliResult<Report> {
    let kind = kind(c)?;
    let rs = root_data(kind);
    let th = thickness(c, kind)?;
    let rep = local_proportionality_check(&rs, sector_vertex(&rs), depth, &count_mode(&th), c.window)?;
    let text = format!(
        "{kind} q={:?} depth {depth}: {} cross-ratio identities, {} violations",
        th.q,
        rep.checked,
        rep.violations.len()
    );
    Ok(Report { json: to_value(&rep)?, text, ok: rep.holds() })
}

fn cmd_basepoint(c: &Common) -> CliResult<Report> {
    let kind = kind(c)?;
    let rs = root_data(kind);
    let th = thickness(c, kind)?;
    let mode = count_mode(&th);
    let mut rows = Vec::new();
    let mut all_equal = true;
    for o in unit_translations(&rs) {
        let segment = convex_hull(&rs, &[Point::origin(), o], c.window)?;
        let widened = segment.join(&rs, &Alcove::fundamental(&rs).vertices)?;
        for overlap in [segment, widened] {
            let rep = basepoint_change_check(&rs, o, &overlap, &mode)?;
            all_equal &= rep.equal;
            rows.push(json!({ "other": json::point_doc(o), "report": to_value(&rep)? }));
        }
    }
    let text = format!("{kind} q={:?}: {} overlaps, all equal: {all_equal}", th.q, rows.len());
    Ok(Report { json: json!({ "checks": rows, "equal": all_equal }), text, ok: all_equal })
}

fn cmd_opp_disintegrate(c: &Common, wall_type: u8, depth: &[usize], functions: usize) -> CliResult<Report> {
    let kind = kind(c)?;
    let rs = root_data(kind);
    let th = thickness(c, kind)?;
    let bi = opp_bisystem(&rs, wall_type, &th, depth[0], depth[1], c.window)?;
    let lens: Vec<usize> = bi.system.stages.iter().map(|s| s.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let mut rows = Vec::new();
    let mut ok = true;
    for _ in 0..functions {
        let g = random_cylinder_function(&lens, &bi.grid, &mut rng);
        let (lhs, rhs) = opp_disintegration_check(&bi, &g)?;
        ok &= lhs == rhs;
        rows.push(json!({ "integral": fmt_q(&lhs), "disintegrated": fmt_q(&rhs) }));
    }
    let text = format!(
        "{kind} q={:?} type {wall_type} at ({},{}): {} stages, {functions} functions, exact: {ok}",
        th.q,
        depth[0],
        depth[1],
        bi.system.len()
    );
    Ok(Report { json: json!({ "system": bi.system.name, "checks": rows, "exact": ok }), text, ok })
}

fn cmd_disintegrate(c: &Common, degrees: &[u32], depth: &[usize], functions: usize) -> CliResult<Report> {
    let bi = tree_product(degrees[0], degrees[1], depth[0], depth[1])?;
    let lens: Vec<usize> = bi.system.stages.iter().map(|s| s.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let mut rows = Vec::new();
    let mut ok = true;
    for _ in 0..functions {
        let g = random_cylinder_function(&lens, &bi.grid, &mut rng);
        let (lhs, rhs) = disintegrate_check(&bi, &g)?;
        ok &= lhs == rhs;
        rows.push(json!({ "integral": fmt_q(&lhs), "disintegrated": fmt_q(&rhs) }));
    }
    let text = format!("{}: {functions} functions, exact: {ok}", bi.system.name);
    Ok(Report { json: json!({ "system": bi.system.name, "checks": rows, "exact": ok }), text, ok })
}

fn cmd_projectivity(name: &str, input: &Option<PathBuf>, element: usize) -> CliResult<Report> {
    let poly = polygon(name, input)?;
    let g = projectivity_group(&poly, element)?;
    let text = format!(
        "{} element {element}: projectivity group of order {} (even part {}), 2-transitive: {}",
        poly.name,
        g.order(),
        g.even_order,
        g.two_transitive
    );
    Ok(Report::ok(json!({ "polygon": to_value(&PolygonDoc::new(&poly))?, "group": to_value(&g)? }), text))
}

fn cmd_search_asymmetry(name: &str, input: &Option<PathBuf>, max: usize) -> CliResult<Report> {
    let poly = polygon(name, input)?;
    let outcome = asymmetry_search(&poly, max)?;
    let text = match &outcome {
        AsymmetryOutcome::Witness(w) => format!(
            "{}: witness with |Y| = {}, |Z| = {}, candidate hulls {:?} of {} chambers",
            poly.name,
            w.y.len(),
            w.z.len(),
            w.candidate_hulls.iter().map(|h| h.1).collect::<Vec<_>>(),
            w.total
        ),
        AsymmetryOutcome::Exhausted { examined } => {
            format!("{}: no witness up to {max} chambers ({examined} patterns examined)", poly.name)
        }
    };
    Ok(Report::ok(to_value(&outcome)?, text))
}

fn cmd_verify(c: &Common, suites: &[Suite]) -> CliResult<Report> {
    let suites: Vec<Suite> = if suites.is_empty() { Suite::ALL.to_vec() } else { suites.to_vec() };
    let report = verify::run(&suites, c.seed, verify::workers_from_env()?);
    Ok(Report { json: to_value(&report)?, text: report.summary().trim_end().to_string(), ok: report.passed })
}

fn dispatch(cli: &Cli) -> CliResult<Report> {
    let c = &cli.common;
    match &cli.command {
        Command::Hull { points, input } => cmd_hull(c, points, input),
        Command::Extend { input, wall_type } => cmd_extend(c, input, *wall_type),
        Command::Count { pair } => cmd_count(c, pair),
        Command::Measure { system, q1, q2, length, params, input, index } => {
            cmd_measure(system, *q1, *q2, *length, params, input, index)
        }
        Command::MeasureDelta { extent } => cmd_measure_delta(c, extent),
        Command::Proportionality { depth } => cmd_proportionality(c, *depth),
        Command::Basepoint => cmd_basepoint(c),
        Command::OppDisintegrate { wall_type, depth, functions } => {
            cmd_opp_disintegrate(c, *wall_type, depth, *functions)
        }
        Command::Disintegrate { degrees, depth, functions } => cmd_disintegrate(c, degrees, depth, *functions),
        Command::Projectivity { polygon, input, element } => cmd_projectivity(polygon, input, *element),
        Command::SearchAsymmetry { polygon, input, max } => cmd_search_asymmetry(polygon, input, *max),
        Command::Verify { suite } => cmd_verify(c, suite),
    }
}

fn emit(c: &Common, report: &Report) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(&report.json).map_err(|e| Error::Parse(e.to_string()))?;
    text.push('\n');
    if let Some(path) = &c.out {
        std::fs::write(path, &text).map_err(|source| CliError::Io { path: path.clone(), source })?;
    }
    let shown = if c.json { text } else { format!("{}\n", report.text) };
    let mut stdout = std::io::stdout().lock();
    match stdout.write_all(shown.as_bytes()).and_then(|()| stdout.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            Err(CliError::Io { path: PathBuf::from("<stdout>"), source: e })
        }
        _ => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli).and_then(|r| emit(&cli.common, &r).map(|()| r.ok)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_line_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn error_kinds_map_to_exit_codes() {
        assert_eq!(CliError::from(Error::Parse("x".into())).exit_code(), 2);
        assert_eq!(CliError::from(Error::Precondition("x".into())).exit_code(), 3);
        assert_eq!(CliError::from(Error::WindowOverflow("x".into())).exit_code(), 4);
    }

    #[test]
    fn thickness_defaults_to_two() {
        let cli = Cli::parse_from(["buildinglab", "basepoint", "--type", "B2"]);
        assert_eq!(thickness(&cli.common, Kind::B2).unwrap().q, [2, 2, 2]);
    }
}

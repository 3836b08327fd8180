//! Versioned JSON documents.
//!
//! Every document carries a `"schema"` field. Rationals are `"p/q"` strings
//! (`"inf"` marks an unbounded side of a wall-space fiber); no floating point
//! values appear anywhere. Parsing validates the document and rebuilds the
//! library value, so `parse → serialize → parse` is the identity.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::counting::{ExtCount, Factor};
use crate::coxeter::{convex_hull, root_data, Alcove, AlcoveId, Kind, Point, Region, RootCoeffs, RootSystem2};
use crate::error::{Error, Result};
use crate::polygon::GeneralizedPolygon;
use crate::prolim::InvSystem;
use crate::rational::{fmt_q, parse_q, Bound};
use crate::treeconv::{WallComplex, WallTree};

pub const COXETER: &str = "coxeter/1";
pub const WALLCOMPLEX: &str = "wallcomplex/1";
pub const EXTCOUNT: &str = "extcount/1";
pub const INVSYSTEM: &str = "invsystem/1";
pub const POLYGON: &str = "polygon/1";

fn check_schema(found: &str, expected: &str) -> Result<()> {
    if found == expected {
        Ok(())
    } else {
        Err(Error::Parse(format!("expected schema {expected:?}, found {found:?}")))
    }
}

/// Parses a JSON string into a document type.
pub fn from_str<T: DeserializeOwned>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}

/// Serializes a document as pretty-printed JSON with a trailing newline.
pub fn to_string<T: Serialize>(doc: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(doc).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// A point as two `"p/q"` strings.
pub type PointDoc = [String; 2];

pub fn point_doc(p: Point) -> PointDoc {
    [fmt_q(&p.0[0]), fmt_q(&p.0[1])]
}

pub fn parse_point(d: &PointDoc) -> Result<Point> {
    Ok(Point::new(parse_q(&d[0])?, parse_q(&d[1])?))
}

// ---------------------------------------------------------------- coxeter/1

/// Root data of one type (redundant with the type; checked on parse).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RootDataDoc {
    pub positive_roots: Vec<RootCoeffs>,
    pub highest_root: RootCoeffs,
    pub cartan: [[i64; 2]; 2],
    pub gram: [[String; 2]; 2],
    pub coroots: Vec<PointDoc>,
}

impl RootDataDoc {
    pub fn new(rs: &RootSystem2) -> RootDataDoc {
        RootDataDoc {
            positive_roots: rs.positive_roots.clone(),
            highest_root: rs.highest_root,
            cartan: rs.cartan,
            gram: rs.gram.map(|row| row.map(|x| fmt_q(&x))),
            coroots: rs.coroots.iter().map(|&p| point_doc(p)).collect(),
        }
    }
}

/// A convex region: its alcoves, the vertices not on any listed alcove, and
/// the window radius. The region is the hull of all listed vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionDoc {
    pub alcoves: Vec<AlcoveId>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vertices: Vec<PointDoc>,
    pub window: i64,
}

impl RegionDoc {
    pub fn new(rs: &RootSystem2, region: &Region) -> RegionDoc {
        let alcoves = region.alcoves(rs);
        let covered: std::collections::BTreeSet<Point> = alcoves.iter().flat_map(|a| a.vertices).collect();
        RegionDoc {
            alcoves: alcoves.iter().map(|a| a.id(rs)).collect(),
            vertices: region.vertices(rs).into_iter().filter(|v| !covered.contains(v)).map(point_doc).collect(),
            window: region.window,
        }
    }

    pub fn to_region(&self, rs: &RootSystem2) -> Result<Region> {
        let mut pts = Vec::new();
        for id in &self.alcoves {
            pts.extend(Alcove::from_id(rs, *id)?.vertices);
        }
        for v in &self.vertices {
            pts.push(parse_point(v)?);
        }
        convex_hull(rs, &pts, self.window)
    }
}

/// A source/target pair of regions (for extension counts).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairDoc {
    pub source: RegionDoc,
    pub target: RegionDoc,
}

/// `coxeter/1`: a type with optional root data, points, a region or a pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoxeterDoc {
    pub schema: String,
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root_data: Option<RootDataDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<PointDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<RegionDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<PairDoc>,
}

impl CoxeterDoc {
    pub fn new(kind: Kind) -> CoxeterDoc {
        CoxeterDoc { schema: COXETER.into(), kind, root_data: None, points: Vec::new(), region: None, pair: None }
    }

    pub fn with_root_data(mut self) -> CoxeterDoc {
        self.root_data = Some(RootDataDoc::new(&root_data(self.kind)));
        self
    }

    pub fn with_region(mut self, region: &Region) -> CoxeterDoc {
        self.region = Some(RegionDoc::new(&root_data(self.kind), region));
        self
    }

    pub fn with_pair(mut self, source: &Region, target: &Region) -> CoxeterDoc {
        let rs = root_data(self.kind);
        self.pair = Some(PairDoc { source: RegionDoc::new(&rs, source), target: RegionDoc::new(&rs, target) });
        self
    }

    /// Validates schema and root data and normalizes every region to its
    /// canonical presentation.
    pub fn parse(s: &str) -> Result<CoxeterDoc> {
        let doc: CoxeterDoc = from_str(s)?;
        check_schema(&doc.schema, COXETER)?;
        let rs = root_data(doc.kind);
        if let Some(rd) = &doc.root_data {
            if *rd != RootDataDoc::new(&rs) {
                return Err(Error::Parse(format!("root data does not match type {}", doc.kind)));
            }
        }
        for p in &doc.points {
            parse_point(p)?;
        }
        let region = doc.region.as_ref().map(|r| r.to_region(&rs).map(|x| RegionDoc::new(&rs, &x))).transpose()?;
        let pair = doc
            .pair
            .as_ref()
            .map(|p| -> Result<PairDoc> {
                Ok(PairDoc {
                    source: RegionDoc::new(&rs, &p.source.to_region(&rs)?),
                    target: RegionDoc::new(&rs, &p.target.to_region(&rs)?),
                })
            })
            .transpose()?;
        Ok(CoxeterDoc { region, pair, ..doc })
    }

    pub fn region(&self) -> Result<Region> {
        let rs = root_data(self.kind);
        self.region.as_ref().ok_or_else(|| Error::Parse("document has no region".into()))?.to_region(&rs)
    }

    pub fn pair(&self) -> Result<(Region, Region)> {
        let rs = root_data(self.kind);
        let p = self.pair.as_ref().ok_or_else(|| Error::Parse("document has no pair".into()))?;
        Ok((p.source.to_region(&rs)?, p.target.to_region(&rs)?))
    }

    pub fn points(&self) -> Result<Vec<Point>> {
        self.points.iter().map(parse_point).collect()
    }
}

// ------------------------------------------------------------ wallcomplex/1

/// A fine tree vertex: coarse index (branch points) or coarse edge and
/// offset from the edge's parity-0 end.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeVertexDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coarse: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge: Option<usize>,
    pub offset: String,
}

/// The tree window: coarse parities and edges, plus the derived fine vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeDoc {
    pub parities: Vec<u8>,
    pub edges: Vec<[usize; 2]>,
    pub vertices: Vec<TreeVertexDoc>,
}

/// `wallcomplex/1`: a convex subcomplex of a wall space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WallComplexDoc {
    pub schema: String,
    pub kind: Kind,
    /// Type of the wall direction.
    pub wall_type: u8,
    pub tree: TreeDoc,
    /// Vertices of the subtree `S`.
    pub support: Vec<usize>,
    /// Lower bounds `f` on `S`.
    pub f: BTreeMap<usize, Bound>,
    /// Negated upper bounds `g` on `S`.
    pub g: BTreeMap<usize, Bound>,
}

impl WallComplexDoc {
    pub fn new(c: &WallComplex) -> WallComplexDoc {
        let t = &c.tree;
        let tree = TreeDoc {
            parities: t.coarse.iter().map(|cv| cv.parity).collect(),
            edges: t.edges.iter().map(|e| e.ends).collect(),
            vertices: t
                .vertices
                .iter()
                .map(|v| TreeVertexDoc { coarse: v.coarse, edge: v.edge, offset: fmt_q(&v.offset) })
                .collect(),
        };
        let mut f = BTreeMap::new();
        let mut g = BTreeMap::new();
        for (v, fib) in c.fibers.iter().enumerate() {
            if let Some((lo, hi)) = fib {
                f.insert(v, *lo);
                g.insert(v, *hi);
            }
        }
        WallComplexDoc { schema: WALLCOMPLEX.into(), kind: t.kind, wall_type: t.i, tree, support: c.support(), f, g }
    }

    /// Rebuilds the complex, checking the derived tree data and the support.
    pub fn to_complex(&self) -> Result<WallComplex> {
        check_schema(&self.schema, WALLCOMPLEX)?;
        let edges: Vec<(usize, usize)> = self.tree.edges.iter().map(|e| (e[0], e[1])).collect();
        let tree = Arc::new(WallTree::new(self.kind, self.wall_type, &self.tree.parities, &edges)?);
        let rebuilt = WallComplexDoc::new(&WallComplex::empty(tree.clone())).tree;
        if rebuilt != self.tree {
            return Err(Error::Parse("tree vertices do not match the coarse data".into()));
        }
        let keys: Vec<usize> = self.f.keys().copied().collect();
        if keys != self.support || self.g.keys().copied().collect::<Vec<_>>() != self.support {
            return Err(Error::Parse("bound maps must be defined exactly on the support".into()));
        }
        let mut fibers = vec![None; tree.len()];
        for &v in &self.support {
            if v >= tree.len() {
                return Err(Error::Parse(format!("support vertex {v} out of range")));
            }
            fibers[v] = Some((self.f[&v], self.g[&v]));
        }
        WallComplex::from_fibers(tree, fibers)
    }

    pub fn parse(s: &str) -> Result<WallComplex> {
        from_str::<WallComplexDoc>(s)?.to_complex()
    }
}

// --------------------------------------------------------------- extcount/1

/// `extcount/1`: an extension count with its factorization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtCountDoc {
    pub schema: String,
    pub kind: Kind,
    pub q: [u64; 3],
    pub value: u64,
    pub factorization: String,
    pub polynomial: String,
}

impl ExtCountDoc {
    pub fn new(c: &ExtCount) -> ExtCountDoc {
        ExtCountDoc {
            schema: EXTCOUNT.into(),
            kind: c.kind,
            q: c.q,
            value: c.value,
            factorization: c.factorization(),
            polynomial: c.poly.to_string(),
        }
    }

    /// Recomputes the count from the factorization and checks the stored
    /// value and polynomial.
    pub fn to_count(&self) -> Result<ExtCount> {
        check_schema(&self.schema, EXTCOUNT)?;
        let factors: Vec<Factor> = ExtCount::parse_factorization(&self.factorization)?;
        let c = ExtCount::from_factors(self.kind, self.q, factors)?;
        if c.value != self.value || c.poly.to_string() != self.polynomial {
            return Err(Error::Parse("value or polynomial does not match the factorization".into()));
        }
        Ok(c)
    }

    pub fn parse(s: &str) -> Result<ExtCount> {
        from_str::<ExtCountDoc>(s)?.to_count()
    }
}

// -------------------------------------------------------------- invsystem/1

/// `invsystem/1`: stages, covering maps, base, and the derived covering
/// relation of the index poset as `[lower, upper]` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvSystemDoc {
    pub schema: String,
    pub poset: Vec<[usize; 2]>,
    #[serde(flatten)]
    pub system: InvSystem,
}

impl InvSystemDoc {
    pub fn new(sys: &InvSystem) -> InvSystemDoc {
        let mut poset: Vec<[usize; 2]> = sys.maps.iter().map(|m| [m.target, m.source]).collect();
        poset.sort_unstable();
        InvSystemDoc { schema: INVSYSTEM.into(), poset, system: sys.clone() }
    }

    /// Rebuilds (and thereby validates) the system.
    pub fn to_system(&self) -> Result<InvSystem> {
        check_schema(&self.schema, INVSYSTEM)?;
        let s = &self.system;
        let sys = InvSystem::build(s.name.clone(), s.stages.clone(), s.maps.clone(), s.base)?;
        if InvSystemDoc::new(&sys).poset != self.poset {
            return Err(Error::Parse("poset does not match the maps".into()));
        }
        for (a, b) in sys.stages.iter().zip(&s.stages) {
            if a.mass != b.mass {
                return Err(Error::Parse(format!("stage {} has mass inconsistent with the base", a.name)));
            }
        }
        Ok(sys)
    }

    pub fn parse(s: &str) -> Result<InvSystem> {
        from_str::<InvSystemDoc>(s)?.to_system()
    }
}

// ---------------------------------------------------------------- polygon/1

/// `polygon/1`: points, lines and incidence pairs `[point, line]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonDoc {
    pub schema: String,
    pub name: String,
    pub gonality: usize,
    pub points: usize,
    pub lines: usize,
    pub incidence: Vec<[usize; 2]>,
}

impl PolygonDoc {
    pub fn new(p: &GeneralizedPolygon) -> PolygonDoc {
        let mut incidence: Vec<[usize; 2]> =
            p.lines_of.iter().enumerate().flat_map(|(pt, ls)| ls.iter().map(move |&l| [pt, l])).collect();
        incidence.sort_unstable();
        PolygonDoc {
            schema: POLYGON.into(),
            name: p.name.clone(),
            gonality: p.gonality,
            points: p.points,
            lines: p.lines,
            incidence,
        }
    }

    /// Rebuilds the polygon (checking the axioms).
    pub fn to_polygon(&self) -> Result<GeneralizedPolygon> {
        check_schema(&self.schema, POLYGON)?;
        let mut lines_of = vec![Vec::new(); self.points];
        for &[p, l] in &self.incidence {
            if p >= self.points || l >= self.lines {
                return Err(Error::Parse(format!("incidence [{p}, {l}] out of range")));
            }
            lines_of[p].push(l);
        }
        for ls in &mut lines_of {
            ls.sort_unstable();
        }
        GeneralizedPolygon::new(&self.name, self.gonality, self.points, self.lines, lines_of)
    }

    pub fn parse(s: &str) -> Result<GeneralizedPolygon> {
        from_str::<PolygonDoc>(s)?.to_polygon()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn wrong_schema_is_a_parse_error() {
        let s = r#"{"schema":"coxeter/2","kind":"A2"}"#;
        assert!(matches!(CoxeterDoc::parse(s), Err(Error::Parse(_))));
    }

    #[test]
    fn points_serialize_as_rational_strings() {
        assert_eq!(point_doc(Point::new(q(1, 2), q(-3, 1))), ["1/2".to_string(), "-3".to_string()]);
    }

    #[test]
    fn chamberless_regions_keep_their_vertices() {
        let rs = root_data(Kind::A2);
        let seg = convex_hull(&rs, &[Point::origin(), rs.weight(1).scale(q(3, 1))], 8).unwrap();
        let doc = RegionDoc::new(&rs, &seg);
        assert!(doc.alcoves.is_empty());
        assert_eq!(doc.to_region(&rs).unwrap(), seg);
    }
}

use hilbert_core::delaunay::FaceKind;
use hilbert_core::hull::HullEntry;
use hilbert_core::{build, hull_from_triangulation, AugmentedTriangulation, BoundaryPoint, HullSequence};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::scene::{to_pairs, to_points};

/// A point on the polygon boundary: coordinates, the edge it lies on and the
/// parameter along that edge. `approach` is the limit-ball weight used to
/// order several boundary vertices sharing one polygon vertex.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryRecord {
    pub x: f64,
    pub y: f64,
    pub edge: usize,
    pub t: f64,
    pub approach: f64,
}

impl BoundaryRecord {
    pub fn new(b: BoundaryPoint, approach: f64) -> Self {
        BoundaryRecord {
            x: b.point.x,
            y: b.point.y,
            edge: b.edge,
            t: b.t,
            approach,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SiteRecord {
    /// Index of the site in the input scene.
    pub index: usize,
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToothRecord {
    pub sites: [usize; 2],
    pub boundary: BoundaryRecord,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapRecord {
    pub site: usize,
    pub from: BoundaryRecord,
    pub to: BoundaryRecord,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HullRecord {
    pub site: usize,
    pub witness: BoundaryRecord,
}

impl From<&HullEntry> for HullRecord {
    fn from(e: &HullEntry) -> Self {
        HullRecord {
            site: e.site,
            witness: BoundaryRecord::new(e.witness, e.approach),
        }
    }
}

/// Serialized augmented triangulation. Site indices everywhere refer to the
/// input order, which `sites[k].index` records; `sites` itself is listed in
/// insertion order. Polygon, input sites and seed are kept so the structure
/// can be rebuilt and checked.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangulationFile {
    pub polygon: Vec<[f64; 2]>,
    pub seed: u64,
    pub sites: Vec<SiteRecord>,
    pub standard_triangles: Vec<[usize; 3]>,
    /// Counterclockwise around the boundary.
    pub teeth: Vec<ToothRecord>,
    /// Counterclockwise around the boundary, by their first boundary vertex.
    pub gaps: Vec<GapRecord>,
    /// Hull cycle without the closing repeat.
    pub hull: Vec<HullRecord>,
}

impl TriangulationFile {
    pub fn from_triangulation(t: &AugmentedTriangulation, input_sites: &[hilbert_core::Point2], seed: u64) -> Self {
        let sites = t
            .insertion_order()
            .iter()
            .map(|&i| SiteRecord {
                index: i,
                x: input_sites[i].x,
                y: input_sites[i].y,
            })
            .collect();
        let bnd = |id: usize| {
            let b = t.boundary_vertex(id);
            BoundaryRecord::new(b.point, b.approach)
        };
        let teeth = t
            .ring()
            .into_iter()
            .map(|f| {
                let (a, b, x) = t.tooth_parts(f);
                ToothRecord {
                    sites: [a, b],
                    boundary: bnd(x),
                }
            })
            .collect();
        let mut gaps: Vec<GapRecord> = t
            .faces_of_kind(FaceKind::Gap)
            .into_iter()
            .map(|g| {
                let (a, x, y) = t.gap_parts(g);
                GapRecord {
                    site: a,
                    from: bnd(x),
                    to: bnd(y),
                }
            })
            .collect();
        gaps.sort_by(|a, b| {
            let key = |r: &GapRecord| (r.from.edge as f64 + r.from.t, r.from.approach);
            key(a).partial_cmp(&key(b)).unwrap_or(std::cmp::Ordering::Equal)
        });
        let hull = hull_from_triangulation(t)
            .entries
            .iter()
            .map(HullRecord::from)
            .collect();
        TriangulationFile {
            polygon: to_pairs(t.polygon().vertices()),
            seed,
            sites,
            standard_triangles: t.standard_triangles().into_iter().collect(),
            teeth,
            gaps,
            hull,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let f: TriangulationFile = serde_json::from_str(text)?;
        f.check_indices()?;
        Ok(f)
    }

    fn check_indices(&self) -> CliResult<()> {
        let n = self.sites.len();
        let mut seen = vec![false; n];
        for s in &self.sites {
            if s.index >= n || std::mem::replace(&mut seen[s.index], true) {
                return Err(CliError::Input(format!(
                    "site index {} is out of range or repeated",
                    s.index
                )));
            }
        }
        let bad = |i: &usize| *i >= n;
        let m = self.polygon.len();
        let bad_edge = |b: &BoundaryRecord| b.edge >= m;
        if self.standard_triangles.iter().flatten().any(bad)
            || self
                .teeth
                .iter()
                .any(|t| t.sites.iter().any(bad) || bad_edge(&t.boundary))
            || self
                .gaps
                .iter()
                .any(|g| bad(&g.site) || bad_edge(&g.from) || bad_edge(&g.to))
            || self.hull.iter().any(|h| bad(&h.site) || bad_edge(&h.witness))
        {
            return Err(CliError::Input(
                "triangulation references a missing site or edge".into(),
            ));
        }
        Ok(())
    }

    /// Sites in input order.
    pub fn input_sites(&self) -> Vec<hilbert_core::Point2> {
        let mut pairs = vec![[0.0; 2]; self.sites.len()];
        for s in &self.sites {
            pairs[s.index] = [s.x, s.y];
        }
        to_points(&pairs)
    }

    /// Rebuilds the triangulation from the stored polygon, sites and seed,
    /// and checks that it serializes back to exactly this file.
    pub fn reconstruct(&self) -> CliResult<AugmentedTriangulation> {
        let poly = hilbert_core::make_polygon(&to_points(&self.polygon))?;
        let sites = self.input_sites();
        let t = build(&poly, &sites, self.seed)?;
        let again = TriangulationFile::from_triangulation(&t, &sites, self.seed);
        if &again != self {
            return Err(CliError::Input(
                "stored triangulation does not match its rebuild".into(),
            ));
        }
        Ok(t)
    }
}

/// Output of the hull command: the closed cycle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HullFile {
    pub hull: Vec<HullRecord>,
}

impl HullFile {
    pub fn closed(h: &HullSequence) -> Self {
        HullFile {
            hull: h.closed().iter().map(HullRecord::from).collect(),
        }
    }
}

use std::io::Read;
use std::path::Path;

use hilbert_core::{make_polygon, ConvexPolygon, Point2};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Input scene: a convex polygon and sites strictly inside it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SceneFile {
    pub polygon: Vec<[f64; 2]>,
    pub sites: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// A validated scene.
#[derive(Clone, Debug)]
pub struct Scene {
    pub polygon: ConvexPolygon,
    pub sites: Vec<Point2>,
    pub seed: Option<u64>,
}

pub fn to_points(v: &[[f64; 2]]) -> Vec<Point2> {
    v.iter().map(|&[x, y]| Point2::new(x, y)).collect()
}

pub fn to_pairs(v: &[Point2]) -> Vec<[f64; 2]> {
    v.iter().map(|p| [p.x, p.y]).collect()
}

impl SceneFile {
    pub fn validate(&self) -> CliResult<Scene> {
        let polygon = make_polygon(&to_points(&self.polygon))?;
        let sites = to_points(&self.sites);
        for (i, s) in sites.iter().enumerate() {
            if !s.is_finite() || !polygon.contains_interior(*s) {
                return Err(CliError::Input(format!(
                    "site {i} ({}, {}) is not strictly inside the polygon",
                    s.x, s.y
                )));
            }
        }
        Ok(Scene {
            polygon,
            sites,
            seed: self.seed,
        })
    }

    pub fn parse(text: &str) -> CliResult<SceneFile> {
        Ok(serde_json::from_str(text)?)
    }
}

impl Scene {
    pub fn site(&self, i: usize) -> CliResult<Point2> {
        self.sites.get(i).copied().ok_or_else(|| {
            CliError::Argument(format!(
                "site index {i} out of range (scene has {} sites)",
                self.sites.len()
            ))
        })
    }
}

/// Reads a scene from a file, or from standard input when `path` is `-`.
pub fn read_scene(path: &Path) -> CliResult<Scene> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
    };
    SceneFile::parse(&text)?.validate()
}

/// Regular `m`-gon of circumradius 1 with `n` sites drawn uniformly from its
/// interior, keeping clear of the boundary by a small margin.
pub fn random_scene<R: Rng>(rng: &mut R, m: usize, n: usize) -> CliResult<Scene> {
    let polygon = ConvexPolygon::regular(m, Point2::new(0.0, 0.0), 1.0, 0.0)?;
    let (lo, hi) = polygon.bbox();
    let margin = 1e-6 * polygon.scale();
    let mut sites = Vec::with_capacity(n);
    while sites.len() < n {
        let p = Point2::new(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y));
        if polygon.margin(p) > margin {
            sites.push(p);
        }
    }
    Ok(Scene {
        polygon,
        sites,
        seed: None,
    })
}

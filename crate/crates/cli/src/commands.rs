use hilbert_core::bisector::{bisector_endpoints, bisector_ray_intersection};
use hilbert_core::circumcircle::{circumcircle, AbsenceReason};
use hilbert_core::{build, hilbert_ball, hilbert_distance, hilbert_hull, AugmentedTriangulation, Point2};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::files::{HullFile, TriangulationFile};
use crate::scene::Scene;
use crate::svg::{self, Svg};

pub fn distance(scene: &Scene, i: usize, j: usize) -> CliResult<String> {
    let d = hilbert_distance(&scene.polygon, scene.site(i)?, scene.site(j)?)?;
    Ok(format!("{d:.12}\n"))
}

pub fn ball(scene: &Scene, i: usize, rho: f64) -> CliResult<String> {
    if !(rho.is_finite() && rho > 0.0) {
        return Err(CliError::Argument(format!(
            "radius must be positive and finite, got {rho}"
        )));
    }
    let b = hilbert_ball(&scene.polygon, scene.site(i)?, rho)?;
    let mut svg = Svg::new(&scene.polygon);
    svg.polygon(&b.boundary, "ball", "#c7e9c0", "#006d2c");
    svg.sites(&scene.sites);
    svg.dot(b.center, "center", 5.0, "#006d2c");
    Ok(svg.finish())
}

/// Points of the bisector of sites `i` and `j`, from one boundary endpoint
/// to the other, sampled on `samples` rays from site `i`.
pub fn bisector_polyline(scene: &Scene, i: usize, j: usize, samples: usize) -> CliResult<Vec<Point2>> {
    let (p, q) = (scene.site(i)?, scene.site(j)?);
    if i == j {
        return Err(CliError::Argument("bisector needs two different sites".into()));
    }
    let poly = &scene.polygon;
    let k = samples.max(8);
    let hits: Vec<Option<Point2>> = (0..k)
        .map(|s| {
            let th = std::f64::consts::TAU * s as f64 / k as f64;
            bisector_ray_intersection(poly, p, q, Point2::new(th.cos(), th.sin()))
        })
        .collect::<Result<_, _>>()?;
    let start = (0..k)
        .find(|&s| hits[s].is_none() && hits[(s + 1) % k].is_some())
        .map_or(0, |s| s + 1);
    let mut line: Vec<Point2> = (0..k).filter_map(|s| hits[(start + s) % k]).collect();
    let (a, b) = bisector_endpoints(poly, p, q)?;
    let (mut first, mut last) = (a.point.point, b.point.point);
    if let Some(&h) = line.first() {
        if h.dist(last) < h.dist(first) {
            std::mem::swap(&mut first, &mut last);
        }
    }
    line.insert(0, first);
    line.push(last);
    Ok(line)
}

pub fn bisector(scene: &Scene, i: usize, j: usize, samples: usize) -> CliResult<String> {
    let line = bisector_polyline(scene, i, j, samples)?;
    let mut svg = Svg::new(&scene.polygon);
    svg.polyline(&line, "bisector", "#54278f");
    svg.sites(&scene.sites);
    svg.dot(line[0], "endpoint", 6.0, "#cb181d");
    svg.dot(line[line.len() - 1], "endpoint", 6.0, "#cb181d");
    Ok(svg.finish())
}

#[derive(Serialize)]
struct CircleOut {
    exists: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    center: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<&'static str>,
}

pub fn circumcircle_json(scene: &Scene, i: usize, j: usize, k: usize) -> CliResult<String> {
    let (p, q, r) = (scene.site(i)?, scene.site(j)?, scene.site(k)?);
    if i == j || j == k || i == k {
        return Err(CliError::Argument("circumcircle needs three different sites".into()));
    }
    let out = match circumcircle(&scene.polygon, p, q, r)? {
        Ok(c) => CircleOut {
            exists: true,
            center: Some([c.center.x, c.center.y]),
            radius: Some(c.radius),
            reason: None,
        },
        Err(a) => CircleOut {
            exists: false,
            center: None,
            radius: None,
            reason: Some(match a.reason {
                AbsenceReason::InOverlapRegion => "in_overlap_region",
                AbsenceReason::InOuterRegion => "in_outer_region",
                AbsenceReason::CollinearSites => "collinear_sites",
            }),
        },
    };
    Ok(serde_json::to_string_pretty(&out)? + "\n")
}

/// Builds the triangulation. With `validate`, any violated invariant is an
/// internal error.
pub fn triangulate(scene: &Scene, seed: u64, validate: bool) -> CliResult<AugmentedTriangulation> {
    let t = build(&scene.polygon, &scene.sites, seed)?;
    if validate {
        let v = t.validate();
        if !v.is_empty() {
            return Err(CliError::Internal(format!("{} violations, first: {}", v.len(), v[0])));
        }
    }
    Ok(t)
}

/// Triangulation JSON and, on request, its SVG rendering.
pub fn delaunay(scene: &Scene, seed: u64, validate: bool, want_svg: bool) -> CliResult<(String, Option<String>)> {
    let t = triangulate(scene, seed, validate)?;
    let json = TriangulationFile::from_triangulation(&t, &scene.sites, seed).to_json();
    Ok((json, want_svg.then(|| svg::triangulation(&t))))
}

pub fn hull(scene: &Scene) -> CliResult<String> {
    let h = hilbert_hull(&scene.polygon, &scene.sites)?;
    Ok(serde_json::to_string_pretty(&HullFile::closed(&h))? + "\n")
}

pub fn voronoi(scene: &Scene, seed: u64, samples: usize) -> CliResult<String> {
    let t = triangulate(scene, seed, false)?;
    let mut svg = Svg::new(&scene.polygon);
    for line in t.voronoi_edges_sampled(samples.max(1)) {
        svg.polyline(&line, "voronoi", "#08519c");
    }
    svg.sites(&scene.sites);
    Ok(svg.finish())
}

//! Slow brute-force references for testing.
//!
//! Everything here is built only from [`hilbert_distance`] and
//! [`ConvexPolygon::contains_interior`], so the faster algorithms can be
//! checked against code that shares nothing else with them.

use std::collections::BTreeSet;

use crate::metric::hilbert_distance;
use crate::point::Point2;
use crate::polygon::ConvexPolygon;

pub const DEFAULT_RAYS: usize = 360;

/// Undirected edges as `(min, max)` index pairs.
pub type EdgeSet = BTreeSet<(usize, usize)>;

/// Relative distance from the boundary inside which a circumcenter is not
/// trusted.
const CENTER_MARGIN: f64 = 1e-6;

fn d(poly: &ConvexPolygon, a: Point2, b: Point2) -> f64 {
    hilbert_distance(poly, a, b).unwrap_or(f64::INFINITY)
}

/// A point equidistant from three sites, found by walking the `(p, q)`
/// bisector. The bisector meets each ray from `p` at most once, because
/// Voronoi cells are star-shaped about their site under this metric. So it
/// is sampled on `rays` directions, after which the sign of
/// `d(p, x) - d(r, x)` is root-found over the direction angle. Returns the
/// center and radius, or `None` when no sign change exists.
///
/// Each rotation of the triple is tried in turn, since a crossing hidden
/// near the boundary from one site is usually plain from another.
pub fn brute_circumcenter(poly: &ConvexPolygon, p: Point2, q: Point2, r: Point2, rays: usize) -> Option<(Point2, f64)> {
    walk_bisector(poly, p, q, r, rays)
        .or_else(|| walk_bisector(poly, q, r, p, rays))
        .or_else(|| walk_bisector(poly, r, p, q, rays))
}

fn walk_bisector(poly: &ConvexPolygon, p: Point2, q: Point2, r: Point2, rays: usize) -> Option<(Point2, f64)> {
    let k = rays.max(8);
    let hit = |th: f64| ray_bisection(poly, p, q, Point2::new(th.cos(), th.sin()));
    let g = |x: Point2| d(poly, p, x) - d(poly, r, x);
    let step = std::f64::consts::TAU / k as f64;
    let samples: Vec<(f64, Option<Point2>)> = (0..=k).map(|i| i as f64 * step).map(|t| (t, hit(t))).collect();
    let refine = |mut a: f64, mut b: f64, ga: f64| {
        for _ in 0..80 {
            let m = 0.5 * (a + b);
            match hit(m) {
                Some(x) if (g(x) < 0.0) == (ga < 0.0) => a = m,
                Some(_) => b = m,
                None => return None,
            }
        }
        hit(0.5 * (a + b))
    };
    // Extends a hit run towards a neighbouring miss, so a crossing close to
    // where the bisector meets the boundary is not lost.
    let edge = |mut h: f64, mut m: f64| {
        for _ in 0..80 {
            let mid = 0.5 * (h + m);
            if hit(mid).is_some() {
                h = mid;
            } else {
                m = mid;
            }
        }
        (h, hit(h))
    };
    let mut walk: Vec<(f64, Point2)> = Vec::new();
    for w in samples.windows(2) {
        match (w[0].1, w[1].1) {
            (Some(x), Some(_)) => walk.push((w[0].0, x)),
            (Some(x), None) => {
                walk.push((w[0].0, x));
                if let (t, Some(y)) = edge(w[0].0, w[1].0) {
                    walk.push((t, y));
                }
            }
            (None, Some(_)) => {
                if let (t, Some(y)) = edge(w[1].0, w[0].0) {
                    walk.push((t, y));
                }
            }
            (None, None) => {}
        }
    }
    for w in walk.windows(2) {
        let (ta, xa) = w[0];
        let (tb, xb) = w[1];
        let (ga, gb) = (g(xa), g(xb));
        if ga.is_finite() && gb.is_finite() && (ga < 0.0) != (gb < 0.0) && (tb - ta) <= 1.01 * step {
            let Some(c) = refine(ta, tb, ga) else { continue };
            // Next to the boundary the residuals below are no better than
            // about 1e-8, so limit balls through all three sites pass.
            if poly.margin(c) < CENTER_MARGIN * poly.scale() {
                continue;
            }
            let rho = d(poly, c, p);
            if (d(poly, c, q) - rho).abs() <= 1e-7 && (d(poly, c, r) - rho).abs() <= 1e-7 {
                return Some((c, rho));
            }
        }
    }
    None
}

/// All triples whose brute-force circumcircle exists and contains no other
/// site, as sorted index triples.
pub fn brute_delaunay(poly: &ConvexPolygon, sites: &[Point2], rays: usize) -> BTreeSet<[usize; 3]> {
    let n = sites.len();
    let mut out = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let Some((c, rho)) = brute_circumcenter(poly, sites[i], sites[j], sites[k], rays) else {
                    continue;
                };
                let empty = (0..n)
                    .filter(|&s| s != i && s != j && s != k)
                    .all(|s| d(poly, sites[s], c) >= rho - 1e-9);
                if empty {
                    out.insert([i, j, k]);
                }
            }
        }
    }
    out
}

/// The farthest interior parameter along `p + s * dir`, found by bisection
/// on interior membership.
fn reach(poly: &ConvexPolygon, p: Point2, dir: Point2) -> f64 {
    let (lo_b, hi_b) = poly.bbox();
    let mut hi = 2.0 * lo_b.dist(hi_b);
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if poly.contains_interior(p + dir * mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Points of the `(p, q)`-bisector on `k` rays from `p`, by 1-D bisection on
/// the sign of `d(p, x) - d(q, x)`, ordered along the curve.
pub fn sample_bisector(poly: &ConvexPolygon, p: Point2, q: Point2, k: usize) -> Vec<Point2> {
    let mut hits: Vec<Option<Point2>> = Vec::with_capacity(k);
    for i in 0..k {
        let th = std::f64::consts::TAU * i as f64 / k as f64;
        let dir = Point2::new(th.cos(), th.sin());
        hits.push(ray_bisection(poly, p, q, dir));
    }
    // Start right after a miss so the hits form one contiguous run.
    let start = (0..k)
        .find(|&i| hits[i].is_none() && hits[(i + 1) % k].is_some())
        .map_or(0, |i| i + 1);
    (0..k).filter_map(|j| hits[(start + j) % k]).collect()
}

/// Bisector hit on the ray from `p` along `dir`, by sign-change bisection.
pub fn ray_bisection(poly: &ConvexPolygon, p: Point2, q: Point2, dir: Point2) -> Option<Point2> {
    let dir = dir.normalized();
    let s_max = reach(poly, p, dir);
    let f = |s: f64| {
        let x = p + dir * s;
        d(poly, p, x) - d(poly, q, x)
    };
    let at_end = f(s_max);
    if at_end.is_nan() || at_end < 0.0 {
        return None;
    }
    let (mut lo, mut hi) = (0.0, s_max);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(p + dir * (0.5 * (lo + hi)))
}

/// Minimum spanning tree and relative neighbourhood graph under the Hilbert
/// metric, as sorted `(min, max)` index pairs.
pub fn brute_mst_rng(poly: &ConvexPolygon, sites: &[Point2]) -> (EdgeSet, EdgeSet) {
    let n = sites.len();
    let dm: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| d(poly, sites[i], sites[j])).collect())
        .collect();
    let mut mst = BTreeSet::new();
    if n > 1 {
        let mut in_tree = vec![false; n];
        let mut best = vec![(f64::INFINITY, 0usize); n];
        in_tree[0] = true;
        for j in 1..n {
            best[j] = (dm[0][j], 0);
        }
        for _ in 1..n {
            let j = (0..n)
                .filter(|&j| !in_tree[j])
                .min_by(|&a, &b| best[a].0.total_cmp(&best[b].0))
                .expect("a vertex remains");
            in_tree[j] = true;
            let i = best[j].1;
            mst.insert((i.min(j), i.max(j)));
            for k in 0..n {
                if !in_tree[k] && dm[j][k] < best[k].0 {
                    best[k] = (dm[j][k], j);
                }
            }
        }
    }
    let mut rng = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            let blocked = (0..n).any(|r| r != i && r != j && dm[i][r].max(dm[j][r]) < dm[i][j]);
            if !blocked {
                rng.insert((i, j));
            }
        }
    }
    (mst, rng)
}

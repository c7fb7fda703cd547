//! The Hilbert distance, Hilbert balls, and balls centered on the boundary.
//!
//! # Distances in a fixed sector
//!
//! Let `g_e` be the signed distance to the line of edge `e` (positive
//! inside). If the chord through `s` and `x` leaves the domain through edge
//! `b` behind `s` and through edge `f` beyond `x`, the ratios of lengths in
//! the cross ratio are ratios of distances to those two lines, so
//!
//! ```text
//! d(s, x) = 1/2 ln( g_b(x) g_f(s) / (g_b(s) g_f(x)) ).
//! ```
//!
//! As long as `b` and `f` stay fixed this is a log of a ratio of affine
//! forms in `x`, which is what makes bisectors piecewise conic.
//!
//! # Balls at infinity
//!
//! For a boundary point `x` and a site `z`, let `z'` be the far end of the
//! chord from `x` through `z`. Moving a center `c` towards `x` along an
//! inward direction `u`, the difference `d(c, z) - d(c, w)` converges to
//! `psi(z) - psi(w)` with
//!
//! ```text
//! psi(z) = ln(|x - z'| / |z - z'|) + ln h(z),
//! ```
//!
//! where `h` is the distance to the supporting line at `x` when `x` is in
//! the interior of an edge, and `max(g_prev(z) / g_prev(x + u), g_next(z) /
//! g_next(x + u))` when `x` is a vertex. The limit ball through `p` is the
//! sublevel set `{psi <= psi(p)}`; see [`Support`].

use crate::error::{Error, Result};
use crate::point::{ccw_angle, Point2};
use crate::polygon::{BoundaryPoint, ConvexPolygon};
use crate::tolerance::eps_dist;

/// Hilbert distance between two interior points.
pub fn hilbert_distance(poly: &ConvexPolygon, p: Point2, q: Point2) -> Result<f64> {
    poly.check_interior(p)?;
    poly.check_interior(q)?;
    Ok(distance_unchecked(poly, p, q))
}

pub(crate) fn distance_unchecked(poly: &ConvexPolygon, p: Point2, q: Point2) -> f64 {
    let v = q - p;
    let delta = v.norm();
    if delta <= poly.eps() {
        return 0.0;
    }
    let behind = poly.exit(p, -v).point;
    let ahead = poly.exit(q, v).point;
    distance_on_chord(p, q, behind, ahead)
}

/// Distance when the chord endpoints are known: `behind` lies beyond `p`,
/// `ahead` beyond `q`.
pub fn distance_on_chord(p: Point2, q: Point2, behind: Point2, ahead: Point2) -> f64 {
    let delta = p.dist(q);
    let a = p.dist(behind);
    let b = q.dist(ahead);
    0.5 * ((delta / a).ln_1p() + (delta / b).ln_1p())
}

/// `d(s, x)` with the chord edges fixed: `back` is hit behind `s`, `fwd` beyond `x`.
pub fn sector_distance(poly: &ConvexPolygon, s: Point2, x: Point2, back: usize, fwd: usize) -> f64 {
    let lb = poly.edge_line(back);
    let lf = poly.edge_line(fwd);
    0.5 * ((lb.eval(x) * lf.eval(s)) / (lb.eval(s) * lf.eval(x))).ln()
}

/// Gradient of [`sector_distance`] with respect to `x`.
pub fn sector_distance_grad(poly: &ConvexPolygon, x: Point2, back: usize, fwd: usize) -> Point2 {
    let lb = poly.edge_line(back);
    let lf = poly.edge_line(fwd);
    (lb.normal * (1.0 / lb.eval(x)) - lf.normal * (1.0 / lf.eval(x))) * 0.5
}

/// Edges hit by the chord through `s` and `x`: (behind `s`, beyond `x`).
pub fn sector_edges(poly: &ConvexPolygon, s: Point2, x: Point2) -> (usize, usize) {
    let v = x - s;
    let back = poly.exit(s, -v);
    let fwd = poly.exit(x, v);
    (edge_before(poly, back, x - s), edge_before(poly, fwd, s - x))
}

/// For a boundary hit at a vertex, pick the incident edge the ray actually
/// crosses; `inward` points from the hit back into the domain.
fn edge_before(poly: &ConvexPolygon, b: BoundaryPoint, inward: Point2) -> usize {
    if !b.is_vertex() {
        return b.edge;
    }
    let m = poly.m();
    let prev = (b.edge + m - 1) % m;
    // The ray arrives from `-inward`; both edges contain the vertex, so
    // either line gives the same distance ratio. Prefer the one the
    // direction makes the larger angle with for conditioning.
    let a = poly.edge_line(prev).normal.dot(inward).abs();
    let c = poly.edge_line(b.edge).normal.dot(inward).abs();
    if a >= c {
        prev
    } else {
        b.edge
    }
}

/// A Hilbert ball as an explicit polygon.
#[derive(Clone, Debug)]
pub struct HilbertBall {
    pub center: Point2,
    pub radius: f64,
    /// `2m` vertices, counterclockwise; vertices `i` and `i + m` lie on the same spoke.
    pub boundary: Vec<Point2>,
}

impl HilbertBall {
    pub fn contains_interior(&self, z: Point2, tol: f64) -> bool {
        convex_ring_contains(&self.boundary, z, tol)
    }
}

/// Point at Hilbert distance `rho` from `p` towards `ahead` on the chord
/// `(behind, ahead)` through `p`.
pub fn point_at_distance(p: Point2, behind: Point2, ahead: Point2, rho: f64) -> Point2 {
    let len = behind.dist(ahead);
    let a = behind.dist(p);
    let k = (2.0 * rho).exp();
    let t = k * a * len / (len - a + k * a);
    behind + (ahead - behind) * (t / len)
}

pub fn hilbert_ball(poly: &ConvexPolygon, p: Point2, rho: f64) -> Result<HilbertBall> {
    if !poly.contains_interior(p) {
        return Err(Error::PointNotInterior(p.x, p.y));
    }
    if !rho.is_finite() || rho <= 0.0 {
        return Err(Error::NonpositiveRadius(rho));
    }
    let m = poly.m();
    let d0 = poly.vertex(0) - p;
    let mut pts: Vec<(f64, Point2)> = Vec::with_capacity(2 * m);
    for i in 0..m {
        let d = poly.vertex(i) - p;
        let ahead = poly.vertex(i);
        let behind = poly.exit(p, -d).point;
        pts.push((ccw_angle(d0, d), point_at_distance(p, behind, ahead, rho)));
        pts.push((ccw_angle(d0, -d), point_at_distance(p, ahead, behind, rho)));
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(HilbertBall {
        center: p,
        radius: rho,
        boundary: pts.into_iter().map(|(_, q)| q).collect(),
    })
}

/// The supporting-line data of a ball centered at a boundary point.
///
/// For an edge-interior anchor this is the edge line. For a vertex anchor
/// it is the pair of incident edge lines with weights; the limit ball uses
/// the larger of the two weighted distances, and the weights are fixed by
/// the direction along which centers approach the vertex.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Support {
    pub anchor: BoundaryPoint,
    /// `(edge, weight)` pairs; the second weight is zero for edge anchors.
    lines: [(usize, f64); 2],
}

impl Support {
    /// Support for centers approaching `x` along the inward direction `u`.
    pub fn from_direction(poly: &ConvexPolygon, x: BoundaryPoint, u: Point2) -> Result<Support> {
        let x = poly.canonical(x);
        let m = poly.m();
        if u.norm() == 0.0 {
            return Err(Error::ZeroDirection);
        }
        let u = u.normalized();
        if x.is_vertex() {
            let prev = (x.edge + m - 1) % m;
            let a = poly.edge_line(prev).normal.dot(u);
            let b = poly.edge_line(x.edge).normal.dot(u);
            if a <= 0.0 || b <= 0.0 {
                return Err(Error::DirectionNotInward);
            }
            Ok(Support {
                anchor: x,
                lines: [(prev, 1.0 / a), (x.edge, 1.0 / b)],
            })
        } else {
            let a = poly.edge_line(x.edge).normal.dot(u);
            if a <= 0.0 {
                return Err(Error::DirectionNotInward);
            }
            Ok(Support {
                anchor: x,
                lines: [(x.edge, 1.0), (x.edge, 0.0)],
            })
        }
    }

    /// Support at `x` with vertex weights `(1 - mu, mu)` on the previous and
    /// next edge lines. `mu` is ignored for edge anchors.
    pub fn from_approach(poly: &ConvexPolygon, x: BoundaryPoint, mu: f64) -> Support {
        let x = poly.canonical(x);
        let m = poly.m();
        if x.is_vertex() {
            let mu = mu.clamp(0.0, 1.0);
            Support {
                anchor: x,
                lines: [((x.edge + m - 1) % m, 1.0 - mu), (x.edge, mu)],
            }
        } else {
            Support {
                anchor: x,
                lines: [(x.edge, 1.0), (x.edge, 0.0)],
            }
        }
    }

    /// Default support: the edge line, or the interior angle bisector at a vertex.
    pub fn canonical(poly: &ConvexPolygon, x: BoundaryPoint) -> Support {
        Support::from_approach(poly, x, 0.5)
    }

    /// Vertex weight ratio `mu` in `[0, 1]`; `None` for edge anchors.
    pub fn approach(&self) -> Option<f64> {
        if self.anchor.is_vertex() {
            let (a, b) = (self.lines[0].1, self.lines[1].1);
            Some(b / (a + b))
        } else {
            None
        }
    }

    pub fn height(&self, poly: &ConvexPolygon, z: Point2) -> f64 {
        let (e0, w0) = self.lines[0];
        let (e1, w1) = self.lines[1];
        let h0 = w0 * poly.edge_line(e0).eval(z);
        if w1 == 0.0 {
            h0
        } else {
            h0.max(w1 * poly.edge_line(e1).eval(z))
        }
    }

    /// Unit inward direction along which the two weighted heights agree
    /// (the edge's inward normal for edge anchors).
    pub fn tangent(&self, poly: &ConvexPolygon) -> Point2 {
        let (e0, w0) = self.lines[0];
        let n0 = poly.edge_line(e0).normal;
        if !self.anchor.is_vertex() {
            return n0;
        }
        let (e1, w1) = self.lines[1];
        let n1 = poly.edge_line(e1).normal;
        let mut d = (n0 * w0 - n1 * w1).perp();
        if d.norm() == 0.0 {
            d = (n0 + n1).normalized();
        }
        if n0.dot(d) < 0.0 || n1.dot(d) < 0.0 {
            d = -d;
        }
        d.normalized()
    }

    /// Log-potential whose sublevel sets are the balls at infinity centered
    /// at the anchor. `z` must be interior and distinct from the anchor.
    pub fn potential(&self, poly: &ConvexPolygon, z: Point2) -> f64 {
        let x = self.anchor.point;
        let far = poly.exit(z, z - x).point;
        (x.dist(far) / z.dist(far)).ln() + self.height(poly, z).ln()
    }

    /// Point on the chord from the anchor towards boundary point `w` whose
    /// potential equals `level`.
    fn level_point(&self, poly: &ConvexPolygon, w: Point2, level: f64) -> Point2 {
        let x = self.anchor.point;
        let k = level.exp() / self.height(poly, w);
        let t = if k.is_infinite() { 1.0 } else { k / (1.0 + k) };
        x.lerp(w, t)
    }
}

/// A Hilbert ball centered on the boundary, passing through `through`.
#[derive(Clone, Debug)]
pub struct BallAtInfinity {
    pub anchor: BoundaryPoint,
    pub direction: Point2,
    pub through: Point2,
    pub boundary: Vec<Point2>,
    pub support: Support,
    level: f64,
}

impl BallAtInfinity {
    pub fn from_support(poly: &ConvexPolygon, support: Support, through: Point2) -> Result<BallAtInfinity> {
        poly.check_interior(through)?;
        let level = support.potential(poly, through);
        let x = support.anchor;
        let m = poly.m();
        let mut dirs: Vec<Point2> = Vec::with_capacity(m + 3);
        for i in 0..m {
            let w = poly.vertex(i);
            if x.is_vertex() {
                if i != x.edge {
                    dirs.push(w - x.point);
                }
            } else if i != x.edge && i != (x.edge + 1) % m {
                dirs.push(w - x.point);
            }
        }
        dirs.push(through - x.point);
        if x.is_vertex() {
            dirs.push(support.tangent(poly));
        }
        // Directions from the anchor span at most a half-plane; measure
        // angles from the clockwise-most boundary direction.
        let start = poly.vertex(x.edge + 1) - x.point;
        let mut pts: Vec<(f64, Point2)> = dirs
            .into_iter()
            .map(|d| {
                let w = poly.exit_from_boundary(x, d).point;
                (ccw_angle(start, d), support.level_point(poly, w, level))
            })
            .collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut boundary = Vec::with_capacity(pts.len() + 3);
        if x.is_vertex() {
            boundary.push(x.point);
            boundary.extend(pts.into_iter().map(|(_, q)| q));
        } else {
            boundary.push(poly.vertex(x.edge + 1));
            boundary.extend(pts.into_iter().map(|(_, q)| q));
            boundary.push(poly.vertex(x.edge));
            boundary.push(x.point);
        }
        Ok(BallAtInfinity {
            anchor: x,
            direction: support.tangent(poly),
            through,
            boundary,
            support,
            level,
        })
    }

    /// Strictly inside, judged by the potential (exact up to `eps_dist`).
    pub fn contains(&self, poly: &ConvexPolygon, z: Point2) -> bool {
        self.support.potential(poly, z) < self.level - eps_dist()
    }

    /// Strictly inside the explicit boundary polygon.
    pub fn polygon_contains(&self, z: Point2, tol: f64) -> bool {
        convex_ring_contains(&self.boundary, z, tol)
    }

    pub fn level(&self) -> f64 {
        self.level
    }
}

/// The limit of `B(x + delta u, d(x + delta u, p))` as `delta -> 0`.
pub fn ball_at_infinity(poly: &ConvexPolygon, x: BoundaryPoint, u: Point2, p: Point2) -> Result<BallAtInfinity> {
    if !poly.contains_interior(p) {
        return Err(Error::PointNotInterior(p.x, p.y));
    }
    let support = Support::from_direction(poly, x, u)?;
    BallAtInfinity::from_support(poly, support, p)
}

/// Result of [`min_empty_ball_at_infinity`].
#[derive(Clone, Debug)]
pub struct EmptyBall {
    pub index: usize,
    pub site: Point2,
    pub ball: BallAtInfinity,
}

/// The site whose ball at infinity centered at `x` contains no other site.
///
/// Each site is projected along its level curve onto the chord from `x`
/// through the centroid; the projection closest to `x` wins. Ties go to
/// the smaller index.
pub fn min_empty_ball_at_infinity(poly: &ConvexPolygon, x: BoundaryPoint, sites: &[Point2]) -> Result<EmptyBall> {
    if sites.is_empty() {
        return Err(Error::EmptySiteSet);
    }
    for s in sites {
        poly.check_interior(*s)?;
    }
    let support = Support::canonical(poly, x);
    pick_min_empty(poly, support, sites)
}

pub(crate) fn pick_min_empty(poly: &ConvexPolygon, support: Support, sites: &[Point2]) -> Result<EmptyBall> {
    let x = support.anchor.point;
    let c = poly.centroid();
    let reference = poly.exit(c, c - x).point;
    let mut best: Option<(usize, f64)> = None;
    for (i, s) in sites.iter().enumerate() {
        let q = support.level_point(poly, reference, support.potential(poly, *s));
        let along = q.dist(x);
        if best.is_none_or(|(_, b)| along < b) {
            best = Some((i, along));
        }
    }
    let (index, _) = best.expect("non-empty");
    Ok(EmptyBall {
        index,
        site: sites[index],
        ball: BallAtInfinity::from_support(poly, support, sites[index])?,
    })
}

/// Strict containment in a convex counterclockwise ring that may contain
/// repeated or collinear vertices.
pub fn convex_ring_contains(ring: &[Point2], z: Point2, tol: f64) -> bool {
    let n = ring.len();
    let mut edges = 0;
    for i in 0..n {
        let a = ring[i];
        let b = ring[(i + 1) % n];
        let e = b - a;
        let len = e.norm();
        if len <= tol {
            continue;
        }
        edges += 1;
        if e.cross(z - a) / len <= tol {
            return false;
        }
    }
    edges >= 3
}

/// Checks that a ring is convex and counterclockwise, allowing collinear
/// and repeated vertices (within `tol`).
pub fn ring_is_convex(ring: &[Point2], tol: f64) -> bool {
    let pts: Vec<Point2> = {
        let mut v: Vec<Point2> = Vec::with_capacity(ring.len());
        for &p in ring {
            if v.last().is_none_or(|q: &Point2| q.dist(p) > tol) {
                v.push(p);
            }
        }
        while v.len() > 1 && v[0].dist(*v.last().unwrap()) <= tol {
            v.pop();
        }
        v
    };
    let n = pts.len();
    if n < 3 {
        return false;
    }
    let mut turning = 0.0;
    for i in 0..n {
        let a = pts[i];
        let b = pts[(i + 1) % n];
        let c = pts[(i + 2) % n];
        let u = b - a;
        let v = c - b;
        if u.cross(v) / u.norm() < -tol {
            return false;
        }
        let ang = ccw_angle(u, v);
        turning += if ang > std::f64::consts::PI {
            ang - std::f64::consts::TAU
        } else {
            ang
        };
    }
    (turning - std::f64::consts::TAU).abs() < 1e-6
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    #[test]
    fn identity_is_zero() {
        let sq = ConvexPolygon::unit_square();
        assert_eq!(hilbert_distance(&sq, p(0.3, 0.7), p(0.3, 0.7)).unwrap(), 0.0);
    }

    #[test]
    fn closed_form_square_distances() {
        let sq = ConvexPolygon::unit_square();
        // cross ratio with p' = (0, .5), q' = (1, .5): (0.75/0.25)(0.75/0.25) = 9
        let d = hilbert_distance(&sq, p(0.25, 0.5), p(0.75, 0.5)).unwrap();
        assert!((d - 3f64.ln()).abs() < 1e-12);
        let d = hilbert_distance(&sq, p(0.5, 0.5), p(0.25, 0.5)).unwrap();
        assert!((d - 0.5 * 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn boundary_points_are_rejected() {
        let sq = ConvexPolygon::unit_square();
        assert!(matches!(
            hilbert_distance(&sq, p(0.5, 0.0), p(0.5, 0.5)),
            Err(Error::PointNotInterior(..))
        ));
    }

    #[test]
    fn sector_formula_matches_chord_formula() {
        let hex = ConvexPolygon::regular(6, p(0.0, 0.0), 1.0, 0.1).unwrap();
        let s = p(0.1, -0.2);
        let x = p(-0.3, 0.4);
        let (b, f) = sector_edges(&hex, s, x);
        let d1 = sector_distance(&hex, s, x, b, f);
        let d2 = hilbert_distance(&hex, s, x).unwrap();
        assert!((d1 - d2).abs() < 1e-12, "{d1} {d2}");
    }

    #[test]
    fn center_ball_of_square_has_derived_tangency_points() {
        let sq = ConvexPolygon::unit_square();
        let ball = hilbert_ball(&sq, p(0.5, 0.5), 0.5 * 3f64.ln()).unwrap();
        assert_eq!(ball.boundary.len(), 8);
        for q in [p(0.25, 0.5), p(0.75, 0.5), p(0.5, 0.25), p(0.5, 0.75)] {
            let on_edge = (0..8).any(|i| {
                let a = ball.boundary[i];
                let b = ball.boundary[(i + 1) % 8];
                let e = b - a;
                e.norm() > 1e-12 && (e.cross(q - a) / e.norm()).abs() < 1e-12 && (q - a).dot(q - b) <= 1e-12
            });
            assert!(on_edge, "{q:?} not on ball boundary");
        }
    }

    #[test]
    fn hexagon_center_ball_is_symmetric() {
        let hex = ConvexPolygon::regular(6, p(0.0, 0.0), 1.0, 0.0).unwrap();
        let ball = hilbert_ball(&hex, p(0.0, 0.0), 0.7).unwrap();
        assert_eq!(ball.boundary.len(), 12);
        let r0 = ball.boundary[0].norm();
        let r1 = ball.boundary[1].norm();
        for (i, q) in ball.boundary.iter().enumerate() {
            let r = if i % 2 == 0 { r0 } else { r1 };
            assert!((q.norm() - r).abs() < 1e-12);
        }
    }

    #[test]
    fn ball_vertices_pair_across_spokes() {
        let hex = ConvexPolygon::regular(6, p(0.0, 0.0), 1.0, 0.2).unwrap();
        let c = p(0.2, 0.1);
        let ball = hilbert_ball(&hex, c, 0.9).unwrap();
        let m = 6;
        for i in 0..m {
            let a = ball.boundary[i] - c;
            let b = ball.boundary[i + m] - c;
            assert!(a.cross(b).abs() < 1e-12 && a.dot(b) < 0.0);
        }
        assert!(ring_is_convex(&ball.boundary, 1e-9));
    }

    #[test]
    fn errors_on_bad_ball_arguments() {
        let sq = ConvexPolygon::unit_square();
        assert!(matches!(
            hilbert_ball(&sq, p(0.5, 0.5), 0.0),
            Err(Error::NonpositiveRadius(_))
        ));
        assert!(matches!(
            hilbert_ball(&sq, p(1.5, 0.5), 1.0),
            Err(Error::PointNotInterior(..))
        ));
    }

    #[test]
    fn edge_anchored_ball_is_reflection_symmetric() {
        let sq = ConvexPolygon::unit_square();
        let x = sq.boundary_point(3, 0.5); // (0, 0.5)
        let ball = ball_at_infinity(&sq, x, p(1.0, 0.0), p(0.6, 0.5)).unwrap();
        assert!(ball.boundary.iter().any(|q| q.dist(x.point) < 1e-12));
        for q in &ball.boundary {
            let mirrored = p(q.x, 1.0 - q.y);
            let found = ball.boundary.iter().any(|r| r.dist(mirrored) < 1e-9);
            assert!(found, "{q:?} has no mirror image");
        }
        assert!(ring_is_convex(&ball.boundary, 1e-9));
    }

    #[test]
    fn inward_direction_is_required() {
        let sq = ConvexPolygon::unit_square();
        let x = sq.boundary_point(0, 0.5);
        assert_eq!(
            ball_at_infinity(&sq, x, p(0.0, -1.0), p(0.5, 0.5)).unwrap_err(),
            Error::DirectionNotInward
        );
        let corner = sq.vertex_point(0);
        assert_eq!(
            ball_at_infinity(&sq, corner, p(1.0, -0.1), p(0.5, 0.5)).unwrap_err(),
            Error::DirectionNotInward
        );
    }

    #[test]
    fn singleton_wins_min_empty_ball() {
        let sq = ConvexPolygon::unit_square();
        let r = min_empty_ball_at_infinity(&sq, sq.boundary_point(0, 0.5), &[p(0.3, 0.3)]).unwrap();
        assert_eq!(r.index, 0);
        assert!(matches!(
            min_empty_ball_at_infinity(&sq, sq.boundary_point(0, 0.5), &[]),
            Err(Error::EmptySiteSet)
        ));
    }
}

//! Hilbert circumcircles of three sites.
//!
//! A circumcircle exists exactly when the endpoints of the `(p, q)`- and
//! `(p, r)`-bisectors alternate along the boundary, and it is unique when it
//! exists. Its center is found in two ways:
//!
//! * a damped Newton iteration on `(d(c,p) - d(c,q), d(c,p) - d(c,r))`,
//!   which by uniqueness is correct whenever it lands on an interior
//!   equidistant point;
//! * an angular search around `p`: rays from `p` between the two bisector
//!   endpoints meet the `(p, q)`-bisector first ("early") up to the direction
//!   of the center and the `(p, r)`-bisector first afterwards. The search
//!   first narrows the wedge over spokes of `p`, then bisects the angle, and
//!   polishes with Newton inside the final sector.

use crate::bisector::{left_endpoint, ray_hit, BisectorEndpoint};
use crate::error::{Error, Result};
use crate::metric::{distance_unchecked, sector_distance, sector_distance_grad, sector_edges};
use crate::point::{orient, Point2};
use crate::polygon::ConvexPolygon;
use crate::tolerance::{eps_dist, COLLINEAR_AREA};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Circumcircle {
    pub center: Point2,
    pub radius: f64,
    pub witnesses: [Point2; 3],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AbsenceReason {
    InOverlapRegion,
    InOuterRegion,
    CollinearSites,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CircumcircleAbsence {
    pub reason: AbsenceReason,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Region {
    AdmitsCircumcircle,
    InOverlap,
    InOuter,
}

/// Normalized signed area of a triangle: twice the area over the squared
/// longest side.
fn normalized_area(p: Point2, q: Point2, r: Point2) -> f64 {
    let l = p.dist(q).max(q.dist(r)).max(r.dist(p));
    if l == 0.0 {
        return 0.0;
    }
    orient(p, q, r) / (l * l)
}

fn check_triple(poly: &ConvexPolygon, p: Point2, q: Point2, r: Point2) -> Result<()> {
    for s in [p, q, r] {
        poly.check_interior(s)?;
    }
    let e = poly.eps();
    if p.dist(q) <= e || q.dist(r) <= e || r.dist(p) <= e {
        return Err(Error::DegenerateTriple);
    }
    Ok(())
}

pub(crate) fn is_collinear(p: Point2, q: Point2, r: Point2) -> bool {
    normalized_area(p, q, r).abs() < COLLINEAR_AREA
}

/// Whether `x` lies strictly inside the counterclockwise arc `(a, b)` of
/// endpoint keys.
fn strictly_between(a: (f64, f64), x: (f64, f64), b: (f64, f64)) -> bool {
    let lt = |u: (f64, f64), v: (f64, f64)| u.0 < v.0 || (u.0 == v.0 && u.1 < v.1);
    if lt(a, b) {
        lt(a, x) && lt(x, b)
    } else {
        lt(a, x) || lt(x, b)
    }
}

/// Whether the four endpoints `(a1, b1)` and `(a2, b2)` alternate.
pub(crate) fn alternate(
    a1: &BisectorEndpoint,
    b1: &BisectorEndpoint,
    a2: &BisectorEndpoint,
    b2: &BisectorEndpoint,
) -> bool {
    let (k1, l1) = (a1.order_key(), b1.order_key());
    strictly_between(k1, a2.order_key(), l1) != strictly_between(k1, b2.order_key(), l1)
}

pub fn circumcircle_exists(poly: &ConvexPolygon, p: Point2, q: Point2, r: Point2) -> Result<bool> {
    check_triple(poly, p, q, r)?;
    if is_collinear(p, q, r) {
        return Err(Error::DegenerateTriple);
    }
    exists_unchecked(poly, p, q, r)
}

pub(crate) fn exists_unchecked(poly: &ConvexPolygon, p: Point2, q: Point2, r: Point2) -> Result<bool> {
    let lq = left_endpoint(poly, p, q)?;
    let rq = left_endpoint(poly, q, p)?;
    let lr = left_endpoint(poly, p, r)?;
    let rr = left_endpoint(poly, r, p)?;
    Ok(alternate(&lq, &rq, &lr, &rr))
}

/// Classifies `r` against the two balls at infinity through `p` and `q`
/// anchored at the endpoints of their bisector.
pub fn region_classify(poly: &ConvexPolygon, p: Point2, q: Point2, r: Point2) -> Result<Region> {
    poly.check_interior(p)?;
    poly.check_interior(q)?;
    poly.check_interior(r)?;
    if p.dist(q) <= poly.eps() {
        return Err(Error::CoincidentSites);
    }
    let inside = |e: BisectorEndpoint| {
        let s = e.support(poly);
        if r.dist(e.point.point) <= poly.eps() {
            return false;
        }
        s.potential(poly, r) < s.potential(poly, p) - eps_dist()
    };
    let a = inside(left_endpoint(poly, p, q)?);
    let b = inside(left_endpoint(poly, q, p)?);
    Ok(match (a, b) {
        (true, true) => Region::InOverlap,
        (false, false) => Region::InOuter,
        _ => Region::AdmitsCircumcircle,
    })
}

/// Circumcircle of three sites, or the reason none exists.
pub fn circumcircle(
    poly: &ConvexPolygon,
    p: Point2,
    q: Point2,
    r: Point2,
) -> Result<std::result::Result<Circumcircle, CircumcircleAbsence>> {
    check_triple(poly, p, q, r)?;
    if is_collinear(p, q, r) {
        return Ok(Err(CircumcircleAbsence {
            reason: AbsenceReason::CollinearSites,
        }));
    }
    if let Some(c) = newton(poly, [p, q, r], (p + q + r) * (1.0 / 3.0), true) {
        return Ok(Ok(make(poly, c, [p, q, r])));
    }
    if !exists_unchecked(poly, p, q, r)? {
        return Ok(Err(absence(poly, p, q, r)?));
    }
    search(poly, p, q, r).map(Ok)
}

/// Circumcircle computed only by the angular search around `p` (no Newton
/// shortcut from the centroid); used to cross-check uniqueness.
pub fn circumcircle_by_search(
    poly: &ConvexPolygon,
    p: Point2,
    q: Point2,
    r: Point2,
) -> Result<std::result::Result<Circumcircle, CircumcircleAbsence>> {
    check_triple(poly, p, q, r)?;
    if is_collinear(p, q, r) {
        return Ok(Err(CircumcircleAbsence {
            reason: AbsenceReason::CollinearSites,
        }));
    }
    if !exists_unchecked(poly, p, q, r)? {
        return Ok(Err(absence(poly, p, q, r)?));
    }
    search(poly, p, q, r).map(Ok)
}

fn absence(poly: &ConvexPolygon, p: Point2, q: Point2, r: Point2) -> Result<CircumcircleAbsence> {
    let reason = match region_classify(poly, p, q, r)? {
        Region::InOuter => AbsenceReason::InOuterRegion,
        // Disagreement at the eps level: the overlap region is the natural
        // report since the predicate is the authoritative one.
        _ => AbsenceReason::InOverlapRegion,
    };
    Ok(CircumcircleAbsence { reason })
}

fn make(poly: &ConvexPolygon, c: Point2, w: [Point2; 3]) -> Circumcircle {
    Circumcircle {
        center: c,
        radius: distance_unchecked(poly, c, w[0]),
        witnesses: w,
    }
}

/// `d(c, s)` and its gradient, with the sector edges taken at `c`.
fn dist_and_grad(poly: &ConvexPolygon, s: Point2, c: Point2) -> (f64, Point2) {
    let (b, f) = sector_edges(poly, s, c);
    (sector_distance(poly, s, c, b, f), sector_distance_grad(poly, c, b, f))
}

fn residual(poly: &ConvexPolygon, w: &[Point2; 3], c: Point2) -> f64 {
    let d = w.map(|s| distance_unchecked(poly, s, c));
    (d[0] - d[1]).abs().max((d[0] - d[2]).abs())
}

/// Damped Newton for the equidistant point; `None` unless it converges to
/// an interior point with a negligible residual.
pub(crate) fn newton(poly: &ConvexPolygon, w: [Point2; 3], start: Point2, strict: bool) -> Option<Point2> {
    let mut c = start;
    if !poly.contains_interior(c) {
        return None;
    }
    let mut res = residual(poly, &w, c);
    for _ in 0..60 {
        if res <= 1e-14 {
            break;
        }
        let (dp, gp) = dist_and_grad(poly, w[0], c);
        let (dq, gq) = dist_and_grad(poly, w[1], c);
        let (dr, gr) = dist_and_grad(poly, w[2], c);
        let (f1, f2) = (dp - dq, dp - dr);
        let (j1, j2) = (gp - gq, gp - gr);
        let det = j1.cross(j2);
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        // Solve [j1; j2] step = -[f1; f2].
        let step = Point2::new(-(f1 * j2.y - f2 * j1.y) / det, -(j1.x * f2 - j2.x * f1) / det);
        let mut alpha = 1.0;
        let mut moved = false;
        for _ in 0..40 {
            let trial = c + step * alpha;
            if poly.margin(trial) > poly.eps() {
                let r = residual(poly, &w, trial);
                if r < res {
                    c = trial;
                    res = r;
                    moved = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if !moved {
            break;
        }
    }
    let accept = if strict { 1e-11 } else { 1e-9 };
    (res <= accept && poly.contains_interior(c)).then_some(c)
}

/// Angular search for the center around `p`, then Newton polish.
fn search(poly: &ConvexPolygon, p: Point2, q: Point2, r: Point2) -> Result<Circumcircle> {
    // Make (p, q, r) counterclockwise.
    let (q, r) = if orient(p, q, r) > 0.0 { (q, r) } else { (r, q) };
    let budget = 4 * (poly.m() as f64).log2().ceil() as usize + 16;
    let mut lo = left_endpoint(poly, q, p)?.point.point;
    let mut hi = left_endpoint(poly, p, r)?.point.point;
    let early = |d: Point2| -> Result<bool> {
        let d = d.normalized();
        let sq = ray_hit(poly, p, q, d)?.map(|h| h.0);
        let sr = ray_hit(poly, p, r, d)?.map(|h| h.0);
        Ok(match (sq, sr) {
            (Some(a), Some(b)) => a < b,
            (Some(_), None) => true,
            _ => false,
        })
    };

    // Discrete stage over spokes of p inside the wedge.
    let mut probes = 0;
    loop {
        let front = poly.vertices_between(poly.exit(p, lo - p).position(), poly.exit(p, hi - p).position());
        let back = poly.vertices_between(poly.exit(p, p - lo).position(), poly.exit(p, p - hi).position());
        if front.1 == 0 && back.1 == 0 {
            break;
        }
        probes += 1;
        if probes > budget {
            return Err(Error::SearchDidNotConverge(budget));
        }
        let d = if front.1 >= back.1 {
            poly.vertex(front.0 + front.1 / 2) - p
        } else {
            p - poly.vertex(back.0 + back.1 / 2)
        };
        let x = poly.exit(p, d).point;
        if early(d)? {
            lo = x;
        } else {
            hi = x;
        }
    }

    // Continuous stage: directions p -> lerp(lo, hi) sweep monotonically.
    let (mut a, mut b) = (0.0f64, 1.0f64);
    let mut center = None;
    for _ in 0..100 {
        let t = 0.5 * (a + b);
        if t <= a || t >= b {
            break;
        }
        let d = lo.lerp(hi, t) - p;
        if early(d)? {
            a = t;
        } else {
            b = t;
        }
        if let Some((_, c)) = ray_hit(poly, p, q, d.normalized())? {
            if residual(poly, &[p, q, r], c) <= 1e-12 {
                center = Some(c);
                break;
            }
            center = Some(c);
        }
    }
    let c = center.ok_or(Error::SearchDidNotConverge(budget))?;
    let c = newton(poly, [p, q, r], c, false).unwrap_or(c);
    if residual(poly, &[p, q, r], c) > 1e-8 {
        return Err(Error::SearchDidNotConverge(budget));
    }
    Ok(make(poly, c, [p, q, r]))
}

/// Strictly inside the circumcircle (by more than `eps_dist`).
pub fn in_circle(poly: &ConvexPolygon, circ: &Circumcircle, s: Point2) -> Result<bool> {
    poly.check_interior(s)?;
    Ok(distance_unchecked(poly, s, circ.center) < circ.radius - eps_dist())
}

//! Bisectors of two sites: membership, ray intersection, boundary endpoints
//! and the conic that carries the bisector inside one sector.
//!
//! # The sector conic
//!
//! Write `g_e` for the signed distance to the line of edge `e`. Fix the four
//! edges hit by the chords through `x` and each site: `bp` behind `p`, `fp`
//! beyond `x` on the chord from `p`, and likewise `bq`, `fq`. Then
//! `d(p, x) = 1/2 ln(g_bp(x) g_fp(p) / (g_bp(p) g_fp(x)))`, and the equation
//! `d(p, x) = d(q, x)` becomes, after exponentiating and clearing
//! denominators,
//!
//! ```text
//! g_bp(x) g_fq(x) [g_fp(p) g_bq(q)] - g_bq(x) g_fp(x) [g_bp(p) g_fq(q)] = 0,
//! ```
//!
//! a difference of two products of affine forms, hence a conic. Restricted to
//! a ray it is a quadratic in the ray parameter, which gives the final step of
//! [`bisector_ray_intersection`]; restricted to a boundary edge with the far
//! edges of both sites fixed it is linear, which gives the final step of
//! [`bisector_endpoints`].
//!
//! # Endpoints
//!
//! For a boundary point `x` on the line of edge `e`, centers `c -> x` satisfy
//! `d(c, p) - d(c, q) -> Phi(p) - Phi(q)`, with
//! `Phi(z) = ln(|x - z'| / |z - z'|) + ln g_e(z)` and `z'` the far end of the
//! chord from `x` through `z`. The left endpoint is the zero of this
//! difference on the boundary chain running counterclockwise from the end of
//! the chord beyond `q` to the end beyond `p`; the difference is positive at
//! the start of the chain and negative at its end. At a vertex the two
//! incident lines give two values; when they straddle zero the endpoint is
//! the vertex itself and the weight `mu` of the limit ball is recorded.

use crate::error::{Error, Result};
use crate::metric::{distance_on_chord, distance_unchecked, sector_edges, Support};
use crate::point::{line_intersection_param, orient, Line, Point2};
use crate::polygon::{BoundaryPoint, ConvexPolygon};
use crate::tolerance::{eps_dist, eps_geom};

/// Largest equidistance residual accepted from the closed-form root before
/// falling back to bisection.
const ROOT_ACCEPT: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BisectorEndpoint {
    pub point: BoundaryPoint,
    pub side: Side,
    /// Weight `mu` of the next edge line in the limit ball when the endpoint
    /// is a vertex; `0.5` otherwise.
    pub approach: f64,
}

impl BisectorEndpoint {
    pub fn support(&self, poly: &ConvexPolygon) -> Support {
        Support::from_approach(poly, self.point, self.approach)
    }

    /// Key for comparing endpoints in counterclockwise boundary order.
    pub fn order_key(&self) -> (f64, f64) {
        (
            self.point.position(),
            if self.point.is_vertex() { self.approach } else { 0.5 },
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SectorConic {
    /// `A, B, C, D, E, F` of `Ax^2 + Bxy + Cy^2 + Dx + Ey + F = 0`, scaled so
    /// the largest magnitude is one.
    pub coefficients: [f64; 6],
    /// Edges `[behind p, beyond x from p, behind q, beyond x from q]`.
    pub sector: [usize; 4],
}

impl SectorConic {
    pub fn eval(&self, z: Point2) -> f64 {
        let [a, b, c, d, e, f] = self.coefficients;
        a * z.x * z.x + b * z.x * z.y + c * z.y * z.y + d * z.x + e * z.y + f
    }
}

fn check_pair(poly: &ConvexPolygon, p: Point2, q: Point2) -> Result<()> {
    poly.check_interior(p)?;
    poly.check_interior(q)?;
    if p.dist(q) <= poly.eps() {
        return Err(Error::CoincidentSites);
    }
    Ok(())
}

/// Most probes a single ray or endpoint search may spend on an `m`-gon.
pub fn probe_budget(m: usize) -> usize {
    4 * (m as f64).log2().ceil() as usize + 16
}

thread_local! {
    static MAX_PROBES: std::cell::Cell<usize> = const { std::cell::Cell::new(0) };
}

fn record_probes(n: usize) {
    MAX_PROBES.with(|c| c.set(c.get().max(n)));
}

/// Largest probe count of any search on this thread since the last call,
/// which resets it.
pub fn take_max_probes() -> usize {
    MAX_PROBES.with(|c| c.replace(0))
}

/// Homogeneous line through two points, with unit normal.
fn homogeneous(a: Point2, b: Point2) -> [f64; 3] {
    let n = (b - a).perp().normalized();
    [n.x, n.y, -n.dot(a)]
}

fn det3(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
}

/// Scale-free concurrency residual of the lines `pq`, `p'q'` and `p''q''`,
/// where `p'`, `q'` are the chord ends beyond the sites and `p''`, `q''` the
/// chord ends beyond `x`. Zero exactly when `x` is equidistant.
pub fn concurrency_residual(poly: &ConvexPolygon, p: Point2, q: Point2, x: Point2) -> f64 {
    let p1 = poly.exit(p, p - x).point;
    let q1 = poly.exit(q, q - x).point;
    let p2 = poly.exit(x, x - p).point;
    let q2 = poly.exit(x, x - q).point;
    det3(homogeneous(p, q), homogeneous(p1, q1), homogeneous(p2, q2)).abs() / poly.scale()
}

/// Residual of the boundary concurrency condition at an endpoint: the
/// smallest value over supporting lines at `x` of the determinant formed
/// with `pq` and `p'q'`, where `p'`, `q'` are the far ends of the chords from
/// `x` through the sites.
pub fn endpoint_residual(poly: &ConvexPolygon, p: Point2, q: Point2, x: BoundaryPoint) -> f64 {
    let x = poly.canonical(x);
    let p1 = poly.exit(p, p - x.point).point;
    let q1 = poly.exit(q, q - x.point).point;
    let l1 = homogeneous(p, q);
    let l2 = homogeneous(p1, q1);
    // det is linear in the supporting line's normal `n` (offset -n.x).
    let f = |n: Point2| det3([n.x, n.y, -n.dot(x.point)], l1, l2);
    let m = poly.m();
    let n_next = poly.edge_line(x.edge).normal;
    let r = if x.is_vertex() {
        let n_prev = poly.edge_line((x.edge + m - 1) % m).normal;
        let (a, b) = (f(n_prev), f(n_next));
        if a * b <= 0.0 {
            0.0
        } else {
            a.abs().min(b.abs())
        }
    } else {
        f(n_next).abs()
    };
    r / poly.scale()
}

/// Whether `x` lies on the bisector of `p` and `q`.
pub fn is_on_bisector(poly: &ConvexPolygon, p: Point2, q: Point2, x: Point2) -> Result<bool> {
    check_pair(poly, p, q)?;
    poly.check_interior(x)?;
    // On the line through the sites the three lines coincide and the test
    // is vacuous; compare distances there instead.
    if orient(p, q, x).abs() <= poly.eps() * p.dist(q) {
        return Ok((distance_unchecked(poly, p, x) - distance_unchecked(poly, q, x)).abs() <= eps_dist());
    }
    Ok(concurrency_residual(poly, p, q, x) <= eps_geom())
}

fn conic_from(l1: &Line, l2: &Line, l3: &Line, l4: &Line, k1: f64, k2: f64) -> [f64; 6] {
    let prod = |a: &Line, b: &Line, k: f64| {
        let (n1, c1, n2, c2) = (a.normal, -a.offset, b.normal, -b.offset);
        [
            k * n1.x * n2.x,
            k * (n1.x * n2.y + n1.y * n2.x),
            k * n1.y * n2.y,
            k * (n1.x * c2 + n2.x * c1),
            k * (n1.y * c2 + n2.y * c1),
            k * c1 * c2,
        ]
    };
    let a = prod(l1, l2, k1);
    let b = prod(l3, l4, k2);
    let mut c = [0.0; 6];
    for i in 0..6 {
        c[i] = a[i] - b[i];
    }
    let s = c.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if s > 0.0 {
        for v in &mut c {
            *v /= s;
        }
    }
    c
}

/// The conic carrying the bisector of `p` and `q` in the sector of `x`.
pub fn conic_in_sector(poly: &ConvexPolygon, p: Point2, q: Point2, x: Point2) -> Result<SectorConic> {
    check_pair(poly, p, q)?;
    poly.check_interior(x)?;
    let (bp, fp) = sector_edges(poly, p, x);
    let (bq, fq) = sector_edges(poly, q, x);
    let (lbp, lfp, lbq, lfq) = (
        poly.edge_line(bp),
        poly.edge_line(fp),
        poly.edge_line(bq),
        poly.edge_line(fq),
    );
    let k1 = lfp.eval(p) * lbq.eval(q);
    let k2 = lbp.eval(p) * lfq.eval(q);
    Ok(SectorConic {
        coefficients: conic_from(lbp, lfq, lbq, lfp, k1, k2),
        sector: [bp, fp, bq, fq],
    })
}

/// Real roots of `a s^2 + b s + c`, computed stably.
fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale == 0.0 {
        return vec![];
    }
    let (a, b, c) = (a / scale, b / scale, c / scale);
    if a.abs() < 1e-14 {
        if b.abs() < 1e-300 {
            return vec![];
        }
        return vec![-c / b];
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        if disc > -1e-14 {
            return vec![-b / (2.0 * a)];
        }
        return vec![];
    }
    let sq = disc.sqrt();
    let qv = -0.5 * (b + b.signum() * sq);
    if qv == 0.0 {
        return vec![0.0];
    }
    vec![qv / a, c / qv]
}

/// Where the ray from `p` in direction `dir` meets the bisector of `p` and
/// `q`, if it does before leaving the domain.
pub fn bisector_ray_intersection(poly: &ConvexPolygon, p: Point2, q: Point2, dir: Point2) -> Result<Option<Point2>> {
    check_pair(poly, p, q)?;
    if dir.norm() == 0.0 || !dir.is_finite() {
        return Err(Error::ZeroDirection);
    }
    ray_hit(poly, p, q, dir.normalized()).map(|r| r.map(|(_, x)| x))
}

/// Ray-bisector hit as `(parameter, point)`; `dir` is a unit vector.
pub(crate) fn ray_hit(poly: &ConvexPolygon, p: Point2, q: Point2, dir: Point2) -> Result<Option<(f64, Point2)>> {
    let end = poly.exit(p, dir).point;
    let s_max = p.dist(end);
    let behind = poly.exit(p, -dir).point;
    let at = |s: f64| p + dir * s;
    // Sign of d(p, x) - d(q, x) along the ray; negative near p.
    let f = |s: f64| {
        let x = at(s);
        distance_on_chord(p, x, behind, end) - distance_unchecked(poly, q, x)
    };

    let side = dir.cross(q - p);
    if side.abs() <= poly.eps() {
        if dir.dot(q - p) <= 0.0 {
            return Ok(None);
        }
        // q is on the ray: the midpoint in the metric sense between p and q.
        let s = bisect(&f, 0.0, p.dist(q));
        return Ok(Some((s, at(s))));
    }

    let budget = probe_budget(poly.m());
    let mut probes = 0;
    let (mut lo, mut hi) = (0.0, s_max);
    let mut hi_is_end = true;
    let ccw = orient(q, p, end) > 0.0;
    loop {
        let (xl, xh) = (at(lo), at(hi));
        let arc = |from: Point2, to: Point2| {
            let (a, b) = (poly.exit(q, from).position(), poly.exit(q, to).position());
            if ccw {
                poly.vertices_between(a, b)
            } else {
                poly.vertices_between(b, a)
            }
        };
        let fwd = arc(xl - q, xh - q);
        let back = arc(q - xl, q - xh);
        if fwd.1 == 0 && back.1 == 0 {
            break;
        }
        probes += 1;
        record_probes(probes);
        if probes > budget {
            return Err(Error::SearchDidNotConverge(budget));
        }
        let pick = if fwd.1 > back.1 || (fwd.1 == back.1 && fwd.0 <= back.0) {
            fwd
        } else {
            back
        };
        let w = poly.vertex(pick.0 + pick.1 / 2);
        let s = match line_intersection_param(p, dir, q, w - q) {
            Some(s) if s > lo && s < hi => s,
            // Numerically on an arc end: the arcs are about to be empty.
            _ => break,
        };
        if f(s) < 0.0 {
            lo = s;
        } else {
            hi = s;
            hi_is_end = false;
        }
    }

    // Fixed sectors on (lo, hi): solve the quadratic.
    let mid = at(0.5 * (lo + hi));
    let bp = poly.exit(p, -dir).edge;
    let fp = poly.exit(p, dir).edge;
    let (bq, fq) = sector_edges(poly, q, mid);
    let lines = [
        poly.edge_line(bp),
        poly.edge_line(fq),
        poly.edge_line(bq),
        poly.edge_line(fp),
    ];
    let k1 = lines[3].eval(p) * lines[2].eval(q);
    let k2 = lines[0].eval(p) * lines[1].eval(q);
    let affine = |l: &Line| (l.eval(p), l.normal.dot(dir));
    let (a1, b1) = affine(lines[0]);
    let (a2, b2) = affine(lines[1]);
    let (a3, b3) = affine(lines[2]);
    let (a4, b4) = affine(lines[3]);
    let qa = k1 * b1 * b2 - k2 * b3 * b4;
    let qb = k1 * (a1 * b2 + a2 * b1) - k2 * (a3 * b4 + a4 * b3);
    let qc = k1 * a1 * a2 - k2 * a3 * a4;
    let tol = 1e-9 * (hi - lo).max(poly.eps());
    let mut best: Option<(f64, f64)> = None;
    for r in quadratic_roots(qa, qb, qc) {
        if r >= lo - tol && r <= hi + tol {
            let r = r.clamp(lo, hi);
            if !poly.contains_interior(at(r)) {
                continue;
            }
            let res = f(r).abs();
            if best.is_none_or(|(_, b)| res < b) {
                best = Some((r, res));
            }
        }
    }
    match best {
        Some((r, res)) if res <= ROOT_ACCEPT => Ok(Some((r, at(r)))),
        _ if hi_is_end => {
            // The exit sector may still contain a crossing the quadratic
            // missed numerically; check the sign just before the boundary.
            let s_probe = hi - 1e-9 * (hi - lo).max(poly.eps());
            if s_probe > lo && poly.contains_interior(at(s_probe)) && f(s_probe) >= 0.0 {
                let s = bisect(&f, lo, s_probe);
                Ok(Some((s, at(s))))
            } else {
                Ok(None)
            }
        }
        _ => {
            let s = bisect(&f, lo, hi);
            Ok(Some((s, at(s))))
        }
    }
}

fn bisect(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
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
    0.5 * (lo + hi)
}

struct EndpointSearch<'a> {
    poly: &'a ConvexPolygon,
    p: Point2,
    q: Point2,
}

impl EndpointSearch<'_> {
    /// `ln R_z` for site `z` seen from boundary point `x`.
    fn ratio(&self, z: Point2, x: Point2) -> f64 {
        let far = self.poly.exit(z, z - x).point;
        (x.dist(far) / z.dist(far)).ln()
    }

    fn delta(&self, x: Point2, line: usize) -> f64 {
        let l = self.poly.edge_line(line);
        self.ratio(self.p, x) + l.eval(self.p).ln() - self.ratio(self.q, x) - l.eval(self.q).ln()
    }

    fn left(&self) -> Result<BisectorEndpoint> {
        let (poly, p, q) = (self.poly, self.p, self.q);
        let m = poly.m();
        let start = poly.exit(q, q - p).position();
        let stop = poly.exit(p, p - q).position();
        let (first, count) = poly.vertices_between(start, stop);
        let budget = probe_budget(m);
        let mut probes = 0;

        // Stage one: the segment of the chain (or vertex) holding the zero.
        let (mut lo, mut hi) = (0usize, count);
        while lo < hi {
            probes += 1;
            record_probes(probes);
            if probes > budget {
                return Err(Error::SearchDidNotConverge(budget));
            }
            let mid = (lo + hi) / 2;
            let k = (first + mid) % m;
            let v = poly.vertex(k);
            let before = self.delta(v, (k + m - 1) % m);
            let after = self.delta(v, k);
            if before > 0.0 && after < 0.0 {
                return Ok(self.at_vertex(k));
            }
            if after >= 0.0 {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        let seg_start = if lo == 0 { start } else { ((first + lo - 1) % m) as f64 };
        let seg_end = if lo == count { stop } else { ((first + lo) % m) as f64 };
        let edge = if lo == 0 {
            (start.floor() as usize) % m
        } else {
            (first + lo - 1) % m
        };

        // Stage two: within the edge, fix the far edges of both sites.
        let mut a = self.local(edge, seg_start);
        let mut b = self.local(edge, seg_end);
        loop {
            let (xa, xb) = (poly.boundary_point(edge, a).point, poly.boundary_point(edge, b).point);
            let arc_p = poly.vertices_between(poly.exit(p, p - xa).position(), poly.exit(p, p - xb).position());
            let arc_q = poly.vertices_between(poly.exit(q, q - xa).position(), poly.exit(q, q - xb).position());
            if arc_p.1 == 0 && arc_q.1 == 0 {
                break;
            }
            probes += 1;
            record_probes(probes);
            if probes > budget {
                return Err(Error::SearchDidNotConverge(budget));
            }
            let (site, arc) = if arc_p.1 > arc_q.1 || (arc_p.1 == arc_q.1 && arc_p.0 <= arc_q.0) {
                (p, arc_p)
            } else {
                (q, arc_q)
            };
            let w = poly.vertex(arc.0 + arc.1 / 2);
            let hit = poly.hit_edge(site, site - w, edge);
            let t = hit.t.clamp(a, b);
            if hit.edge != edge || t <= a || t >= b {
                break;
            }
            if self.delta(hit.point, edge) > 0.0 {
                a = t;
            } else {
                b = t;
            }
        }

        // Linear solve with all lines fixed.
        let xm = poly.boundary_point(edge, 0.5 * (a + b)).point;
        let bp = poly.exit(p, p - xm).edge;
        let bq = poly.exit(q, q - xm).edge;
        let (lp, lq, le) = (poly.edge_line(bp), poly.edge_line(bq), poly.edge_line(edge));
        // R_z = g_bz(x) / g_bz(z); zero of ln g_bp(x) + cp - ln g_bq(x) - cq.
        let c = (le.eval(p) / lp.eval(p)) / (le.eval(q) / lq.eval(q));
        let va = poly.vertex(edge);
        let dv = poly.vertex(edge + 1) - va;
        // c * g_bp(va + t dv) = g_bq(va + t dv)
        let (ap, bpv) = (lp.eval(va), lp.normal.dot(dv));
        let (aq, bqv) = (lq.eval(va), lq.normal.dot(dv));
        let denom = c * bpv - bqv;
        let mut t = if denom.abs() > 0.0 {
            (aq - c * ap) / denom
        } else {
            f64::NAN
        };
        if !(t >= a - 1e-9 && t <= b + 1e-9) {
            t = self.bisect_edge(edge, a, b);
        }
        let t = t.clamp(a, b);
        let point = poly.boundary_point(edge, t);
        if point.is_vertex() {
            return Ok(self.at_vertex(point.edge));
        }
        Ok(BisectorEndpoint {
            point,
            side: Side::Left,
            approach: 0.5,
        })
    }

    /// Parameter on `edge` of the boundary position `pos`.
    fn local(&self, edge: usize, pos: f64) -> f64 {
        let m = self.poly.m() as f64;
        (pos - edge as f64).rem_euclid(m).min(1.0)
    }

    fn bisect_edge(&self, edge: usize, mut a: f64, mut b: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            let x = self.poly.boundary_point(edge, mid).point;
            if self.delta(x, edge) > 0.0 {
                a = mid;
            } else {
                b = mid;
            }
        }
        0.5 * (a + b)
    }

    fn at_vertex(&self, k: usize) -> BisectorEndpoint {
        let poly = self.poly;
        let m = poly.m();
        let v = poly.vertex(k);
        let (l1, l2) = (poly.edge_line((k + m - 1) % m), poly.edge_line(k));
        let rp = self.ratio(self.p, v).exp();
        let rq = self.ratio(self.q, v).exp();
        let a1 = rp * l1.eval(self.p);
        let b2 = rq * l2.eval(self.q);
        let lambda = a1 / b2;
        BisectorEndpoint {
            point: poly.vertex_point(k),
            side: Side::Left,
            approach: lambda / (1.0 + lambda),
        }
    }
}

/// The two boundary endpoints of the bisector of `p` and `q`, labelled by
/// the side of the directed line `p -> q` they lie on.
pub fn bisector_endpoints(poly: &ConvexPolygon, p: Point2, q: Point2) -> Result<(BisectorEndpoint, BisectorEndpoint)> {
    check_pair(poly, p, q)?;
    let left = left_endpoint(poly, p, q)?;
    let mut right = left_endpoint(poly, q, p)?;
    right.side = Side::Right;
    Ok((left, right))
}

/// The endpoint of the bisector of `p` and `q` left of `p -> q`.
pub(crate) fn left_endpoint(poly: &ConvexPolygon, p: Point2, q: Point2) -> Result<BisectorEndpoint> {
    EndpointSearch { poly, p, q }.left()
}

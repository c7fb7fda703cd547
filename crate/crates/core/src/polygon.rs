//! The convex domain and its boundary-indexed primitives.
//!
//! Boundary points are addressed by `(edge, t)` where edge `i` runs from
//! vertex `i` to vertex `i + 1 (mod m)`. The scalar `edge + t` is the
//! boundary *position*; positions increase counterclockwise and wrap at `m`.
//! A point within tolerance of a vertex is always stored in canonical form
//! `(vertex_index, 0.0)`.

use crate::error::{Error, Result};
use crate::point::{ccw_angle, Line, Point2};
use crate::tolerance::{eps_geom, BOUNDARY_GUARD};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryPoint {
    pub point: Point2,
    pub edge: usize,
    pub t: f64,
}

impl BoundaryPoint {
    pub fn position(&self) -> f64 {
        self.edge as f64 + self.t
    }

    pub fn is_vertex(&self) -> bool {
        self.t == 0.0
    }
}

/// A chord of the domain: `a` and `b` are the two boundary endpoints.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Chord {
    pub a: BoundaryPoint,
    pub b: BoundaryPoint,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupportingLine {
    pub anchor: BoundaryPoint,
    pub direction: Point2,
}

/// A strictly convex polygon with counterclockwise vertices.
#[derive(Clone, Debug)]
pub struct ConvexPolygon {
    vertices: Vec<Point2>,
    /// Edge lines with the interior on the positive side.
    lines: Vec<Line>,
    scale: f64,
}

/// Alias matching the operation name used throughout the docs.
pub fn make_polygon(points: &[Point2]) -> Result<ConvexPolygon> {
    ConvexPolygon::new(points)
}

impl ConvexPolygon {
    /// Validates `points` and orients them counterclockwise.
    pub fn new(points: &[Point2]) -> Result<ConvexPolygon> {
        let m = points.len();
        if m < 3 {
            return Err(Error::FewerThanThreeVertices(m));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite);
        }
        let mut pts = points.to_vec();
        let area2: f64 = (0..m).map(|i| pts[i].cross(pts[(i + 1) % m])).sum();
        if area2 < 0.0 {
            pts.reverse();
        }
        let (lo, hi) = bbox(&pts);
        let scale = (hi - lo).norm();
        if scale == 0.0 {
            return Err(Error::DuplicateVertex(1));
        }

        let mut sorted: Vec<(f64, f64, usize)> = pts.iter().enumerate().map(|(i, p)| (p.x, p.y, i)).collect();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for w in sorted.windows(2) {
            if Point2::new(w[0].0, w[0].1).dist(Point2::new(w[1].0, w[1].1)) <= eps_geom() * scale {
                return Err(Error::DuplicateVertex(w[0].2.max(w[1].2)));
            }
        }

        let mut turning = 0.0;
        for i in 0..m {
            let a = pts[(i + m - 1) % m];
            let b = pts[i];
            let c = pts[(i + 1) % m];
            let u = b - a;
            let v = c - b;
            let sin = u.cross(v) / (u.norm() * v.norm());
            if sin <= eps_geom() {
                return Err(Error::NotStrictlyConvex(i));
            }
            turning += ccw_angle(u, v);
        }
        if (turning - std::f64::consts::TAU).abs() > 1e-6 {
            return Err(Error::NotStrictlyConvex(0));
        }

        let lines = (0..m).map(|i| Line::through(pts[i], pts[(i + 1) % m])).collect();
        Ok(ConvexPolygon {
            vertices: pts,
            lines,
            scale,
        })
    }

    /// Regular polygon with `m` vertices on the circle of the given radius;
    /// vertex 0 sits at angle `phase`.
    pub fn regular(m: usize, center: Point2, radius: f64, phase: f64) -> Result<ConvexPolygon> {
        let pts: Vec<Point2> = (0..m)
            .map(|i| {
                let a = phase + std::f64::consts::TAU * i as f64 / m as f64;
                center + Point2::new(a.cos(), a.sin()) * radius
            })
            .collect();
        ConvexPolygon::new(&pts)
    }

    pub fn unit_square() -> ConvexPolygon {
        ConvexPolygon::new(&[
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ])
        .expect("unit square is valid")
    }

    pub fn m(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> Point2 {
        self.vertices[i % self.m()]
    }

    /// Supporting line of edge `i`, interior on the positive side.
    pub fn edge_line(&self, i: usize) -> &Line {
        &self.lines[i % self.m()]
    }

    /// Diagonal length of the bounding box; all absolute tolerances scale with it.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Absolute geometric tolerance for this domain.
    pub fn eps(&self) -> f64 {
        eps_geom() * self.scale
    }

    pub fn bbox(&self) -> (Point2, Point2) {
        bbox(&self.vertices)
    }

    pub fn centroid(&self) -> Point2 {
        let m = self.m();
        let (mut a, mut cx, mut cy) = (0.0, 0.0, 0.0);
        for i in 0..m {
            let p = self.vertices[i];
            let q = self.vertices[(i + 1) % m];
            let c = p.cross(q);
            a += c;
            cx += (p.x + q.x) * c;
            cy += (p.y + q.y) * c;
        }
        Point2::new(cx / (3.0 * a), cy / (3.0 * a))
    }

    /// Smallest signed distance from `p` to an edge line; positive inside.
    pub fn margin(&self, p: Point2) -> f64 {
        self.lines.iter().map(|l| l.eval(p)).fold(f64::INFINITY, f64::min)
    }

    /// Strict interior test with tolerance `eps_geom`.
    pub fn contains_interior(&self, p: Point2) -> bool {
        p.is_finite() && self.margin(p) > self.eps()
    }

    /// Looser interior test used by distance computations.
    pub(crate) fn check_interior(&self, p: Point2) -> Result<()> {
        if p.is_finite() && self.margin(p) > BOUNDARY_GUARD * self.scale {
            Ok(())
        } else {
            Err(Error::PointNotInterior(p.x, p.y))
        }
    }

    pub fn point_at(&self, position: f64) -> Point2 {
        let m = self.m() as f64;
        let pos = position.rem_euclid(m);
        let e = (pos.floor() as usize).min(self.m() - 1);
        self.vertex(e).lerp(self.vertex(e + 1), pos - e as f64)
    }

    /// Canonical boundary point for `t` along edge `edge`.
    pub fn boundary_point(&self, edge: usize, t: f64) -> BoundaryPoint {
        let m = self.m();
        let edge = edge % m;
        let a = self.vertex(edge);
        let b = self.vertex(edge + 1);
        let len = a.dist(b);
        let t = t.clamp(0.0, 1.0);
        if t * len <= self.eps() {
            BoundaryPoint { point: a, edge, t: 0.0 }
        } else if (1.0 - t) * len <= self.eps() {
            BoundaryPoint {
                point: b,
                edge: (edge + 1) % m,
                t: 0.0,
            }
        } else {
            BoundaryPoint {
                point: a.lerp(b, t),
                edge,
                t,
            }
        }
    }

    pub fn vertex_point(&self, i: usize) -> BoundaryPoint {
        let i = i % self.m();
        BoundaryPoint {
            point: self.vertices[i],
            edge: i,
            t: 0.0,
        }
    }

    pub fn canonical(&self, x: BoundaryPoint) -> BoundaryPoint {
        self.boundary_point(x.edge, x.t)
    }

    /// Boundary point where the ray `p + s*dir` (s > 0) leaves the domain.
    /// Binary search over the angular order of the vertices seen from `p`.
    pub fn exit(&self, p: Point2, dir: Point2) -> BoundaryPoint {
        let m = self.m();
        let w0 = self.vertices[0] - p;
        let target = ccw_angle(w0, dir);
        // largest i with angle(w_i) <= target; angle(w_0) = 0.
        let (mut lo, mut hi) = (0usize, m);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if ccw_angle(w0, self.vertices[mid] - p) <= target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        self.hit_edge(p, dir, lo)
    }

    /// Like [`exit`](Self::exit), for a ray starting at a boundary point and
    /// pointing into the domain. The far vertices are ordered by angle from
    /// the first one past `x`.
    pub fn exit_from_boundary(&self, x: BoundaryPoint, dir: Point2) -> BoundaryPoint {
        let m = self.m();
        let x = self.canonical(x);
        let first = x.edge + 1;
        let count = if x.is_vertex() { m - 1 } else { m };
        let w0 = self.vertex(first) - x.point;
        let target = ccw_angle(w0, dir);
        let (mut lo, mut hi) = (0usize, count);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if ccw_angle(w0, self.vertex(first + mid) - x.point) <= target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        self.hit_edge(x.point, dir, (first + lo) % m)
    }

    /// Intersects the ray with edge `i` and canonicalizes.
    pub(crate) fn hit_edge(&self, p: Point2, dir: Point2, i: usize) -> BoundaryPoint {
        let a = self.vertex(i);
        let e = self.vertex(i + 1) - a;
        let den = e.cross(dir);
        let t = if den == 0.0 { 0.0 } else { (p - a).cross(dir) / den };
        self.boundary_point(i, t)
    }

    /// The chord through `p` with direction `dir`; `b` lies ahead of `p`.
    pub fn chord_through(&self, p: Point2, dir: Point2) -> Result<Chord> {
        if dir.norm() == 0.0 || !dir.is_finite() {
            return Err(Error::ZeroDirection);
        }
        if !self.contains_interior(p) {
            return Err(Error::PointNotInterior(p.x, p.y));
        }
        Ok(Chord {
            a: self.exit(p, -dir),
            b: self.exit(p, dir),
        })
    }

    /// The `m` chords through `p` and each vertex; chord `i` has `b` equal
    /// to vertex `i`.
    pub fn spokes(&self, p: Point2) -> Result<Vec<Chord>> {
        if !self.contains_interior(p) {
            return Err(Error::PointNotInterior(p.x, p.y));
        }
        Ok((0..self.m())
            .map(|i| Chord {
                a: self.exit(p, p - self.vertices[i]),
                b: self.vertex_point(i),
            })
            .collect())
    }

    /// One supporting line for an edge-interior point, two for a vertex.
    pub fn supporting_lines_at(&self, x: BoundaryPoint) -> Vec<SupportingLine> {
        let x = self.canonical(x);
        let m = self.m();
        let along = |e: usize| (self.vertex(e + 1) - self.vertex(e)).normalized();
        if x.is_vertex() {
            vec![
                SupportingLine {
                    anchor: x,
                    direction: along((x.edge + m - 1) % m),
                },
                SupportingLine {
                    anchor: x,
                    direction: along(x.edge),
                },
            ]
        } else {
            vec![SupportingLine {
                anchor: x,
                direction: along(x.edge),
            }]
        }
    }

    /// Counterclockwise boundary distance (in position units) from `from` to `to`, in `[0, m)`.
    pub fn ccw_offset(&self, from: f64, to: f64) -> f64 {
        (to - from).rem_euclid(self.m() as f64)
    }

    /// Vertices strictly inside the counterclockwise arc `(from, to)`:
    /// returns the first index and the count. The arc is empty when `from == to`.
    pub fn vertices_between(&self, from: f64, to: f64) -> (usize, usize) {
        let m = self.m();
        let mf = m as f64;
        let from = from.rem_euclid(mf);
        let mut to = to.rem_euclid(mf);
        if to < from {
            to += mf;
        }
        let first = from.floor() as i64 + 1;
        let last = to.ceil() as i64 - 1;
        let count = (last - first + 1).max(0) as usize;
        (first.rem_euclid(m as i64) as usize, count.min(m))
    }
}

fn bbox(pts: &[Point2]) -> (Point2, Point2) {
    let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in pts {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    (lo, hi)
}

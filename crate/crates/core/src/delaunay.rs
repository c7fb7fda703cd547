//! The augmented Hilbert Delaunay triangulation.
//!
//! Faces are standard triangles (three sites), teeth (two sites and a
//! boundary vertex at the endpoint of their bisector) and gaps (one site and
//! a boundary chain). Each face has three half-edges, `3f + i` running from
//! vertex `i` to vertex `i + 1`. A tooth `(a, b, x)` lies left of `a -> b`
//! and outside the hull; its edge `b -> x` is shared with the gap of `b`
//! before it and `x -> a` with the gap of `a` after it, so the boundary ring
//! reads
//!
//! ```text
//! ... T_i = (a_i, b_i, x_i), G_i = (a_i, x_i, x_(i+1)), T_(i+1) = (a_(i+1), a_i, x_(i+1)) ...
//! ```
//!
//! counterclockwise. Boundary vertices are owned by exactly one tooth.
//!
//! Sites are inserted in random order. Uninserted sites are bucketed by the
//! face containing them, and buckets of faces destroyed during an insertion
//! are redistributed among the faces created by it.

use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bisector::{bisector_ray_intersection, endpoint_residual, left_endpoint, BisectorEndpoint};
use crate::circumcircle::{circumcircle, Circumcircle};
use crate::error::{Error, Result};
use crate::metric::{distance_unchecked, Support};
use crate::point::{ccw_angle, orient, Point2};
use crate::polygon::{BoundaryPoint, ConvexPolygon};
use crate::tolerance::eps_dist;

/// Flips allowed per insertion before the structure is declared inconsistent.
const FLIP_CAP: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexRef {
    Site(usize),
    Boundary(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FaceKind {
    Standard,
    Tooth,
    Gap,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Face {
    pub kind: FaceKind,
    pub vertices: [VertexRef; 3],
    pub circ: Option<Circumcircle>,
}

/// A boundary vertex: a bisector endpoint together with the weight of its
/// limit ball when it sits on a polygon vertex.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryVertex {
    pub point: BoundaryPoint,
    pub approach: f64,
}

impl BoundaryVertex {
    fn support(&self, poly: &ConvexPolygon) -> Support {
        Support::from_approach(poly, self.point, self.approach)
    }
}

#[derive(Clone, Debug)]
pub struct AugmentedTriangulation {
    poly: ConvexPolygon,
    sites: Vec<Point2>,
    order: Vec<usize>,
    inserted: Vec<bool>,
    boundary: Vec<BoundaryVertex>,
    faces: Vec<Face>,
    alive: Vec<bool>,
    twin: Vec<Option<usize>>,
    bucket: Vec<Vec<usize>>,
    home: Vec<usize>,
    killed: Vec<usize>,
    created: Vec<usize>,
    flips: usize,
}

fn he(f: usize, i: usize) -> usize {
    3 * f + i
}

fn face_of(h: usize) -> usize {
    h / 3
}

/// Deterministic offset of magnitude `1e-10 * scale` for site `i`.
fn perturbation(i: usize, scale: f64) -> Point2 {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e37_79b9_7f4a_7c15 ^ i as u64);
    let th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    Point2::new(th.cos(), th.sin()) * (1e-10 * scale)
}

fn check_sites(poly: &ConvexPolygon, sites: &[Point2]) -> Result<()> {
    if sites.len() < 2 {
        return Err(Error::TooFewSites {
            needed: 2,
            got: sites.len(),
        });
    }
    for s in sites {
        if !s.is_finite() {
            return Err(Error::NonFinite);
        }
        if !poly.contains_interior(*s) {
            return Err(Error::PointNotInterior(s.x, s.y));
        }
    }
    let mut idx: Vec<usize> = (0..sites.len()).collect();
    idx.sort_by(|&i, &j| sites[i].x.total_cmp(&sites[j].x));
    let e = poly.eps();
    for k in 0..idx.len() {
        for l in k + 1..idx.len() {
            let (i, j) = (idx[k], idx[l]);
            if sites[j].x - sites[i].x > e {
                break;
            }
            if sites[i].dist(sites[j]) <= e {
                return Err(Error::DuplicateSites(i.min(j), i.max(j)));
            }
        }
    }
    Ok(())
}

/// Builds the triangulation, inserting sites in an order shuffled by `seed`.
pub fn build(poly: &ConvexPolygon, sites: &[Point2], seed: u64) -> Result<AugmentedTriangulation> {
    check_sites(poly, sites)?;
    let mut order: Vec<usize> = (0..sites.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut pts = sites.to_vec();
    let mut perturbed = vec![false; sites.len()];
    loop {
        match AugmentedTriangulation::construct(poly, &pts, &order) {
            Ok(t) => return Ok(t),
            Err((Error::GeneralPositionViolation(..), Some(i))) if !perturbed[i] => {
                perturbed[i] = true;
                pts[i] = pts[i] + perturbation(i, poly.scale());
            }
            Err((e, _)) => return Err(e),
        }
    }
}

impl AugmentedTriangulation {
    fn empty(poly: &ConvexPolygon, sites: &[Point2], order: &[usize]) -> Self {
        AugmentedTriangulation {
            poly: poly.clone(),
            sites: sites.to_vec(),
            order: order.to_vec(),
            inserted: vec![false; sites.len()],
            boundary: Vec::new(),
            faces: Vec::new(),
            alive: Vec::new(),
            twin: Vec::new(),
            bucket: Vec::new(),
            home: vec![usize::MAX; sites.len()],
            killed: Vec::new(),
            created: Vec::new(),
            flips: 0,
        }
    }

    /// Builds with a fixed insertion order. On failure also reports the
    /// site being inserted.
    fn construct(
        poly: &ConvexPolygon,
        sites: &[Point2],
        order: &[usize],
    ) -> std::result::Result<Self, (Error, Option<usize>)> {
        let mut t = Self::empty(poly, sites, order);
        let (a, b) = (order[0], order[1]);
        t.init(a, b).map_err(|e| (e, Some(b)))?;
        for &s in &order[2..] {
            t.insert_site(s).map_err(|e| (e, Some(s)))?;
        }
        t.bucket = Vec::new();
        Ok(t)
    }

    fn init(&mut self, a: usize, b: usize) -> Result<()> {
        self.inserted[a] = true;
        self.inserted[b] = true;
        let x = self.endpoint(a, b)?;
        let y = self.endpoint(b, a)?;
        use VertexRef::{Boundary as B, Site as S};
        let t1 = self.new_face(FaceKind::Tooth, [S(a), S(b), B(x)], None);
        let t2 = self.new_face(FaceKind::Tooth, [S(b), S(a), B(y)], None);
        let ga = self.new_face(FaceKind::Gap, [S(a), B(x), B(y)], None);
        let gb = self.new_face(FaceKind::Gap, [S(b), B(y), B(x)], None);
        self.link(he(t1, 0), he(t2, 0));
        self.link(he(t1, 1), he(gb, 2));
        self.link(he(t1, 2), he(ga, 0));
        self.link(he(t2, 1), he(ga, 2));
        self.link(he(t2, 2), he(gb, 0));
        let rest: Vec<usize> = (0..self.sites.len()).filter(|&i| i != a && i != b).collect();
        self.created.clear();
        for s in rest {
            let f = self
                .scan(self.sites[s], &[t1, t2, ga, gb])
                .or_else(|| self.scan_all(self.sites[s]));
            let f = f.ok_or_else(|| Error::InternalInvariantViolation("site outside every face".into()))?;
            self.home[s] = f;
            self.bucket[f].push(s);
        }
        Ok(())
    }

    // ----- basic plumbing -----------------------------------------------

    fn new_face(&mut self, kind: FaceKind, vertices: [VertexRef; 3], circ: Option<Circumcircle>) -> usize {
        let f = self.faces.len();
        self.faces.push(Face { kind, vertices, circ });
        self.alive.push(true);
        self.twin.extend([None, None, None]);
        self.bucket.push(Vec::new());
        self.created.push(f);
        f
    }

    fn kill(&mut self, f: usize) {
        debug_assert!(self.alive[f]);
        self.alive[f] = false;
        self.killed.push(f);
    }

    fn link(&mut self, h1: usize, h2: usize) {
        self.twin[h1] = Some(h2);
        self.twin[h2] = Some(h1);
    }

    fn link_opt(&mut self, h: usize, t: Option<usize>) {
        self.twin[h] = t;
        if let Some(t) = t {
            self.twin[t] = Some(h);
        }
    }

    fn endpoint(&mut self, a: usize, b: usize) -> Result<usize> {
        let e: BisectorEndpoint = left_endpoint(&self.poly, self.sites[a], self.sites[b])?;
        self.boundary.push(BoundaryVertex {
            point: e.point,
            approach: e.approach,
        });
        Ok(self.boundary.len() - 1)
    }

    fn site_of(&self, v: VertexRef) -> usize {
        match v {
            VertexRef::Site(i) => i,
            VertexRef::Boundary(_) => panic!("boundary vertex where a site was expected"),
        }
    }

    fn bid(&self, v: VertexRef) -> usize {
        match v {
            VertexRef::Boundary(i) => i,
            VertexRef::Site(_) => panic!("site where a boundary vertex was expected"),
        }
    }

    pub fn position(&self, v: VertexRef) -> Point2 {
        match v {
            VertexRef::Site(i) => self.sites[i],
            VertexRef::Boundary(i) => self.boundary[i].point.point,
        }
    }

    fn sv(&self, f: usize, i: usize) -> usize {
        self.site_of(self.faces[f].vertices[i])
    }

    /// New standard triangle. Its circumcircle is computed once the
    /// insertion settles: triangles created and destroyed within one
    /// insertion never need one, and may not have one.
    fn standard(&mut self, a: usize, b: usize, c: usize) -> Result<usize> {
        use VertexRef::Site as S;
        Ok(self.new_face(FaceKind::Standard, [S(a), S(b), S(c)], None))
    }

    fn ensure_circle(&mut self, f: usize) -> Result<Circumcircle> {
        if let Some(c) = self.faces[f].circ {
            return Ok(c);
        }
        let [a, b, c] = [0, 1, 2].map(|i| self.sites[self.sv(f, i)]);
        match circumcircle(&self.poly, a, b, c)? {
            Ok(circ) => {
                self.faces[f].circ = Some(circ);
                Ok(circ)
            }
            Err(_) => Err(Error::GeneralPositionViolation(c.x, c.y)),
        }
    }

    fn tooth(&mut self, a: usize, b: usize, x: usize) -> usize {
        self.new_face(
            FaceKind::Tooth,
            [VertexRef::Site(a), VertexRef::Site(b), VertexRef::Boundary(x)],
            None,
        )
    }

    fn gap(&mut self, a: usize, x: usize, y: usize) -> usize {
        self.new_face(
            FaceKind::Gap,
            [VertexRef::Site(a), VertexRef::Boundary(x), VertexRef::Boundary(y)],
            None,
        )
    }

    // ----- conflict tests -------------------------------------------------

    /// Whether site `p` lies strictly inside the circumscribing ball of a
    /// standard triangle or tooth.
    fn conflicts(&self, f: usize, p: usize) -> Result<bool> {
        let z = self.sites[p];
        let face = &self.faces[f];
        match face.kind {
            FaceKind::Standard => {
                let Some(c) = face.circ else {
                    return Err(Error::InternalInvariantViolation(format!(
                        "triangle {f} has no circumcircle"
                    )));
                };
                let d = distance_unchecked(&self.poly, z, c.center) - c.radius;
                if d.abs() < eps_dist() {
                    return Err(Error::GeneralPositionViolation(z.x, z.y));
                }
                Ok(d < 0.0)
            }
            FaceKind::Tooth => {
                let x = self.boundary[self.bid(face.vertices[2])];
                let s = x.support(&self.poly);
                let a = self.sites[self.site_of(face.vertices[0])];
                let d = s.potential(&self.poly, z) - s.potential(&self.poly, a);
                if d.abs() < 2.0 * eps_dist() {
                    return Err(Error::GeneralPositionViolation(z.x, z.y));
                }
                Ok(d < 0.0)
            }
            FaceKind::Gap => Ok(false),
        }
    }

    // ----- point location ------------------------------------------------

    /// Signed containment margin of `z` in face `f` (positive inside).
    fn margin(&self, f: usize, z: Point2) -> f64 {
        let face = &self.faces[f];
        let [u, v, w] = face.vertices.map(|r| self.position(r));
        match face.kind {
            FaceKind::Standard | FaceKind::Tooth => {
                let side = |a: Point2, b: Point2| {
                    let l = a.dist(b);
                    if l == 0.0 {
                        f64::NEG_INFINITY
                    } else {
                        (b - a).cross(z - a) / l
                    }
                };
                side(u, v).min(side(v, w)).min(side(w, u))
            }
            FaceKind::Gap => {
                let (dx, dy, dz) = (v - u, w - u, z - u);
                let span = ccw_angle(dx, dy);
                if v.dist(w) <= self.poly.eps() || span == 0.0 {
                    return f64::NEG_INFINITY;
                }
                let r = dz.norm();
                let ang = ccw_angle(dx, dz);
                if ang <= span {
                    r * ang.min(span - ang).min(1.0)
                } else {
                    -r * (ang - span).min(std::f64::consts::TAU - ang).min(1.0)
                }
            }
        }
    }

    fn scan(&self, z: Point2, faces: &[usize]) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for &f in faces {
            if !self.alive[f] {
                continue;
            }
            let m = self.margin(f, z);
            if best.is_none_or(|(_, b)| m > b) {
                best = Some((f, m));
            }
        }
        let tol = -1e-9 * self.poly.scale();
        best.filter(|&(_, m)| m >= tol).map(|(f, _)| f)
    }

    fn scan_all(&self, z: Point2) -> Option<usize> {
        let all: Vec<usize> = (0..self.faces.len()).filter(|&f| self.alive[f]).collect();
        let mut best: Option<(usize, f64)> = None;
        for f in all {
            let m = self.margin(f, z);
            if best.is_none_or(|(_, b)| m > b) {
                best = Some((f, m));
            }
        }
        best.map(|(f, _)| f)
    }

    /// The face containing an interior point (ties go to the face with the
    /// largest containment margin).
    pub fn locate(&self, z: Point2) -> Result<usize> {
        self.poly.check_interior(z)?;
        self.scan_all(z)
            .ok_or_else(|| Error::InternalInvariantViolation("no face contains the point".into()))
    }

    // ----- insertion ------------------------------------------------------

    /// Inserts a new site.
    pub fn insert(&mut self, z: Point2) -> Result<usize> {
        if !self.poly.contains_interior(z) {
            return Err(Error::PointNotInterior(z.x, z.y));
        }
        for (i, s) in self.sites.iter().enumerate() {
            if s.dist(z) <= self.poly.eps() {
                return Err(Error::DuplicateSites(i, self.sites.len()));
            }
        }
        let backup = self.clone();
        let s = self.sites.len();
        let mut attempt = z;
        for retry in 0..2 {
            self.sites.push(attempt);
            self.inserted.push(false);
            self.order.push(s);
            self.home.push(usize::MAX);
            if self.bucket.len() < self.faces.len() {
                self.bucket.resize(self.faces.len(), Vec::new());
            }
            let f = self.locate(attempt)?;
            self.home[s] = f;
            self.bucket[f].push(s);
            match self.insert_site(s) {
                Ok(()) => {
                    self.bucket = Vec::new();
                    return Ok(s);
                }
                Err(Error::GeneralPositionViolation(..)) if retry == 0 => {
                    *self = backup.clone();
                    attempt = z + perturbation(s, self.poly.scale());
                }
                Err(e) => {
                    *self = backup;
                    return Err(e);
                }
            }
        }
        unreachable!("second attempt always returns")
    }

    fn insert_site(&mut self, p: usize) -> Result<()> {
        self.killed.clear();
        self.created.clear();
        self.flips = 0;
        let f = self.home[p];
        debug_assert!(self.alive[f]);
        // The site leaves its bucket.
        self.bucket[f].retain(|&s| s != p);
        self.inserted[p] = true;
        match self.faces[f].kind {
            FaceKind::Standard => self.insert_standard(f, p)?,
            FaceKind::Tooth => self.insert_tooth(f, p)?,
            FaceKind::Gap => self.insert_gap(f, p)?,
        }
        let fresh: Vec<usize> = self.created.iter().copied().filter(|&f| self.alive[f]).collect();
        for f in fresh {
            if self.faces[f].kind == FaceKind::Standard {
                self.ensure_circle(f)?;
            }
        }
        self.redistribute()
    }

    fn insert_standard(&mut self, f: usize, p: usize) -> Result<()> {
        let (a, b, c) = (self.sv(f, 0), self.sv(f, 1), self.sv(f, 2));
        let outer = [self.twin[he(f, 0)], self.twin[he(f, 1)], self.twin[he(f, 2)]];
        self.kill(f);
        let t0 = self.standard(a, b, p)?;
        let t1 = self.standard(b, c, p)?;
        let t2 = self.standard(c, a, p)?;
        for (t, o) in [(t0, outer[0]), (t1, outer[1]), (t2, outer[2])] {
            self.link_opt(he(t, 0), o);
        }
        self.link(he(t0, 1), he(t1, 2));
        self.link(he(t1, 1), he(t2, 2));
        self.link(he(t2, 1), he(t0, 2));
        for t in [t0, t1, t2] {
            self.flip_edge(he(t, 0), p)?;
        }
        Ok(())
    }

    fn insert_tooth(&mut self, f: usize, p: usize) -> Result<()> {
        let (a, b) = (self.sv(f, 0), self.sv(f, 1));
        let across = self.twin[he(f, 0)];
        let g_before = face_of(self.twin[he(f, 1)].expect("tooth has a gap before it"));
        let g_after = face_of(self.twin[he(f, 2)].expect("tooth has a gap after it"));
        let gb = self.faces[g_before].vertices;
        let ga = self.faces[g_after].vertices;
        let gb_outer = self.twin[he(g_before, 0)];
        let ga_outer = self.twin[he(g_after, 2)];
        self.kill(f);
        self.kill(g_before);
        self.kill(g_after);
        let x1 = self.endpoint(a, p)?;
        let y1 = self.endpoint(p, b)?;
        let tri = self.standard(a, b, p)?;
        let t1 = self.tooth(a, p, x1);
        let t2 = self.tooth(p, b, y1);
        let gnew = self.gap(p, y1, x1);
        let gb2 = self.gap(b, self.bid(gb[1]), y1);
        let ga2 = self.gap(a, x1, self.bid(ga[2]));
        self.link_opt(he(tri, 0), across);
        self.link(he(tri, 1), he(t2, 0));
        self.link(he(tri, 2), he(t1, 0));
        self.link(he(t1, 1), he(gnew, 2));
        self.link(he(t1, 2), he(ga2, 0));
        self.link(he(t2, 1), he(gb2, 2));
        self.link(he(t2, 2), he(gnew, 0));
        self.link_opt(he(gb2, 0), gb_outer);
        self.link_opt(he(ga2, 2), ga_outer);
        self.flip_edge(he(tri, 0), p)?;
        self.fix_tooth(t1, p)?;
        self.fix_tooth(t2, p)?;
        Ok(())
    }

    fn insert_gap(&mut self, f: usize, p: usize) -> Result<()> {
        let a = self.sv(f, 0);
        let (bx, cy) = (self.bid(self.faces[f].vertices[1]), self.bid(self.faces[f].vertices[2]));
        let outer0 = self.twin[he(f, 0)];
        let outer2 = self.twin[he(f, 2)];
        self.kill(f);
        let x = self.endpoint(a, p)?;
        let y = self.endpoint(p, a)?;
        let g1 = self.gap(a, bx, y);
        let t1 = self.tooth(p, a, y);
        let g2 = self.gap(p, y, x);
        let t2 = self.tooth(a, p, x);
        let g3 = self.gap(a, x, cy);
        self.link_opt(he(g1, 0), outer0);
        self.link(he(g1, 2), he(t1, 1));
        self.link(he(t1, 0), he(t2, 0));
        self.link(he(t1, 2), he(g2, 0));
        self.link(he(g2, 2), he(t2, 1));
        self.link(he(t2, 2), he(g3, 0));
        self.link_opt(he(g3, 2), outer2);
        self.fix_tooth(t1, p)?;
        self.fix_tooth(t2, p)?;
        Ok(())
    }

    /// Restores the local Delaunay property across the edge `h` of a
    /// standard triangle whose third vertex is `p`.
    fn flip_edge(&mut self, h: usize, p: usize) -> Result<()> {
        let l = face_of(h);
        if !self.alive[l] {
            return Ok(());
        }
        self.flips += 1;
        if self.flips > FLIP_CAP {
            return Err(Error::InternalInvariantViolation("flip cap exceeded".into()));
        }
        debug_assert_eq!(h % 3, 0);
        let r_he = match self.twin[h] {
            Some(t) => t,
            None => return Ok(()),
        };
        let r = face_of(r_he);
        let k = r_he % 3;
        if self.faces[r].kind == FaceKind::Standard {
            self.ensure_circle(r)?;
        }
        if self.faces[r].kind == FaceKind::Gap || !self.conflicts(r, p)? {
            return Ok(());
        }
        let (a, b) = (self.sv(l, 0), self.sv(l, 1));
        let l_pa = self.twin[he(l, 2)];
        let l_bp = self.twin[he(l, 1)];
        match self.faces[r].kind {
            FaceKind::Standard => {
                // r = (b, a, c) starting at half-edge k.
                let c = self.sv(r, (k + 2) % 3);
                let r_ac = self.twin[he(r, (k + 1) % 3)];
                let r_cb = self.twin[he(r, (k + 2) % 3)];
                self.kill(l);
                self.kill(r);
                let n1 = self.standard(a, c, p)?;
                let n2 = self.standard(c, b, p)?;
                self.link_opt(he(n1, 0), r_ac);
                self.link(he(n1, 1), he(n2, 2));
                self.link_opt(he(n1, 2), l_pa);
                self.link_opt(he(n2, 0), r_cb);
                self.link_opt(he(n2, 1), l_bp);
                self.flip_edge(he(n1, 0), p)?;
                self.flip_edge(he(n2, 0), p)?;
            }
            FaceKind::Tooth => {
                debug_assert_eq!(k, 0);
                let g_before = face_of(self.twin[he(r, 1)].expect("gap before tooth"));
                let g_after = face_of(self.twin[he(r, 2)].expect("gap after tooth"));
                let w = self.bid(self.faces[g_before].vertices[1]);
                let w2 = self.bid(self.faces[g_after].vertices[2]);
                let gb_outer = self.twin[he(g_before, 0)];
                let ga_outer = self.twin[he(g_after, 2)];
                self.kill(l);
                self.kill(r);
                self.kill(g_before);
                self.kill(g_after);
                let x = self.endpoint(p, a)?;
                let y = self.endpoint(b, p)?;
                let t1 = self.tooth(p, a, x);
                let t2 = self.tooth(b, p, y);
                let gp = self.gap(p, x, y);
                let ga2 = self.gap(a, w, x);
                let gb2 = self.gap(b, y, w2);
                self.link_opt(he(t1, 0), l_pa);
                self.link(he(t1, 1), he(ga2, 2));
                self.link(he(t1, 2), he(gp, 0));
                self.link_opt(he(t2, 0), l_bp);
                self.link(he(t2, 1), he(gp, 2));
                self.link(he(t2, 2), he(gb2, 0));
                self.link_opt(he(ga2, 0), gb_outer);
                self.link_opt(he(gb2, 2), ga_outer);
                // Usually a no-op, but a new boundary vertex can land past a
                // neighbouring tooth.
                self.fix_tooth(t1, p)?;
                self.fix_tooth(t2, p)?;
            }
            FaceKind::Gap => unreachable!(),
        }
        Ok(())
    }

    /// Neighbouring tooth clockwise (`cw`) or counterclockwise of tooth `t`,
    /// with the gap in between.
    fn ring_neighbour(&self, t: usize, cw: bool) -> (usize, usize) {
        if cw {
            let g = face_of(self.twin[he(t, 1)].expect("gap before tooth"));
            let n = face_of(self.twin[he(g, 0)].expect("tooth before gap"));
            (g, n)
        } else {
            let g = face_of(self.twin[he(t, 2)].expect("gap after tooth"));
            let n = face_of(self.twin[he(g, 2)].expect("tooth after gap"));
            (g, n)
        }
    }

    /// Whether tooth `t = (a, b, x)` and the tooth `n = (b, c, y)` clockwise
    /// of it overlap. Both have a corner at `b`, so their interiors meet
    /// exactly when those corners do.
    fn teeth_overlap(&self, t: usize, n: usize) -> bool {
        let pb = self.position(self.faces[t].vertices[1]);
        let dir = |f: usize, i: usize| self.position(self.faces[f].vertices[i]) - pb;
        // Corner of t at b runs counterclockwise from x to a, corner of n from c to y.
        let (u1, w1) = (dir(t, 2), ccw_angle(dir(t, 2), dir(t, 0)));
        let (u2, w2) = (dir(n, 1), ccw_angle(dir(n, 1), dir(n, 2)));
        const TOL: f64 = 1e-12;
        ccw_angle(u1, u2) < w1 - TOL || ccw_angle(u2, u1) < w2 - TOL
    }

    /// Resolves overlaps between tooth `t` (which has `p` as a site) and its
    /// neighbours on the ring.
    fn fix_tooth(&mut self, t: usize, p: usize) -> Result<()> {
        if !self.alive[t] || self.faces[t].kind != FaceKind::Tooth {
            return Ok(());
        }
        let (a, b) = (self.sv(t, 0), self.sv(t, 1));
        // Clockwise neighbour (b, c, y).
        let (g, n) = self.ring_neighbour(t, true);
        let c = self.sv(n, 1);
        if n != t && a != c && self.teeth_overlap(t, n) {
            let g_prev = face_of(self.twin[he(n, 1)].expect("gap before tooth"));
            let g_next = face_of(self.twin[he(t, 2)].expect("gap after tooth"));
            let w = self.bid(self.faces[g_prev].vertices[1]);
            let w2 = self.bid(self.faces[g_next].vertices[2]);
            let t_ab = self.twin[he(t, 0)];
            let n_bc = self.twin[he(n, 0)];
            let gp_outer = self.twin[he(g_prev, 0)];
            let gn_outer = self.twin[he(g_next, 2)];
            for f in [t, g, n, g_prev, g_next] {
                self.kill(f);
            }
            let z = self.endpoint(a, c)?;
            // Edge 0 (b -> c) is opposite a.
            let s = self.standard(b, c, a)?;
            let tn = self.tooth(a, c, z);
            let gc = self.gap(c, w, z);
            let ga = self.gap(a, z, w2);
            self.link_opt(he(s, 0), n_bc);
            self.link(he(s, 1), he(tn, 0));
            self.link_opt(he(s, 2), t_ab);
            self.link(he(tn, 1), he(gc, 2));
            self.link(he(tn, 2), he(ga, 0));
            self.link_opt(he(gc, 0), gp_outer);
            self.link_opt(he(ga, 2), gn_outer);
            if p == a {
                self.flip_edge(he(s, 0), p)?;
            }
            return self.fix_tooth(tn, p);
        }
        // Counterclockwise neighbour (d, a, w).
        let (g, n) = self.ring_neighbour(t, false);
        let d = self.sv(n, 0);
        if n != t && d != b && self.teeth_overlap(n, t) {
            let g_prev = face_of(self.twin[he(t, 1)].expect("gap before tooth"));
            let g_next = face_of(self.twin[he(n, 2)].expect("gap after tooth"));
            let w = self.bid(self.faces[g_prev].vertices[1]);
            let w2 = self.bid(self.faces[g_next].vertices[2]);
            let t_ab = self.twin[he(t, 0)];
            let n_da = self.twin[he(n, 0)];
            let gp_outer = self.twin[he(g_prev, 0)];
            let gn_outer = self.twin[he(g_next, 2)];
            for f in [t, g, n, g_prev, g_next] {
                self.kill(f);
            }
            let z = self.endpoint(d, b)?;
            // Edge 0 (d -> a) is opposite b.
            let s = self.standard(d, a, b)?;
            let tn = self.tooth(d, b, z);
            let gb = self.gap(b, w, z);
            let gd = self.gap(d, z, w2);
            self.link_opt(he(s, 0), n_da);
            self.link_opt(he(s, 1), t_ab);
            self.link(he(s, 2), he(tn, 0));
            self.link(he(tn, 1), he(gb, 2));
            self.link(he(tn, 2), he(gd, 0));
            self.link_opt(he(gb, 0), gp_outer);
            self.link_opt(he(gd, 2), gn_outer);
            if p == b {
                self.flip_edge(he(s, 0), p)?;
            }
            return self.fix_tooth(tn, p);
        }
        Ok(())
    }

    /// Moves the uninserted sites of faces destroyed in this insertion to
    /// the faces that replaced them.
    fn redistribute(&mut self) -> Result<()> {
        let mut pending = Vec::new();
        for &f in &self.killed {
            pending.append(&mut self.bucket[f]);
        }
        let fresh: Vec<usize> = self.created.iter().copied().filter(|&f| self.alive[f]).collect();
        for s in pending {
            let z = self.sites[s];
            let f = match self.scan(z, &fresh) {
                Some(f) => f,
                None => self
                    .scan_all(z)
                    .ok_or_else(|| Error::InternalInvariantViolation("site outside every face".into()))?,
            };
            self.home[s] = f;
            self.bucket[f].push(s);
        }
        Ok(())
    }

    // ----- queries ----------------------------------------------------------

    pub fn polygon(&self) -> &ConvexPolygon {
        &self.poly
    }

    /// Sites as used by the structure (including any perturbation).
    pub fn sites(&self) -> &[Point2] {
        &self.sites
    }

    /// Insertion order of the sites.
    pub fn insertion_order(&self) -> &[usize] {
        &self.order
    }

    pub fn boundary_vertex(&self, id: usize) -> &BoundaryVertex {
        &self.boundary[id]
    }

    pub fn face(&self, f: usize) -> &Face {
        &self.faces[f]
    }

    /// Ids of live faces.
    pub fn face_ids(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.faces.len()).filter(move |&f| self.alive[f])
    }

    pub fn faces_of_kind(&self, kind: FaceKind) -> Vec<usize> {
        self.face_ids().filter(|&f| self.faces[f].kind == kind).collect()
    }

    /// Standard triangles as sorted site-index triples, in sorted order.
    pub fn standard_triangles(&self) -> BTreeSet<[usize; 3]> {
        self.faces_of_kind(FaceKind::Standard)
            .into_iter()
            .map(|f| {
                let mut t = [self.sv(f, 0), self.sv(f, 1), self.sv(f, 2)];
                t.sort_unstable();
                t
            })
            .collect()
    }

    /// Undirected site-site edges as `(min, max)` pairs.
    pub fn site_edges(&self) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        for f in self.face_ids() {
            let v = self.faces[f].vertices;
            for i in 0..3 {
                if let (VertexRef::Site(a), VertexRef::Site(b)) = (v[i], v[(i + 1) % 3]) {
                    out.insert((a.min(b), a.max(b)));
                }
            }
        }
        out
    }

    /// Teeth in counterclockwise ring order.
    pub fn ring(&self) -> Vec<usize> {
        let teeth = self.faces_of_kind(FaceKind::Tooth);
        let Some(&start) = teeth.iter().min_by(|&&a, &&b| {
            let pa = self.boundary[self.bid(self.faces[a].vertices[2])].point.position();
            let pb = self.boundary[self.bid(self.faces[b].vertices[2])].point.position();
            pa.total_cmp(&pb).then(a.cmp(&b))
        }) else {
            return Vec::new();
        };
        let mut out = vec![start];
        let mut t = start;
        loop {
            let (_, n) = self.ring_neighbour(t, false);
            if n == start || out.len() > teeth.len() {
                break;
            }
            out.push(n);
            t = n;
        }
        out
    }

    /// Sites `(a, b)` and boundary vertex id of a tooth.
    pub fn tooth_parts(&self, t: usize) -> (usize, usize, usize) {
        (self.sv(t, 0), self.sv(t, 1), self.bid(self.faces[t].vertices[2]))
    }

    /// Site and boundary vertex ids `(x, y)` of a gap.
    pub fn gap_parts(&self, g: usize) -> (usize, usize, usize) {
        let v = self.faces[g].vertices;
        (self.site_of(v[0]), self.bid(v[1]), self.bid(v[2]))
    }

    // ----- validation -------------------------------------------------------

    /// Checks the structural and Delaunay invariants; empty when valid.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let poly = &self.poly;
        // Twins.
        for f in self.face_ids() {
            for i in 0..3 {
                let h = he(f, i);
                match self.twin[h] {
                    Some(t) => {
                        if !self.alive[face_of(t)] {
                            out.push(format!("half-edge {h} is linked to a dead face"));
                        } else if self.twin[t] != Some(h) {
                            out.push(format!("half-edge {h} twin is not symmetric"));
                        } else {
                            let v = self.faces[f].vertices;
                            let w = self.faces[face_of(t)].vertices;
                            if v[i] != w[(t % 3 + 1) % 3] || v[(i + 1) % 3] != w[t % 3] {
                                out.push(format!("half-edge {h} and its twin disagree on endpoints"));
                            }
                        }
                    }
                    None => {
                        if !(self.faces[f].kind == FaceKind::Gap && i == 1) {
                            out.push(format!("half-edge {h} has no twin"));
                        }
                    }
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        // Orientation and circumcircles.
        for f in self.face_ids() {
            let face = &self.faces[f];
            let [u, v, w] = face.vertices.map(|r| self.position(r));
            match face.kind {
                FaceKind::Standard => {
                    if orient(u, v, w) <= 0.0 {
                        out.push(format!("standard triangle {f} is not counterclockwise"));
                    }
                    match face.circ {
                        None => out.push(format!("standard triangle {f} has no circumcircle")),
                        Some(c) => {
                            for s in [u, v, w] {
                                let d = distance_unchecked(poly, s, c.center) - c.radius;
                                if d.abs() > 1e-7 {
                                    out.push(format!("circumcircle of {f} misses a vertex by {d:e}"));
                                }
                            }
                        }
                    }
                }
                FaceKind::Tooth => {
                    let x = self.boundary[self.bid(face.vertices[2])].point;
                    let r = endpoint_residual(poly, u, v, x);
                    if r > 1e-7 {
                        out.push(format!("tooth {f} vertex is not a bisector endpoint (residual {r:e})"));
                    }
                    if orient(u, v, w) < -poly.eps() * poly.scale() {
                        out.push(format!("tooth {f} is not left of its site edge"));
                    }
                }
                FaceKind::Gap => {}
            }
        }
        // Ring alternation and winding.
        let ring = self.ring();
        let teeth = self.faces_of_kind(FaceKind::Tooth).len();
        let gaps = self.faces_of_kind(FaceKind::Gap).len();
        if ring.len() != teeth || teeth != gaps {
            out.push(format!(
                "ring visits {} of {teeth} teeth and there are {gaps} gaps",
                ring.len()
            ));
        } else {
            let mut turn = 0.0;
            for (i, &t) in ring.iter().enumerate() {
                let (_, n) = self.ring_neighbour(t, false);
                if n != ring[(i + 1) % ring.len()] {
                    out.push("ring is not a single cycle".into());
                    break;
                }
                let x = &self.boundary[self.tooth_parts(t).2];
                let y = &self.boundary[self.tooth_parts(n).2];
                let mut d = poly.ccw_offset(x.point.position(), y.point.position());
                if d == 0.0 && x.point.is_vertex() && y.approach < x.approach - 1e-12 {
                    d = poly.m() as f64;
                }
                turn += d;
            }
            if ring.len() > 1 && (turn - poly.m() as f64).abs() > 1e-6 {
                out.push(format!("teeth wind {turn} around the boundary instead of once"));
            }
        }
        // Local Delaunay on site-site edges.
        for f in self.face_ids() {
            for i in 0..3 {
                let h = he(f, i);
                let Some(t) = self.twin[h] else { continue };
                let g = face_of(t);
                let v = self.faces[f].vertices;
                if !matches!((v[i], v[(i + 1) % 3]), (VertexRef::Site(_), VertexRef::Site(_))) {
                    continue;
                }
                // Apex of f opposite this edge.
                if let VertexRef::Site(apex) = v[(i + 2) % 3] {
                    if let Ok(true) = self.conflicts(g, apex) {
                        out.push(format!("edge {h}: site {apex} inside the ball of face {g}"));
                    }
                }
            }
        }
        // Planarity on straight edges.
        let mut segs: Vec<(VertexRef, VertexRef)> = Vec::new();
        for f in self.face_ids() {
            let v = self.faces[f].vertices;
            for i in 0..3 {
                if self.faces[f].kind == FaceKind::Gap && i == 1 {
                    continue;
                }
                let (a, b) = (v[i], v[(i + 1) % 3]);
                if a < b {
                    segs.push((a, b));
                }
            }
        }
        let crossings = count_crossings(
            &segs
                .iter()
                .map(|&(a, b)| (self.position(a), self.position(b)))
                .collect::<Vec<_>>(),
            poly.eps(),
        );
        if crossings > 0 {
            out.push(format!("{crossings} pairs of edges cross"));
        }
        // Spanning connectivity over inserted sites.
        let n = self.sites.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while p[r] != r {
                r = p[r];
            }
            let mut j = i;
            while p[j] != r {
                let k = p[j];
                p[j] = r;
                j = k;
            }
            r
        }
        for (a, b) in self.site_edges() {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
        let roots: BTreeSet<usize> = (0..n)
            .filter(|&i| self.inserted[i])
            .map(|i| find(&mut parent, i))
            .collect();
        if roots.len() > 1 {
            out.push(format!("site graph has {} components", roots.len()));
        }
        out
    }

    /// Empty-ball check of every standard triangle and tooth against every
    /// site; quadratic, meant for small inputs.
    pub fn validate_global(&self) -> Vec<String> {
        let mut out = Vec::new();
        for f in self.face_ids() {
            if self.faces[f].kind == FaceKind::Gap {
                continue;
            }
            let own: Vec<usize> = self.faces[f]
                .vertices
                .iter()
                .filter_map(|v| if let VertexRef::Site(i) = v { Some(*i) } else { None })
                .collect();
            for s in 0..self.sites.len() {
                if own.contains(&s) {
                    continue;
                }
                if let Ok(true) = self.conflicts(f, s) {
                    out.push(format!("site {s} inside the ball of face {f}"));
                }
            }
        }
        out
    }

    /// Sampled Voronoi edges: one polyline per site-site edge, from the
    /// circumcenter (or bisector endpoint) on one side to the other.
    pub fn voronoi_edges_sampled(&self, samples_per_edge: usize) -> Vec<Vec<Point2>> {
        let poly = &self.poly;
        let mut by_edge: HashMap<(usize, usize), (Option<Point2>, Option<Point2>)> = HashMap::new();
        for f in self.face_ids() {
            let face = &self.faces[f];
            let v = face.vertices;
            let apex_point = match face.kind {
                FaceKind::Standard => face.circ.map(|c| c.center),
                FaceKind::Tooth => Some(self.position(v[2])),
                FaceKind::Gap => None,
            };
            for i in 0..3 {
                if let (VertexRef::Site(a), VertexRef::Site(b)) = (v[i], v[(i + 1) % 3]) {
                    // The face is left of a -> b.
                    let key = (a.min(b), a.max(b));
                    let e = by_edge.entry(key).or_insert((None, None));
                    if a < b {
                        e.0 = apex_point;
                    } else {
                        e.1 = apex_point;
                    }
                }
            }
        }
        let mut keys: Vec<_> = by_edge.keys().copied().collect();
        keys.sort_unstable();
        let mut out = Vec::new();
        for (a, b) in keys {
            let (left, right) = by_edge[&(a, b)];
            let (Some(left), Some(right)) = (left, right) else {
                continue;
            };
            let (p, q) = (self.sites[a], self.sites[b]);
            let Ok(reference) = left_endpoint(poly, q, p) else {
                continue;
            };
            let r0 = reference.point.point - p;
            let (mut s, mut e) = (right, left);
            if ccw_angle(r0, s - p) > ccw_angle(r0, e - p) {
                std::mem::swap(&mut s, &mut e);
            }
            let (t0, t1) = (ccw_angle(r0, s - p), ccw_angle(r0, e - p));
            let base = r0.normalized();
            let mut line = vec![s];
            let k = samples_per_edge.max(1);
            for j in 1..k {
                let th = t0 + (t1 - t0) * j as f64 / k as f64;
                let d = Point2::new(
                    base.x * th.cos() - base.y * th.sin(),
                    base.x * th.sin() + base.y * th.cos(),
                );
                if let Ok(Some(x)) = bisector_ray_intersection(poly, p, q, d) {
                    line.push(x);
                }
            }
            line.push(e);
            out.push(line);
        }
        out
    }
}

/// Number of properly crossing segment pairs (shared endpoints ignored).
pub fn count_crossings(segs: &[(Point2, Point2)], tol: f64) -> usize {
    let mut idx: Vec<usize> = (0..segs.len()).collect();
    let lo = |i: usize| segs[i].0.x.min(segs[i].1.x);
    let hi = |i: usize| segs[i].0.x.max(segs[i].1.x);
    idx.sort_by(|&i, &j| lo(i).total_cmp(&lo(j)));
    let mut count = 0;
    for k in 0..idx.len() {
        let i = idx[k];
        for &j in &idx[k + 1..] {
            if lo(j) > hi(i) + tol {
                break;
            }
            let (a, b) = segs[i];
            let (c, d) = segs[j];
            if a.dist(c) <= tol || a.dist(d) <= tol || b.dist(c) <= tol || b.dist(d) <= tol {
                continue;
            }
            let scale_ab = a.dist(b);
            let scale_cd = c.dist(d);
            let o1 = orient(a, b, c) / scale_ab;
            let o2 = orient(a, b, d) / scale_ab;
            let o3 = orient(c, d, a) / scale_cd;
            let o4 = orient(c, d, b) / scale_cd;
            if ((o1 > tol && o2 < -tol) || (o1 < -tol && o2 > tol))
                && ((o3 > tol && o4 < -tol) || (o3 < -tol && o4 > tol))
            {
                count += 1;
            }
        }
    }
    count
}

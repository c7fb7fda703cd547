//! The Hilbert hull: the region covered by the standard Delaunay triangles.
//!
//! Its boundary is recorded as the cyclic sequence of sites whose Voronoi
//! cells meet the boundary of the domain, in the counterclockwise order in
//! which those cells are met. Each entry carries the boundary point where the
//! site's stretch of boundary ends, which is the endpoint of the bisector of
//! the next site and this one.

use std::cmp::Ordering;

use crate::bisector::{left_endpoint, BisectorEndpoint};
use crate::delaunay::AugmentedTriangulation;
use crate::error::{Error, Result};
use crate::point::{ccw_angle, Point2};
use crate::polygon::{BoundaryPoint, ConvexPolygon};
use crate::tolerance::eps_geom;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HullEntry {
    /// Index into the site list.
    pub site: usize,
    pub point: Point2,
    /// Where this site's stretch of boundary ends.
    pub witness: BoundaryPoint,
    /// Weight of the limit ball at `witness` when it is a polygon vertex.
    pub approach: f64,
}

/// Counterclockwise cyclic hull sequence. A site appears once per stretch
/// of boundary its cell touches, so tree-shaped hulls repeat sites.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct HullSequence {
    pub entries: Vec<HullEntry>,
}

impl HullSequence {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn sites(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.site).collect()
    }

    /// The sequence with its first entry repeated at the end.
    pub fn closed(&self) -> Vec<HullEntry> {
        let mut out = self.entries.clone();
        if let Some(&first) = self.entries.first() {
            out.push(first);
        }
        out
    }

    /// Whether both sequences list the same sites in the same cyclic order.
    pub fn same_cycle(&self, other: &HullSequence) -> bool {
        let (a, b) = (self.sites(), other.sites());
        if a.len() != b.len() {
            return false;
        }
        if a.is_empty() {
            return true;
        }
        (0..b.len()).any(|k| (0..a.len()).all(|i| a[i] == b[(i + k) % b.len()]))
    }
}

/// Position tolerance, in edge-parameter units, below which two boundary
/// points count as coincident.
fn position_tol() -> f64 {
    eps_geom()
}

/// Counterclockwise advance from `(x, mu_x)` to `(e, mu_e)` in edge-parameter
/// units. Coincident vertex points are ordered by their weights; a point at
/// or behind the start counts as a full turn away.
fn advance(poly: &ConvexPolygon, x: BoundaryPoint, mu_x: f64, e: BoundaryPoint, mu_e: f64) -> f64 {
    let m = poly.m() as f64;
    let off = poly.ccw_offset(x.position(), e.position());
    let tol = position_tol();
    if off < tol || m - off < tol {
        if x.is_vertex() && e.is_vertex() && ccw_offset_is_zero(poly, x, e) && mu_e > mu_x + tol {
            return 0.0;
        }
        return m;
    }
    off
}

fn ccw_offset_is_zero(poly: &ConvexPolygon, a: BoundaryPoint, b: BoundaryPoint) -> bool {
    let off = poly.ccw_offset(a.position(), b.position());
    off < position_tol() || poly.m() as f64 - off < position_tol()
}

/// Clockwise angle at `e` from the direction towards `x` to the direction
/// towards `site`.
fn tie_angle(x: BoundaryPoint, e: BoundaryPoint, site: Point2) -> f64 {
    let back = x.point - e.point;
    let to = site - e.point;
    if back.norm() == 0.0 || to.norm() == 0.0 {
        return 0.0;
    }
    ccw_angle(to, back)
}

fn compare(
    poly: &ConvexPolygon,
    x: BoundaryPoint,
    mu_x: f64,
    c1: (Point2, &BisectorEndpoint),
    c2: (Point2, &BisectorEndpoint),
) -> Ordering {
    let tol = position_tol();
    let a1 = advance(poly, x, mu_x, c1.1.point, c1.1.approach);
    let a2 = advance(poly, x, mu_x, c2.1.point, c2.1.approach);
    if (a1 - a2).abs() > tol {
        return a1.total_cmp(&a2);
    }
    if c1.1.point.is_vertex() && c2.1.point.is_vertex() && (c1.1.approach - c2.1.approach).abs() > tol {
        return c1.1.approach.total_cmp(&c2.1.approach);
    }
    let t1 = tie_angle(x, c1.1.point, c1.0);
    let t2 = tie_angle(x, c2.1.point, c2.0);
    if (t1 - t2).abs() > tol {
        return t1.total_cmp(&t2);
    }
    Ordering::Equal
}

/// The order on candidate successors of the current hull site induced by
/// the current witness `x`: by how far counterclockwise from `x` each
/// candidate's bisector endpoint lies, then by limit-ball weight when both
/// endpoints sit on the same polygon vertex, then by the clockwise angle at
/// the endpoint from `x` to the candidate.
///
/// Candidates whose endpoints tie on all three counts compare equal, so
/// this returns `false` both ways.
pub fn induced_order_less(
    poly: &ConvexPolygon,
    x: BoundaryPoint,
    cand1: (Point2, &BisectorEndpoint),
    cand2: (Point2, &BisectorEndpoint),
) -> bool {
    compare(poly, x, 0.5, cand1, cand2) == Ordering::Less
}

fn check_sites(poly: &ConvexPolygon, sites: &[Point2]) -> Result<()> {
    if sites.len() < 2 {
        return Err(Error::TooFewSites {
            needed: 2,
            got: sites.len(),
        });
    }
    for s in sites {
        poly.check_interior(*s)?;
    }
    for i in 0..sites.len() {
        for j in i + 1..sites.len() {
            if sites[i].dist(sites[j]) <= poly.eps() {
                return Err(Error::DuplicateSites(i, j));
            }
        }
    }
    Ok(())
}

/// Hilbert hull by gift wrapping along the boundary.
///
/// The walk starts at the midpoint of edge `0`, with the site whose limit
/// ball there is empty. From site `p` at boundary point `x`, every other
/// site `q` proposes the endpoint of the `(q, p)`-bisector, and the earliest
/// proposal counterclockwise from `x` (see [`induced_order_less`]) gives the
/// next site and where `p`'s stretch ends. The walk stops once a stretch
/// covers the starting point again. Exact ties fall to the lower index.
///
/// Runs in `O(n h log^2 m)` for `h` output entries.
pub fn hilbert_hull(poly: &ConvexPolygon, sites: &[Point2]) -> Result<HullSequence> {
    check_sites(poly, sites)?;
    let n = sites.len();
    let m = poly.m() as f64;
    let x0 = poly.boundary_point(0, 0.5);
    let mut start = crate::metric::min_empty_ball_at_infinity(poly, x0, sites)?.index;
    // On a tie at x0 the chosen site's stretch may end exactly there; the
    // walk must begin with the site whose stretch starts at x0.
    for _ in 0..n {
        let mut ends_here = None;
        for q in (0..n).filter(|&q| q != start) {
            if ccw_offset_is_zero(poly, x0, left_endpoint(poly, sites[q], sites[start])?.point) {
                ends_here = Some(q);
                break;
            }
        }
        match ends_here {
            Some(q) => start = q,
            None => break,
        }
    }

    let mut out = Vec::new();
    let (mut p, mut x, mut mu_x) = (start, x0, 0.5);
    let mut travelled = 0.0;
    let cap = 4 * n + 8;
    loop {
        let mut best: Option<(usize, BisectorEndpoint)> = None;
        for q in (0..n).filter(|&q| q != p) {
            let e = left_endpoint(poly, sites[q], sites[p])?;
            let better = match &best {
                None => true,
                Some((b, be)) => compare(poly, x, mu_x, (sites[q], &e), (sites[*b], be)) == Ordering::Less,
            };
            if better {
                best = Some((q, e));
            }
        }
        let (q, e) = best.expect("at least two sites");
        let step = advance(poly, x, mu_x, e.point, e.approach);
        travelled += step;
        // A stretch ending exactly at x0 closes the walk only if it is the
        // start's; otherwise its successor is the start, opening at x0.
        if travelled > m + position_tol() || (travelled >= m - position_tol() && p == start) {
            break;
        }
        out.push(HullEntry {
            site: p,
            point: sites[p],
            witness: e.point,
            approach: e.approach,
        });
        if out.len() > cap {
            return Err(Error::InternalInvariantViolation("hull walk did not close".into()));
        }
        p = q;
        x = e.point;
        mu_x = e.approach;
    }
    if p != start {
        return Err(Error::InternalInvariantViolation(format!(
            "hull walk closed at site {p} instead of {start}"
        )));
    }
    Ok(HullSequence { entries: out })
}

/// The hull read off the teeth of a triangulation, rotated to start the
/// same way as [`hilbert_hull`] does.
pub fn hull_from_triangulation(t: &AugmentedTriangulation) -> HullSequence {
    let poly = t.polygon();
    let sites = t.sites();
    let ring = t.ring();
    let mut entries: Vec<HullEntry> = ring
        .iter()
        .map(|&f| {
            let (_, b, x) = t.tooth_parts(f);
            let bv = t.boundary_vertex(x);
            HullEntry {
                site: b,
                point: sites[b],
                witness: bv.point,
                approach: bv.approach,
            }
        })
        .collect();
    // Start with the stretch covering the midpoint of edge 0, which is the
    // one ending first counterclockwise from it.
    let x0 = poly.boundary_point(0, 0.5);
    if let Some(k) = (0..entries.len()).min_by(|&i, &j| {
        let ai = advance(poly, x0, 0.5, entries[i].witness, entries[i].approach);
        let aj = advance(poly, x0, 0.5, entries[j].witness, entries[j].approach);
        ai.total_cmp(&aj)
            .then(entries[i].approach.total_cmp(&entries[j].approach))
    }) {
        entries.rotate_left(k);
    }
    HullSequence { entries }
}

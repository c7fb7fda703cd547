mod common;

use common::*;
use hilbert_core::bisector::{bisector_endpoints, BisectorEndpoint, Side};
use hilbert_core::delaunay::{build, FaceKind};
use hilbert_core::hull::induced_order_less;
use hilbert_core::{
    hilbert_hull, hull_from_triangulation, orient, ConvexPolygon, Error, HullSequence, Point2, Support,
};
use rand::Rng;

fn both(poly: &ConvexPolygon, s: &[Point2]) -> (HullSequence, HullSequence) {
    let march = hilbert_hull(poly, s).unwrap();
    let tri = hull_from_triangulation(&build(poly, s, 0).unwrap());
    (march, tri)
}

fn rotations_equal(a: &[usize], b: &[usize]) -> bool {
    a.len() == b.len() && (a.is_empty() || (0..b.len()).any(|k| (0..a.len()).all(|i| a[i] == b[(i + k) % b.len()])))
}

/// Four sites in a hexagon whose hull is a tree: three leaves around one
/// central site.
fn tree_sites() -> Vec<Point2> {
    vec![p(0.7, 0.05), p(0.1, -0.05), p(-0.25, 0.6), p(-0.3, -0.6)]
}

#[test]
fn triangle_hull_lists_each_site_once_counterclockwise() {
    let hex = hexagon();
    let s = [p(0.3, -0.1), p(-0.1, 0.35), p(-0.25, -0.2)];
    let (march, tri) = both(&hex, &s);
    assert_eq!(march.len(), 3);
    let ids = march.sites();
    assert!(orient(s[ids[0]], s[ids[1]], s[ids[2]]) > 0.0);
    assert!(march.same_cycle(&tri));
}

#[test]
fn tree_shaped_hull_revisits_the_center() {
    let hex = hexagon();
    let (march, tri) = both(&hex, &tree_sites());
    assert_eq!(march.sites(), vec![0, 1, 2, 1, 3, 1]);
    let closed: Vec<usize> = march.closed().iter().map(|e| e.site).collect();
    assert_eq!(closed, vec![0, 1, 2, 1, 3, 1, 0]);
    assert!(march.same_cycle(&tri));
    assert!(build(&hex, &tree_sites(), 0).unwrap().standard_triangles().is_empty());
}

#[test]
fn tree_pattern_survives_jitter() {
    let hex = hexagon();
    let mut r = rng(50);
    let mut kept = 0;
    for _ in 0..50 {
        let s: Vec<Point2> = tree_sites()
            .into_iter()
            .map(|z| z + p(r.gen_range(-0.02..0.02), r.gen_range(-0.02..0.02)))
            .collect();
        let (march, tri) = both(&hex, &s);
        assert!(march.same_cycle(&tri));
        kept += rotations_equal(&march.sites(), &[0, 1, 2, 1, 3, 1]) as usize;
    }
    assert!(kept >= 45, "{kept} of 50 keep the tree pattern");
}

#[test]
fn walk_starting_on_a_bisector_endpoint_keeps_every_site() {
    // The bisector of the first two sites ends at (0.5, 0), the midpoint
    // of edge 0 where the walk begins.
    let sq = unit_square();
    let s = [p(0.25, 0.5), p(0.75, 0.5), p(0.5, 0.8)];
    let (march, tri) = both(&sq, &s);
    assert!(march.same_cycle(&tri), "{:?} vs {:?}", march.sites(), tri.sites());
    assert_eq!(march.len(), 3);
    let (march, tri) = both(&sq, &s[..2]);
    assert!(march.same_cycle(&tri));
    assert_eq!(march.len(), 2);
}

#[test]
fn two_sites_use_both_bisector_endpoints() {
    let sq = unit_square();
    let (a, b) = (p(0.3, 0.4), p(0.6, 0.7));
    let (march, tri) = both(&sq, &[a, b]);
    assert_eq!(march.len(), 2);
    assert!(march.same_cycle(&tri));
    let (l, r) = bisector_endpoints(&sq, a, b).unwrap();
    for e in &march.entries {
        assert!([l.point.point, r.point.point]
            .iter()
            .any(|w| w.dist(e.witness.point) < 1e-9));
    }
    assert_ne!(march.entries[0].witness.point, march.entries[1].witness.point);
}

#[test]
fn collinear_sites_give_a_doubled_path() {
    let sq = unit_square();
    let s = [p(0.2, 0.5), p(0.5, 0.5), p(0.8, 0.5)];
    let (march, tri) = both(&sq, &s);
    assert!(rotations_equal(&march.sites(), &[1, 2, 1, 0]), "{:?}", march.sites());
    assert!(march.same_cycle(&tri));
}

#[test]
fn input_errors() {
    let sq = unit_square();
    assert!(matches!(
        hilbert_hull(&sq, &[p(0.5, 0.5)]),
        Err(Error::TooFewSites { needed: 2, got: 1 })
    ));
    assert!(matches!(
        hilbert_hull(&sq, &[p(0.5, 0.5), p(0.5, 1.5)]),
        Err(Error::PointNotInterior(..))
    ));
}

#[test]
fn march_agrees_with_the_triangulation() {
    let mut r = rng(51);
    for inst in 0..100 {
        let poly = some_polygon(&mut r, 12);
        let n = r.gen_range(2..=15);
        let s = sites(&mut r, &poly, n, 0.01);
        let (march, tri) = both(&poly, &s);
        assert!(
            march.same_cycle(&tri),
            "instance {inst}: {:?} vs {:?}",
            march.sites(),
            tri.sites()
        );
    }
}

#[test]
fn hull_sites_are_the_tooth_sites() {
    let mut r = rng(52);
    for _ in 0..50 {
        let poly = some_polygon(&mut r, 12);
        let s = sites(&mut r, &poly, 25, 0.01);
        let t = build(&poly, &s, 0).unwrap();
        let mut on_teeth: Vec<usize> = t
            .faces_of_kind(FaceKind::Tooth)
            .into_iter()
            .flat_map(|f| {
                let (a, b, _) = t.tooth_parts(f);
                [a, b]
            })
            .collect();
        on_teeth.sort_unstable();
        on_teeth.dedup();
        let mut on_hull = hilbert_hull(&poly, &s).unwrap().sites();
        on_hull.sort_unstable();
        on_hull.dedup();
        assert_eq!(on_hull, on_teeth);
    }
}

#[test]
fn witnesses_have_empty_balls_and_wind_once() {
    let mut r = rng(53);
    for _ in 0..50 {
        let poly = some_polygon(&mut r, 12);
        let n = r.gen_range(2..=20);
        let s = sites(&mut r, &poly, n, 0.01);
        let h = hilbert_hull(&poly, &s).unwrap();
        let closed = h.closed();
        let mut turn = 0.0;
        for w in closed.windows(2) {
            let (cur, next) = (w[0], w[1]);
            let support = Support::from_approach(&poly, cur.witness, cur.approach);
            let level = |z: Point2| support.potential(&poly, z);
            let (lc, ln) = (level(s[cur.site]), level(s[next.site]));
            assert!((lc - ln).abs() <= 1e-7, "witness is not on the bisector");
            for (j, &z) in s.iter().enumerate() {
                if j != cur.site && j != next.site {
                    assert!(level(z) >= lc - 1e-9, "site {j} inside the witness ball");
                }
            }
            let mut step = poly.ccw_offset(cur.witness.position(), next.witness.position());
            if step == 0.0 && !(cur.witness.is_vertex() && next.approach > cur.approach) {
                step = if h.len() == 1 { poly.m() as f64 } else { 0.0 };
            }
            turn += step;
        }
        assert!((turn - poly.m() as f64).abs() < 1e-6, "witnesses turn {turn} times m");
    }
}

fn euclidean_hull(s: &[Point2]) -> Vec<usize> {
    let n = s.len();
    let mut out: Vec<usize> = (0..n)
        .filter(|&i| {
            // A vertex if some direction has it as the unique extreme.
            (0..720).any(|k| {
                let th = std::f64::consts::TAU * k as f64 / 720.0;
                let d = p(th.cos(), th.sin());
                (0..n).all(|j| j == i || s[j].dot(d) < s[i].dot(d))
            })
        })
        .collect();
    out.sort_unstable();
    out
}

/// In a huge, nearly round domain the geometry near the sites is close to
/// Euclidean, so the hull sites should be the convex hull vertices. Sites
/// almost on a hull edge can go either way, so a few misses are allowed.
#[test]
fn huge_round_domain_gives_the_convex_hull() {
    let big = ConvexPolygon::regular(256, p(0.0, 0.0), 1e6, 0.0).unwrap();
    let mut r = rng(54);
    let mut agree = 0;
    let trials = 30;
    for _ in 0..trials {
        let s: Vec<Point2> = (0..12)
            .map(|_| p(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)))
            .collect();
        let mut got = hilbert_hull(&big, &s).unwrap().sites();
        got.sort_unstable();
        got.dedup();
        agree += (got == euclidean_hull(&s)) as usize;
    }
    assert!(agree >= trials * 9 / 10, "{agree} of {trials}");
}

fn endpoint(point: hilbert_core::BoundaryPoint) -> BisectorEndpoint {
    BisectorEndpoint {
        point,
        side: Side::Left,
        approach: 0.5,
    }
}

#[test]
fn induced_order_uses_boundary_order_then_angle() {
    let sq = unit_square();
    let x = sq.boundary_point(0, 0.5);
    let (e1, e2) = (endpoint(sq.boundary_point(1, 0.5)), endpoint(sq.boundary_point(2, 0.5)));
    let (s1, s2) = (p(0.6, 0.6), p(0.4, 0.4));
    assert!(induced_order_less(&sq, x, (s1, &e1), (s2, &e2)));
    assert!(!induced_order_less(&sq, x, (s2, &e2), (s1, &e1)));
    // Behind x counts as almost a full turn away.
    let behind = endpoint(sq.boundary_point(0, 0.25));
    assert!(induced_order_less(&sq, x, (s1, &e2), (s2, &behind)));
    // Shared endpoint at the top: turning clockwise from the direction back
    // down to x, the site on the left comes first.
    let shared = endpoint(sq.boundary_point(2, 0.5));
    let (left, right) = (p(0.2, 0.6), p(0.7, 0.6));
    assert!(induced_order_less(&sq, x, (left, &shared), (right, &shared)));
    assert!(!induced_order_less(&sq, x, (right, &shared), (left, &shared)));
}

#[test]
fn induced_order_is_antisymmetric() {
    let mut r = rng(55);
    for _ in 0..200 {
        let poly = some_polygon(&mut r, 12);
        let s = sites(&mut r, &poly, 3, 0.02);
        let x = poly.boundary_point(r.gen_range(0..poly.m()), r.gen_range(0.0..1.0));
        let (l1, _) = bisector_endpoints(&poly, s[1], s[0]).unwrap();
        let (l2, _) = bisector_endpoints(&poly, s[2], s[0]).unwrap();
        let a = induced_order_less(&poly, x, (s[1], &l1), (s[2], &l2));
        let b = induced_order_less(&poly, x, (s[2], &l2), (s[1], &l1));
        assert!(a != b);
    }
}

mod common;

use std::collections::BTreeSet;

use common::*;
use hilbert_core::bisector::bisector_endpoints;
use hilbert_core::delaunay::{build, AugmentedTriangulation, FaceKind, VertexRef};
use hilbert_core::oracle::{brute_delaunay, brute_mst_rng};
use hilbert_core::{hilbert_distance, ConvexPolygon, Error, Point2};
use rand::seq::SliceRandom;
use rand::Rng;

fn count(t: &AugmentedTriangulation, kind: FaceKind) -> usize {
    t.faces_of_kind(kind).len()
}

fn degree(t: &AugmentedTriangulation, s: usize) -> usize {
    t.site_edges().iter().filter(|&&(a, b)| a == s || b == s).count()
}

fn teeth_at(t: &AugmentedTriangulation, s: usize) -> usize {
    t.faces_of_kind(FaceKind::Tooth)
        .into_iter()
        .filter(|&f| {
            let (a, b, _) = t.tooth_parts(f);
            a == s || b == s
        })
        .count()
}

#[test]
fn two_sites() {
    let sq = unit_square();
    let t = build(&sq, &[p(0.3, 0.4), p(0.6, 0.7)], 0).unwrap();
    assert_eq!(count(&t, FaceKind::Standard), 0);
    assert_eq!(count(&t, FaceKind::Tooth), 2);
    assert_eq!(count(&t, FaceKind::Gap), 2);
    assert_eq!(t.site_edges().len(), 1);
    assert!(t.validate().is_empty());
}

#[test]
fn three_sites_with_a_circle() {
    let hex = hexagon();
    let s = [p(0.3, -0.1), p(-0.1, 0.35), p(-0.25, -0.2)];
    let t = build(&hex, &s, 0).unwrap();
    assert_eq!(brute_delaunay(&hex, &s, 360).len(), 1);
    assert_eq!(count(&t, FaceKind::Standard), 1);
    assert_eq!(count(&t, FaceKind::Tooth), 3);
    assert_eq!(count(&t, FaceKind::Gap), 3);
    assert!(t.validate().is_empty());
}

#[test]
fn three_sites_without_a_circle() {
    // The third site sits in the overlap region of the first two.
    let sq = unit_square();
    let s = [p(0.2, 0.3), p(0.7, 0.6), p(0.45, 0.47)];
    let t = build(&sq, &s, 0).unwrap();
    assert!(brute_delaunay(&sq, &s, 360).is_empty());
    assert_eq!(count(&t, FaceKind::Standard), 0);
    assert!(t.validate().is_empty());
}

#[test]
fn input_errors() {
    let sq = unit_square();
    assert!(matches!(
        build(&sq, &[p(0.5, 0.5)], 0),
        Err(Error::TooFewSites { needed: 2, got: 1 })
    ));
    assert!(matches!(
        build(&sq, &[p(0.5, 0.5), p(1.5, 0.5)], 0),
        Err(Error::PointNotInterior(..))
    ));
    assert!(matches!(
        build(&sq, &[p(0.5, 0.5), p(0.2, 0.2), p(0.5, 0.5)], 0),
        Err(Error::DuplicateSites(0, 2))
    ));
    let mut t = build(&sq, &[p(0.3, 0.4), p(0.6, 0.7)], 0).unwrap();
    assert!(matches!(t.insert(p(0.3, 0.4)), Err(Error::DuplicateSites(..))));
    assert!(matches!(t.insert(p(0.3, -0.4)), Err(Error::PointNotInterior(..))));
    assert!(t.validate().is_empty());
}

#[test]
fn matches_the_brute_force_triangulation() {
    let mut r = rng(7);
    for inst in 0..100 {
        let poly = some_polygon(&mut r, 8);
        let n = r.gen_range(3..=12);
        let s = sites(&mut r, &poly, n, 0.02);
        let t = build(&poly, &s, inst).unwrap();
        assert_eq!(t.validate(), Vec::<String>::new(), "instance {inst}");
        assert_eq!(
            t.standard_triangles(),
            brute_delaunay(&poly, &s, 360),
            "instance {inst}"
        );
    }
}

#[test]
fn insertion_order_does_not_matter() {
    let mut r = rng(8);
    for _ in 0..5 {
        let poly = some_polygon(&mut r, 12);
        let s = sites(&mut r, &poly, 40, 0.005);
        let first = build(&poly, &s, 0).unwrap().standard_triangles();
        for seed in 1..10 {
            assert_eq!(build(&poly, &s, seed).unwrap().standard_triangles(), first);
        }
    }
}

#[test]
fn incremental_insertion_matches_rebuild() {
    let mut r = rng(9);
    for _ in 0..20 {
        let poly = some_polygon(&mut r, 10);
        let mut s = sites(&mut r, &poly, 25, 0.01);
        s.shuffle(&mut r);
        let mut t = build(&poly, &s[..3], 0).unwrap();
        for (k, &z) in s.iter().enumerate().skip(3) {
            t.insert(z).unwrap();
            assert!(t.validate().is_empty());
            assert_eq!(
                t.standard_triangles(),
                build(&poly, &s[..=k], 5).unwrap().standard_triangles()
            );
        }
    }
}

#[test]
fn insertion_deep_inside_a_triangle_adds_three_edges() {
    let mut r = rng(10);
    let mut done = 0;
    for _ in 0..30 {
        let poly = some_polygon(&mut r, 8);
        let s = sites(&mut r, &poly, 20, 0.02);
        let t = build(&poly, &s, 0).unwrap();
        let tris = t.standard_triangles();
        for tri in &tris {
            // Triangles with three standard neighbours.
            let inner = (0..3).all(|i| {
                let (a, b) = (tri[i], tri[(i + 1) % 3]);
                tris.iter().filter(|o| o.contains(&a) && o.contains(&b)).count() == 2
            });
            if !inner {
                continue;
            }
            let [a, b, c] = tri.map(|i| s[i]);
            let z = (a + b + c) * (1.0 / 3.0);
            let mut u = t.clone();
            let id = u.insert(z).unwrap();
            let mut want = tris.clone();
            want.remove(tri);
            for mut e in [[tri[0], tri[1], id], [tri[1], tri[2], id], [tri[0], tri[2], id]] {
                e.sort_unstable();
                want.insert(e);
            }
            // Only cases where the new site destroys nothing but its own
            // triangle, judged by a rebuild.
            let mut full = s.clone();
            full.push(z);
            if build(&poly, &full, 3).unwrap().standard_triangles() != want {
                continue;
            }
            assert_eq!(degree(&u, id), 3);
            assert_eq!(u.standard_triangles(), want);
            done += 1;
        }
    }
    assert!(done > 10, "only {done} cases");
}

#[test]
fn insertion_into_a_gap() {
    let sq = unit_square();
    let mut t = build(&sq, &[p(0.3, 0.5), p(0.7, 0.5)], 0).unwrap();
    let z = p(0.05, 0.5);
    assert_eq!(t.face(t.locate(z).unwrap()).kind, FaceKind::Gap);
    let id = t.insert(z).unwrap();
    assert_eq!(degree(&t, id), 1);
    assert_eq!(teeth_at(&t, id), 2);
    assert!(t.validate().is_empty());
}

#[test]
fn flip_around_a_small_quadrilateral() {
    let hex = hexagon();
    let quad = [p(0.1, 0.1), p(-0.1, 0.12), p(-0.09, -0.1), p(0.11, -0.08)];
    let want = brute_delaunay(&hex, &quad, 720);
    assert_eq!(want.len(), 2);
    for last in 0..4 {
        let first: Vec<Point2> = (0..4).filter(|&i| i != last).map(|i| quad[i]).collect();
        let mut t = build(&hex, &first, 0).unwrap();
        t.insert(quad[last]).unwrap();
        // Map indices back to the original order.
        let mut ids: Vec<usize> = (0..4).filter(|&i| i != last).collect();
        ids.push(last);
        let got: BTreeSet<[usize; 3]> = t
            .standard_triangles()
            .into_iter()
            .map(|tri| {
                let mut m = tri.map(|i| ids[i]);
                m.sort_unstable();
                m
            })
            .collect();
        assert_eq!(got, want, "inserting site {last} last");
    }
}

#[test]
fn mst_and_rng_are_delaunay_subgraphs() {
    let mut r = rng(11);
    for inst in 0..100 {
        let poly = some_polygon(&mut r, 10);
        let n = r.gen_range(3..=15);
        let s = sites(&mut r, &poly, n, 0.01);
        let dt = build(&poly, &s, inst).unwrap().site_edges();
        let (mst, rng_edges) = brute_mst_rng(&poly, &s);
        assert_eq!(mst.len(), n - 1);
        assert!(mst.is_subset(&rng_edges), "instance {inst}");
        assert!(
            rng_edges.is_subset(&dt),
            "instance {inst}: {:?}",
            rng_edges.difference(&dt).collect::<Vec<_>>()
        );
    }
}

fn complexity(t: &AugmentedTriangulation) -> usize {
    let faces: Vec<usize> = t.face_ids().collect();
    let mut edges = BTreeSet::new();
    let mut verts = BTreeSet::new();
    for &f in &faces {
        let v = t.face(f).vertices;
        for i in 0..3 {
            let (a, b) = (v[i], v[(i + 1) % 3]);
            edges.insert((a.min(b), a.max(b)));
            verts.insert(a);
        }
    }
    faces.len() + edges.len() + verts.len()
}

#[test]
fn size_is_linear() {
    let mut r = rng(12);
    for _ in 0..10 {
        let poly = some_polygon(&mut r, 40);
        let n = r.gen_range(10..=200);
        let s = sites(&mut r, &poly, n, 0.002);
        let t = build(&poly, &s, 1).unwrap();
        assert!(complexity(&t) <= 20 * n, "{} for n = {n}", complexity(&t));
    }
}

#[test]
fn local_and_global_checks_agree() {
    let mut r = rng(13);
    for inst in 0..40 {
        let poly = some_polygon(&mut r, 10);
        let n = r.gen_range(3..=12);
        let t = build(&poly, &sites(&mut r, &poly, n, 0.01), inst).unwrap();
        assert!(t.validate().is_empty());
        assert!(t.validate_global().is_empty());
    }
}

#[test]
fn sites_crowding_a_thin_domain() {
    let pts: Vec<Point2> = (0..24)
        .map(|i| {
            let th = std::f64::consts::TAU * i as f64 / 24.0;
            p(th.cos(), 0.08 * th.sin())
        })
        .collect();
    let thin = ConvexPolygon::new(&pts).unwrap();
    let mut r = rng(14);
    for seed in 0..10 {
        let s = sites(&mut r, &thin, 60, 1e-3);
        let t = build(&thin, &s, seed).unwrap();
        assert_eq!(t.validate(), Vec::<String>::new());
    }
}

/// Vertices of the region of face `f`, counterclockwise. Gaps follow the
/// polygon boundary from their first to their second boundary vertex.
fn region(t: &AugmentedTriangulation, f: usize) -> Vec<Point2> {
    let face = t.face(f);
    let pts: Vec<Point2> = face.vertices.iter().map(|&v| t.position(v)).collect();
    if face.kind != FaceKind::Gap {
        return pts;
    }
    let poly = t.polygon();
    let [_, VertexRef::Boundary(x), VertexRef::Boundary(y)] = face.vertices else {
        unreachable!()
    };
    let (bx, by) = (t.boundary_vertex(x).point, t.boundary_vertex(y).point);
    let mut out = vec![pts[0], pts[1]];
    let (first, n) = poly.vertices_between(bx.position(), by.position());
    out.extend((0..n).map(|k| poly.vertex(first + k)));
    out.push(pts[2]);
    out
}

fn inside(ring: &[Point2], z: Point2) -> bool {
    let mut c = false;
    for i in 0..ring.len() {
        let (a, b) = (ring[i], ring[(i + 1) % ring.len()]);
        if (a.y > z.y) != (b.y > z.y) && z.x < a.x + (z.y - a.y) * (b.x - a.x) / (b.y - a.y) {
            c = !c;
        }
    }
    c
}

#[test]
fn locate_matches_an_exhaustive_scan() {
    let mut r = rng(15);
    let mut queries = 0;
    while queries < 1000 {
        let poly = some_polygon(&mut r, 10);
        let t = build(&poly, &sites(&mut r, &poly, 15, 0.01), 0).unwrap();
        for _ in 0..100 {
            let z = interior_point(&mut r, &poly, 1e-6);
            let hits: Vec<usize> = t.face_ids().filter(|&f| inside(&region(&t, f), z)).collect();
            assert_eq!(hits.len(), 1, "faces {hits:?} contain {z:?}");
            assert_eq!(t.locate(z).unwrap(), hits[0]);
            queries += 1;
        }
    }
}

#[test]
fn voronoi_edges() {
    let sq = unit_square();
    let (a, b) = (p(0.3, 0.4), p(0.6, 0.7));
    let t = build(&sq, &[a, b], 0).unwrap();
    let lines = t.voronoi_edges_sampled(32);
    assert_eq!(lines.len(), 1);
    let (l, r) = bisector_endpoints(&sq, a, b).unwrap();
    let line = &lines[0];
    let ends = [line[0], *line.last().unwrap()];
    for e in [l.point.point, r.point.point] {
        assert!(ends.iter().any(|x| x.dist(e) <= 1e-7));
    }

    let mut rg = rng(16);
    for _ in 0..10 {
        let poly = some_polygon(&mut rg, 10);
        let s = sites(&mut rg, &poly, 12, 0.02);
        let t = build(&poly, &s, 0).unwrap();
        let centers: Vec<Point2> = t
            .faces_of_kind(FaceKind::Standard)
            .into_iter()
            .map(|f| t.face(f).circ.unwrap().center)
            .collect();
        let edges: Vec<(usize, usize)> = t.site_edges().into_iter().collect();
        let lines = t.voronoi_edges_sampled(16);
        assert_eq!(lines.len(), edges.len());
        for (&(i, j), line) in edges.iter().zip(&lines) {
            for &x in &line[1..line.len() - 1] {
                let g = hilbert_distance(&poly, s[i], x).unwrap() - hilbert_distance(&poly, s[j], x).unwrap();
                assert!(g.abs() <= 1e-9);
            }
            let (l, r) = bisector_endpoints(&poly, s[i], s[j]).unwrap();
            for e in [line[0], *line.last().unwrap()] {
                let known = centers
                    .iter()
                    .chain([&l.point.point, &r.point.point])
                    .any(|c| c.dist(e) <= 1e-7);
                assert!(known, "polyline end {e:?} is neither a circumcenter nor an endpoint");
            }
        }
    }
}

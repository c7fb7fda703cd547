#![allow(dead_code)]

use hilbert_core::{ConvexPolygon, Point2};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random strictly convex polygon with `m` vertices on an ellipse.
pub fn random_polygon(rng: &mut ChaCha8Rng, m: usize) -> ConvexPolygon {
    loop {
        let mut th: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
        th.sort_by(f64::total_cmp);
        let gaps_ok = (0..m).all(|i| {
            let next = if i + 1 == m {
                th[0] + std::f64::consts::TAU
            } else {
                th[i + 1]
            };
            next - th[i] > 0.25 / m as f64 && next - th[i] < std::f64::consts::PI * 0.9
        });
        if !gaps_ok {
            continue;
        }
        let (a, b) = (rng.gen_range(0.8..1.6), rng.gen_range(0.8..1.6));
        let pts: Vec<Point2> = th.iter().map(|t| Point2::new(a * t.cos(), b * t.sin())).collect();
        if let Ok(p) = ConvexPolygon::new(&pts) {
            return p;
        }
    }
}

/// One of: unit square, regular hexagon, random polygon with up to `max_m` vertices.
pub fn some_polygon(rng: &mut ChaCha8Rng, max_m: usize) -> ConvexPolygon {
    match rng.gen_range(0..3) {
        0 => ConvexPolygon::unit_square(),
        1 => ConvexPolygon::regular(6, Point2::new(0.0, 0.0), 1.0, rng.gen_range(0.0..1.0)).unwrap(),
        _ => {
            let m = rng.gen_range(3..=max_m.max(3));
            random_polygon(rng, m)
        }
    }
}

/// Uniform interior point keeping a relative margin from the boundary.
pub fn interior_point(rng: &mut ChaCha8Rng, poly: &ConvexPolygon, margin: f64) -> Point2 {
    let (lo, hi) = poly.bbox();
    loop {
        let p = Point2::new(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y));
        if poly.margin(p) > margin * poly.scale() {
            return p;
        }
    }
}

pub fn sites(rng: &mut ChaCha8Rng, poly: &ConvexPolygon, n: usize, margin: f64) -> Vec<Point2> {
    (0..n).map(|_| interior_point(rng, poly, margin)).collect()
}

pub fn seg_dist(z: Point2, a: Point2, b: Point2) -> f64 {
    let d = b - a;
    let l2 = d.dot(d);
    if l2 == 0.0 {
        return z.dist(a);
    }
    let t = ((z - a).dot(d) / l2).clamp(0.0, 1.0);
    z.dist(a + d * t)
}

/// Distance from `z` to the convex region bounded by the CCW ring.
pub fn region_dist(ring: &[Point2], z: Point2) -> f64 {
    let n = ring.len();
    let inside = (0..n).all(|i| (ring[(i + 1) % n] - ring[i]).cross(z - ring[i]) >= 0.0);
    if inside {
        return 0.0;
    }
    (0..n)
        .map(|i| seg_dist(z, ring[i], ring[(i + 1) % n]))
        .fold(f64::INFINITY, f64::min)
}

/// Hausdorff distance between two convex regions given by CCW rings.
pub fn hausdorff(a: &[Point2], b: &[Point2]) -> f64 {
    let ab = a.iter().map(|&z| region_dist(b, z)).fold(0.0, f64::max);
    let ba = b.iter().map(|&z| region_dist(a, z)).fold(0.0, f64::max);
    ab.max(ba)
}

pub fn unit_square() -> ConvexPolygon {
    ConvexPolygon::unit_square()
}

pub fn hexagon() -> ConvexPolygon {
    ConvexPolygon::regular(6, Point2::new(0.0, 0.0), 1.0, 0.0).unwrap()
}

pub fn p(x: f64, y: f64) -> Point2 {
    Point2::new(x, y)
}

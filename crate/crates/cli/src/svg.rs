//! Minimal SVG 1.1 writer. The polygon's bounding box is fitted into a
//! 1000 x 1000 view box with the y axis pointing up.

use std::fmt::Write;

use hilbert_core::delaunay::{FaceKind, VertexRef};
use hilbert_core::{AugmentedTriangulation, ConvexPolygon, Point2};

pub const VIEW: f64 = 1000.0;

pub struct Svg {
    lo: Point2,
    scale: f64,
    offset: Point2,
    body: String,
}

impl Svg {
    pub fn new(poly: &ConvexPolygon) -> Self {
        let (lo, hi) = poly.bbox();
        let (w, h) = (hi.x - lo.x, hi.y - lo.y);
        let scale = VIEW / w.max(h);
        let offset = Point2::new(0.5 * (VIEW - w * scale), 0.5 * (VIEW - h * scale));
        let mut svg = Svg {
            lo,
            scale,
            offset,
            body: String::new(),
        };
        svg.polygon(poly.vertices(), "domain", "none", "#000000");
        svg
    }

    fn map(&self, p: Point2) -> (f64, f64) {
        let x = self.offset.x + (p.x - self.lo.x) * self.scale;
        let y = VIEW - (self.offset.y + (p.y - self.lo.y) * self.scale);
        (x, y)
    }

    fn points_attr(&self, pts: &[Point2]) -> String {
        pts.iter()
            .map(|&p| {
                let (x, y) = self.map(p);
                format!("{x:.6},{y:.6}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn polygon(&mut self, pts: &[Point2], class: &str, fill: &str, stroke: &str) {
        let attr = self.points_attr(pts);
        let _ = writeln!(
            self.body,
            r#"<polygon class="{class}" points="{attr}" fill="{fill}" stroke="{stroke}" stroke-width="1.5"/>"#
        );
    }

    pub fn polyline(&mut self, pts: &[Point2], class: &str, stroke: &str) {
        let attr = self.points_attr(pts);
        let _ = writeln!(
            self.body,
            r#"<polyline class="{class}" points="{attr}" fill="none" stroke="{stroke}" stroke-width="2"/>"#
        );
    }

    pub fn dot(&mut self, p: Point2, class: &str, r: f64, fill: &str) {
        let (x, y) = self.map(p);
        let _ = writeln!(
            self.body,
            r#"<circle class="{class}" cx="{x:.6}" cy="{y:.6}" r="{r}" fill="{fill}"/>"#
        );
    }

    pub fn sites(&mut self, sites: &[Point2]) {
        for &s in sites {
            self.dot(s, "site", 4.0, "#000000");
        }
    }

    pub fn finish(self) -> String {
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
             <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{v}\" height=\"{v}\" viewBox=\"0 0 {v} {v}\">\n\
             {}</svg>\n",
            self.body,
            v = VIEW
        )
    }
}

/// Outline of a face. Gaps follow the boundary counterclockwise between
/// their two boundary vertices.
pub fn face_outline(t: &AugmentedTriangulation, f: usize) -> Vec<Point2> {
    let face = t.face(f);
    match face.kind {
        FaceKind::Standard | FaceKind::Tooth => face.vertices.iter().map(|&v| t.position(v)).collect(),
        FaceKind::Gap => {
            let poly = t.polygon();
            let (a, x, y) = t.gap_parts(f);
            let (bx, by) = (t.boundary_vertex(x).point, t.boundary_vertex(y).point);
            let mut out = vec![t.sites()[a], bx.point];
            let (first, count) = poly.vertices_between(bx.position(), by.position());
            out.extend((0..count).map(|k| poly.vertex((first + k) % poly.m())));
            if by.point != bx.point {
                out.push(by.point);
            }
            out
        }
    }
}

pub fn triangulation(t: &AugmentedTriangulation) -> String {
    let mut svg = Svg::new(t.polygon());
    for kind in [FaceKind::Gap, FaceKind::Tooth, FaceKind::Standard] {
        for f in t.faces_of_kind(kind) {
            let pts = face_outline(t, f);
            match kind {
                FaceKind::Standard => svg.polygon(&pts, "face standard", "#9ecae1", "#08519c"),
                FaceKind::Tooth => svg.polygon(&pts, "face tooth", "#fdd0a2", "#a63603"),
                FaceKind::Gap => svg.polygon(&pts, "face gap", "none", "#636363"),
            }
        }
    }
    for f in t.faces_of_kind(FaceKind::Tooth) {
        let v = t.face(f).vertices[2];
        if let VertexRef::Boundary(_) = v {
            svg.dot(t.position(v), "boundary-vertex", 3.0, "#a63603");
        }
    }
    svg.sites(t.sites());
    svg.finish()
}

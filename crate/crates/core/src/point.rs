//! Plane points and the handful of vector operations the rest of the crate uses.

use std::ops::{Add, Mul, Neg, Sub};

/// A point (or vector) in the plane.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    pub fn normalized(self) -> Point2 {
        let n = self.norm();
        Point2::new(self.x / n, self.y / n)
    }

    /// Counterclockwise rotation by 90 degrees.
    pub fn perp(self) -> Point2 {
        Point2::new(-self.y, self.x)
    }

    pub fn lerp(self, o: Point2, t: f64) -> Point2 {
        Point2::new(self.x + (o.x - self.x) * t, self.y + (o.y - self.y) * t)
    }

    pub fn midpoint(self, o: Point2) -> Point2 {
        self.lerp(o, 0.5)
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

impl From<(f64, f64)> for Point2 {
    fn from((x, y): (f64, f64)) -> Self {
        Point2::new(x, y)
    }
}

impl From<[f64; 2]> for Point2 {
    fn from([x, y]: [f64; 2]) -> Self {
        Point2::new(x, y)
    }
}

/// Twice the signed area of triangle `abc`; positive when `abc` turns left.
pub fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    (b - a).cross(c - a)
}

/// Intersection of the lines `a + s*da` and `b + t*db`, returned as the
/// parameter `s` along the first line. `None` when the lines are parallel.
pub fn line_intersection_param(a: Point2, da: Point2, b: Point2, db: Point2) -> Option<f64> {
    let den = da.cross(db);
    if den == 0.0 || !den.is_finite() {
        return None;
    }
    Some((b - a).cross(db) / den)
}

/// Intersection point of line `(a1, a2)` with line `(b1, b2)`.
pub fn line_line(a1: Point2, a2: Point2, b1: Point2, b2: Point2) -> Option<Point2> {
    let da = a2 - a1;
    let s = line_intersection_param(a1, da, b1, b2 - b1)?;
    Some(a1 + da * s)
}

/// Angle of `v` measured counterclockwise from `from`, in `[0, 2pi)`.
pub fn ccw_angle(from: Point2, v: Point2) -> f64 {
    let a = from.cross(v).atan2(from.dot(v));
    if a < 0.0 {
        a + std::f64::consts::TAU
    } else {
        a
    }
}

/// An oriented line `{z : normal . z = offset}` with a unit normal; `eval` is
/// the signed distance, positive on the side the normal points to.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Line {
    pub normal: Point2,
    pub offset: f64,
}

impl Line {
    /// Line through `a` and `b` whose positive side is to the left of `a -> b`.
    pub fn through(a: Point2, b: Point2) -> Line {
        let normal = (b - a).perp().normalized();
        Line {
            normal,
            offset: normal.dot(a),
        }
    }

    pub fn eval(&self, z: Point2) -> f64 {
        self.normal.dot(z) - self.offset
    }
}

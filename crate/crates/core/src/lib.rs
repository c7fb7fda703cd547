//! Geometry in the Hilbert metric of a convex polygon: distances, balls,
//! bisectors, circumcircles, Delaunay triangulations and hulls.

pub mod bisector;
pub mod circumcircle;
pub mod delaunay;
pub mod error;
pub mod hull;
pub mod metric;
pub mod oracle;
pub mod point;
pub mod polygon;
pub mod tolerance;

pub use delaunay::{build, AugmentedTriangulation};
pub use error::{Error, Result};
pub use hull::{hilbert_hull, hull_from_triangulation, HullSequence};
pub use metric::{
    ball_at_infinity, hilbert_ball, hilbert_distance, min_empty_ball_at_infinity, BallAtInfinity, HilbertBall, Support,
};
pub use point::{orient, Point2};
pub use polygon::{make_polygon, BoundaryPoint, Chord, ConvexPolygon, SupportingLine};

use thiserror::Error;

/// Everything that can go wrong in the geometric kernel and the triangulation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("polygon needs at least three vertices, got {0}")]
    FewerThanThreeVertices(usize),
    #[error("polygon is not strictly convex at vertex {0}")]
    NotStrictlyConvex(usize),
    #[error("polygon has duplicate vertex {0}")]
    DuplicateVertex(usize),
    #[error("non-finite coordinate in input")]
    NonFinite,
    #[error("point ({0}, {1}) is not in the interior of the domain")]
    PointNotInterior(f64, f64),
    #[error("radius must be positive, got {0}")]
    NonpositiveRadius(f64),
    #[error("direction does not point into the domain")]
    DirectionNotInward,
    #[error("zero direction vector")]
    ZeroDirection,
    #[error("site set is empty")]
    EmptySiteSet,
    #[error("sites coincide")]
    CoincidentSites,
    #[error("degenerate (collinear or coincident) triple")]
    DegenerateTriple,
    #[error("search exceeded its probe budget of {0}")]
    SearchDidNotConverge(usize),
    #[error("sites {0} and {1} coincide")]
    DuplicateSites(usize, usize),
    #[error("need at least {needed} sites, got {got}")]
    TooFewSites { needed: usize, got: usize },
    #[error("sites are not in general position near ({0}, {1})")]
    GeneralPositionViolation(f64, f64),
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

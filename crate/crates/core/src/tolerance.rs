//! Numerical tolerances. Both defaults can be overridden with the
//! `HILBERT_EPS` environment variable (read once, on first use).

use std::sync::OnceLock;

pub const DEFAULT_EPS_GEOM: f64 = 1e-9;
pub const DEFAULT_EPS_DIST: f64 = 1e-9;

/// Points this close (relative to the domain diameter) to the boundary are
/// treated as lying on it for distance computations.
pub const BOUNDARY_GUARD: f64 = 1e-12;

/// Normalized signed-area threshold below which a triple counts as collinear.
pub const COLLINEAR_AREA: f64 = 1e-12;

#[derive(Clone, Copy, Debug)]
pub struct Tolerances {
    pub geom: f64,
    pub dist: f64,
}

static TOLERANCES: OnceLock<Tolerances> = OnceLock::new();

pub fn tolerances() -> Tolerances {
    *TOLERANCES.get_or_init(|| {
        let over = std::env::var("HILBERT_EPS")
            .ok()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .filter(|e| e.is_finite() && *e > 0.0);
        match over {
            Some(e) => Tolerances { geom: e, dist: e },
            None => Tolerances {
                geom: DEFAULT_EPS_GEOM,
                dist: DEFAULT_EPS_DIST,
            },
        }
    })
}

pub fn eps_geom() -> f64 {
    tolerances().geom
}

pub fn eps_dist() -> f64 {
    tolerances().dist
}

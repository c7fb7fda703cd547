//! Command-line front end for `hilbert-core`: JSON scenes in, JSON and SVG out.

pub mod app;
pub mod bench;
pub mod commands;
pub mod error;
pub mod files;
pub mod scene;
pub mod svg;

pub use error::{CliError, CliResult};
pub use files::TriangulationFile;
pub use scene::{Scene, SceneFile};

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::bench::{self, BenchConfig};
use crate::commands;
use crate::error::{CliError, CliResult};
use crate::scene::read_scene;

#[derive(Debug, Parser)]
#[command(
    name = "hilbert",
    about = "Delaunay triangulations and hulls in the Hilbert metric of a convex polygon"
)]
pub struct Cli {
    /// Relative geometric tolerance; overrides HILBERT_EPS.
    #[arg(long, global = true)]
    pub eps: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the Hilbert distance between two sites.
    Distance { scene: PathBuf, i: usize, j: usize },
    /// Render the ball of radius RHO around site I.
    Ball {
        scene: PathBuf,
        i: usize,
        rho: f64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Render the bisector of sites I and J with its endpoints.
    Bisector {
        scene: PathBuf,
        i: usize,
        j: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 256)]
        samples: usize,
    },
    /// Print the circumcircle of sites I, J and K, or why there is none.
    Circumcircle {
        scene: PathBuf,
        i: usize,
        j: usize,
        k: usize,
    },
    /// Build the augmented Delaunay triangulation.
    Delaunay {
        scene: PathBuf,
        /// Triangulation JSON; standard output when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Insertion-order seed; defaults to the scene's seed, then 0.
        #[arg(long)]
        seed: Option<u64>,
        /// Check all invariants and fail if any is violated.
        #[arg(long)]
        validate: bool,
    },
    /// Print the Hilbert hull as a closed cycle of sites with witnesses.
    Hull {
        scene: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Render the Voronoi diagram, sampled along each edge.
    Voronoi {
        scene: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 32)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Time triangulation builds on random scenes in regular polygons.
    Bench {
        /// Site counts, comma separated.
        #[arg(long, value_delimiter = ',', num_args = 1.., default_value = "1000,10000")]
        n: Vec<usize>,
        /// Polygon sizes, comma separated.
        #[arg(long, value_delimiter = ',', num_args = 1.., default_value = "64")]
        m: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(CliError::from),
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        Command::Distance { scene, i, j } => emit(out, None, &commands::distance(&read_scene(scene)?, *i, *j)?),
        Command::Ball { scene, i, rho, out: o } => {
            emit(out, o.as_deref(), &commands::ball(&read_scene(scene)?, *i, *rho)?)
        }
        Command::Bisector {
            scene,
            i,
            j,
            out: o,
            samples,
        } => emit(
            out,
            o.as_deref(),
            &commands::bisector(&read_scene(scene)?, *i, *j, *samples)?,
        ),
        Command::Circumcircle { scene, i, j, k } => emit(
            out,
            None,
            &commands::circumcircle_json(&read_scene(scene)?, *i, *j, *k)?,
        ),
        Command::Delaunay {
            scene,
            out: o,
            svg,
            seed,
            validate,
        } => {
            let scene = read_scene(scene)?;
            let seed = seed.or(scene.seed).unwrap_or(0);
            let (json, picture) = commands::delaunay(&scene, seed, *validate, svg.is_some())?;
            if let (Some(path), Some(picture)) = (svg, picture) {
                emit(out, Some(path), &picture)?;
            }
            emit(out, o.as_deref(), &json)
        }
        Command::Hull { scene, out: o } => emit(out, o.as_deref(), &commands::hull(&read_scene(scene)?)?),
        Command::Voronoi {
            scene,
            out: o,
            samples,
            seed,
        } => {
            let scene = read_scene(scene)?;
            let seed = seed.or(scene.seed).unwrap_or(0);
            emit(out, o.as_deref(), &commands::voronoi(&scene, seed, *samples)?)
        }
        Command::Bench {
            n,
            m,
            trials,
            seed,
            json,
        } => {
            if n.iter().chain(m).any(|&v| v == 0) || m.iter().any(|&v| v < 3) || n.iter().any(|&v| v < 2) {
                return Err(CliError::Argument("need n >= 2 and m >= 3".into()));
            }
            let report = bench::run(&BenchConfig {
                ns: n.clone(),
                ms: m.clone(),
                trials: *trials,
                seed: *seed,
            })?;
            let text = if *json {
                serde_json::to_string_pretty(&report)? + "\n"
            } else {
                report.to_text()
            };
            emit(out, None, &text)
        }
    }
}

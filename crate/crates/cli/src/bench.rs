use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::commands::triangulate;
use crate::error::CliResult;
use crate::files::TriangulationFile;
use crate::scene::random_scene;

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub ns: Vec<usize>,
    pub ms: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchTrial {
    pub n: usize,
    pub m: usize,
    pub trial: usize,
    pub seconds: f64,
    /// SHA-256 of the triangulation JSON.
    pub hash: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchReport {
    pub trials: Vec<BenchTrial>,
    /// Least-squares slope of log(time) against log(n), at the first m.
    pub slope_n: Option<f64>,
    /// Same against log(n ln n).
    pub slope_n_log_n: Option<f64>,
    /// Slope of log(time) against log(m), at the first n.
    pub slope_m: Option<f64>,
}

fn trial_seed(seed: u64, n: usize, m: usize, trial: usize) -> u64 {
    let mut h = Sha256::new();
    for v in [seed, n as u64, m as u64, trial as u64] {
        h.update(v.to_le_bytes());
    }
    u64::from_le_bytes(h.finalize()[..8].try_into().expect("8 bytes"))
}

pub fn fit_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

pub fn run(cfg: &BenchConfig) -> CliResult<BenchReport> {
    let mut trials = Vec::new();
    for &m in &cfg.ms {
        for &n in &cfg.ns {
            for trial in 0..cfg.trials.max(1) {
                let s = trial_seed(cfg.seed, n, m, trial);
                let scene = random_scene(&mut ChaCha8Rng::seed_from_u64(s), m, n)?;
                let start = Instant::now();
                let t = triangulate(&scene, s, false)?;
                let seconds = start.elapsed().as_secs_f64();
                let json = TriangulationFile::from_triangulation(&t, &scene.sites, s).to_json();
                trials.push(BenchTrial {
                    n,
                    m,
                    trial,
                    seconds,
                    hash: hex::encode(Sha256::digest(json.as_bytes())),
                });
            }
        }
    }
    let med = |n: usize, m: usize| {
        median(
            trials
                .iter()
                .filter(|t| t.n == n && t.m == m)
                .map(|t| t.seconds)
                .collect(),
        )
    };
    let fit = |xs: Vec<(f64, f64)>| fit_slope(&xs);
    let (m0, n0) = (cfg.ms[0], cfg.ns[0]);
    let slope_n = fit(cfg.ns.iter().map(|&n| ((n as f64).ln(), med(n, m0).ln())).collect());
    let slope_n_log_n = fit(cfg
        .ns
        .iter()
        .map(|&n| ((n as f64 * (n as f64).ln()).ln(), med(n, m0).ln()))
        .collect());
    let slope_m = fit(cfg.ms.iter().map(|&m| ((m as f64).ln(), med(n0, m).ln())).collect());
    Ok(BenchReport {
        trials,
        slope_n,
        slope_n_log_n,
        slope_m,
    })
}

impl BenchReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for t in &self.trials {
            s += &format!(
                "n={} m={} trial={} time={:.6}s hash={}\n",
                t.n, t.m, t.trial, t.seconds, t.hash
            );
        }
        let show = |v: Option<f64>| v.map_or("n/a".to_string(), |x| format!("{x:.3}"));
        s += &format!("slope vs n: {}\n", show(self.slope_n));
        s += &format!("slope vs n log n: {}\n", show(self.slope_n_log_n));
        s += &format!("slope vs m: {}\n", show(self.slope_m));
        s
    }
}

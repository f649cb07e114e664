//! Shared fixtures for the kernel benchmarks.

use hopfield::{DiamagneticRule, FilterConfig, ModelParams};

/// Resonant TRK parameters at coupling `g`.
pub fn trk(g: f64) -> ModelParams {
    DiamagneticRule::Trk.params(1.0, 1.0, g).expect("valid coupling")
}

/// Figure filter on a coarser grid of `points` frequencies over [0, 3].
pub fn filter(points: usize) -> FilterConfig {
    FilterConfig::uniform(0.05, 200.0, 0.0, 3.0, points).expect("valid filter")
}

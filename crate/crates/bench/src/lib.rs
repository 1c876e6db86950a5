//! Shared fixtures for the criterion benches.

use pwave_core::families::ManifoldSpec;
use pwave_core::sampling;

pub const CONFIGS: [(&str, &str); 4] = [
    ("M1", r#"{"family":"M1","f":"y^2+exp(y)/4"}"#),
    ("M2", r#"{"family":"M2","p":2,"psi":["x1^2*x2+1","x1*x2","x2^3-x1"]}"#),
    ("M3", r#"{"family":"M3","p":3,"f":"x1^2+x2^2+x3^2+x1^3"}"#),
    ("M6", r#"{"family":"M6","s":3,"f":["u^4","-(u^4)/6","sin(u)"]}"#),
];

pub fn specs() -> Vec<(&'static str, ManifoldSpec)> {
    CONFIGS
        .iter()
        .map(|(name, json)| (*name, ManifoldSpec::from_json(json).expect("fixture config parses")))
        .collect()
}

/// A fixed pseudo-random point in `[-1, 1]^dim`.
pub fn point(dim: usize, seed: u64) -> Vec<f64> {
    sampling::point(&mut sampling::rng(seed), dim, 1.0)
}

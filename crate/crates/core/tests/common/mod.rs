#![allow(dead_code)]

use pwave_core::families::ManifoldSpec;

/// One representative instance per family with non-trivial parameters.
pub const FAMILY_CONFIGS: [(&str, &str); 7] = [
    ("M0", r#"{"family":"M0","f":["y^3","sin(y)","exp(y/2)"]}"#),
    ("M1", r#"{"family":"M1","f":"y^2+exp(y)/4"}"#),
    ("M2", r#"{"family":"M2","p":2,"psi":["x1^2*x2+1","x1*x2","x2^3-x1"]}"#),
    ("M3", r#"{"family":"M3","p":3,"f":"x1^2+x2^2+x3^2+x1^3"}"#),
    ("M4", r#"{"family":"M4","f":"exp(y)+y^3"}"#),
    ("M5", r#"{"family":"M5","p":1,"f":"exp(y)+y^5/10"}"#),
    ("M6", r#"{"family":"M6","s":3,"f":["u^4","-(u^4)/6","sin(u)"]}"#),
];

pub fn families() -> Vec<(&'static str, ManifoldSpec)> {
    FAMILY_CONFIGS
        .iter()
        .map(|(name, json)| (*name, ManifoldSpec::from_json(json).unwrap()))
        .collect()
}

pub fn spec(json: &str) -> ManifoldSpec {
    ManifoldSpec::from_json(json).unwrap()
}

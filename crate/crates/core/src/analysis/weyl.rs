//! Weyl contraction schemas: products of `∇^ν R` factors whose index labels
//! are paired and contracted with the inverse metric.
//!
//! Text form: factors separated by `;`, each `R[ν](a,b,c,d|j1,...,jν)`.
//! Built-in names: `tau`, `rho2`, `R2`, `gradR2`.

use std::collections::HashMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::families::ManifoldSpec;
use crate::geometry::{nabla_r, CurvatureJet};
use crate::tensor::contract;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaFactor {
    pub order: usize,
    /// `4 + order` labels: the curvature slots, then the derivative slots.
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylSchema {
    pub factors: Vec<SchemaFactor>,
}

impl WeylSchema {
    pub fn new(factors: Vec<SchemaFactor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Schema("schema has no factors".into()));
        }
        let mut counts: HashMap<&str, usize> = HashMap::new();
        for f in &factors {
            if f.labels.len() != 4 + f.order {
                return Err(Error::Schema(format!(
                    "factor of order {} needs {} labels, got {}",
                    f.order,
                    4 + f.order,
                    f.labels.len()
                )));
            }
            for l in &f.labels {
                *counts.entry(l).or_default() += 1;
            }
        }
        let mut bad: Vec<_> = counts.into_iter().filter(|(_, c)| *c != 2).collect();
        bad.sort();
        if let Some((l, c)) = bad.first() {
            return Err(Error::Schema(format!("label `{l}` appears {c} times")));
        }
        Ok(Self { factors })
    }

    /// Parses the text form or one of the built-in names.
    pub fn parse(src: &str) -> Result<Self> {
        let src = match src.trim() {
            "tau" => "R[0](a,b,b,a)",
            "rho2" => "R[0](a,b,c,a);R[0](d,b,c,d)",
            "R2" => "R[0](a,b,c,d);R[0](a,b,c,d)",
            "gradR2" => "R[1](a,b,c,d|e);R[1](a,b,c,d|e)",
            other => other,
        };
        let factors = src.split(';').map(parse_factor).collect::<Result<Vec<_>>>()?;
        Self::new(factors)
    }

    pub fn max_order(&self) -> usize {
        self.factors.iter().map(|f| f.order).max().unwrap_or(0)
    }
}

fn parse_factor(src: &str) -> Result<SchemaFactor> {
    let s = src.trim();
    let bad = |why: &str| Error::Schema(format!("bad factor `{s}`: {why}"));
    let rest = s.strip_prefix("R[").ok_or_else(|| bad("expected `R[`"))?;
    let (order, rest) = rest.split_once(']').ok_or_else(|| bad("missing `]`"))?;
    let order: usize = order.trim().parse().map_err(|_| bad("derivative order is not an integer"))?;
    let inner = rest
        .trim()
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| bad("expected `(...)`"))?;
    let (curv, derivs) = match inner.split_once('|') {
        Some((a, b)) => (a, Some(b)),
        None => (inner, None),
    };
    let split = |t: &str| -> Result<Vec<String>> {
        t.split(',')
            .map(|l| {
                let l = l.trim();
                if l.is_empty() || !l.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    Err(bad(&format!("invalid label `{l}`")))
                } else {
                    Ok(l.to_string())
                }
            })
            .collect()
    };
    let mut labels = split(curv)?;
    if labels.len() != 4 {
        return Err(bad("curvature part needs four labels"));
    }
    let d = match derivs {
        Some(d) if !d.trim().is_empty() => split(d)?,
        _ => Vec::new(),
    };
    if d.len() != order {
        return Err(bad(&format!("order {order} needs {order} derivative labels, got {}", d.len())));
    }
    labels.extend(d);
    Ok(SchemaFactor { order, labels })
}

impl fmt::Display for WeylSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, fac) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, ";")?;
            }
            write!(f, "R[{}]({}", fac.order, fac.labels[..4].join(","))?;
            if fac.order > 0 {
                write!(f, "|{}", fac.labels[4..].join(","))?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Full contraction of the schema's factors from `jet`, one `g^{ij}` per
/// label pair.
pub fn weyl_eval_jet(jet: &CurvatureJet, schema: &WeylSchema) -> Result<f64> {
    let tensors = schema
        .factors
        .iter()
        .map(|f| jet.nabla(f.order))
        .collect::<Result<Vec<_>>>()?;
    let labels: Vec<Vec<&str>> = schema
        .factors
        .iter()
        .map(|f| f.labels.iter().map(String::as_str).collect())
        .collect();
    contract(&tensors, &labels, &jet.metric)
}

pub fn weyl_eval(spec: &ManifoldSpec, point: &[f64], schema: &WeylSchema) -> Result<f64> {
    let jet = nabla_r(spec, point, schema.max_order())?;
    weyl_eval_jet(&jet, schema)
}

/// Random well-formed schema with `1..=max_factors` factors of order
/// `0..=max_order` and a uniformly random pairing of all slots.
pub fn random_schema(rng: &mut impl Rng, max_factors: usize, max_order: usize) -> WeylSchema {
    let nf = rng.random_range(1..=max_factors.max(1));
    let mut orders: Vec<usize> = (0..nf).map(|_| rng.random_range(0..=max_order)).collect();
    let total: usize = orders.iter().map(|o| o + 4).sum();
    if total % 2 == 1 {
        // Fix the parity on one factor while staying within the order bound.
        let k = rng.random_range(0..nf);
        orders[k] = if orders[k] < max_order { orders[k] + 1 } else { orders[k] - 1 };
    }
    let slots: usize = orders.iter().map(|o| o + 4).sum();
    let mut names: Vec<String> = (0..slots / 2).flat_map(|i| [format!("i{i}"), format!("i{i}")]).collect();
    names.shuffle(rng);
    let mut it = names.into_iter();
    let factors = orders
        .into_iter()
        .map(|order| SchemaFactor {
            order,
            labels: it.by_ref().take(4 + order).collect(),
        })
        .collect();
    WeylSchema::new(factors).expect("random pairing is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{fd_pipeline, sphere_metric};
    use crate::sampling;

    #[test]
    fn parses_builtins_and_text() {
        let s = WeylSchema::parse("R[1](a,b,c,d|e);R[1](a,b,c,d|e)").unwrap();
        assert_eq!(s, WeylSchema::parse("gradR2").unwrap());
        assert_eq!(s.max_order(), 1);
        assert_eq!(WeylSchema::parse(&s.to_string()).unwrap(), s);
        assert_eq!(WeylSchema::parse("tau").unwrap().factors.len(), 1);
    }

    #[test]
    fn rejects_malformed_schemas() {
        for bad in ["R[0](a,b,c,d)", "R[0](a,a,a,b);R[0](b,c,c,d)", "R[1](a,b,b,a)", "R[0](a,b,b)", "S[0](a,b,b,a)", ""] {
            assert!(matches!(WeylSchema::parse(bad), Err(Error::Schema(_))), "{bad}");
        }
    }

    #[test]
    fn sphere_scalar_curvature() {
        let jet = fd_pipeline(sphere_metric, &[0.8, 2.0], 0).unwrap();
        let tau = weyl_eval_jet(&jet, &WeylSchema::parse("tau").unwrap()).unwrap();
        assert!((tau - 2.0).abs() < 1e-5);
        // |R|² = 4 / ... on the unit 2-sphere: R_{1212}² counted four times
        let r2 = weyl_eval_jet(&jet, &WeylSchema::parse("R2").unwrap()).unwrap();
        assert!((r2 - 4.0).abs() < 1e-5);
    }

    #[test]
    fn random_schemas_are_well_formed() {
        let mut rng = sampling::rng(8);
        for _ in 0..50 {
            let s = random_schema(&mut rng, 3, 2);
            assert!(s.factors.len() <= 3 && s.max_order() <= 2);
            assert_eq!(WeylSchema::parse(&s.to_string()).unwrap(), s);
        }
    }
}

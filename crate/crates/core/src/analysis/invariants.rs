//! Closed-form isometry invariants and homogeneity probes.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::families::{FamilyData, ManifoldSpec};
use crate::geometry::nabla_r;
use crate::tensor::{contract, MetricAtPoint, Tensor};

/// `|f'| / sqrt(1 + f'^2)` at the point's `y` coordinate.
pub fn alpha16(spec: &ManifoldSpec, point: &[f64]) -> Result<f64> {
    let FamilyData::M1 { f } = spec.data() else {
        return Err(Error::Config(format!("alpha16 needs an M1 spec, got {}", spec.family())));
    };
    spec.check_point(point)?;
    let d = f.jet(point[1], 1)?.derivative(1);
    Ok(d.abs() / (1.0 + d * d).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatioKind {
    /// `f^{(p+2)} (f'')^{p-1} / (f''')^p`.
    M4,
    /// The printed form `f^{(p+2)} (f'')^{p-1} (f''')^{-p}` taken literally as
    /// a denominator of `(f''')^{-p}`, i.e. `f^{(p+2)} (f'')^{p-1} (f''')^p`.
    M4Literal,
    /// `f^{(k+p+3)} (f^{(p+3)})^{k-1} / (f^{(p+4)})^k`.
    M5,
}

/// Derivative-ratio invariants of `M4` (index `p >= 2`) and `M5` (family
/// parameter `p`, index `k >= 2`) at `y`.
pub fn alpha_ratio(kind: RatioKind, f: &Expr, p: usize, k: usize, y: f64) -> Result<f64> {
    let ipow = |x: f64, n: usize| x.powi(n as i32);
    match kind {
        RatioKind::M4 | RatioKind::M4Literal => {
            if p < 2 {
                return Err(Error::Domain(format!("alpha4 needs p >= 2, got {p}")));
            }
            let d = f.jet(y, p + 2)?.derivatives();
            if d[3] == 0.0 {
                return Err(Error::Domain(format!("f''' vanishes at y = {y}")));
            }
            let num = d[p + 2] * ipow(d[2], p - 1);
            Ok(if kind == RatioKind::M4 {
                num / ipow(d[3], p)
            } else {
                num * ipow(d[3], p)
            })
        }
        RatioKind::M5 => {
            if k < 2 {
                return Err(Error::Domain(format!("alpha5 needs k >= 2, got {k}")));
            }
            let d = f.jet(y, k + p + 3)?.derivatives();
            if d[p + 4] == 0.0 {
                return Err(Error::Domain(format!("f^({}) vanishes at y = {y}", p + 4)));
            }
            Ok(d[k + p + 3] * ipow(d[p + 3], k - 1) / ipow(d[p + 4], k))
        }
    }
}

/// `H^{i1j1}...H^{i5j5} ∇R(i1..i4;i5) ∇R(j1..j4;j5)` over the `x` block of
/// an `M3` spec, `H` the Hessian of `f` at the point.
pub fn alpha3(spec: &ManifoldSpec, point: &[f64]) -> Result<f64> {
    let FamilyData::M3 { p, f } = spec.data() else {
        return Err(Error::Config(format!("alpha3 needs an M3 spec, got {}", spec.family())));
    };
    let p = *p;
    spec.check_point(point)?;
    let h = f.hessian();
    let hm = DMatrix::from_fn(p, p, |i, j| h[i][j].eval(&point[..p]));
    let eig = hm.clone().symmetric_eigen().eigenvalues;
    let definite = eig.iter().all(|e| *e > 0.0) || eig.iter().all(|e| *e < 0.0);
    if !definite || eig.iter().any(|e| e.abs() < 1e-12) {
        return Err(Error::Domain(format!("Hessian of f is not definite at the point (eigenvalues {eig:?})")));
    }
    let jet = nabla_r(spec, point, 1)?;
    let nr = jet.nabla(1)?;
    let block = Tensor::from_fn(p, 5, |ix| nr.get(ix));
    let hmetric = MetricAtPoint::new(hm)?;
    let labels = ["a", "b", "c", "d", "e"];
    contract(&[&block, &block], &[labels, labels].map(Vec::from), &hmetric)
}

/// `Σ_i (f_i'''(u_i) + 4 u_i)^2`.
pub fn alpha6(spec: &ManifoldSpec, point: &[f64]) -> Result<f64> {
    let FamilyData::M6 { f } = spec.data() else {
        return Err(Error::Config(format!("alpha6 needs an M6 spec, got {}", spec.family())));
    };
    spec.check_point(point)?;
    f.iter()
        .enumerate()
        .map(|(i, fi)| {
            let u = point[i];
            let d3 = fi.jet(u, 3)?.derivative(3);
            Ok((d3 + 4.0 * u).powi(2))
        })
        .sum()
}

/// Invariant selector for [`evaluate_invariant`] and [`homogeneity_probe`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvariantId {
    Alpha16,
    Alpha3,
    /// Index `p >= 2` of the `M4` ratio.
    Alpha4 { p: usize, literal: bool },
    /// Index `k >= 2` of the `M5` ratio.
    Alpha5 { k: usize },
    Alpha6,
}

impl InvariantId {
    /// Parses `alpha16`, `alpha3`, `alpha4` (p = 2), `alpha4:P`,
    /// `alpha4lit:P`, `alpha5` (k = 2), `alpha5:K`, `alpha6`.
    pub fn parse(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((a, b)) => (a, Some(b)),
            None => (s, None),
        };
        let num = |default: usize| -> Result<usize> {
            arg.map_or(Ok(default), |a| a.parse().map_err(|_| Error::Config(format!("bad invariant index in `{s}`"))))
        };
        Ok(match name {
            "alpha16" => InvariantId::Alpha16,
            "alpha3" => InvariantId::Alpha3,
            "alpha4" => InvariantId::Alpha4 { p: num(2)?, literal: false },
            "alpha4lit" => InvariantId::Alpha4 { p: num(2)?, literal: true },
            "alpha5" => InvariantId::Alpha5 { k: num(2)? },
            "alpha6" => InvariantId::Alpha6,
            _ => return Err(Error::Config(format!("unknown invariant `{s}`"))),
        })
    }

    pub fn name(&self) -> String {
        match self {
            InvariantId::Alpha16 => "alpha16".into(),
            InvariantId::Alpha3 => "alpha3".into(),
            InvariantId::Alpha4 { p, literal: false } => format!("alpha4:{p}"),
            InvariantId::Alpha4 { p, literal: true } => format!("alpha4lit:{p}"),
            InvariantId::Alpha5 { k } => format!("alpha5:{k}"),
            InvariantId::Alpha6 => "alpha6".into(),
        }
    }
}

/// Evaluates an invariant of the manifold's own family at a point.
pub fn evaluate_invariant(spec: &ManifoldSpec, id: InvariantId, point: &[f64]) -> Result<f64> {
    let mismatch = || Error::Config(format!("invariant {} does not apply to {}", id.name(), spec.family()));
    match (id, spec.data()) {
        (InvariantId::Alpha16, FamilyData::M1 { .. }) => alpha16(spec, point),
        (InvariantId::Alpha3, FamilyData::M3 { .. }) => alpha3(spec, point),
        (InvariantId::Alpha6, FamilyData::M6 { .. }) => alpha6(spec, point),
        (InvariantId::Alpha4 { p, literal }, FamilyData::M4 { f }) => {
            spec.check_point(point)?;
            let kind = if literal { RatioKind::M4Literal } else { RatioKind::M4 };
            alpha_ratio(kind, f, p, 0, point[1])
        }
        (InvariantId::Alpha5 { k }, FamilyData::M5 { p, f }) => {
            spec.check_point(point)?;
            alpha_ratio(RatioKind::M5, f, *p, k, point[1])
        }
        _ => Err(mismatch()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub values: Vec<f64>,
    pub spread: f64,
    /// A spread above `1e-6` certifies that the matching homogeneity level
    /// fails; a constant value certifies nothing.
    pub certifies_inhomogeneity: bool,
}

pub fn homogeneity_probe(spec: &ManifoldSpec, id: InvariantId, points: &[Vec<f64>]) -> Result<ProbeReport> {
    let values = points
        .iter()
        .map(|x| evaluate_invariant(spec, id, x))
        .collect::<Result<Vec<_>>>()?;
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let spread = if values.is_empty() { 0.0 } else { max - min };
    Ok(ProbeReport {
        values,
        spread,
        certifies_inhomogeneity: spread > 1e-6,
    })
}

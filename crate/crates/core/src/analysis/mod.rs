//! Curvature operators, scalar invariants and the isometry invariants that
//! are not of Weyl type.

mod invariants;
mod m1;
mod weyl;

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use rand::Rng;

pub use invariants::{
    alpha16, alpha3, alpha6, alpha_ratio, evaluate_invariant, homogeneity_probe, InvariantId, ProbeReport, RatioKind,
};
pub use m1::{alpha16_model, normalized_basis_m1, w_subspaces, NormalizedBasis, SubspaceSet};
pub use weyl::{random_schema, weyl_eval, weyl_eval_jet, SchemaFactor, WeylSchema};

use crate::error::{Error, Result};
use crate::families::ManifoldSpec;
use crate::geometry::{nabla_r, CurvatureJet};
use crate::sampling::{self, Causal};
use crate::tensor::{rank_sequence, Endo, Tensor, DEFAULT_RANK_TOL};

/// Matrix of `x ↦ w` from the bilinear data `B[w][a] = T(.., a, .., w)` by
/// raising the output slot: `A = g^{-1} B`.
fn raise_output(jet: &CurvatureJet, b: DMatrix<f64>) -> Endo {
    Endo::new(&jet.metric.ginv * b, jet.point.clone())
}

fn check_vec(jet: &CurvatureJet, v: &DVector<f64>) -> Result<()> {
    if v.len() != jet.dim() {
        return Err(Error::Dim(format!("vector has {} components, expected {}", v.len(), jet.dim())));
    }
    Ok(())
}

/// Sums `T(i_1..i_r) Π v_s` over the slots listed in `fixed`, leaving the
/// `free` slots (in order) as matrix indices `(free[1], free[0])`.
fn partial_contract(t: &Tensor, fixed: &[(usize, &DVector<f64>)], free: [usize; 2]) -> DMatrix<f64> {
    let m = t.dim();
    let mut out = DMatrix::zeros(m, m);
    for (ix, v) in t.nonzeros() {
        let mut w = v;
        for (slot, vec) in fixed {
            w *= vec[ix[*slot]];
            if w == 0.0 {
                break;
            }
        }
        if w != 0.0 {
            out[(ix[free[1]], ix[free[0]])] += w;
        }
    }
    out
}

/// Jacobi operator `J(ξ): x ↦ R(x, ξ)ξ`.
pub fn jacobi(jet: &CurvatureJet, xi: &DVector<f64>) -> Result<Endo> {
    check_vec(jet, xi)?;
    let b = partial_contract(jet.r(), &[(1, xi), (2, xi)], [0, 3]);
    Ok(raise_output(jet, b))
}

/// Szabó operator `S(ξ): x ↦ (∇_ξ R)(x, ξ)ξ`.
pub fn szabo(jet: &CurvatureJet, xi: &DVector<f64>) -> Result<Endo> {
    check_vec(jet, xi)?;
    let b = partial_contract(jet.nabla(1)?, &[(1, xi), (2, xi), (4, xi)], [0, 3]);
    Ok(raise_output(jet, b))
}

/// Skew-symmetric curvature operator `R(π): x ↦ R(e1, e2)x` of the plane
/// spanned by an orthonormal pair of the same causal type.
pub fn skew_op(jet: &CurvatureJet, e1: &DVector<f64>, e2: &DVector<f64>) -> Result<Endo> {
    check_vec(jet, e1)?;
    check_vec(jet, e2)?;
    let (n1, n2, c) = (jet.metric.inner(e1, e1), jet.metric.inner(e2, e2), jet.metric.inner(e1, e2));
    if (n1.abs() - 1.0).abs() > 1e-9 || (n2.abs() - 1.0).abs() > 1e-9 || c.abs() > 1e-9 {
        return Err(Error::Plane(format!("g(e1,e1) = {n1}, g(e2,e2) = {n2}, g(e1,e2) = {c}")));
    }
    if n1.signum() != n2.signum() {
        return Err(Error::Plane("the plane is neither spacelike nor timelike".into()));
    }
    let b = partial_contract(jet.r(), &[(0, e1), (1, e2)], [2, 3]);
    Ok(raise_output(jet, b))
}

/// `‖A^m‖∞ / max(1, ‖A‖∞^m)`; below `1e-8` means numerically nilpotent.
pub fn nilpotency_residual(a: &Endo) -> f64 {
    let m = a.dim() as i32;
    a.pow(m as u32).max_abs() / a.max_abs().powi(m).max(1.0)
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OperatorStats {
    pub max_residual: f64,
    /// Distinct rank sequences of powers with their multiplicities.
    pub rank_sequences: BTreeMap<Vec<usize>, usize>,
}

impl OperatorStats {
    fn record(&mut self, a: &Endo) {
        self.max_residual = self.max_residual.max(nilpotency_residual(a));
        *self.rank_sequences.entry(rank_sequence(a, DEFAULT_RANK_TOL)).or_default() += 1;
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct NilpotencyReport {
    pub samples: usize,
    pub jacobi: OperatorStats,
    pub szabo: OperatorStats,
    pub skew: OperatorStats,
}

impl NilpotencyReport {
    pub fn max_residual(&self) -> f64 {
        self.jacobi.max_residual.max(self.szabo.max_residual).max(self.skew.max_residual)
    }
}

/// Samples unit vectors `ξ` (either causal type) and admissible planes at
/// `point` and records nilpotency residuals of `J(ξ)`, `S(ξ)` and `R(π)`.
pub fn nilpotency_report(spec: &ManifoldSpec, point: &[f64], samples: usize, rng: &mut impl Rng) -> Result<NilpotencyReport> {
    let jet = nabla_r(spec, point, 1)?;
    nilpotency_report_jet(&jet, samples, rng)
}

pub fn nilpotency_report_jet(jet: &CurvatureJet, samples: usize, rng: &mut impl Rng) -> Result<NilpotencyReport> {
    let mut report = NilpotencyReport::default();
    let none = || Error::Model("no admissible unit vector found".into());
    for s in 0..samples {
        let xi = sampling::unit_vector(rng, &jet.metric, Causal::Any).ok_or_else(none)?;
        report.jacobi.record(&jacobi(jet, &xi)?);
        report.szabo.record(&szabo(jet, &xi)?);
        let kind = if s % 2 == 0 { Causal::Spacelike } else { Causal::Timelike };
        let (e1, e2) = sampling::plane(rng, &jet.metric, kind)
            .or_else(|| sampling::plane(rng, &jet.metric, Causal::Spacelike))
            .ok_or_else(none)?;
        report.skew.record(&skew_op(jet, &e1, &e2)?);
        report.samples += 1;
    }
    Ok(report)
}

/// Which operator a rank survey looks at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operator {
    Jacobi,
    Szabo,
    Skew,
}

/// Distinct rank sequences of an operator over sampled unit vectors (or
/// planes) of one causal type. Even-numbered samples are Gaussian, odd ones
/// lattice vectors from `{-1,0,1}^m`.
pub fn rank_survey(
    jet: &CurvatureJet,
    op: Operator,
    kind: Causal,
    samples: usize,
    rng: &mut impl Rng,
) -> Result<BTreeMap<Vec<usize>, usize>> {
    let mut out = BTreeMap::new();
    let none = || Error::Model(format!("no {kind:?} unit vector found"));
    for s in 0..samples {
        let a = match op {
            Operator::Skew => {
                let (e1, e2) = sampling::plane(rng, &jet.metric, kind).ok_or_else(none)?;
                skew_op(jet, &e1, &e2)?
            }
            _ => {
                let xi = if s % 2 == 0 {
                    sampling::unit_vector(rng, &jet.metric, kind)
                } else {
                    sampling::lattice_unit_vector(rng, &jet.metric, kind)
                }
                .ok_or_else(none)?;
                if op == Operator::Jacobi {
                    jacobi(jet, &xi)?
                } else {
                    szabo(jet, &xi)?
                }
            }
        };
        *out.entry(rank_sequence(&a, DEFAULT_RANK_TOL)).or_default() += 1;
    }
    Ok(out)
}

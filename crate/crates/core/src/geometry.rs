//! Curvature tensors and their covariant derivatives at a point.
//!
//! The closed-form path differentiates the Christoffel term lists exactly.
//! [`fd_pipeline`] recomputes the same objects from an arbitrary metric
//! function by finite differences and serves as the independent oracle.

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{Error, Result};
use crate::families::ManifoldSpec;
use crate::sampling;
use crate::tensor::{MetricAtPoint, Tensor, Variance};

/// Metric and curvature data at one point: `R, ∇R, ..., ∇^ν R`.
///
/// `tensors[i]` is fully lowered with rank `4 + i`. `mixed[i]` carries the
/// same data with the fourth slot contravariant, `R_{ijk}^l_{;j_1..j_i}`.
/// Derivative slots are appended, so `∇²R(..; a, b) = ∇_b(∇R)(..; a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureJet {
    pub point: Vec<f64>,
    pub metric: MetricAtPoint,
    pub tensors: Vec<Tensor>,
    pub mixed: Option<Vec<Tensor>>,
}

impl CurvatureJet {
    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    /// Highest derivative order held.
    pub fn order(&self) -> usize {
        self.tensors.len() - 1
    }

    pub fn r(&self) -> &Tensor {
        &self.tensors[0]
    }

    pub fn nabla(&self, order: usize) -> Result<&Tensor> {
        self.tensors.get(order).ok_or_else(|| {
            Error::Dim(format!("covariant derivative of order {order} requested, jet holds {}", self.order()))
        })
    }

    pub fn mixed(&self, order: usize) -> Result<&Tensor> {
        self.mixed
            .as_ref()
            .and_then(|m| m.get(order))
            .ok_or_else(|| Error::Model(format!("mixed curvature tensor of order {order} not available")))
    }

    /// Re-expresses the jet in the basis whose vectors are the columns of `basis`.
    pub fn change_basis(&self, basis: &DMatrix<f64>) -> Result<CurvatureJet> {
        let inv = basis
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Dim("basis change is singular".into()))?;
        let bt = basis.transpose();
        let metric = MetricAtPoint::new(&bt * &self.metric.g * basis)?;
        let tensors = self.tensors.iter().map(|t| t.pullback(basis)).collect();
        let mixed = self.mixed.as_ref().map(|ms| {
            ms.iter()
                .map(|t| {
                    t.variance().iter().enumerate().fold(t.clone(), |acc, (slot, v)| match v {
                        Variance::Covariant => acc.map_slot(slot, &bt),
                        Variance::Contravariant => acc.map_slot(slot, &inv),
                    })
                })
                .collect()
        });
        Ok(CurvatureJet {
            point: self.point.clone(),
            metric,
            tensors,
            mixed,
        })
    }
}

fn lower(mixed: &Tensor, metric: &MetricAtPoint) -> Tensor {
    let up = mixed
        .variance()
        .iter()
        .position(|v| *v == Variance::Contravariant)
        .expect("mixed tensor has a contravariant slot");
    let lowered = mixed.map_slot(up, &metric.g);
    let rank = lowered.rank();
    lowered
        .with_variance(vec![Variance::Covariant; rank])
        .expect("variance length matches rank")
}

/// Fully lowered `R(X,Y,Z,W) = g(R(X,Y)Z, W)` with
/// `R_{ijk}^l = ∂_iΓ_jk^l − ∂_jΓ_ik^l + Γ_in^l Γ_jk^n − Γ_jn^l Γ_ik^n`.
pub fn curvature_at(spec: &ManifoldSpec, point: &[f64]) -> Result<Tensor> {
    Ok(nabla_r(spec, point, 0)?.tensors.remove(0))
}

/// `R, ∇R, ..., ∇^order R` at `point`, lowered and mixed.
pub fn nabla_r(spec: &ManifoldSpec, point: &[f64], order: usize) -> Result<CurvatureJet> {
    let metric = spec.metric_at(point)?;
    let ev = spec.evaluator(point);
    let mixed = spec
        .symbolic_curvature(order)
        .iter()
        .map(|s| s.eval(&ev))
        .collect::<Result<Vec<_>>>()?;
    let tensors = mixed.iter().map(|t| lower(t, &metric)).collect();
    Ok(CurvatureJet {
        point: point.to_vec(),
        metric,
        tensors,
        mixed: Some(mixed),
    })
}

/// `ρ_jk = g^{il} R_{ijkl}`.
pub fn ricci(jet: &CurvatureJet) -> DMatrix<f64> {
    let m = jet.dim();
    let r = jet.r();
    DMatrix::from_fn(m, m, |j, k| {
        let mut s = 0.0;
        for i in 0..m {
            for l in 0..m {
                let gil = jet.metric.ginv[(i, l)];
                if gil != 0.0 {
                    s += gil * r.get(&[i, j, k, l]);
                }
            }
        }
        s
    })
}

/// `τ = g^{jk} ρ_jk`.
pub fn scalar(jet: &CurvatureJet) -> f64 {
    jet.metric.ginv.component_mul(&ricci(jet)).sum()
}

pub fn ricci_at(spec: &ManifoldSpec, point: &[f64]) -> Result<DMatrix<f64>> {
    Ok(ricci(&nabla_r(spec, point, 0)?))
}

pub fn scalar_at(spec: &ManifoldSpec, point: &[f64]) -> Result<f64> {
    Ok(scalar(&nabla_r(spec, point, 0)?))
}

/// Residuals of the algebraic curvature identities relative to `‖R‖∞`:
/// `(antisymmetry, pair symmetry, first Bianchi)`.
pub fn symmetry_residuals(r: &Tensor) -> (f64, f64, f64) {
    let m = r.dim();
    let scale = r.max_abs().max(1e-300);
    let (mut anti, mut pair, mut bianchi) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                for l in 0..m {
                    let v = r.get(&[i, j, k, l]);
                    anti = anti.max((v + r.get(&[j, i, k, l])).abs());
                    pair = pair.max((v - r.get(&[k, l, i, j])).abs());
                    bianchi = bianchi.max((v + r.get(&[j, k, i, l]) + r.get(&[k, i, j, l])).abs());
                }
            }
        }
    }
    (anti / scale, pair / scale, bianchi / scale)
}

/// Largest cyclic sum `∇R(a,b,c,d;e) + ∇R(b,e,c,d;a) + ∇R(e,a,c,d;b)`,
/// relative to `max(‖∇R‖∞, 1)`.
pub fn second_bianchi_residual(nr: &Tensor) -> f64 {
    let m = nr.dim();
    let scale = nr.max_abs().max(1.0);
    let mut worst = 0.0f64;
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                for d in 0..m {
                    for e in 0..m {
                        let s = nr.get(&[a, b, c, d, e]) + nr.get(&[b, e, c, d, a]) + nr.get(&[e, a, c, d, b]);
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
    }
    worst / scale
}

/// Steps of the nested finite-difference stages: metric to Γ, Γ to R, then
/// one per covariant derivative.
const FD_STEPS: [f64; 4] = [1e-3, 1e-2, 3e-2, 6e-2];

/// Fourth-order central difference of a tensor-valued function along `dir`.
fn fd5<T, F>(f: &F, x: &[f64], dir: usize, h0: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<T>,
    T: AsRef<[f64]>,
{
    let h = h0 * x[dir].abs().max(1.0);
    let at = |s: f64| -> Result<T> {
        let mut y = x.to_vec();
        y[dir] += s * h;
        f(&y)
    };
    let (m2, m1, p1, p2) = (at(-2.0)?, at(-1.0)?, at(1.0)?, at(2.0)?);
    Ok(m2
        .as_ref()
        .iter()
        .zip(m1.as_ref())
        .zip(p1.as_ref())
        .zip(p2.as_ref())
        .map(|(((a, b), c), d)| (a - 8.0 * b + 8.0 * c - d) / (12.0 * h))
        .collect())
}

struct Data(Vec<f64>);

impl AsRef<[f64]> for Data {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Γ_ij^k at `x` from finite differences of the metric function.
fn fd_christoffel<G>(gfun: &G, x: &[f64]) -> Result<Tensor>
where
    G: Fn(&[f64]) -> Result<DMatrix<f64>>,
{
    let m = x.len();
    let g = gfun(x)?;
    let ginv = MetricAtPoint::new(g)?.ginv;
    let flat = |y: &[f64]| gfun(y).map(|g| Data(g.as_slice().to_vec()));
    // dg[l][(i, j)] = ∂_l g_ij (column-major storage)
    let dg: Vec<DMatrix<f64>> = (0..m)
        .map(|l| fd5(&flat, x, l, FD_STEPS[0]).map(|d| DMatrix::from_vec(m, m, d)))
        .collect::<Result<_>>()?;
    let first = |i: usize, j: usize, k: usize| 0.5 * (dg[i][(j, k)] + dg[j][(i, k)] - dg[k][(i, j)]);
    let mut t = Tensor::zeros(m, 3);
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                let mut s = 0.0;
                for l in 0..m {
                    s += ginv[(k, l)] * first(i, j, l);
                }
                t.set(&[i, j, k], s);
            }
        }
    }
    Ok(t)
}

/// Mixed `R_{ijk}^l` from Γ and its first derivatives `dgamma[n] = ∂_n Γ`.
fn mixed_curvature(gamma: &Tensor, dgamma: &[Vec<f64>]) -> Tensor {
    let m = gamma.dim();
    let d = |n: usize, i: usize, j: usize, k: usize| dgamma[n][gamma.offset(&[i, j, k])];
    Tensor::from_fn(m, 4, |ix| {
        let (i, j, k, l) = (ix[0], ix[1], ix[2], ix[3]);
        let mut s = d(i, j, k, l) - d(j, i, k, l);
        for n in 0..m {
            s += gamma.get(&[i, n, l]) * gamma.get(&[j, k, n]) - gamma.get(&[j, n, l]) * gamma.get(&[i, k, n]);
        }
        s
    })
}

/// Covariant derivative of a tensor whose slot `upper` is contravariant,
/// given Γ and the coordinate partials `dt[l] = ∂_l T` at the same point.
fn covariant_step(t: &Tensor, upper: usize, gamma: &Tensor, dt: &[Vec<f64>]) -> Tensor {
    let m = t.dim();
    let r = t.rank();
    Tensor::from_fn(m, r + 1, |ix| {
        let l = ix[r];
        let base = &ix[..r];
        let mut s = dt[l][t.offset(base)];
        let mut idx = base.to_vec();
        for slot in 0..r {
            let orig = idx[slot];
            for q in 0..m {
                idx[slot] = q;
                let v = t.get(&idx);
                if v == 0.0 {
                    continue;
                }
                if slot == upper {
                    s += gamma.get(&[l, q, orig]) * v;
                } else {
                    s -= gamma.get(&[l, orig, q]) * v;
                }
            }
            idx[slot] = orig;
        }
        s
    })
}

/// Mixed `∇^ν R` at `x` computed by nested finite differences.
fn fd_mixed<G>(gfun: &G, x: &[f64], order: usize) -> Result<Tensor>
where
    G: Fn(&[f64]) -> Result<DMatrix<f64>>,
{
    let m = x.len();
    let gamma = fd_christoffel(gfun, x)?;
    if order == 0 {
        let gfn = |y: &[f64]| fd_christoffel(gfun, y).map(|t| Data(t.data().to_vec()));
        let dgamma = (0..m).map(|n| fd5(&gfn, x, n, FD_STEPS[1])).collect::<Result<Vec<_>>>()?;
        return Ok(mixed_curvature(&gamma, &dgamma));
    }
    let prev = fd_mixed(gfun, x, order - 1)?;
    let pfn = |y: &[f64]| fd_mixed(gfun, y, order - 1).map(|t| Data(t.data().to_vec()));
    let dt = (0..m)
        .map(|n| fd5(&pfn, x, n, FD_STEPS[(order + 1).min(FD_STEPS.len() - 1)]))
        .collect::<Result<Vec<_>>>()?;
    Ok(covariant_step(&prev, 3, &gamma, &dt))
}

/// Generic Levi-Civita pipeline from a metric function: Γ from metric
/// derivatives, then the same curvature expansion and covariant-derivative
/// recursion, every derivative by a fourth-order central stencil.
///
/// Intended for `order <= 2`; noise grows with each nested stage.
pub fn fd_pipeline<G>(gfun: G, point: &[f64], order: usize) -> Result<CurvatureJet>
where
    G: Fn(&[f64]) -> Result<DMatrix<f64>>,
{
    let metric = MetricAtPoint::new(gfun(point)?)?;
    if metric.dim() != point.len() {
        return Err(Error::Dim(format!("metric is {}x{}, point has {} coordinates", metric.dim(), metric.dim(), point.len())));
    }
    let mut mixed = Vec::with_capacity(order + 1);
    for nu in 0..=order {
        let mut t = fd_mixed(&gfun, point, nu)?;
        let mut var = vec![Variance::Covariant; 4 + nu];
        var[3] = Variance::Contravariant;
        t = t.with_variance(var)?;
        mixed.push(t);
    }
    let tensors = mixed.iter().map(|t| lower(t, &metric)).collect();
    Ok(CurvatureJet {
        point: point.to_vec(),
        metric,
        tensors,
        mixed: Some(mixed),
    })
}

/// Round unit sphere in the chart `(θ, φ)`: `g = diag(1, sin²θ)`.
pub fn sphere_metric(x: &[f64]) -> Result<DMatrix<f64>> {
    let s = x[0].sin();
    Ok(DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, s * s]))
}

/// Outcome of a plane-wave form check.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PlaneWaveReport {
    pub points: usize,
    pub violations: Vec<String>,
}

impl PlaneWaveReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Entries of the mixed tensors `R_{i1 i2 i3}^k_{;j...}` with
/// `k <= max(lower indices)` whose magnitude exceeds `tol·max(1, ‖T‖∞)`.
pub fn triangularity_violations(jet: &CurvatureJet, tol: f64) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for nu in 0..=jet.order() {
        let t = jet.mixed(nu)?;
        let cut = tol * t.max_abs().max(1.0);
        for (ix, v) in t.nonzeros() {
            let k = ix[3];
            let max_lower = ix.iter().enumerate().filter(|(s, _)| *s != 3).map(|(_, i)| *i).max().unwrap_or(0);
            if k <= max_lower && v.abs() > cut {
                out.push(format!("order {nu}: entry {ix:?} = {v:e} has upper index {k} <= {max_lower}"));
            }
        }
    }
    Ok(out)
}

/// Checks the plane-wave conditions at `samples` random points of `[-2,2]^m`:
/// vanishing `Γ_ij^k` for `k <= max(i,j)`, no dependence of `Γ_ij^k` on
/// `x_l` for `l >= k` (finite differences, `< 1e-8`), and triangularity of
/// `∇^ν R` for `ν <= 2`.
pub fn is_plane_wave_form(spec: &ManifoldSpec, samples: usize, rng: &mut impl Rng) -> Result<PlaneWaveReport> {
    let m = spec.dim();
    let mut report = PlaneWaveReport::default();
    for _ in 0..samples {
        let x = sampling::point(rng, m, 2.0);
        let gam = spec.christoffel_at(&x)?;
        for (ix, v) in gam.nonzeros() {
            if ix[2] <= ix[0].max(ix[1]) {
                report.violations.push(format!("Γ{ix:?} = {v:e} at {x:?}"));
            }
        }
        let h = 1e-5;
        for l in 0..m {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[l] += h;
            xm[l] -= h;
            let (gp, gm) = (spec.christoffel_at(&xp)?, spec.christoffel_at(&xm)?);
            for i in 0..m {
                for j in 0..m {
                    for k in 0..=l {
                        let d = (gp.get(&[i, j, k]) - gm.get(&[i, j, k])) / (2.0 * h);
                        if d.abs() >= 1e-8 {
                            report.violations.push(format!("∂Γ({i},{j},{k})/∂x{l} = {d:e} at {x:?}"));
                        }
                    }
                }
            }
        }
        let jet = nabla_r(spec, &x, 2)?;
        report.violations.extend(triangularity_violations(&jet, 1e-12)?);
        report.points += 1;
    }
    Ok(report)
}

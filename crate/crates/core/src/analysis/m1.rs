//! The M1 normalized basis, the kernel form of `alpha16`, and the affine
//! subspaces `W1..W5`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::families::{FamilyData, ManifoldSpec};
use crate::geometry::CurvatureJet;
use crate::tensor::{complement, intersection, null_space, range_basis, span_basis, unit, Tensor};

const KERNEL_TOL: f64 = 1e-9;

/// Frame `{X, Y, Z1, Z2, Ỹ, X̃}` at a point of an M1 instance in which the
/// only non-zero model entries are `R(X,Y,Z1,X) = 1` and
/// `∇R(X,Y,Y,X;Z2) = ∇R(X,Y,Z2,X;Y) = 1`.
///
/// `z1` is the sheared vector `Z1° - f' Z2`; the unsheared frame returned by
/// [`NormalizedBasis::orthonormal_frame`] has constant metric
/// `g(X,X̃) = g(Y,Ỹ) = g(Z1°,Z1°) = g(Z2,Z2) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedBasis {
    pub x: DVector<f64>,
    pub y: DVector<f64>,
    pub z1: DVector<f64>,
    pub z2: DVector<f64>,
    pub ytilde: DVector<f64>,
    pub xtilde: DVector<f64>,
    pub eps1: f64,
    pub eps2: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    /// `f'` at the point.
    pub shear: f64,
}

impl NormalizedBasis {
    fn assemble(&self, z1: &DVector<f64>) -> DMatrix<f64> {
        DMatrix::from_columns(&[
            self.x.clone(),
            self.y.clone(),
            z1.clone(),
            self.z2.clone(),
            self.ytilde.clone(),
            self.xtilde.clone(),
        ])
    }

    /// Columns `X, Y, Z1, Z2, Ỹ, X̃`.
    pub fn frame(&self) -> DMatrix<f64> {
        self.assemble(&self.z1)
    }

    /// The frame before the shear `Z1° ↦ Z1° - f' Z2`.
    pub fn orthonormal_frame(&self) -> DMatrix<f64> {
        self.assemble(&(&self.z1 + &self.z2 * self.shear))
    }
}

pub fn normalized_basis_m1(spec: &ManifoldSpec, point: &[f64]) -> Result<NormalizedBasis> {
    let FamilyData::M1 { f } = spec.data() else {
        return Err(Error::Config(format!("normalized basis needs an M1 spec, got {}", spec.family())));
    };
    let g = spec.metric_matrix(point)?;
    let d = f.jet(point[1], 3)?.derivatives();
    let (f1, f2, f3) = (d[1], d[2], d[3]);
    if !(f2 > 0.0) {
        return Err(Error::Hypothesis(format!("f'' = {f2} at y = {}, need f'' > 0", point[1])));
    }
    let z2c = point[3];
    let eps2 = f3 * z2c / (3.0 * f2);
    let eps1 = (f2 * z2c - 2.0 * eps2 * f1) / 2.0;
    let s = 1.0 + f1 * f1;
    let c3 = s.powf(-0.5);
    let c2 = s / f2;
    let c1 = f2.sqrt() * s.powf(-0.75);

    let e = |i: usize| unit(6, i);
    let x = (e(0) - e(5) * (0.5 * g[(0, 0)])) * c1;
    let y = (e(1) - e(2) * eps1 - e(3) * eps2 - e(4) * (0.5 * (eps1 * eps1 + eps2 * eps2))) * c2;
    let z1o = (e(2) + e(3) * f1 + e(4) * (eps1 + f1 * eps2)) * c3;
    let z2 = (e(3) - e(2) * f1 + e(4) * (eps2 - f1 * eps1)) * c3;
    Ok(NormalizedBasis {
        x,
        y,
        z1: &z1o - &z2 * f1,
        z2,
        ytilde: e(4) / c2,
        xtilde: e(5) / c1,
        eps1,
        eps2,
        c1,
        c2,
        c3,
        shear: f1,
    })
}

fn stack(blocks: &[DMatrix<f64>]) -> DMatrix<f64> {
    let ncols = blocks[0].ncols();
    let nrows = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = DMatrix::zeros(nrows, ncols);
    let mut r = 0;
    for b in blocks {
        out.view_mut((r, 0), (b.nrows(), ncols)).copy_from(b);
        r += b.nrows();
    }
    out
}

/// `|g(Z1',Z2')| / (|Z1'| |Z2'|)` for `Z1' ∈ ker ∇R`, `Z2' ∈ ker R`, both
/// Euclidean-orthogonal to `ker R ∩ ker ∇R`. Kernels are taken on the
/// lowered tensors in the last slot (and, for `∇R`, also the fourth).
pub fn alpha16_model(jet: &CurvatureJet) -> Result<f64> {
    let m = jet.dim();
    let ker_r = null_space(&jet.r().flatten(&[0, 1, 2]), KERNEL_TOL);
    let nr = jet.nabla(1)?;
    let ker_nr = null_space(&stack(&[nr.flatten(&[0, 1, 2, 3]), nr.flatten(&[0, 1, 2, 4])]), KERNEL_TOL);
    let common = intersection(&ker_r, &ker_nr, m, KERNEL_TOL);
    if ker_r.len() != 3 || ker_nr.len() != 3 || common.len() != 2 {
        return Err(Error::Model(format!(
            "kernel dimensions ker R = {}, ker ∇R = {}, intersection = {} (expected 3, 3, 2)",
            ker_r.len(),
            ker_nr.len(),
            common.len()
        )));
    }
    let perp = complement(&common, m);
    let pick = |ker: &[DVector<f64>]| intersection(ker, &perp, m, KERNEL_TOL).into_iter().next();
    let (z1, z2) = match (pick(&ker_nr), pick(&ker_r)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::Model("no kernel representative off the common null space".into())),
    };
    let g = &jet.metric;
    let n1 = g.inner(&z1, &z1).abs().sqrt();
    let n2 = g.inner(&z2, &z2).abs().sqrt();
    if n1 < 1e-12 || n2 < 1e-12 {
        return Err(Error::Model("kernel representative is null".into()));
    }
    Ok(g.inner(&z1, &z2).abs() / (n1 * n2))
}

/// Subspaces of the affine 1-model of an M1 instance, each as an orthonormal
/// (Euclidean) basis: `W1 = Range R`, `W2 = Range ∇R`,
/// `W3 = span R(ξ, R(ξ,ξ)ξ)ξ`, `W4 = ker R`, `W5 = ker ∇R`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceSet {
    pub w1: Vec<DVector<f64>>,
    pub w2: Vec<DVector<f64>>,
    pub w3: Vec<DVector<f64>>,
    pub w4: Vec<DVector<f64>>,
    pub w5: Vec<DVector<f64>>,
}

impl SubspaceSet {
    pub fn dims(&self) -> [usize; 5] {
        [self.w1.len(), self.w2.len(), self.w3.len(), self.w4.len(), self.w5.len()]
    }

    /// Recovers `f'^2` from the four lines `W_i / W3`: with
    /// `l2 = a l1 + b l4` and `l5 = c l1 + d l4` the product
    /// `-(a/b)(d/c)` does not depend on how the lines are scaled.
    pub fn slope_product(&self) -> Result<f64> {
        let m = self.w1[0].len();
        let q = DMatrix::from_columns(&complement(&self.w3, m));
        let line = |w: &[DVector<f64>]| -> Result<DVector<f64>> {
            let proj = q.transpose() * DMatrix::from_columns(w);
            let l = range_basis(&proj, KERNEL_TOL);
            if l.len() != 1 {
                return Err(Error::Model(format!("quotient by W3 has dimension {}, expected 1", l.len())));
            }
            Ok(l.into_iter().next().unwrap())
        };
        let (l1, l2, l4, l5) = (line(&self.w1)?, line(&self.w2)?, line(&self.w4)?, line(&self.w5)?);
        let basis = DMatrix::from_columns(&[l1, l4]).svd(true, true);
        let solve = |v: &DVector<f64>| -> Result<DVector<f64>> {
            basis.solve(v, 1e-12).map_err(|e| Error::Model(e.to_string()))
        };
        let ab = solve(&l2)?;
        let cd = solve(&l5)?;
        if ab[1].abs() < 1e-12 || cd[0].abs() < 1e-12 {
            return Err(Error::Model("degenerate quotient lines".into()));
        }
        Ok(-(ab[0] / ab[1]) * (cd[1] / cd[0]))
    }
}

pub fn w_subspaces(jet: &CurvatureJet) -> Result<SubspaceSet> {
    let m = jet.dim();
    let r: &Tensor = jet.mixed(0)?;
    let nr = jet.mixed(1)?;
    let w1 = range_basis(&r.flatten(&[3]), KERNEL_TOL);
    let w2 = range_basis(&nr.flatten(&[3]), KERNEL_TOL);
    let mut gens = Vec::new();
    for w in &w1 {
        for i in 0..m {
            for k in 0..m {
                gens.push(DVector::from_fn(m, |l, _| (0..m).map(|j| w[j] * r.get(&[i, j, k, l])).sum()));
            }
        }
    }
    let w3 = span_basis(&gens, m, KERNEL_TOL);
    let w4 = null_space(&r.flatten(&[0, 1, 3]), KERNEL_TOL);
    let w5 = null_space(&nr.flatten(&[0, 1, 3, 4]), KERNEL_TOL);
    let set = SubspaceSet { w1, w2, w3, w4, w5 };
    if set.dims() != [3, 3, 2, 3, 3] {
        return Err(Error::Model(format!("subspace dimensions {:?}, expected [3, 3, 2, 3, 3]", set.dims())));
    }
    Ok(set)
}

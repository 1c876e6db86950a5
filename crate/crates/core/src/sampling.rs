//! Seeded random sampling of points, vectors and planes.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::tensor::MetricAtPoint;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point in `[-radius, radius]^dim`.
pub fn point(rng: &mut impl Rng, dim: usize, radius: f64) -> Vec<f64> {
    (0..dim).map(|_| rng.random_range(-radius..=radius)).collect()
}

pub fn gaussian(rng: &mut impl Rng, dim: usize) -> DVector<f64> {
    DVector::from_fn(dim, |_, _| rng.sample(StandardNormal))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Causal {
    Spacelike,
    Timelike,
    /// Either type, whichever the rejection sampler hits first.
    Any,
}

impl Causal {
    fn accepts(self, norm: f64) -> bool {
        match self {
            Causal::Spacelike => norm > 0.1,
            Causal::Timelike => norm < -0.1,
            Causal::Any => norm.abs() > 0.1,
        }
    }
}

/// Gaussian draw in a `g`-orthonormal frame: `B z` with `Bᵀ g B = diag(±1)`
/// and `z` standard normal.
struct FrameSampler {
    basis: DMatrix<f64>,
}

impl FrameSampler {
    fn new(metric: &MetricAtPoint) -> Self {
        let eig = metric.g.clone().symmetric_eigen();
        let scale = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.abs().sqrt()));
        Self {
            basis: eig.eigenvectors * scale,
        }
    }

    fn draw(&self, rng: &mut impl Rng) -> DVector<f64> {
        &self.basis * gaussian(rng, self.basis.ncols())
    }
}

/// Rejection-samples coordinate-Gaussian vectors with `|g(ξ,ξ)| > 0.1` of the
/// requested type and rescales to `g(ξ,ξ) = ±1`. When 10 000 coordinate
/// draws all miss (a strongly tilted light cone), a further 10 000 draws are
/// made in a `g`-orthonormal frame. Returns `None` when both rounds miss.
pub fn unit_vector(rng: &mut impl Rng, metric: &MetricAtPoint, kind: Causal) -> Option<DVector<f64>> {
    for _ in 0..10_000 {
        let v = gaussian(rng, metric.dim());
        let n = metric.inner(&v, &v);
        if kind.accepts(n) {
            return Some(v / n.abs().sqrt());
        }
    }
    let frame = FrameSampler::new(metric);
    for _ in 0..10_000 {
        let v = frame.draw(rng);
        let n = metric.inner(&v, &v);
        if kind.accepts(n) {
            return Some(v / n.abs().sqrt());
        }
    }
    None
}

/// Like [`unit_vector`] but with integer components: each is zero with
/// probability 1/2 and otherwise a non-zero integer in `[-r, r]`, where `r`
/// starts at 1 and grows by one every 200 draws. Sparse small-integer
/// vectors reach the special directions (null cones of sub-blocks,
/// coordinate subspaces) that Gaussian draws miss with probability one.
pub fn lattice_unit_vector(rng: &mut impl Rng, metric: &MetricAtPoint, kind: Causal) -> Option<DVector<f64>> {
    for attempt in 0..10_000 {
        let r = 1 + attempt / 200;
        let v = DVector::from_fn(metric.dim(), |_, _| {
            if rng.random_bool(0.5) {
                0.0
            } else {
                let k = rng.random_range(1..=r) as f64;
                if rng.random_bool(0.5) {
                    k
                } else {
                    -k
                }
            }
        });
        let n = metric.inner(&v, &v);
        if kind.accepts(n) {
            return Some(v / n.abs().sqrt());
        }
    }
    None
}

/// Oriented orthonormal pair `(e1, e2)` spanning a plane whose vectors share
/// the causal type `kind` (spacelike or timelike). The second vector is drawn
/// in a `g`-orthonormal frame and projected off `e1`.
pub fn plane(rng: &mut impl Rng, metric: &MetricAtPoint, kind: Causal) -> Option<(DVector<f64>, DVector<f64>)> {
    let frame = FrameSampler::new(metric);
    for _ in 0..1_000 {
        let e1 = unit_vector(rng, metric, kind)?;
        let s1 = metric.inner(&e1, &e1).signum();
        let w = frame.draw(rng);
        let w = &w - &e1 * (s1 * metric.inner(&e1, &w));
        let n = metric.inner(&w, &w);
        if n.abs() > 0.1 && n.signum() == s1 {
            return Some((e1, w / n.abs().sqrt()));
        }
    }
    None
}

/// Random element of the pseudo-orthogonal group of `g` near the identity,
/// as the Cayley transform `(I - A)^{-1}(I + A)` with `A = g^{-1}S`, `S` skew.
/// Columns are the new basis vectors; `Bᵀ g B = g`.
pub fn pseudo_orthogonal(rng: &mut impl Rng, metric: &MetricAtPoint, scale: f64) -> DMatrix<f64> {
    let m = metric.dim();
    let mut s = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in i + 1..m {
            let v: f64 = rng.random_range(-scale..=scale);
            s[(i, j)] = v;
            s[(j, i)] = -v;
        }
    }
    let a = &metric.ginv * s;
    let id = DMatrix::<f64>::identity(m, m);
    let lhs = &id - &a;
    let rhs = &id + &a;
    lhs.lu().solve(&rhs).expect("Cayley transform of a small skew map is invertible")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lorentz() -> MetricAtPoint {
        MetricAtPoint::new(DMatrix::from_diagonal(&DVector::from_vec(vec![-1.0, 1.0, 1.0, -1.0]))).unwrap()
    }

    #[test]
    fn unit_vectors_have_requested_norm() {
        let g = lorentz();
        let mut r = rng(1);
        for kind in [Causal::Spacelike, Causal::Timelike] {
            let v = unit_vector(&mut r, &g, kind).unwrap();
            let want = if kind == Causal::Spacelike { 1.0 } else { -1.0 };
            assert!((g.inner(&v, &v) - want).abs() < 1e-12);
        }
    }

    #[test]
    fn planes_are_orthonormal() {
        let g = lorentz();
        let mut r = rng(2);
        let (a, b) = plane(&mut r, &g, Causal::Timelike).unwrap();
        assert!((g.inner(&a, &a) + 1.0).abs() < 1e-12);
        assert!((g.inner(&b, &b) + 1.0).abs() < 1e-12);
        assert!(g.inner(&a, &b).abs() < 1e-12);
    }

    #[test]
    fn cayley_preserves_metric() {
        let g = lorentz();
        let b = pseudo_orthogonal(&mut rng(3), &g, 0.5);
        assert!((b.transpose() * &g.g * &b - &g.g).amax() < 1e-12);
    }
}

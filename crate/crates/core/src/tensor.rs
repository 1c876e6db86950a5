//! Dense multi-index tensors at a point, metric-aware full contraction, and
//! rank/kernel linear algebra.
//!
//! Tensors are stored row-major over their multi-index: the entry
//! `(i_1, ..., i_r)` lives at `i_1 m^{r-1} + ... + i_r`. Curvature tensors are
//! always kept fully lowered; raising only happens inside [`contract`].

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Default relative threshold for numerical rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variance {
    Covariant,
    Contravariant,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    dim: usize,
    rank: usize,
    data: Vec<f64>,
    variance: Vec<Variance>,
}

impl Tensor {
    /// Zero tensor with every slot covariant.
    pub fn zeros(dim: usize, rank: usize) -> Self {
        Self {
            dim,
            rank,
            data: vec![0.0; dim.pow(rank as u32)],
            variance: vec![Variance::Covariant; rank],
        }
    }

    pub fn from_data(dim: usize, rank: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != dim.pow(rank as u32) {
            return Err(Error::Dim(format!(
                "tensor data has {} entries, expected {}^{}",
                data.len(),
                dim,
                rank
            )));
        }
        Ok(Self {
            dim,
            rank,
            data,
            variance: vec![Variance::Covariant; rank],
        })
    }

    /// Builds a tensor by evaluating `f` at every multi-index.
    pub fn from_fn(dim: usize, rank: usize, mut f: impl FnMut(&[usize]) -> f64) -> Self {
        let mut t = Self::zeros(dim, rank);
        let mut idx = vec![0usize; rank];
        for k in 0..t.data.len() {
            t.data[k] = f(&idx);
            advance(&mut idx, dim);
        }
        t
    }

    /// The rank-2 tensor with entries of a square matrix.
    pub fn from_matrix(m: &DMatrix<f64>) -> Self {
        let n = m.nrows();
        Self::from_fn(n, 2, |ix| m[(ix[0], ix[1])])
    }

    pub fn with_variance(mut self, variance: Vec<Variance>) -> Result<Self> {
        if variance.len() != self.rank {
            return Err(Error::Dim("variance list length differs from rank".into()));
        }
        self.variance = variance;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn variance(&self) -> &[Variance] {
        &self.variance
    }

    #[inline]
    pub fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank);
        idx.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    #[inline]
    pub fn get(&self, idx: &[usize]) -> f64 {
        self.data[self.offset(idx)]
    }

    #[inline]
    pub fn set(&mut self, idx: &[usize], value: f64) {
        let o = self.offset(idx);
        self.data[o] = value;
    }

    #[inline]
    pub fn add_at(&mut self, idx: &[usize], value: f64) {
        let o = self.offset(idx);
        self.data[o] += value;
    }

    /// Multi-index of a flat offset.
    pub fn index_of(&self, mut offset: usize) -> Vec<usize> {
        let mut idx = vec![0; self.rank];
        for slot in (0..self.rank).rev() {
            idx[slot] = offset % self.dim;
            offset /= self.dim;
        }
        idx
    }

    /// Non-zero entries as `(multi-index, value)` pairs.
    pub fn nonzeros(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(move |(k, v)| (self.index_of(k), *v))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    pub fn scale(&self, a: f64) -> Self {
        let mut t = self.clone();
        t.data.iter_mut().for_each(|v| *v *= a);
        t
    }

    pub fn axpy(&self, a: f64, other: &Tensor) -> Result<Self> {
        if other.dim != self.dim || other.rank != self.rank {
            return Err(Error::Dim("axpy on tensors of different shape".into()));
        }
        let mut t = self.clone();
        for (x, y) in t.data.iter_mut().zip(&other.data) {
            *x += a * y;
        }
        Ok(t)
    }

    pub fn max_abs_diff(&self, other: &Tensor) -> f64 {
        assert_eq!(self.data.len(), other.data.len(), "shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |a, (x, y)| a.max((x - y).abs()))
    }

    /// Applies `matrix` to one slot: `T'[.. a ..] = sum_b matrix[(a, b)] T[.. b ..]`.
    pub fn map_slot(&self, slot: usize, matrix: &DMatrix<f64>) -> Tensor {
        let mut out = Tensor {
            dim: self.dim,
            rank: self.rank,
            data: vec![0.0; self.data.len()],
            variance: self.variance.clone(),
        };
        let stride = self.dim.pow((self.rank - slot - 1) as u32);
        for (k, &v) in self.data.iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            let b = (k / stride) % self.dim;
            let base = k - b * stride;
            for a in 0..self.dim {
                let c = matrix[(a, b)];
                if c != 0.0 {
                    out.data[base + a * stride] += c * v;
                }
            }
        }
        out
    }

    /// Pull-back under a change of basis whose new basis vectors are the
    /// columns of `basis`: `T'(a_1..a_r) = T(B e_{a_1}, .., B e_{a_r})`.
    pub fn pullback(&self, basis: &DMatrix<f64>) -> Tensor {
        let bt = basis.transpose();
        (0..self.rank).fold(self.clone(), |t, slot| t.map_slot(slot, &bt))
    }

    /// Reshapes into a matrix whose rows run over `row_slots` and columns over
    /// the remaining slots, both in slot order.
    pub fn flatten(&self, row_slots: &[usize]) -> DMatrix<f64> {
        let col_slots: Vec<usize> = (0..self.rank).filter(|s| !row_slots.contains(s)).collect();
        let nr = self.dim.pow(row_slots.len() as u32);
        let nc = self.dim.pow(col_slots.len() as u32);
        let mut m = DMatrix::zeros(nr, nc);
        for (k, &v) in self.data.iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            let idx = self.index_of(k);
            let r = row_slots.iter().fold(0, |acc, &s| acc * self.dim + idx[s]);
            let c = col_slots.iter().fold(0, |acc, &s| acc * self.dim + idx[s]);
            m[(r, c)] = v;
        }
        m
    }
}

fn advance(idx: &mut [usize], dim: usize) {
    for slot in (0..idx.len()).rev() {
        idx[slot] += 1;
        if idx[slot] < dim {
            return;
        }
        idx[slot] = 0;
    }
}

/// Metric at a point together with its inverse and signature `(p, q)`,
/// `p` counting negative eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricAtPoint {
    pub g: DMatrix<f64>,
    pub ginv: DMatrix<f64>,
    pub signature: (usize, usize),
}

impl MetricAtPoint {
    pub fn new(g: DMatrix<f64>) -> Result<Self> {
        let m = g.nrows();
        if g.ncols() != m {
            return Err(Error::Dim("metric matrix is not square".into()));
        }
        if g.iter().any(|v| !v.is_finite()) {
            return Err(Error::Eval {
                node: "metric".into(),
                message: "non-finite metric component".into(),
            });
        }
        if (&g - g.transpose()).amax() > 1e-12 {
            return Err(Error::Dim("metric matrix is not symmetric".into()));
        }
        let eig = g.clone().symmetric_eigen();
        if eig.eigenvalues.iter().any(|l| l.abs() <= 1e-10) {
            return Err(Error::SingularMetric);
        }
        let p = eig.eigenvalues.iter().filter(|l| **l < 0.0).count();
        let ginv = g.clone().try_inverse().ok_or(Error::SingularMetric)?;
        let ginv = (&ginv + ginv.transpose()) * 0.5;
        Ok(Self {
            g,
            ginv,
            signature: (p, m - p),
        })
    }

    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    pub fn inner(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        (a.transpose() * &self.g * b)[(0, 0)]
    }

    /// Residual `max |g ginv - I|`.
    pub fn inverse_residual(&self) -> f64 {
        (&self.g * &self.ginv - DMatrix::identity(self.dim(), self.dim())).amax()
    }

    /// The metric viewed as a covariant rank-2 tensor.
    pub fn as_tensor(&self) -> Tensor {
        Tensor::from_matrix(&self.g)
    }
}

/// Endomorphism of a tangent space, acting on coordinate components.
#[derive(Debug, Clone, PartialEq)]
pub struct Endo {
    pub matrix: DMatrix<f64>,
    pub basepoint: Vec<f64>,
}

impl Endo {
    pub fn new(matrix: DMatrix<f64>, basepoint: Vec<f64>) -> Self {
        Self { matrix, basepoint }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn compose(&self, other: &Endo) -> Endo {
        Endo::new(&self.matrix * &other.matrix, self.basepoint.clone())
    }

    pub fn pow(&self, k: u32) -> Endo {
        let n = self.dim();
        let mut acc = DMatrix::identity(n, n);
        for _ in 0..k {
            acc = &acc * &self.matrix;
        }
        Endo::new(acc, self.basepoint.clone())
    }

    pub fn apply(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.matrix * v
    }

    pub fn max_abs(&self) -> f64 {
        self.matrix.amax()
    }
}

/// Singular values of an arbitrary matrix, sorted in decreasing order.
pub fn singular_values(a: &DMatrix<f64>) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = a.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Numerical rank: singular values above `tol * scale`, where `scale` is the
/// largest singular value (or 1 for the zero matrix).
pub fn numerical_rank(a: &DMatrix<f64>, tol: f64) -> usize {
    let s = singular_values(a);
    let smax = s.first().copied().unwrap_or(0.0);
    let scale = if smax > 0.0 { smax } else { 1.0 };
    s.iter().filter(|v| **v > tol * scale).count()
}

/// Orthonormal basis (Euclidean) of the numerical null space of any matrix
/// with `ncols` columns: `{v : |Av| <= tol |A| |v|}`.
pub fn null_space(a: &DMatrix<f64>, tol: f64) -> Vec<DVector<f64>> {
    let n = a.ncols();
    if n == 0 {
        return Vec::new();
    }
    let square = if a.nrows() < n {
        let mut padded = DMatrix::zeros(n, n);
        padded.view_mut((0, 0), (a.nrows(), n)).copy_from(a);
        padded
    } else {
        a.clone()
    };
    let svd = square.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let smax = svd.singular_values.iter().fold(0.0_f64, |m, v| m.max(*v));
    if smax == 0.0 {
        return (0..n).map(|i| DVector::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 })).collect();
    }
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= tol * smax)
        .map(|(k, _)| v_t.row(k).transpose())
        .collect()
}

/// Orthonormal basis of the column space of `a`.
pub fn range_basis(a: &DMatrix<f64>, tol: f64) -> Vec<DVector<f64>> {
    let m = a.nrows();
    if m == 0 || a.ncols() == 0 {
        return Vec::new();
    }
    // Column space of A equals the orthogonal complement of ker(A^T).
    let kernel = null_space(&a.transpose(), tol);
    complement(&kernel, m)
}

/// Orthonormal basis of the Euclidean orthogonal complement of `span(vs)`.
pub fn complement(vs: &[DVector<f64>], dim: usize) -> Vec<DVector<f64>> {
    if vs.is_empty() {
        return (0..dim).map(|i| unit(dim, i)).collect();
    }
    let mut a = DMatrix::zeros(vs.len(), dim);
    for (r, v) in vs.iter().enumerate() {
        a.row_mut(r).copy_from(&v.transpose());
    }
    null_space(&a, 1e-10)
}

/// Orthonormal basis of `span(vs)`.
pub fn span_basis(vs: &[DVector<f64>], dim: usize, tol: f64) -> Vec<DVector<f64>> {
    if vs.is_empty() {
        return Vec::new();
    }
    let mut a = DMatrix::zeros(dim, vs.len());
    for (c, v) in vs.iter().enumerate() {
        a.column_mut(c).copy_from(v);
    }
    range_basis(&a, tol)
}

/// Orthonormal basis of `span(a) ∩ span(b)` for orthonormal inputs.
pub fn intersection(a: &[DVector<f64>], b: &[DVector<f64>], dim: usize, tol: f64) -> Vec<DVector<f64>> {
    // v ∈ A ∩ B  <=>  v ⟂ A^⟂ and v ⟂ B^⟂.
    let mut perp = complement(a, dim);
    perp.extend(complement(b, dim));
    if perp.is_empty() {
        return (0..dim).map(|i| unit(dim, i)).collect();
    }
    let mut m = DMatrix::zeros(perp.len(), dim);
    for (r, v) in perp.iter().enumerate() {
        m.row_mut(r).copy_from(&v.transpose());
    }
    null_space(&m, tol)
}

pub fn unit(dim: usize, i: usize) -> DVector<f64> {
    DVector::from_fn(dim, |r, _| if r == i { 1.0 } else { 0.0 })
}

/// Orthonormal basis of the numerical null space of an endomorphism.
pub fn kernel_basis(a: &Endo, tol: f64) -> Vec<DVector<f64>> {
    null_space(&a.matrix, tol)
}

/// Ranks of `A, A^2, ..., A^m`.
///
/// The threshold for `A^k` is `tol` times the larger of `sigma_max(A^k)` and
/// `sigma_max(A)^k`, so a power that vanishes up to round-off is not
/// mistaken for one of full rank. The zero matrix uses scale 1.
pub fn rank_sequence(a: &Endo, tol: f64) -> Vec<usize> {
    let m = a.dim();
    let s1 = singular_values(&a.matrix).first().copied().unwrap_or(0.0);
    let mut power = DMatrix::identity(m, m);
    let mut out = Vec::with_capacity(m);
    for k in 1..=m {
        power = &power * &a.matrix;
        let s = singular_values(&power);
        let smax = s.first().copied().unwrap_or(0.0);
        let mut scale = smax.max(s1.powi(k as i32));
        if scale == 0.0 {
            scale = 1.0;
        }
        out.push(s.iter().filter(|v| **v > tol * scale).count());
    }
    out
}

/// Full metric contraction of covariant factors.
///
/// `labels[f][s]` names the index in slot `s` of factor `f`. Every label must
/// occur exactly twice; each pair is contracted through one `g^{ij}`. The
/// result equals the naive sum over all index assignments of the product of
/// factor entries and inverse-metric entries.
pub fn contract<L: AsRef<str>>(factors: &[&Tensor], labels: &[Vec<L>], metric: &MetricAtPoint) -> Result<f64> {
    if factors.len() != labels.len() {
        return Err(Error::Schema(format!(
            "{} factors but {} label lists",
            factors.len(),
            labels.len()
        )));
    }
    let m = metric.dim();
    let mut ids: HashMap<&str, usize> = HashMap::new();
    let mut occurrences: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut slot_ids: Vec<Vec<usize>> = Vec::with_capacity(factors.len());
    for (f, (t, ls)) in factors.iter().zip(labels).enumerate() {
        if t.dim() != m {
            return Err(Error::Dim(format!(
                "factor {f} has dimension {} but the metric has dimension {m}",
                t.dim()
            )));
        }
        if ls.len() != t.rank() {
            return Err(Error::Schema(format!(
                "factor {f} has rank {} but {} labels",
                t.rank(),
                ls.len()
            )));
        }
        if t.variance().iter().any(|v| *v != Variance::Covariant) {
            return Err(Error::Schema(format!("factor {f} has a contravariant slot")));
        }
        let mut row = Vec::with_capacity(ls.len());
        for (s, l) in ls.iter().enumerate() {
            let next = ids.len();
            let id = *ids.entry(l.as_ref()).or_insert(next);
            if id == occurrences.len() {
                occurrences.push(Vec::new());
            }
            occurrences[id].push((f, s));
            row.push(id);
        }
        slot_ids.push(row);
    }
    let names: HashMap<usize, &str> = ids.iter().map(|(k, v)| (*v, *k)).collect();
    for (id, occ) in occurrences.iter().enumerate() {
        if occ.len() != 2 {
            return Err(Error::Schema(format!(
                "label `{}` appears {} times (expected 2)",
                names[&id],
                occ.len()
            )));
        }
    }

    // Raise the second occurrence of every label.
    let mut raised: Vec<Tensor> = factors.iter().map(|t| (*t).clone()).collect();
    for occ in &occurrences {
        let (f, s) = occ[1];
        raised[f] = raised[f].map_slot(s, &metric.ginv);
    }

    // Sparse factors with intra-factor traces applied.
    let mut sparse: Vec<SparseFactor> = raised
        .iter()
        .zip(&slot_ids)
        .map(|(t, ids)| SparseFactor::new(t, ids))
        .collect();

    let mut open: Vec<usize> = Vec::new();
    let mut partial: HashMap<Vec<u16>, f64> = HashMap::from([(Vec::new(), 1.0)]);
    while !sparse.is_empty() {
        let pick = (0..sparse.len())
            .max_by_key(|&k| {
                let shared = sparse[k].labels.iter().filter(|l| open.contains(l)).count();
                (shared, std::cmp::Reverse(sparse[k].entries.len()))
            })
            .expect("non-empty");
        let factor = sparse.swap_remove(pick);
        let (next_open, next) = join(&open, &partial, &factor);
        open = next_open;
        partial = next;
        if partial.is_empty() {
            return Ok(0.0);
        }
    }
    Ok(partial.get(&Vec::new()).copied().unwrap_or(0.0))
}

struct SparseFactor {
    labels: Vec<usize>,
    entries: Vec<(Vec<u16>, f64)>,
}

impl SparseFactor {
    fn new(t: &Tensor, slot_ids: &[usize]) -> Self {
        let mut labels: Vec<usize> = Vec::new();
        let mut first_slot: Vec<usize> = Vec::new();
        let mut traces: Vec<(usize, usize)> = Vec::new();
        for (s, id) in slot_ids.iter().enumerate() {
            match labels.iter().position(|l| l == id) {
                Some(k) => traces.push((first_slot[k], s)),
                None => {
                    labels.push(*id);
                    first_slot.push(s);
                }
            }
        }
        let traced: Vec<usize> = traces.iter().map(|(a, _)| *a).collect();
        let keep: Vec<usize> = (0..labels.len()).filter(|k| !traced.contains(&first_slot[*k])).collect();
        let entries = t
            .nonzeros()
            .filter(|(idx, _)| traces.iter().all(|(a, b)| idx[*a] == idx[*b]))
            .map(|(idx, v)| (keep.iter().map(|&k| idx[first_slot[k]] as u16).collect::<Vec<u16>>(), v))
            .fold(HashMap::new(), |mut acc: HashMap<Vec<u16>, f64>, (k, v)| {
                *acc.entry(k).or_insert(0.0) += v;
                acc
            })
            .into_iter()
            .collect();
        let labels = keep.iter().map(|&k| labels[k]).collect();
        Self { labels, entries }
    }
}

type Partial = HashMap<Vec<u16>, f64>;

fn join(open: &[usize], partial: &Partial, factor: &SparseFactor) -> (Vec<usize>, Partial) {
    let shared: Vec<(usize, usize)> = factor
        .labels
        .iter()
        .enumerate()
        .filter_map(|(fpos, l)| open.iter().position(|o| o == l).map(|opos| (opos, fpos)))
        .collect();
    let kept_open: Vec<usize> = (0..open.len()).filter(|p| !shared.iter().any(|(o, _)| o == p)).collect();
    let fresh: Vec<usize> = (0..factor.labels.len())
        .filter(|p| !shared.iter().any(|(_, f)| f == p))
        .collect();

    let mut index: HashMap<Vec<u16>, Vec<(Vec<u16>, f64)>> = HashMap::new();
    for (idx, v) in &factor.entries {
        let key: Vec<u16> = shared.iter().map(|(_, f)| idx[*f]).collect();
        let rest: Vec<u16> = fresh.iter().map(|&f| idx[f]).collect();
        index.entry(key).or_default().push((rest, *v));
    }

    let mut out: Partial = HashMap::new();
    for (key, pv) in partial {
        let probe: Vec<u16> = shared.iter().map(|(o, _)| key[*o]).collect();
        if let Some(matches) = index.get(&probe) {
            for (rest, fv) in matches {
                let mut k: Vec<u16> = kept_open.iter().map(|&p| key[p]).collect();
                k.extend_from_slice(rest);
                *out.entry(k).or_insert(0.0) += pv * fv;
            }
        }
    }
    let mut next_open: Vec<usize> = kept_open.iter().map(|&p| open[p]).collect();
    next_open.extend(fresh.iter().map(|&f| factor.labels[f]));
    (next_open, out)
}
